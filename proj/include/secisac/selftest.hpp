#pragma once

#include <string>
#include <vector>

namespace secisac {

struct SelftestResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Quick invariant suites on small random instances: surrogate tightness and
// dominance, Hermitian embedding round trip, sensing closed form, tangency
// feasibility of both steps, monotone AO on one desk realization.
std::vector<SelftestResult> run_selftests(unsigned seed = 1);

}  // namespace secisac
