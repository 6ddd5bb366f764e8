#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "secisac/types.hpp"

namespace secisac {

enum class StarMode { star, conventional, random, none };

std::string to_string(StarMode mode);

// Transmission/reflection profile of the STAR-RIS, each extended with a
// trailing 1 that selects the direct BS-user path.
struct StarProfile {
  CVec v_t;
  CVec v_r;
  StarMode mode = StarMode::star;

  int n_elements() const { return static_cast<int>(v_t.size()) - 1; }

  // Max violation of |v_t,n|^2 + |v_r,n|^2 <= 1 (<= 0 when satisfied).
  double energy_violation() const;

  // Throws std::invalid_argument on shape, fixed-entry, energy or mode
  // structure violations.
  void validate(double tol = 1e-8) const;
};

StarProfile no_ris_profile(int n_elements);

struct DesignPoint {
  CMat an_covariance;            // R_s, N_B x N_B Hermitian PSD
  CVec w_common;                 // N_B
  std::vector<CVec> w_private;   // K_c vectors of N_B
  StarProfile star;
  std::vector<double> rate_split;  // r_k >= 0

  int n_bs() const { return static_cast<int>(w_common.size()); }
  int n_users() const { return static_cast<int>(w_private.size()); }

  // R_s + w_c w_c^H + sum_i w_p,i w_p,i^H
  CMat transmit_covariance() const;

  void validate() const;
};

DesignPoint zero_design(int n_bs, int n_users, int n_elements);

// Random design inside the power budget and the STAR energy constraint:
// Gaussian beams and a Wishart-like R_s scaled to a uniform fraction of
// `power_w`, random phases and energy splits, r = 0.
DesignPoint random_design(int n_bs, int n_users, int n_elements, double power_w, std::uint64_t seed);

}  // namespace secisac
