#pragma once

#include <string>
#include <vector>

#include "secisac/conic/program.hpp"

namespace secisac::conic {

enum class SolveStatus { optimal, infeasible, unbounded, numerical_limit };

std::string to_string(SolveStatus status);

struct SolverSettings {
  double tol_rel = 1e-8;
  double tol_abs = 1e-9;
  double t_initial = 1.0;
  double t_growth = 20.0;
  // Variables are confined to ||z|| <= ball_radius; touching it means unbounded.
  double ball_radius = 1e4;
  double centering_tol = 1e-10;  // on lambda^2 / 2
  int max_centering_steps = 200;
  int max_newton_steps = 4000;
  // Gap accepted as optimal when the path-following stalls numerically.
  double stall_accept_rel = 1e-6;

  // Smaller barrier growth and a wider ball, used for retries.
  static SolverSettings conservative();
};

struct SolveResult {
  SolveStatus status = SolveStatus::numerical_limit;
  double objective = 0.0;
  RVec x;  // empty unless optimal
  std::vector<VariableInfo> variables;
  int iterations = 0;  // Newton steps over both phases
  int phase1_iterations = 0;
  double wall_time_s = 0.0;
  double gap = 0.0;  // final nu / t bound
  std::string diagnostics;

  bool has_primal() const { return status == SolveStatus::optimal; }
  RVec value(const std::string& name) const;
};

// Primal path-following barrier method: equality rows are eliminated, a
// phase I problem finds a strictly feasible point, then damped Newton
// centering along t -> inf until nu / t <= tol_abs + tol_rel |objective|.
SolveResult solve(const CanonicalProgram& program, const SolverSettings& settings = {});
SolveResult solve(const ConicProgram& program, const SolverSettings& settings = {});

}  // namespace secisac::conic
