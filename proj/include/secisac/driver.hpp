#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "secisac/metrics.hpp"
#include "secisac/subproblems.hpp"

namespace secisac {

enum class TraceStatus { converged, max_iters, infeasible, solver_failure };

std::string to_string(TraceStatus status);

struct IterationRecord {
  int iteration = 0;             // 1-based
  double omega = 0.0;            // program omega of the last step (V-step when it ran)
  double omega_w = 0.0;
  double omega_v = std::numeric_limits<double>::quiet_NaN();  // NaN when V is frozen
  double omega_oracle = 0.0;     // min-secrecy of the iterate from the metrics oracle
  conic::SolveStatus w_status = conic::SolveStatus::optimal;
  conic::SolveStatus v_status = conic::SolveStatus::optimal;
  bool v_ran = false;
  bool w_retried = false;
  bool v_retried = false;
  double w_time_s = 0.0;
  double v_time_s = 0.0;
  int newton_steps = 0;
  double max_violation = 0.0;    // over the built constraints at the returned points
};

struct AoOptions {
  int max_iters = 20;
  double tol = 1e-4;
  std::uint64_t init_seed = 0;
  conic::SolverSettings solver;
  RestorationSettings restoration;
  // Oracle drops larger than this roll the iterate back.
  double rollback_tol = 1e-7;
  double feasibility_tau = 1e-5;

  static AoOptions from_config(const SystemConfig& config, std::uint64_t init_seed);
};

struct DesignEvaluation {
  RateReport rates;
  SensingReport sensing;
  double omega_hat = 0.0;
  // sum_k r_k <= min_k R_c,k^sec, re-verified on the oracle rates
  bool common_budget_ok = true;
};

struct AlgorithmTrace {
  Baseline baseline = Baseline::rsma_star_opt;
  TraceStatus status = TraceStatus::infeasible;
  std::vector<IterationRecord> records;
  int iterations = 0;
  double initial_omega = 0.0;  // oracle value after restoration
  double omega_hat = 0.0;
  bool rolled_back = false;
  RestorationResult restoration;
  DesignPoint final_design;
  DesignEvaluation final_eval;
  FeasibilityLedger feasibility;
  bool feasible = false;  // final design passes the checker at feasibility_tau
  double solve_time_s = 0.0;
  std::string diagnostics;

  // Per-iteration omega values, the sequence whose increments are Delta omega.
  std::vector<double> omega_sequence() const;
};

// Oracle evaluation of a design with the given sensing constants.
DesignEvaluation evaluate_design(const ChannelSet& channels, const DesignPoint& dp, const SensingConsts& consts);
// Solves the sensing-only benchmark first.
DesignEvaluation evaluate_design(const ChannelSet& channels, const DesignPoint& dp, const SystemConfig& config);

// Alternating optimization from the baseline's initial point.
AlgorithmTrace run_ao(const ChannelSet& channels, const SystemConfig& config, Baseline baseline,
                      const SensingConsts& consts, const AoOptions& options);
AlgorithmTrace run_ao(const ChannelSet& channels, const SystemConfig& config, Baseline baseline,
                      const AoOptions& options);

nlohmann::json iteration_to_json(const IterationRecord& record);
nlohmann::json trace_to_json(const AlgorithmTrace& trace);

}  // namespace secisac
