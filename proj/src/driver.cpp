#include "secisac/driver.hpp"

#include <algorithm>
#include <cmath>

namespace secisac {

std::string to_string(TraceStatus status) {
  switch (status) {
    case TraceStatus::converged: return "converged";
    case TraceStatus::max_iters: return "max-iters";
    case TraceStatus::infeasible: return "infeasible";
    case TraceStatus::solver_failure: return "solver-failure";
  }
  return "?";
}

AoOptions AoOptions::from_config(const SystemConfig& config, std::uint64_t init_seed) {
  AoOptions o;
  o.max_iters = config.max_iters;
  o.tol = config.tol;
  o.init_seed = init_seed;
  return o;
}

std::vector<double> AlgorithmTrace::omega_sequence() const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.omega);
  return out;
}

DesignEvaluation evaluate_design(const ChannelSet& channels, const DesignPoint& dp, const SensingConsts& consts) {
  DesignEvaluation ev;
  ev.rates = evaluate_rates(channels, dp);
  ev.sensing = sensing_report(channels, dp, consts.gain_opt, consts.d_opt);
  double split = 0.0;
  for (double r : dp.rate_split) split += r;
  double min_common = std::numeric_limits<double>::infinity();
  for (double c : ev.rates.secrecy_common) min_common = std::min(min_common, c);
  ev.common_budget_ok = dp.rate_split.empty() || split <= min_common + 1e-9;
  ev.omega_hat = std::numeric_limits<double>::infinity();
  for (double r : ev.rates.total_secrecy) ev.omega_hat = std::min(ev.omega_hat, r);
  if (ev.rates.total_secrecy.empty()) ev.omega_hat = 0.0;
  return ev;
}

DesignEvaluation evaluate_design(const ChannelSet& channels, const DesignPoint& dp, const SystemConfig& config) {
  return evaluate_design(channels, dp, sensing_only(channels, config));
}

namespace {

SubproblemSolution solve_with_retry(const Subproblem& step, const conic::SolverSettings& settings, bool& retried) {
  SubproblemSolution sol = solve_step(step, settings);
  retried = false;
  if (!sol.ok()) {
    retried = true;
    SubproblemSolution again = solve_step(step, conic::SolverSettings::conservative());
    again.newton_steps += sol.newton_steps;
    again.solve_time_s += sol.solve_time_s;
    if (!again.ok()) again.diagnostics = sol.diagnostics + " | retry: " + again.diagnostics;
    return again;
  }
  return sol;
}

bool oracle_ok(const ChannelSet& channels, const DesignPoint& dp, const SensingConsts& consts,
               const SystemConfig& config, double tau) {
  return oracle_feasibility(channels, dp, consts, config).feasible(tau);
}

}  // namespace

AlgorithmTrace run_ao(const ChannelSet& channels, const SystemConfig& config, Baseline baseline,
                      const SensingConsts& consts, const AoOptions& options) {
  AlgorithmTrace trace;
  trace.baseline = baseline;
  DesignPoint current = initial_design(channels, config, baseline, options.init_seed);
  DesignPoint pinned = current;
  const BuildPlan plan = apply_baseline(pinned, baseline);

  trace.restoration = restore_feasibility(channels, current, consts, config, plan, options.restoration, options.solver);
  trace.final_design = trace.restoration.design;
  if (!trace.restoration.restored) {
    trace.status = TraceStatus::infeasible;
    trace.diagnostics = "restoration failed: " + trace.restoration.diagnosis;
    trace.final_eval = evaluate_design(channels, trace.final_design, consts);
    trace.feasibility = oracle_feasibility(channels, trace.final_design, consts, config);
    trace.omega_hat = trace.final_eval.omega_hat;
    return trace;
  }
  current = trace.restoration.design;
  double omega_prev = evaluate_design(channels, current, consts).omega_hat;
  trace.initial_omega = omega_prev;
  double oracle_prev = omega_prev;
  trace.status = TraceStatus::max_iters;

  for (int it = 1; it <= options.max_iters; ++it) {
    IterationRecord rec;
    rec.iteration = it;
    const DesignPoint before = current;

    const Subproblem w = build_w_step(channels, current, consts, config, plan);
    const SubproblemSolution sw = solve_with_retry(w, options.solver, rec.w_retried);
    rec.w_status = sw.status;
    rec.w_time_s = sw.solve_time_s;
    rec.newton_steps += sw.newton_steps;
    if (!sw.ok()) {
      trace.status = TraceStatus::solver_failure;
      trace.diagnostics = "W-step at iteration " + std::to_string(it) + ": " + sw.diagnostics;
      trace.records.push_back(rec);
      break;
    }
    current = sw.design;
    rec.omega_w = sw.omega;
    rec.omega = sw.omega;
    rec.max_violation = sw.max_violation;

    if (plan.optimize_v) {
      const Subproblem v = build_v_step(channels, current, consts, config, plan);
      const SubproblemSolution sv = solve_with_retry(v, options.solver, rec.v_retried);
      rec.v_ran = true;
      rec.v_status = sv.status;
      rec.v_time_s = sv.solve_time_s;
      rec.newton_steps += sv.newton_steps;
      if (!sv.ok()) {
        trace.status = TraceStatus::solver_failure;
        trace.diagnostics = "V-step at iteration " + std::to_string(it) + ": " + sv.diagnostics;
        trace.records.push_back(rec);
        break;
      }
      current = sv.design;
      rec.omega_v = sv.omega;
      rec.omega = sv.omega;
      rec.max_violation = std::max(rec.max_violation, sv.max_violation);
    }
    trace.solve_time_s += rec.w_time_s + rec.v_time_s;

    rec.omega_oracle = evaluate_design(channels, current, consts).omega_hat;
    trace.records.push_back(rec);
    trace.iterations = it;

    if (rec.omega_oracle < oracle_prev - options.rollback_tol ||
        !oracle_ok(channels, current, consts, config, options.feasibility_tau)) {
      current = before;
      trace.rolled_back = true;
      trace.status = TraceStatus::converged;
      break;
    }
    oracle_prev = rec.omega_oracle;
    const double delta_omega = std::abs(rec.omega - omega_prev);
    omega_prev = rec.omega;
    if (delta_omega <= options.tol) {
      trace.status = TraceStatus::converged;
      break;
    }
  }

  trace.final_design = current;
  trace.final_eval = evaluate_design(channels, current, consts);
  trace.omega_hat = trace.final_eval.omega_hat;
  trace.feasibility = oracle_feasibility(channels, current, consts, config);
  trace.feasible = trace.feasibility.feasible(options.feasibility_tau) && trace.final_eval.common_budget_ok;
  return trace;
}

AlgorithmTrace run_ao(const ChannelSet& channels, const SystemConfig& config, Baseline baseline,
                      const AoOptions& options) {
  return run_ao(channels, config, baseline, sensing_only(channels, config, options.solver), options);
}

nlohmann::json iteration_to_json(const IterationRecord& r) {
  nlohmann::json j;
  j["iteration"] = r.iteration;
  j["omega"] = r.omega;
  j["omega_w"] = r.omega_w;
  j["omega_v"] = r.v_ran ? nlohmann::json(r.omega_v) : nlohmann::json(nullptr);
  j["omega_oracle"] = r.omega_oracle;
  j["w_status"] = conic::to_string(r.w_status);
  j["v_status"] = r.v_ran ? nlohmann::json(conic::to_string(r.v_status)) : nlohmann::json(nullptr);
  j["w_retried"] = r.w_retried;
  j["v_retried"] = r.v_retried;
  j["w_time_s"] = r.w_time_s;
  j["v_time_s"] = r.v_time_s;
  j["newton_steps"] = r.newton_steps;
  j["max_violation"] = r.max_violation;
  return j;
}

nlohmann::json trace_to_json(const AlgorithmTrace& t) {
  nlohmann::json j;
  j["baseline"] = to_string(t.baseline);
  j["status"] = to_string(t.status);
  j["iterations"] = t.iterations;
  j["initial_omega"] = t.initial_omega;
  j["omega_hat"] = t.omega_hat;
  j["rolled_back"] = t.rolled_back;
  j["feasible"] = t.feasible;
  j["worst_slack"] = t.feasibility.worst();
  j["solve_time_s"] = t.solve_time_s;
  j["restoration"] = {{"restored", t.restoration.restored},
                      {"rounds", t.restoration.rounds},
                      {"slack_history", t.restoration.slack_history},
                      {"rho_history", t.restoration.rho_history}};
  j["records"] = nlohmann::json::array();
  for (const auto& r : t.records) j["records"].push_back(iteration_to_json(r));
  if (!t.diagnostics.empty()) j["diagnostics"] = t.diagnostics;
  return j;
}

}  // namespace secisac
