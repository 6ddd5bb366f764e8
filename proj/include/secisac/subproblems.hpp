#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "secisac/channel.hpp"
#include "secisac/conic/barrier.hpp"
#include "secisac/conic/program.hpp"
#include "secisac/design.hpp"
#include "secisac/metrics.hpp"
#include "secisac/scenario.hpp"
#include "secisac/surrogate.hpp"

namespace secisac {

enum class Baseline { rsma_star_opt, rsma_ris_conv, rsma_star_rand, rsma_no_ris, sdma_star_opt };

std::string to_string(Baseline baseline);
// Throws std::invalid_argument for unknown tags.
Baseline baseline_from_string(const std::string& tag);
const std::vector<Baseline>& all_baselines();

struct BuildPlan {
  Baseline baseline = Baseline::rsma_star_opt;
  bool common_stream = true;  // false: w_c = 0, r = 0, no common-rate constraints
  bool optimize_v = true;     // false: V frozen, V-step skipped
  bool conventional = false;  // V-step with the half-split zero pattern
};

// Pins `dp` to the baseline's restricted set and says how to build its steps.
BuildPlan apply_baseline(DesignPoint& dp, Baseline baseline);

struct SensingConsts {
  CMat r_opt;
  std::vector<double> gain_opt;
  std::vector<double> d_opt;
};

// Sensing-only program over R' = R / P and the minimum gain t.
conic::ConicProgram sensing_program(const ChannelSet& channels);

// max_R min_j a_j^H R a_j  s.t. tr R <= P, R PSD. Throws std::runtime_error
// when the solver fails.
SensingConsts sensing_only(const ChannelSet& channels, const SystemConfig& config,
                           const conic::SolverSettings& settings = {});

enum class StepKind { w_step, v_step };

struct SubproblemSolution {
  conic::SolveStatus status = conic::SolveStatus::numerical_limit;
  DesignPoint design;
  AuxState aux;
  double omega = 0.0;
  std::vector<double> slack;  // restoration slacks, empty for plain steps
  double slack_total = 0.0;
  int newton_steps = 0;
  double solve_time_s = 0.0;
  double max_violation = 0.0;
  std::string diagnostics;

  bool ok() const { return status == conic::SolveStatus::optimal; }
};

// One built convex subproblem together with the handles needed to map its
// solution back onto a DesignPoint.
//
// Scaling: R_s = P R', w = sqrt(P) w' at the W-step, and delta_j = scale_j
// delta'_j with scale_j = max(D_j at the expansion, 1 + eta_j D_j^opt).
struct Subproblem {
  StepKind kind = StepKind::w_step;
  BuildPlan plan;
  conic::ConicProgram program;
  DesignPoint expansion;
  double power_w = 1.0;
  std::vector<double> delta_scale;
  int n_beams = 0;  // eavesdropped beams per target (common first)
  std::vector<CVec> target_channels;

  conic::HermitianVar an_covariance;
  conic::ComplexVar w_common;
  std::vector<conic::ComplexVar> w_private;
  conic::ComplexVar v_t;
  conic::ComplexVar v_r;
  conic::RealVar rate_split;
  conic::RealVar alpha_common;
  conic::RealVar beta_common;
  conic::RealVar alpha_private;
  conic::RealVar beta_private;
  conic::RealVar delta;
  conic::RealVar mu;
  conic::RealVar omega;
  conic::RealVar eaves_slack;  // index j * n_beams + m
  conic::RealVar relax;        // restoration slacks; size 0 for plain steps
  std::vector<std::string> relax_labels;

  bool relaxed() const { return relax.size > 0; }

  SubproblemSolution extract(const RVec& x) const;
  // Decision vector for (dp, aux) with the eavesdropping slacks set tight.
  RVec pack(const DesignPoint& dp, const AuxState& aux) const;
};

// Tags carried by the constraints of the W- and V-steps (one label per instance).
namespace tags {
inline constexpr const char* common_surrogate = "common-rate-surrogate";
inline constexpr const char* private_surrogate = "private-rate-surrogate";
inline constexpr const char* log_delta_tangent = "log-delta-tangent";
inline constexpr const char* eavesdrop_log = "eavesdrop-log";
inline constexpr const char* gain_minorant = "gain-minorant";
inline constexpr const char* gain_exact = "gain-exact";
inline constexpr const char* gain_floor = "gain-floor";
inline constexpr const char* secrecy_balance = "secrecy-balance";
inline constexpr const char* private_secrecy = "private-secrecy";
inline constexpr const char* common_budget = "common-budget";
inline constexpr const char* rate_split_nonneg = "rate-split-nonneg";
inline constexpr const char* power_budget = "power-budget";
inline constexpr const char* noise_psd = "noise-psd";
inline constexpr const char* star_energy = "star-energy";
inline constexpr const char* star_fixed_entry = "star-fixed-entry";
inline constexpr const char* conventional_zero_t = "conventional-zero-t";
inline constexpr const char* conventional_zero_r = "conventional-zero-r";
inline constexpr const char* restoration_slack = "restoration-slack";
inline constexpr const char* sensing_gain = "sensing-gain";
inline constexpr const char* sensing_power = "sensing-power";
}  // namespace tags

// Optimizes R_s, W, r (and auxiliaries) at fixed V. With `restoration_rho`
// set, the gain-floor, private-secrecy and common-budget rows receive
// nonnegative slacks penalized by rho in the objective.
Subproblem build_w_step(const ChannelSet& channels, const DesignPoint& expansion, const SensingConsts& consts,
                        const SystemConfig& config, const BuildPlan& plan,
                        std::optional<double> restoration_rho = std::nullopt);

// Optimizes V, r (and auxiliaries) at fixed R_s, W. Uses the conventional
// zero pattern when plan.conventional is set.
Subproblem build_v_step(const ChannelSet& channels, const DesignPoint& expansion, const SensingConsts& consts,
                        const SystemConfig& config, const BuildPlan& plan);

// V-step with v_t = 0 on the first half of the elements and v_r = 0 on the
// second half. Throws std::invalid_argument for odd N_S.
Subproblem build_v_step_conventional(const ChannelSet& channels, const DesignPoint& expansion,
                                     const SensingConsts& consts, const SystemConfig& config, BuildPlan plan);

SubproblemSolution solve_step(const Subproblem& step, const conic::SolverSettings& settings = {});

// G_k Q G_k^H + e e^H with Q the stream's interference covariance at the
// expansion point; v^H M v = E_{m,k} when the last entry of v is 1.
CMat v_step_middle_matrix(const ChannelSet& channels, const DesignPoint& dp, int user, Stream stream);

struct RestorationSettings {
  double rho = 1e3;
  double growth = 10.0;
  double rho_max = 1e7;
  int max_rounds = 8;
  double slack_tol = 1e-8;
  double oracle_tol = 1e-10;
};

struct RestorationResult {
  bool restored = false;
  DesignPoint design;
  std::vector<double> slack_history;
  std::vector<double> rho_history;
  int rounds = 0;
  int newton_steps = 0;
  std::string diagnosis;
};

// Repeated slack-relaxed W-steps from `start` until the slacks vanish and the
// oracle certifies the design; the penalty grows after every round that still
// leaves slack.
RestorationResult restore_feasibility(const ChannelSet& channels, const DesignPoint& start,
                                      const SensingConsts& consts, const SystemConfig& config,
                                      const BuildPlan& plan, const RestorationSettings& settings = {},
                                      const conic::SolverSettings& solver = {});

// Random-phase STAR profile with amplitudes 1/sqrt(2) (energy split evenly).
StarProfile random_star_profile(int n_elements, std::uint64_t seed);

// Deterministic initial point: random-phase V, matched-filter private beams
// with half the power, common beam on the dominant left singular vector with
// a fifth, R_s = 0.3 P / N_B I; then pinned to the baseline.
DesignPoint initial_design(const ChannelSet& channels, const SystemConfig& config, Baseline baseline,
                           std::uint64_t seed);

// Oracle check of the original problem including the beampattern floor.
FeasibilityLedger oracle_feasibility(const ChannelSet& channels, const DesignPoint& dp, const SensingConsts& consts,
                                     const SystemConfig& config);

}  // namespace secisac
