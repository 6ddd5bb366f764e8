#include "secisac/subproblems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "secisac/conic/embed.hpp"

namespace secisac {

using conic::ComplexExpr;
using conic::ComplexVar;
using conic::LinExpr;

std::string to_string(Baseline baseline) {
  switch (baseline) {
    case Baseline::rsma_star_opt: return "rsma-star-opt";
    case Baseline::rsma_ris_conv: return "rsma-ris-conv";
    case Baseline::rsma_star_rand: return "rsma-star-rand";
    case Baseline::rsma_no_ris: return "rsma-no-ris";
    case Baseline::sdma_star_opt: return "sdma-star-opt";
  }
  return "?";
}

Baseline baseline_from_string(const std::string& tag) {
  for (Baseline b : all_baselines())
    if (to_string(b) == tag) return b;
  throw std::invalid_argument("unknown baseline: " + tag);
}

const std::vector<Baseline>& all_baselines() {
  static const std::vector<Baseline> list{Baseline::rsma_star_opt, Baseline::rsma_ris_conv, Baseline::rsma_star_rand,
                                          Baseline::rsma_no_ris, Baseline::sdma_star_opt};
  return list;
}

BuildPlan apply_baseline(DesignPoint& dp, Baseline baseline) {
  BuildPlan plan;
  plan.baseline = baseline;
  const int ns = dp.star.n_elements();
  switch (baseline) {
    case Baseline::rsma_star_opt:
      dp.star.mode = StarMode::star;
      break;
    case Baseline::rsma_ris_conv: {
      if (ns % 2 != 0) throw std::invalid_argument("conventional RIS needs an even number of elements");
      plan.conventional = true;
      for (int n = 0; n < ns; ++n) {
        CVec& active = n < ns / 2 ? dp.star.v_r : dp.star.v_t;
        CVec& idle = n < ns / 2 ? dp.star.v_t : dp.star.v_r;
        idle[n] = 0.0;
        const double mag = std::abs(active[n]);
        active[n] = mag > 0.0 ? active[n] / mag : cdouble(1.0);
      }
      dp.star.mode = StarMode::conventional;
      break;
    }
    case Baseline::rsma_star_rand:
      plan.optimize_v = false;
      dp.star.mode = StarMode::random;
      break;
    case Baseline::rsma_no_ris:
      plan.optimize_v = false;
      dp.star = no_ris_profile(ns);
      break;
    case Baseline::sdma_star_opt:
      plan.common_stream = false;
      dp.w_common.setZero();
      std::fill(dp.rate_split.begin(), dp.rate_split.end(), 0.0);
      dp.star.mode = StarMode::star;
      break;
  }
  return plan;
}

conic::ConicProgram sensing_program(const ChannelSet& channels) {
  const int nb = channels.n_bs();
  conic::ConicProgram prog;
  const auto r = prog.add_hermitian("covariance", nb);
  const auto t = prog.add_real("min_gain", 1);
  for (int j = 0; j < channels.n_targets(); ++j)
    prog.add_nonneg(tags::sensing_gain, "sensing-gain[" + std::to_string(j) + "]",
                    conic::quad_form(channels.steer_target[j], r) - t[0]);
  prog.add_nonneg(tags::sensing_power, "sensing-power", LinExpr(1.0) - conic::trace(r));
  prog.add_psd(tags::noise_psd, "sensing-psd", 2 * nb, conic::embed_hermitian(r));
  prog.maximize(t[0]);
  return prog;
}

SensingConsts sensing_only(const ChannelSet& channels, const SystemConfig& config,
                           const conic::SolverSettings& settings) {
  const int ks = channels.n_targets();
  const double p = config.power_budget_w();
  const conic::ConicProgram prog = sensing_program(channels);
  const conic::HermitianVar r{prog.variable("covariance").offset, channels.n_bs()};
  const conic::SolveResult res = conic::solve(prog, settings);
  if (!res.has_primal())
    throw std::runtime_error("sensing_only: solver returned " + conic::to_string(res.status) + " " + res.diagnostics);
  SensingConsts out;
  out.r_opt = p * conic::hermitian_value(r, res.x);
  for (int j = 0; j < ks; ++j) {
    const CVec& a = channels.steer_target[j];
    const CVec& g = channels.g_target[j];
    out.gain_opt.push_back((a.adjoint() * out.r_opt * a).value().real());
    out.d_opt.push_back((g.adjoint() * out.r_opt * g).value().real());
  }
  return out;
}

namespace {

std::string idx(const std::string& base, int i) { return base + "[" + std::to_string(i) + "]"; }
std::string idx(const std::string& base, int i, int j) {
  return base + "[" + std::to_string(i) + "," + std::to_string(j) + "]";
}

std::vector<LinExpr> scaled(const std::vector<LinExpr>& v, double s) {
  std::vector<LinExpr> out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(s * e);
  return out;
}

// u = v^H a for a fixed vector a.
ComplexExpr conj_inner(const CVec& a, const ComplexVar& v) { return conic::conj(conic::inner(a, v)); }

struct StepCommon {
  std::vector<double> d_bar;
  std::vector<double> scale;
};

StepCommon delta_scaling(const ChannelSet& channels, const DesignPoint& expansion, const SensingConsts& consts,
                         const SystemConfig& config) {
  StepCommon c;
  for (int j = 0; j < channels.n_targets(); ++j) {
    const double d = eavesdropper_interference(channels.g_target[j], expansion);
    c.d_bar.push_back(d);
    c.scale.push_back(std::max(d, 1.0 + config.beampattern_ratio(j) * consts.d_opt[j]));
  }
  return c;
}

void add_aux_variables(Subproblem& sp, int kc, int ks) {
  auto& prog = sp.program;
  const bool common = sp.plan.common_stream;
  sp.n_beams = kc + (common ? 1 : 0);
  if (common) {
    sp.rate_split = prog.add_real("rate_split", kc);
    sp.alpha_common = prog.add_real("alpha_common", 1);
    sp.beta_common = prog.add_real("beta_common", 1);
  }
  sp.alpha_private = prog.add_real("alpha_private", kc);
  sp.beta_private = prog.add_real("beta_private", kc);
  sp.delta = prog.add_real("delta", ks);
  sp.mu = prog.add_real("mu", ks);
  sp.omega = prog.add_real("omega", 1);
  sp.eaves_slack = prog.add_real("eaves_slack", ks * sp.n_beams);
}

LinExpr beta_of_beam(const Subproblem& sp, int m) {
  if (sp.plan.common_stream) return m == 0 ? sp.beta_common[0] : sp.beta_private[m - 1];
  return sp.beta_private[m];
}

// Beam m in the eavesdropping order at the expansion point.
const CVec& beam_value(const Subproblem& sp, const DesignPoint& dp, int m) {
  if (sp.plan.common_stream) return m == 0 ? dp.w_common : dp.w_private[static_cast<std::size_t>(m - 1)];
  return dp.w_private[static_cast<std::size_t>(m)];
}

// Rows shared by both steps: tangent, exp-cone half of the eavesdropping
// chain, gain floor, rate-split bookkeeping.
void add_shared_rows(Subproblem& sp, const StepCommon& sc, const SensingConsts& consts, const SystemConfig& config,
                     std::optional<double> restoration_rho) {
  auto& prog = sp.program;
  const bool common = sp.plan.common_stream;
  const int kc = sp.alpha_private.size;
  const int ks = sp.delta.size;
  int n_relax = 0;
  if (restoration_rho) {
    n_relax = ks + kc + (common ? 1 : 0);
    sp.relax = prog.add_real("restoration_slack", n_relax);
  }
  int next_relax = 0;
  auto relax_term = [&](const std::string& label) -> LinExpr {
    if (!restoration_rho) return LinExpr(0.0);
    sp.relax_labels.push_back(label);
    return sp.relax[next_relax++];
  };

  for (int j = 0; j < ks; ++j) {
    const double d_bar = sc.d_bar[static_cast<std::size_t>(j)];
    const double s = sc.scale[static_cast<std::size_t>(j)];
    // log2(d_bar) + (s delta' - d_bar) / (d_bar ln2) <= mu
    prog.add_nonneg(tags::log_delta_tangent, idx(tags::log_delta_tangent, j),
                    sp.mu[j] - std::log2(d_bar) - (1.0 / (d_bar * std::numbers::ln2)) * (s * sp.delta[j] - d_bar));
    for (int m = 0; m < sp.n_beams; ++m) {
      const LinExpr level = sp.mu[j] - beta_of_beam(sp, m) - std::log2(s);
      prog.add(conic::hypograph_log(tags::eavesdrop_log, idx(tags::eavesdrop_log, j, m),
                                    sp.eaves_slack[j * sp.n_beams + m], level));
    }
    const std::string floor_label = idx(tags::gain_floor, j);
    const double floor = (1.0 + config.beampattern_ratio(j) * consts.d_opt[static_cast<std::size_t>(j)]) / s;
    prog.add_nonneg(tags::gain_floor, floor_label, sp.delta[j] - floor + relax_term(floor_label));
  }
  for (int k = 0; k < kc; ++k) {
    LinExpr balance = sp.alpha_private[k] - sp.beta_private[k] - sp.omega[0];
    if (common) balance += sp.rate_split[k];
    prog.add_nonneg(tags::secrecy_balance, idx(tags::secrecy_balance, k), balance);
    const std::string label = idx(tags::private_secrecy, k);
    prog.add_nonneg(tags::private_secrecy, label, sp.alpha_private[k] - sp.beta_private[k] + relax_term(label));
  }
  if (common) {
    LinExpr budget = sp.alpha_common[0] - sp.beta_common[0];
    for (int k = 0; k < kc; ++k) budget -= sp.rate_split[k];
    prog.add_nonneg(tags::common_budget, tags::common_budget, budget + relax_term(tags::common_budget));
    for (int k = 0; k < kc; ++k) prog.add_nonneg(tags::rate_split_nonneg, idx(tags::rate_split_nonneg, k), sp.rate_split[k]);
  }
  LinExpr objective = sp.omega[0];
  for (int i = 0; i < n_relax; ++i) {
    prog.add_nonneg(tags::restoration_slack, idx(tags::restoration_slack, i), sp.relax[i]);
    objective -= *restoration_rho * sp.relax[i];
  }
  prog.maximize(objective);
}

void add_surrogate(conic::ConicProgram& prog, const std::string& tag, const std::string& label,
                   const MinorantCoefficients& c, const ComplexExpr& u, const LinExpr& linear_part,
                   const std::vector<ComplexExpr>& quadratic_terms, const LinExpr& alpha) {
  // alpha <= f + 2 Re(b* u) - q (linear_part + sum |terms|^2)
  LinExpr rhs = c.f + 2.0 * conic::real_part_of_conj_product(c.b, u) - c.q * linear_part - alpha;
  if (c.q > 0.0)
    prog.add(conic::soc_of_quadratic(tag, label, scaled(conic::stack_real(quadratic_terms), std::sqrt(c.q)), rhs));
  else
    prog.add_nonneg(tag, label, rhs);
}

}  // namespace

Subproblem build_w_step(const ChannelSet& channels, const DesignPoint& expansion, const SensingConsts& consts,
                        const SystemConfig& config, const BuildPlan& plan, std::optional<double> restoration_rho) {
  Subproblem sp;
  sp.kind = StepKind::w_step;
  sp.plan = plan;
  sp.expansion = expansion;
  const int nb = channels.n_bs();
  const int kc = channels.n_users();
  const int ks = channels.n_targets();
  const bool common = plan.common_stream;
  sp.power_w = config.power_budget_w();
  const double root_p = std::sqrt(sp.power_w);
  auto& prog = sp.program;

  sp.an_covariance = prog.add_hermitian("an_covariance", nb);
  if (common) sp.w_common = prog.add_complex("w_common", nb);
  for (int k = 0; k < kc; ++k) sp.w_private.push_back(prog.add_complex(idx("w_private", k), nb));
  add_aux_variables(sp, kc, ks);
  const StepCommon sc = delta_scaling(channels, expansion, consts, config);
  sp.delta_scale = sc.scale;
  sp.target_channels = channels.g_target;

  auto beam_var = [&](int m) -> const ComplexVar& {
    if (common) return m == 0 ? sp.w_common : sp.w_private[static_cast<std::size_t>(m - 1)];
    return sp.w_private[static_cast<std::size_t>(m)];
  };

  const SurrogateCoefficients coeffs = mm_coefficients(channels, expansion);
  for (int k = 0; k < kc; ++k) {
    const CVec h = root_p * effective_cu_channel(channels, expansion.star, k);
    std::vector<ComplexExpr> priv_terms;
    for (int i = 0; i < kc; ++i) priv_terms.push_back(conic::inner(h, sp.w_private[static_cast<std::size_t>(i)]));
    const LinExpr linear = conic::quad_form(h, sp.an_covariance) + 1.0;
    if (common) {
      const ComplexExpr u = conic::inner(h, sp.w_common);
      std::vector<ComplexExpr> terms = priv_terms;
      terms.push_back(u);
      add_surrogate(prog, tags::common_surrogate, idx(tags::common_surrogate, k), coeffs.at(Stream::common, k), u,
                    linear, terms, sp.alpha_common[0]);
    }
    add_surrogate(prog, tags::private_surrogate, idx(tags::private_surrogate, k), coeffs.at(Stream::private_, k),
                  priv_terms[static_cast<std::size_t>(k)], linear, priv_terms, sp.alpha_private[k]);
  }

  for (int j = 0; j < ks; ++j) {
    const CVec g = root_p * channels.g_target[j];
    const double s = sc.scale[static_cast<std::size_t>(j)];
    const double inv_root_s = 1.0 / std::sqrt(s);
    LinExpr minorant = conic::quad_form(g, sp.an_covariance) + 1.0;
    for (int m = 0; m < sp.n_beams; ++m) {
      const ComplexExpr gw = conic::inner(g, beam_var(m));
      // s' + |g^H w'|^2 / scale <= delta'
      prog.add(conic::soc_of_quadratic(tags::eavesdrop_log, idx(tags::eavesdrop_log, j, m),
                                       scaled(conic::stack_real({gw}), inv_root_s),
                                       sp.delta[j] - sp.eaves_slack[j * sp.n_beams + m]));
      const cdouble gw_bar = g.dot(beam_value(sp, expansion, m) / root_p);
      minorant += 2.0 * conic::real_part_of_conj_product(gw_bar, gw) - std::norm(gw_bar);
    }
    prog.add_nonneg(tags::gain_minorant, idx(tags::gain_minorant, j), (1.0 / s) * minorant - sp.delta[j]);
  }

  std::vector<ComplexExpr> all_beams;
  for (int m = 0; m < sp.n_beams; ++m)
    for (int i = 0; i < nb; ++i) all_beams.push_back(beam_var(m)[i]);
  prog.add(conic::soc_of_quadratic(tags::power_budget, tags::power_budget, conic::stack_real(all_beams),
                                   LinExpr(1.0) - conic::trace(sp.an_covariance)));
  prog.add_psd(tags::noise_psd, tags::noise_psd, 2 * nb, conic::embed_hermitian(sp.an_covariance));

  add_shared_rows(sp, sc, consts, config, restoration_rho);
  return sp;
}

CMat v_step_middle_matrix(const ChannelSet& channels, const DesignPoint& dp, int user, Stream stream) {
  CMat q = dp.an_covariance;
  for (const CVec& w : dp.w_private) q.noalias() += w * w.adjoint();
  if (stream == Stream::common) q.noalias() += dp.w_common * dp.w_common.adjoint();
  const CMat& g = channels.g_cu[static_cast<std::size_t>(user)];
  CMat m = g * q * g.adjoint();
  m(m.rows() - 1, m.cols() - 1) += 1.0;
  return 0.5 * (m + m.adjoint());
}

Subproblem build_v_step(const ChannelSet& channels, const DesignPoint& expansion, const SensingConsts& consts,
                        const SystemConfig& config, const BuildPlan& plan) {
  Subproblem sp;
  sp.kind = StepKind::v_step;
  sp.plan = plan;
  sp.expansion = expansion;
  sp.power_w = config.power_budget_w();
  const int kc = channels.n_users();
  const int ks = channels.n_targets();
  const int ns = channels.n_elements();
  const bool common = plan.common_stream;
  auto& prog = sp.program;

  if (plan.conventional && ns % 2 != 0) throw std::invalid_argument("conventional V-step needs an even N_S");
  sp.v_t = prog.add_complex("v_t", ns + 1);
  sp.v_r = prog.add_complex("v_r", ns + 1);
  add_aux_variables(sp, kc, ks);
  const StepCommon sc = delta_scaling(channels, expansion, consts, config);
  sp.delta_scale = sc.scale;
  sp.target_channels = channels.g_target;

  const SurrogateCoefficients coeffs = mm_coefficients(channels, expansion);
  for (int k = 0; k < kc; ++k) {
    const ComplexVar& v = channels.cu_regions[static_cast<std::size_t>(k)] == Region::transmission ? sp.v_t : sp.v_r;
    const CMat& g = channels.g_cu[static_cast<std::size_t>(k)];
    for (Stream stream : {Stream::common, Stream::private_}) {
      if (stream == Stream::common && !common) continue;
      const CVec& w = stream == Stream::common ? expansion.w_common : expansion.w_private[static_cast<std::size_t>(k)];
      const ComplexExpr u = conj_inner(g * w, v);
      const CMat m = v_step_middle_matrix(channels, expansion, k, stream);
      Eigen::SelfAdjointEigenSolver<CMat> eig(m);
      const double top = std::max(eig.eigenvalues().maxCoeff(), 0.0);
      std::vector<ComplexExpr> terms;
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double lambda = eig.eigenvalues()[i];
        if (lambda <= 1e-13 * top) continue;
        terms.push_back(conic::inner(std::sqrt(lambda) * eig.eigenvectors().col(i), v));
      }
      const bool is_common = stream == Stream::common;
      add_surrogate(prog, is_common ? tags::common_surrogate : tags::private_surrogate,
                    idx(is_common ? tags::common_surrogate : tags::private_surrogate, k), coeffs.at(stream, k), u,
                    LinExpr(0.0), terms, is_common ? sp.alpha_common[0] : sp.alpha_private[k]);
    }
  }

  for (int j = 0; j < ks; ++j) {
    const double s = sc.scale[static_cast<std::size_t>(j)];
    prog.add_nonneg(tags::gain_exact, idx(tags::gain_exact, j), sc.d_bar[static_cast<std::size_t>(j)] / s - sp.delta[j]);
    for (int m = 0; m < sp.n_beams; ++m) {
      const double leak = std::norm(channels.g_target[j].dot(beam_value(sp, expansion, m)));
      prog.add_nonneg(tags::eavesdrop_log, idx(tags::eavesdrop_log, j, m),
                      sp.delta[j] - leak / s - sp.eaves_slack[j * sp.n_beams + m]);
    }
  }

  for (int n = 0; n < ns; ++n)
    prog.add_soc(tags::star_energy, idx(tags::star_energy, n), LinExpr(1.0),
                 conic::stack_real({sp.v_t[n], sp.v_r[n]}));
  prog.add_zero(tags::star_fixed_entry, tags::star_fixed_entry,
                {sp.v_t[ns].re - 1.0, sp.v_t[ns].im, sp.v_r[ns].re - 1.0, sp.v_r[ns].im});
  if (plan.conventional) {
    std::vector<LinExpr> zt;
    std::vector<LinExpr> zr;
    for (int n = 0; n < ns / 2; ++n) {
      zt.push_back(sp.v_t[n].re);
      zt.push_back(sp.v_t[n].im);
    }
    for (int n = ns / 2; n < ns; ++n) {
      zr.push_back(sp.v_r[n].re);
      zr.push_back(sp.v_r[n].im);
    }
    prog.add_zero(tags::conventional_zero_t, tags::conventional_zero_t, zt);
    prog.add_zero(tags::conventional_zero_r, tags::conventional_zero_r, zr);
  }

  add_shared_rows(sp, sc, consts, config, std::nullopt);
  return sp;
}

Subproblem build_v_step_conventional(const ChannelSet& channels, const DesignPoint& expansion,
                                     const SensingConsts& consts, const SystemConfig& config, BuildPlan plan) {
  plan.conventional = true;
  return build_v_step(channels, expansion, consts, config, plan);
}

SubproblemSolution Subproblem::extract(const RVec& x) const {
  SubproblemSolution sol;
  sol.status = conic::SolveStatus::optimal;
  DesignPoint dp = expansion;
  const bool common = plan.common_stream;
  const int kc = alpha_private.size;
  if (kind == StepKind::w_step) {
    const double root_p = std::sqrt(power_w);
    dp.an_covariance = power_w * conic::hermitian_value(an_covariance, x);
    dp.w_common = common ? CVec(root_p * conic::complex_value(w_common, x)) : CVec(CVec::Zero(dp.n_bs()));
    for (int k = 0; k < kc; ++k)
      dp.w_private[static_cast<std::size_t>(k)] = root_p * conic::complex_value(w_private[static_cast<std::size_t>(k)], x);
  } else {
    dp.star.v_t = conic::complex_value(v_t, x);
    dp.star.v_r = conic::complex_value(v_r, x);
  }
  for (int k = 0; k < kc; ++k)
    dp.rate_split[static_cast<std::size_t>(k)] = common ? std::max(0.0, x[rate_split.offset + k]) : 0.0;
  sol.design = dp;

  AuxState& aux = sol.aux;
  aux.alpha_c = common ? x[alpha_common.offset] : 0.0;
  aux.beta_c = common ? x[beta_common.offset] : 0.0;
  for (int k = 0; k < kc; ++k) {
    aux.alpha_p.push_back(x[alpha_private.offset + k]);
    aux.beta_p.push_back(x[beta_private.offset + k]);
  }
  for (int j = 0; j < delta.size; ++j) {
    aux.delta.push_back(delta_scale[static_cast<std::size_t>(j)] * x[delta.offset + j]);
    aux.mu.push_back(x[mu.offset + j]);
  }
  aux.omega = x[omega.offset];
  sol.omega = aux.omega;
  for (int i = 0; i < relax.size; ++i) {
    sol.slack.push_back(x[relax.offset + i]);
    sol.slack_total += x[relax.offset + i];
  }
  sol.max_violation = program.max_violation(x);
  return sol;
}

RVec Subproblem::pack(const DesignPoint& dp, const AuxState& aux) const {
  RVec x = RVec::Zero(program.num_vars());
  const bool common = plan.common_stream;
  const int kc = alpha_private.size;
  if (kind == StepKind::w_step) {
    const double root_p = std::sqrt(power_w);
    conic::assign_hermitian(an_covariance, dp.an_covariance / power_w, x);
    if (common) conic::assign_complex(w_common, dp.w_common / root_p, x);
    for (int k = 0; k < kc; ++k)
      conic::assign_complex(w_private[static_cast<std::size_t>(k)], dp.w_private[static_cast<std::size_t>(k)] / root_p, x);
  } else {
    conic::assign_complex(v_t, dp.star.v_t, x);
    conic::assign_complex(v_r, dp.star.v_r, x);
  }
  if (common) {
    for (int k = 0; k < kc; ++k) x[rate_split.offset + k] = dp.rate_split[static_cast<std::size_t>(k)];
    x[alpha_common.offset] = aux.alpha_c;
    x[beta_common.offset] = aux.beta_c;
  }
  for (int k = 0; k < kc; ++k) {
    x[alpha_private.offset + k] = aux.alpha_p[static_cast<std::size_t>(k)];
    x[beta_private.offset + k] = aux.beta_p[static_cast<std::size_t>(k)];
  }
  for (int j = 0; j < delta.size; ++j) {
    const double s = delta_scale[static_cast<std::size_t>(j)];
    const double d = aux.delta[static_cast<std::size_t>(j)];
    x[delta.offset + j] = d / s;
    x[mu.offset + j] = aux.mu[static_cast<std::size_t>(j)];
    for (int m = 0; m < n_beams; ++m)
      x[eaves_slack.offset + j * n_beams + m] =
          (d - std::norm(target_channels[static_cast<std::size_t>(j)].dot(beam_value(*this, dp, m)))) / s;
  }
  x[omega.offset] = aux.omega;
  return x;
}

SubproblemSolution solve_step(const Subproblem& step, const conic::SolverSettings& settings) {
  const conic::SolveResult res = conic::solve(step.program, settings);
  SubproblemSolution sol;
  if (res.has_primal()) sol = step.extract(res.x);
  sol.status = res.status;
  sol.newton_steps = res.iterations;
  sol.solve_time_s = res.wall_time_s;
  sol.diagnostics = res.diagnostics;
  if (!res.has_primal()) sol.design = step.expansion;
  return sol;
}

FeasibilityLedger oracle_feasibility(const ChannelSet& channels, const DesignPoint& dp, const SensingConsts& consts,
                                     const SystemConfig& config) {
  const RateReport rep = evaluate_rates(channels, dp);
  const SensingReport sens = sensing_report(channels, dp, consts.gain_opt, consts.d_opt);
  return check_feasibility(channels, dp, rep, sens, config);
}

RestorationResult restore_feasibility(const ChannelSet& channels, const DesignPoint& start,
                                      const SensingConsts& consts, const SystemConfig& config,
                                      const BuildPlan& plan, const RestorationSettings& settings,
                                      const conic::SolverSettings& solver) {
  RestorationResult out;
  out.design = start;
  double rho = settings.rho;
  for (int round = 0; round < settings.max_rounds; ++round) {
    const Subproblem step = build_w_step(channels, out.design, consts, config, plan, rho);
    SubproblemSolution sol = solve_step(step, solver);
    if (sol.status == conic::SolveStatus::numerical_limit) sol = solve_step(step, conic::SolverSettings::conservative());
    out.newton_steps += sol.newton_steps;
    out.rounds = round + 1;
    if (!sol.ok()) {
      out.diagnosis = "restoration step returned " + conic::to_string(sol.status) + ": " + sol.diagnostics;
      return out;
    }
    out.slack_history.push_back(sol.slack_total);
    out.rho_history.push_back(rho);
    out.design = sol.design;
    if (sol.slack_total < settings.slack_tol &&
        oracle_feasibility(channels, out.design, consts, config).feasible(settings.oracle_tol)) {
      out.restored = true;
      return out;
    }
    if (sol.slack_total >= settings.slack_tol) rho = std::min(rho * settings.growth, settings.rho_max);
  }
  out.diagnosis = "slack " + std::to_string(out.slack_history.empty() ? 0.0 : out.slack_history.back()) +
                  " remains after " + std::to_string(out.rounds) + " rounds";
  return out;
}

StarProfile random_star_profile(int n_elements, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  StarProfile p;
  p.v_t = CVec(n_elements + 1);
  p.v_r = CVec(n_elements + 1);
  const double amp = std::sqrt(0.5);
  for (int n = 0; n < n_elements; ++n) {
    p.v_t[n] = std::polar(amp, phase(rng));
    p.v_r[n] = std::polar(amp, phase(rng));
  }
  p.v_t[n_elements] = 1.0;
  p.v_r[n_elements] = 1.0;
  p.mode = StarMode::random;
  return p;
}

DesignPoint initial_design(const ChannelSet& channels, const SystemConfig& config, Baseline baseline,
                           std::uint64_t seed) {
  const int nb = channels.n_bs();
  const int kc = channels.n_users();
  const double p = config.power_budget_w();
  DesignPoint dp = zero_design(nb, kc, channels.n_elements());
  dp.star = random_star_profile(channels.n_elements(), seed);
  dp.star.mode = StarMode::star;
  apply_baseline(dp, baseline);

  CMat stacked(nb, kc);
  for (int k = 0; k < kc; ++k) {
    const CVec h = effective_cu_channel(channels, dp.star, k);
    stacked.col(k) = h;
    const double norm = h.norm();
    CVec dir = norm > 0.0 ? CVec(h / norm) : CVec(CVec::Unit(nb, 0));
    dp.w_private[static_cast<std::size_t>(k)] = std::sqrt(0.5 * p / kc) * dir;
  }
  Eigen::JacobiSVD<CMat> svd(stacked, Eigen::ComputeThinU);
  dp.w_common = std::sqrt(0.2 * p) * svd.matrixU().col(0);
  dp.an_covariance = (0.3 * p / nb) * CMat::Identity(nb, nb);
  apply_baseline(dp, baseline);
  return dp;
}

}  // namespace secisac
