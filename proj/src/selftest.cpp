#include "secisac/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "secisac/conic/embed.hpp"
#include "secisac/driver.hpp"
#include "secisac/harness.hpp"

namespace secisac {

namespace {

struct Instance {
  SystemConfig config;
  ChannelSet channels;
};

Instance desk_instance(unsigned seed) {
  Instance in{desk_config(), {}};
  const RunSeeds s = run_seeds(in.config.master_seed, static_cast<int>(seed), false);
  in.channels = sample_channels(in.config, sample_geometry(in.config, s.geometry), s.channels);
  return in;
}

SelftestResult surrogate_suite(unsigned seed) {
  SelftestResult r{"surrogate-minorant", true, ""};
  const Instance in = desk_instance(seed);
  const auto& ch = in.channels;
  const double p = in.config.power_budget_w();
  double worst_gap = 0.0;
  double worst_excess = -1e300;
  for (int e = 0; e < 10; ++e) {
    const DesignPoint bar = random_design(ch.n_bs(), ch.n_users(), ch.n_elements(), p, 1000 * seed + e);
    const SurrogateCoefficients c = mm_coefficients(ch, bar);
    const RateReport at_bar = stream_rates(ch, bar);
    for (int k = 0; k < ch.n_users(); ++k) {
      worst_gap = std::max(worst_gap, std::abs(surrogate_rate(c, ch, bar, Stream::common, k) - at_bar.common_rate[k]));
      worst_gap = std::max(worst_gap, std::abs(surrogate_rate(c, ch, bar, Stream::private_, k) - at_bar.private_rate[k]));
    }
    for (int d = 0; d < 50; ++d) {
      const DesignPoint dp = random_design(ch.n_bs(), ch.n_users(), ch.n_elements(), p, 7777 * seed + 100 * e + d);
      const RateReport rep = stream_rates(ch, dp);
      for (int k = 0; k < ch.n_users(); ++k) {
        worst_excess = std::max(worst_excess, surrogate_rate(c, ch, dp, Stream::common, k) - rep.common_rate[k]);
        worst_excess = std::max(worst_excess, surrogate_rate(c, ch, dp, Stream::private_, k) - rep.private_rate[k]);
      }
    }
  }
  r.passed = worst_gap <= 1e-9 && worst_excess <= 1e-9;
  std::ostringstream os;
  os << "max tightness gap " << worst_gap << ", max minorant excess " << worst_excess;
  r.detail = os.str();
  return r;
}

SelftestResult embedding_suite(unsigned seed) {
  SelftestResult r{"hermitian-embedding", true, ""};
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const int n = 1 + t % 6;
    CMat a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = cdouble(g(rng), g(rng));
    const CMat h = a + a.adjoint();
    const CMat back = conic::extract_hermitian(conic::embed_hermitian(h));
    worst = std::max(worst, (back - h).cwiseAbs().maxCoeff());
    worst = std::max(worst, (back - back.adjoint()).cwiseAbs().maxCoeff());
  }
  r.passed = worst <= 1e-9;
  r.detail = "max round-trip error " + std::to_string(worst);
  return r;
}

SelftestResult sensing_suite() {
  SelftestResult r{"sensing-closed-form", true, ""};
  std::ostringstream os;
  for (int nb : {2, 4, 8}) {
    SystemConfig c = desk_config();
    c.n_bs_antennas = nb;
    c.power_budget_dbm = 30.0;
    resize_targets(c, 1);
    ChannelSet ch;
    ch.h_bs_ris = CMat::Zero(c.n_ris_elements, nb);
    ch.steer_target = {steering_vector(0.3, nb, c.element_spacing_wavelengths)};
    ch.g_target = ch.steer_target;
    const SensingConsts s = sensing_only(ch, c);
    const double rel = std::abs(s.gain_opt[0] - c.power_budget_w() * nb) / (c.power_budget_w() * nb);
    os << "N_B=" << nb << " rel err " << rel << "; ";
    r.passed = r.passed && rel <= 1e-6;
  }
  r.detail = os.str();
  return r;
}

SelftestResult tangency_suite(unsigned seed) {
  SelftestResult r{"tangency-feasibility", true, ""};
  const Instance in = desk_instance(seed);
  const SensingConsts consts = sensing_only(in.channels, in.config);
  DesignPoint dp = initial_design(in.channels, in.config, Baseline::rsma_star_opt, seed);
  const BuildPlan plan = apply_baseline(dp, Baseline::rsma_star_opt);
  const RestorationResult rest = restore_feasibility(in.channels, dp, consts, in.config, plan);
  if (!rest.restored) return {r.name, false, "restoration failed: " + rest.diagnosis};
  const AuxState aux = tight_aux(in.channels, rest.design);
  const Subproblem w = build_w_step(in.channels, rest.design, consts, in.config, plan);
  const Subproblem v = build_v_step(in.channels, rest.design, consts, in.config, plan);
  const double vw = w.program.max_violation(w.pack(rest.design, aux));
  const double vv = v.program.max_violation(v.pack(rest.design, aux));
  r.passed = vw <= 1e-7 && vv <= 1e-7;
  std::ostringstream os;
  os << "W-step violation " << vw << ", V-step violation " << vv;
  r.detail = os.str();
  return r;
}

SelftestResult ao_suite(unsigned seed) {
  SelftestResult r{"ao-monotone-feasible", true, ""};
  const Instance in = desk_instance(seed);
  const AoOptions opts = AoOptions::from_config(in.config, seed);
  const AlgorithmTrace t = run_ao(in.channels, in.config, Baseline::rsma_star_opt, opts);
  double prev = t.initial_omega;
  double worst_drop = 0.0;
  for (double w : t.omega_sequence()) {
    worst_drop = std::max(worst_drop, prev - w);
    prev = w;
  }
  r.passed = t.feasible && worst_drop <= 1e-6 &&
             (t.status == TraceStatus::converged || t.status == TraceStatus::max_iters);
  std::ostringstream os;
  os << to_string(t.status) << " after " << t.iterations << " iterations, omega " << t.omega_hat << ", max drop "
     << worst_drop << ", worst slack " << t.feasibility.worst();
  r.detail = os.str();
  return r;
}

template <typename F>
SelftestResult guarded(const std::string& name, F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return {name, false, std::string("exception: ") + e.what()};
  }
}

}  // namespace

std::vector<SelftestResult> run_selftests(unsigned seed) {
  std::vector<SelftestResult> out;
  out.push_back(guarded("surrogate-minorant", [&] { return surrogate_suite(seed); }));
  out.push_back(guarded("hermitian-embedding", [&] { return embedding_suite(seed); }));
  out.push_back(guarded("sensing-closed-form", [&] { return sensing_suite(); }));
  out.push_back(guarded("tangency-feasibility", [&] { return tangency_suite(seed); }));
  out.push_back(guarded("ao-monotone-feasible", [&] { return ao_suite(seed); }));
  return out;
}

}  // namespace secisac
