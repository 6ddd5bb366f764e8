#include <doctest.h>

#include <map>
#include <numbers>
#include <set>

#include "secisac/driver.hpp"
#include "secisac/subproblems.hpp"
#include "support.hpp"

using namespace secisac;
using namespace testsupport;

namespace {

struct Prepared {
  Realization real;
  SensingConsts consts;
  BuildPlan plan;
  DesignPoint start;
};

Prepared restored(int run, Baseline baseline = Baseline::rsma_star_opt) {
  Prepared p{desk_realization(run), {}, {}, {}};
  p.consts = sensing_only(p.real.channels, p.real.config);
  DesignPoint init = initial_design(p.real.channels, p.real.config, baseline, p.real.seeds.init);
  p.plan = apply_baseline(init, baseline);
  const RestorationResult r = restore_feasibility(p.real.channels, init, p.consts, p.real.config, p.plan);
  REQUIRE(r.restored);
  p.start = r.design;
  return p;
}

double oracle_omega(const Prepared& p, const DesignPoint& dp) {
  return evaluate_design(p.real.channels, dp, p.consts).omega_hat;
}

const std::set<std::string> kKnownTags{
    tags::common_surrogate, tags::private_surrogate, tags::log_delta_tangent, tags::eavesdrop_log,
    tags::gain_minorant,    tags::gain_exact,        tags::gain_floor,        tags::secrecy_balance,
    tags::private_secrecy,  tags::common_budget,     tags::rate_split_nonneg, tags::power_budget,
    tags::noise_psd,        tags::star_energy,       tags::star_fixed_entry,  tags::conventional_zero_t,
    tags::conventional_zero_r, tags::restoration_slack};

}  // namespace

TEST_CASE("single target: sensing gain is P N_B") {
  const int nb = 4;
  const CVec a = steering_vector(deg_to_rad(20.0), nb, 0.5);
  const ChannelSet ch = manual_channels(CMat::Zero(2, nb), {CVec::Ones(nb)}, {CVec::Zero(2)},
                                        {Region::transmission}, {a}, {0.5});
  SystemConfig c = desk_config();
  c.power_budget_dbm = 33.0;
  const SensingConsts s = sensing_only(ch, c);
  REQUIRE(s.gain_opt.size() == 1u);
  CHECK(s.gain_opt[0] == doctest::Approx(c.power_budget_w() * nb).epsilon(1e-6));
  CHECK(s.d_opt[0] == doctest::Approx(0.25 * s.gain_opt[0]).epsilon(1e-9));
}

TEST_CASE("two targets at +-30 degrees with two antennas") {
  const CVec a1 = steering_vector(deg_to_rad(30.0), 2, 0.5);
  const CVec a2 = steering_vector(deg_to_rad(-30.0), 2, 0.5);
  const ChannelSet ch = manual_channels(CMat::Zero(2, 2), {CVec::Ones(2)}, {CVec::Zero(2)},
                                        {Region::transmission}, {a1, a2}, {1.0, 1.0});
  SystemConfig c = desk_config();
  c.power_budget_dbm = 30.0;
  const SensingConsts s = sensing_only(ch, c);
  CHECK(s.gain_opt[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(s.gain_opt[1] == doctest::Approx(1.0).epsilon(1e-6));

  // brute force over unit-trace 2x2 PSD matrices
  double best = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double p = i / 100.0;
    const double rmax = std::sqrt(p * (1.0 - p));
    for (int m = 0; m <= 20; ++m)
      for (int t = 0; t < 72; ++t) {
        const cdouble off = std::polar(rmax * m / 20.0, t * std::numbers::pi / 36.0);
        CMat r(2, 2);
        r << p, off, std::conj(off), 1.0 - p;
        best = std::max(best, std::min(oracle_quad(a1, r), oracle_quad(a2, r)));
      }
  }
  CHECK(best <= s.gain_opt[0] + 1e-6);
  CHECK(best >= s.gain_opt[0] - 1e-3);
}

TEST_CASE("sensing covariance is PSD within the power budget") {
  for (int run = 0; run < 5; ++run) {
    const Realization r = desk_realization(run);
    const SensingConsts s = sensing_only(r.channels, r.config);
    const double p = r.config.power_budget_w();
    CHECK((s.r_opt - s.r_opt.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * p);
    CHECK(s.r_opt.trace().real() <= p * (1.0 + 1e-7));
    CHECK(Eigen::SelfAdjointEigenSolver<CMat>(s.r_opt).eigenvalues().minCoeff() >= -1e-7 * p);
    for (int j = 0; j < r.channels.n_targets(); ++j) {
      const CVec& a = r.channels.steer_target[j];
      const CVec& g = r.channels.g_target[j];
      CHECK(s.gain_opt[static_cast<std::size_t>(j)] == doctest::Approx(oracle_quad(a, s.r_opt)));
      CHECK(s.gain_opt[static_cast<std::size_t>(j)] <= p * a.squaredNorm() * (1.0 + 1e-9));
      // target channel is a scaled steering vector, so D_opt / G_opt = |g_0 / a_0|^2
      CHECK(s.d_opt[static_cast<std::size_t>(j)] / s.gain_opt[static_cast<std::size_t>(j)] ==
            doctest::Approx(std::norm(g[0] / a[0])).epsilon(1e-9));
    }
  }
}

TEST_CASE("W-step constraint inventory") {
  for (Baseline b : {Baseline::rsma_star_opt, Baseline::sdma_star_opt}) {
    const Realization r = desk_realization(0);
    const SensingConsts s = sensing_only(r.channels, r.config);
    DesignPoint dp = initial_design(r.channels, r.config, b, 1);
    const BuildPlan plan = apply_baseline(dp, b);
    const Subproblem w = build_w_step(r.channels, dp, s, r.config, plan);
    const int kc = r.channels.n_users(), ks = r.channels.n_targets();
    const bool common = plan.common_stream;
    const int beams = kc + (common ? 1 : 0);
    std::map<std::string, int> expect{{tags::private_surrogate, kc},    {tags::gain_minorant, ks},
                                      {tags::eavesdrop_log, ks * beams}, {tags::log_delta_tangent, ks},
                                      {tags::gain_floor, ks},            {tags::secrecy_balance, kc},
                                      {tags::private_secrecy, kc},       {tags::power_budget, 1},
                                      {tags::noise_psd, 1}};
    if (common) {
      expect[tags::common_surrogate] = kc;
      expect[tags::common_budget] = 1;
      expect[tags::rate_split_nonneg] = kc;
    }
    CHECK(w.program.tag_counts() == expect);
    int total = 0;
    for (const auto& [tag, n] : w.program.tag_counts()) total += n;
    if (common) CHECK(total == 2 * kc + ks + ks * (1 + kc) + ks + ks + (2 * kc + 1) + kc + 2);
    CHECK_NOTHROW(w.program.validate());
  }
}

TEST_CASE("every constraint carries a known tag") {
  const Prepared p = restored(1);
  const Subproblem w = build_w_step(p.real.channels, p.start, p.consts, p.real.config, p.plan, 1e3);
  const Subproblem v = build_v_step(p.real.channels, p.start, p.consts, p.real.config, p.plan);
  const Subproblem vc = build_v_step_conventional(p.real.channels, p.start, p.consts, p.real.config, p.plan);
  for (const Subproblem* sp : {&w, &v, &vc})
    for (const auto& c : sp->program.constraints()) CHECK(kKnownTags.count(c.tag) == 1u);
  CHECK(w.program.count_tag(tags::restoration_slack) == p.real.channels.n_targets() + p.real.channels.n_users() + 1);
  CHECK(v.program.count_tag(tags::star_energy) == p.real.channels.n_elements());
  CHECK(v.program.count_tag(tags::gain_exact) == p.real.channels.n_targets());
  CHECK(vc.program.count_tag(tags::conventional_zero_t) == 1);
  CHECK(v.program.count_tag(tags::conventional_zero_t) == 0);
}

TEST_CASE("surrogates are tight at the expansion point") {
  for (int run = 0; run < 5; ++run) {
    const Prepared p = restored(run);
    const AuxState aux = tight_aux(p.real.channels, p.start);
    const Subproblem w = build_w_step(p.real.channels, p.start, p.consts, p.real.config, p.plan);
    const Subproblem v = build_v_step(p.real.channels, p.start, p.consts, p.real.config, p.plan);
    CHECK(w.program.max_violation(w.pack(p.start, aux)) <= 1e-7);
    CHECK(v.program.max_violation(v.pack(p.start, aux)) <= 1e-7);
    // the extracted design of the packed point is the expansion itself
    const SubproblemSolution back = w.extract(w.pack(p.start, aux));
    CHECK((back.design.w_common - p.start.w_common).norm() <= 1e-12 * (1.0 + p.start.w_common.norm()));
    CHECK(back.omega == doctest::Approx(aux.omega));
  }
}

TEST_CASE("each block step does not lower the oracle objective") {
  for (int run = 0; run < 5; ++run) {
    const Prepared p = restored(run);
    const double before = oracle_omega(p, p.start);
    const SubproblemSolution w = solve_step(build_w_step(p.real.channels, p.start, p.consts, p.real.config, p.plan));
    REQUIRE(w.ok());
    const double after_w = oracle_omega(p, w.design);
    CHECK(after_w >= before - 1e-7);
    CHECK(w.omega <= after_w + 1e-5);
    const SubproblemSolution v = solve_step(build_v_step(p.real.channels, w.design, p.consts, p.real.config, p.plan));
    REQUIRE(v.ok());
    CHECK(oracle_omega(p, v.design) >= after_w - 1e-7);
    CHECK(v.omega <= oracle_omega(p, v.design) + 1e-5);
  }
}

TEST_CASE("V-step middle matrix reproduces the interference terms") {
  const Realization r = desk_realization(2);
  const DesignPoint dp = random_design(4, 2, 8, 1.0, 17);
  const RateReport rep = stream_rates(r.channels, dp);
  for (int k = 0; k < 2; ++k) {
    const CVec& v = r.channels.cu_regions[static_cast<std::size_t>(k)] == Region::transmission ? dp.star.v_t
                                                                                               : dp.star.v_r;
    const CMat mp = v_step_middle_matrix(r.channels, dp, k, Stream::private_);
    const CMat mc = v_step_middle_matrix(r.channels, dp, k, Stream::common);
    CHECK(Eigen::SelfAdjointEigenSolver<CMat>(mp).eigenvalues().minCoeff() >= -1e-12 * mp.norm());
    CHECK(oracle_quad(v, mp) == doctest::Approx(rep.e_private[static_cast<std::size_t>(k)]).epsilon(1e-10));
    CHECK(oracle_quad(v, mc) == doctest::Approx(rep.e_common[static_cast<std::size_t>(k)]).epsilon(1e-10));
  }
}

TEST_CASE("V-step output respects the element energy and the fixed entries") {
  const Prepared p = restored(3);
  const SubproblemSolution v = solve_step(build_v_step(p.real.channels, p.start, p.consts, p.real.config, p.plan));
  REQUIRE(v.ok());
  const StarProfile& s = v.design.star;
  CHECK(s.energy_violation() <= 1e-7);
  const int ns = s.n_elements();
  CHECK(std::abs(s.v_t[ns] - cdouble(1.0)) <= 1e-9);
  CHECK(std::abs(s.v_r[ns] - cdouble(1.0)) <= 1e-9);
}

TEST_CASE("conventional V-step keeps the half-split zeros and cannot beat the free profile") {
  const Prepared p = restored(4, Baseline::rsma_ris_conv);
  BuildPlan free_plan = p.plan;
  free_plan.conventional = false;
  const SubproblemSolution vc =
      solve_step(build_v_step_conventional(p.real.channels, p.start, p.consts, p.real.config, p.plan));
  const SubproblemSolution vs = solve_step(build_v_step(p.real.channels, p.start, p.consts, p.real.config, free_plan));
  REQUIRE(vc.ok());
  REQUIRE(vs.ok());
  const int ns = p.real.channels.n_elements();
  for (int n = 0; n < ns / 2; ++n) CHECK(std::abs(vc.design.star.v_t[n]) <= 1e-7);
  for (int n = ns / 2; n < ns; ++n) CHECK(std::abs(vc.design.star.v_r[n]) <= 1e-7);
  CHECK(vc.omega <= vs.omega + 1e-6);
}

TEST_CASE("restoration from a feasible design adds no slack") {
  const Prepared p = restored(5);
  const RestorationResult r = restore_feasibility(p.real.channels, p.start, p.consts, p.real.config, p.plan);
  CHECK(r.restored);
  CHECK(r.rounds == 1);
  CHECK(r.slack_history.front() < 1e-8);
}

TEST_CASE("restoration reports an unreachable sensing floor") {
  const Realization r = desk_realization(6);
  SensingConsts s = sensing_only(r.channels, r.config);
  const double p = r.config.power_budget_w();
  for (std::size_t j = 0; j < s.d_opt.size(); ++j) s.d_opt[j] = 100.0 * (1.0 + p * r.channels.g_target[j].squaredNorm());
  DesignPoint init = initial_design(r.channels, r.config, Baseline::rsma_star_opt, r.seeds.init);
  const BuildPlan plan = apply_baseline(init, Baseline::rsma_star_opt);
  const RestorationResult res = restore_feasibility(r.channels, init, s, r.config, plan);
  CHECK_FALSE(res.restored);
  CHECK_FALSE(res.diagnosis.empty());
  REQUIRE(res.slack_history.size() >= 2u);
  for (std::size_t i = 1; i < res.slack_history.size(); ++i)
    CHECK(res.slack_history[i] <= res.slack_history[i - 1] * (1.0 + 1e-6) + 1e-9);
  for (std::size_t i = 1; i < res.rho_history.size(); ++i) CHECK(res.rho_history[i] >= res.rho_history[i - 1]);
  CHECK(res.rho_history.back() <= 1e7);
}

TEST_CASE("baseline tags round trip") {
  CHECK(all_baselines().size() == 5u);
  for (Baseline b : all_baselines()) CHECK(baseline_from_string(to_string(b)) == b);
  CHECK(to_string(Baseline::rsma_star_opt) == "rsma-star-opt");
  CHECK(to_string(Baseline::sdma_star_opt) == "sdma-star-opt");
  CHECK_THROWS_AS(baseline_from_string("rsma-magic"), std::invalid_argument);
}

TEST_CASE("baselines pin the design to their restricted sets") {
  const Realization r = desk_realization(7);
  const int ns = r.channels.n_elements();

  DesignPoint conv = random_design(4, 2, ns, 1.0, 3);
  const BuildPlan pc = apply_baseline(conv, Baseline::rsma_ris_conv);
  CHECK(pc.conventional);
  CHECK(conv.star.mode == StarMode::conventional);
  for (int n = 0; n < ns; ++n) {
    const bool reflect = n < ns / 2;
    CHECK(std::abs(reflect ? conv.star.v_t[n] : conv.star.v_r[n]) == 0.0);
    CHECK(std::abs(reflect ? conv.star.v_r[n] : conv.star.v_t[n]) == doctest::Approx(1.0));
  }
  CHECK_NOTHROW(conv.star.validate());

  DesignPoint odd = random_design(4, 2, 7, 1.0, 3);
  CHECK_THROWS_AS(apply_baseline(odd, Baseline::rsma_ris_conv), std::invalid_argument);

  DesignPoint rnd = random_design(4, 2, ns, 1.0, 4);
  const StarProfile before = rnd.star;
  CHECK_FALSE(apply_baseline(rnd, Baseline::rsma_star_rand).optimize_v);
  CHECK(rnd.star.v_t == before.v_t);

  DesignPoint none = random_design(4, 2, ns, 1.0, 5);
  CHECK_FALSE(apply_baseline(none, Baseline::rsma_no_ris).optimize_v);
  for (int k = 0; k < 2; ++k) {
    const CVec h = effective_cu_channel(r.channels, none.star, k);
    CHECK((h - r.channels.h_bs_cu[static_cast<std::size_t>(k)] / r.channels.noise_comm_std).norm() <= 1e-12 * h.norm());
  }

  DesignPoint sdma = random_design(4, 2, ns, 1.0, 6);
  sdma.rate_split = {0.3, 0.2};
  const BuildPlan ps = apply_baseline(sdma, Baseline::sdma_star_opt);
  CHECK_FALSE(ps.common_stream);
  CHECK(sdma.w_common.norm() == 0.0);
  CHECK(sdma.rate_split == std::vector<double>{0.0, 0.0});
  CHECK(ps.optimize_v);
}

TEST_CASE("initial design is deterministic and within the power budget") {
  const Realization r = desk_realization(8);
  for (Baseline b : all_baselines()) {
    const DesignPoint a = initial_design(r.channels, r.config, b, 99);
    const DesignPoint c = initial_design(r.channels, r.config, b, 99);
    CHECK(a.w_common == c.w_common);
    CHECK(a.star.v_t == c.star.v_t);
    CHECK(transmit_power(a) <= r.config.power_budget_w() * (1.0 + 1e-12));
    CHECK_NOTHROW(a.star.validate());
  }
}

TEST_CASE("optimized reflection beats the best of several random profiles without a RIS") {
  int wins = 0;
  const int runs = 4;
  for (int run = 0; run < runs; ++run) {
    const Realization r = desk_realization(run);
    const SensingConsts s = sensing_only(r.channels, r.config);
    AoOptions opt = AoOptions::from_config(r.config, r.seeds.init);
    const double none = run_ao(r.channels, r.config, Baseline::rsma_no_ris, s, opt).omega_hat;
    double best_random = 0.0;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      opt.init_seed = 1000 + seed;
      best_random = std::max(best_random, run_ao(r.channels, r.config, Baseline::rsma_star_rand, s, opt).omega_hat);
    }
    wins += best_random >= none - 1e-6;
  }
  CHECK(wins == runs);
}
