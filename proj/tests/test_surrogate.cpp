#include <doctest.h>

#include <numbers>
#include <random>

#include "secisac/metrics.hpp"
#include "secisac/surrogate.hpp"
#include "support.hpp"

using namespace secisac;
using namespace testsupport;

TEST_CASE("hand-evaluated minorant coefficients") {
  const cdouble u{1.0, 0.0};
  const MinorantCoefficients c = minorant_coefficients(2.0, u);
  CHECK(c.f == doctest::Approx(1.0 - std::numbers::log2e).epsilon(1e-14));
  CHECK(c.f == doctest::Approx(-0.4427).epsilon(1e-4));
  CHECK(c.q == doctest::Approx(std::numbers::log2e * 0.5).epsilon(1e-14));
  CHECK(c.q == doctest::Approx(0.7213).epsilon(1e-4));
  CHECK(std::abs(c.b - u * std::numbers::log2e) < 1e-14);

  const MinorantCoefficients z = minorant_coefficients(3.0, cdouble(0.0));
  CHECK(z.f == 0.0);
  CHECK(z.q == 0.0);
  CHECK(z.b == cdouble(0.0));
}

TEST_CASE("degenerate expansion is a conditioning error") {
  CHECK_THROWS_AS(minorant_coefficients(1.0, cdouble(1.0, 0.0)), ConditioningError);
  CHECK_THROWS_AS(minorant_coefficients(0.5, cdouble(1.0, 0.0)), ConditioningError);
}

TEST_CASE("minorant is tight at the expansion and dominated elsewhere") {
  double worst_gap = 0.0;
  double worst_excess = -1.0;
  for (int e = 0; e < 20; ++e) {
    const Realization r = desk_realization(e);
    const auto& ch = r.channels;
    const DesignPoint bar = random_design(4, 2, 8, 1.0, 500 + e);
    const SurrogateCoefficients c = mm_coefficients(ch, bar);
    const RateReport at = stream_rates(ch, bar);
    for (int k = 0; k < 2; ++k) {
      CHECK(c.common[k].q >= 0.0);
      CHECK(c.private_[k].q >= 0.0);
      worst_gap = std::max(worst_gap, std::abs(surrogate_rate(c, ch, bar, Stream::common, k) - at.common_rate[k]));
      worst_gap = std::max(worst_gap, std::abs(surrogate_rate(c, ch, bar, Stream::private_, k) - at.private_rate[k]));
    }
    for (int d = 0; d < 100; ++d) {
      const DesignPoint dp = random_design(4, 2, 8, 1.0, 10000 * e + d);
      const OracleRates o = oracle_rates(ch, dp);
      for (int k = 0; k < 2; ++k) {
        worst_excess = std::max(worst_excess, surrogate_rate(c, ch, dp, Stream::common, k) - o.common[k]);
        worst_excess = std::max(worst_excess, surrogate_rate(c, ch, dp, Stream::private_, k) - o.priv[k]);
      }
    }
  }
  CHECK(worst_gap <= 1e-9);
  CHECK(worst_excess <= 1e-9);
}

TEST_CASE("zero curvature leaves an affine function") {
  MinorantCoefficients c = minorant_coefficients(4.0, cdouble(1.0, 1.0));
  c.q = 0.0;
  const cdouble u1{0.3, -0.2}, u2{-1.1, 0.4};
  const double mid = surrogate_value(c, 0.5 * (u1 + u2), 7.0);
  CHECK(mid == doctest::Approx(0.5 * (surrogate_value(c, u1, 3.0) + surrogate_value(c, u2, 11.0))));
}

TEST_CASE("eavesdropping upper bound") {
  const Realization r = desk_realization(1);
  const DesignPoint dp = random_design(4, 2, 8, 1.0, 2);
  const RateReport rep = evaluate_rates(r.channels, dp);
  for (int j = 0; j < 2; ++j) {
    const CVec& g = r.channels.g_target[j];
    const double d = rep.d_target[j];
    CHECK(*eavesdrop_upper_bound(g, dp.w_common, d) == doctest::Approx(rep.eaves_common[j]).epsilon(1e-12));
    std::mt19937_64 rng(j);
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    const double leak = std::norm(g.dot(dp.w_common));
    for (int t = 0; t < 100; ++t) {
      const double delta = leak + (d - leak) * (0.01 + 0.99 * frac(rng));
      const auto bound = eavesdrop_upper_bound(g, dp.w_common, delta);
      REQUIRE(bound.has_value());
      CHECK(*bound >= rep.eaves_common[j] - 1e-12);
    }
    CHECK_FALSE(eavesdrop_upper_bound(g, dp.w_common, leak).has_value());
    CHECK(*eavesdrop_upper_bound(g, CVec::Zero(4), d) == 0.0);
  }
}

TEST_CASE("tangent of log2 dominates on a grid") {
  CHECK(tangent_log(1.0, 1.0) == 0.0);
  CHECK(tangent_log(2.0, 1.0) == doctest::Approx(1.0 / std::numbers::ln2));
  CHECK_THROWS_AS(tangent_log(1.0, 0.0), std::invalid_argument);
  for (int i = 1; i <= 200; ++i)
    for (int j = 1; j <= 200; ++j) {
      const double d = 0.05 * i, db = 0.05 * j;
      const double gap = tangent_log(d, db) - std::log2(d);
      CHECK(gap >= -1e-12);
      if (i != j) CHECK(gap > 0.0);
    }
}

TEST_CASE("quadratic minorant dominance and tangency") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  auto cv = [&](int n) {
    CVec v(n);
    for (int i = 0; i < n; ++i) v[i] = cdouble(g(rng), g(rng));
    return v;
  };
  for (int t = 0; t < 1000; ++t) {
    const CVec w = cv(4), wb = cv(4), gg = cv(4);
    CHECK(quadratic_minorant(w, wb, gg) <= std::norm(gg.dot(w)) + 1e-10);
  }
  const CVec wb = cv(3), gg = cv(3);
  CHECK(quadratic_minorant(wb, wb, gg) == doctest::Approx(std::norm(gg.dot(wb))));
  CHECK(quadratic_minorant(CVec::Zero(3), wb, gg) == doctest::Approx(-std::norm(gg.dot(wb))));
}

TEST_CASE("tight auxiliaries reproduce the design's rates") {
  const Realization r = desk_realization(2);
  DesignPoint dp = random_design(4, 2, 8, 1.0, 3);
  dp.rate_split = {0.05, 0.0};
  const AuxState aux = tight_aux(r.channels, dp);
  const RateReport rep = evaluate_rates(r.channels, dp);
  CHECK(aux.alpha_c == doctest::Approx(std::min(rep.common_rate[0], rep.common_rate[1])));
  for (int j = 0; j < 2; ++j) {
    CHECK(aux.delta[j] == doctest::Approx(rep.d_target[j]));
    CHECK(aux.delta[j] >= 1.0);
  }
}
