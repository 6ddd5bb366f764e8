#include "secisac/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "secisac/metrics.hpp"

namespace secisac {

namespace {
constexpr double kLog2e = std::numbers::log2e;
}

MinorantCoefficients minorant_coefficients(double e_bar, cdouble u_bar) {
  const double s = std::norm(u_bar);
  const double rest = e_bar - s;
  if (!(rest > 0.0)) throw ConditioningError("minorant: expansion interference does not exceed the signal power");
  MinorantCoefficients c;
  c.e_bar = e_bar;
  c.u_bar = u_bar;
  c.f = std::log2(e_bar / rest) - s * kLog2e / rest;
  c.q = kLog2e / rest - kLog2e / e_bar;
  c.b = u_bar * (kLog2e / rest);
  return c;
}

SurrogateCoefficients mm_coefficients(const ChannelSet& channels, const DesignPoint& expansion) {
  const RateReport rep = stream_rates(channels, expansion);
  SurrogateCoefficients out;
  for (int k = 0; k < channels.n_users(); ++k) {
    const CVec h = effective_cu_channel(channels, expansion.star, k);
    out.common.push_back(minorant_coefficients(rep.e_common[k], h.dot(expansion.w_common)));
    out.private_.push_back(minorant_coefficients(rep.e_private[k], h.dot(expansion.w_private[k])));
  }
  return out;
}

double surrogate_value(const MinorantCoefficients& c, cdouble u, double e) {
  return c.f + 2.0 * (std::conj(c.b) * u).real() - c.q * e;
}

double surrogate_rate(const SurrogateCoefficients& coeffs, const ChannelSet& channels, const DesignPoint& dp,
                      Stream stream, int user) {
  const RateReport rep = stream_rates(channels, dp);
  const CVec h = effective_cu_channel(channels, dp.star, user);
  const auto k = static_cast<std::size_t>(user);
  if (stream == Stream::common) return surrogate_value(coeffs.at(stream, user), h.dot(dp.w_common), rep.e_common[k]);
  return surrogate_value(coeffs.at(stream, user), h.dot(dp.w_private[k]), rep.e_private[k]);
}

std::optional<double> eavesdrop_upper_bound(const CVec& g, const CVec& beam, double delta) {
  const double leak = std::norm(g.dot(beam));
  const double rest = delta - leak;
  if (!(rest > 0.0) || !(delta > 0.0)) return std::nullopt;
  return std::log2(delta) - std::log2(rest);
}

double tangent_log(double delta, double delta_bar) {
  if (!(delta_bar > 0.0)) throw std::invalid_argument("tangent_log: expansion point must be positive");
  return std::log2(delta_bar) + (delta - delta_bar) / (delta_bar * std::numbers::ln2);
}

double quadratic_minorant(const CVec& w, const CVec& w_bar, const CVec& g) {
  // w_bar^H g g^H w = conj(g^H w_bar) (g^H w)
  const cdouble gw_bar = g.dot(w_bar);
  const cdouble gw = g.dot(w);
  return 2.0 * (std::conj(gw_bar) * gw).real() - std::norm(gw_bar);
}

AuxState tight_aux(const ChannelSet& channels, const DesignPoint& dp) {
  const RateReport rep = evaluate_rates(channels, dp);
  AuxState aux;
  const int kc = dp.n_users();
  aux.alpha_c = *std::min_element(rep.common_rate.begin(), rep.common_rate.end());
  aux.beta_c = *std::max_element(rep.eaves_common.begin(), rep.eaves_common.end());
  aux.omega = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kc; ++k) {
    aux.alpha_p.push_back(rep.private_rate[k]);
    aux.beta_p.push_back(*std::max_element(rep.eaves_private[k].begin(), rep.eaves_private[k].end()));
    aux.omega = std::min(aux.omega, dp.rate_split[k] + aux.alpha_p.back() - aux.beta_p.back());
  }
  for (double d : rep.d_target) {
    aux.delta.push_back(d);
    aux.mu.push_back(std::log2(d));
  }
  return aux;
}

}  // namespace secisac
