#include "secisac/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace secisac {

namespace {

// log2(E / (E - s)) with s = |u|^2, the rate form shared by every stream.
double rate_from_interference(double total, double signal) {
  const double rest = total - signal;
  if (signal <= 0.0) return 0.0;
  return std::log2(1.0 + signal / rest);
}

double max_of(const std::vector<double>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  return v.empty() ? 0.0 : m;
}

}  // namespace

double transmit_power(const DesignPoint& dp) {
  double p = dp.an_covariance.trace().real() + dp.w_common.squaredNorm();
  for (const CVec& w : dp.w_private) p += w.squaredNorm();
  return p;
}

double received_power(const CVec& effective, const CVec& beam) { return std::norm(effective.dot(beam)); }

void stream_rates(const ChannelSet& channels, const DesignPoint& dp, RateReport& rep) {
  const int kc = channels.n_users();
  rep.common_rate.assign(kc, 0.0);
  rep.private_rate.assign(kc, 0.0);
  rep.e_common.assign(kc, 0.0);
  rep.e_private.assign(kc, 0.0);
  for (int k = 0; k < kc; ++k) {
    const CVec h = effective_cu_channel(channels, dp.star, k);
    const double an = (h.adjoint() * dp.an_covariance * h).value().real();
    double priv = 0.0;
    for (const CVec& w : dp.w_private) priv += received_power(h, w);
    const double common = received_power(h, dp.w_common);
    rep.e_private[k] = an + priv + 1.0;
    rep.e_common[k] = rep.e_private[k] + common;
    rep.common_rate[k] = rate_from_interference(rep.e_common[k], common);
    rep.private_rate[k] = rate_from_interference(rep.e_private[k], received_power(h, dp.w_private[k]));
  }
}

RateReport stream_rates(const ChannelSet& channels, const DesignPoint& dp) {
  RateReport rep;
  stream_rates(channels, dp, rep);
  return rep;
}

double eavesdropper_interference(const CVec& g, const DesignPoint& dp) {
  double d = (g.adjoint() * dp.an_covariance * g).value().real() + received_power(g, dp.w_common) + 1.0;
  for (const CVec& w : dp.w_private) d += received_power(g, w);
  return d;
}

void eavesdrop_rates(const ChannelSet& channels, const DesignPoint& dp, RateReport& rep) {
  const int ks = channels.n_targets();
  const int kc = dp.n_users();
  rep.d_target.assign(ks, 0.0);
  rep.eaves_common.assign(ks, 0.0);
  rep.eaves_private.assign(kc, std::vector<double>(ks, 0.0));
  for (int j = 0; j < ks; ++j) {
    const CVec& g = channels.g_target[j];
    const double d = eavesdropper_interference(g, dp);
    rep.d_target[j] = d;
    rep.eaves_common[j] = rate_from_interference(d, received_power(g, dp.w_common));
    for (int k = 0; k < kc; ++k) rep.eaves_private[k][j] = rate_from_interference(d, received_power(g, dp.w_private[k]));
  }
}

void secrecy_rates(RateReport& rep, const std::vector<double>& rate_split) {
  const std::size_t kc = rep.common_rate.size();
  const double worst_common = max_of(rep.eaves_common);
  rep.secrecy_common.assign(kc, 0.0);
  rep.secrecy_private.assign(kc, 0.0);
  rep.total_secrecy.assign(kc, 0.0);
  for (std::size_t k = 0; k < kc; ++k) {
    rep.secrecy_common[k] = std::max(0.0, rep.common_rate[k] - worst_common);
    const double worst_private = k < rep.eaves_private.size() ? max_of(rep.eaves_private[k]) : 0.0;
    rep.secrecy_private[k] = std::max(0.0, rep.private_rate[k] - worst_private);
    rep.total_secrecy[k] = rate_split.at(k) + rep.secrecy_private[k];
  }
}

RateReport evaluate_rates(const ChannelSet& channels, const DesignPoint& dp) {
  RateReport rep;
  stream_rates(channels, dp, rep);
  eavesdrop_rates(channels, dp, rep);
  secrecy_rates(rep, dp.rate_split);
  return rep;
}

double beampattern_gain(const ChannelSet& channels, const DesignPoint& dp, int target) {
  const CVec& a = channels.steer_target.at(static_cast<std::size_t>(target));
  return (a.adjoint() * dp.transmit_covariance() * a).value().real();
}

SensingReport sensing_report(const ChannelSet& channels, const DesignPoint& dp, const std::vector<double>& gain_opt,
                             const std::vector<double>& d_opt) {
  SensingReport s;
  s.gain_opt = gain_opt;
  s.d_opt = d_opt;
  for (int j = 0; j < channels.n_targets(); ++j) {
    s.gain.push_back(beampattern_gain(channels, dp, j));
    s.ratio.push_back(s.gain.back() / gain_opt.at(static_cast<std::size_t>(j)));
  }
  return s;
}

double FeasibilityLedger::worst() const {
  double w = std::numeric_limits<double>::infinity();
  for (const auto& e : entries) w = std::min(w, e.slack);
  return w;
}

std::vector<ConstraintSlack> FeasibilityLedger::violations(double tau) const {
  std::vector<ConstraintSlack> out;
  for (const auto& e : entries)
    if (e.slack < -tau) out.push_back(e);
  return out;
}

FeasibilityLedger check_feasibility(const ChannelSet& channels, const DesignPoint& dp, const RateReport& rep,
                                    const SensingReport& sensing, const SystemConfig& config) {
  FeasibilityLedger led;
  const int kc = dp.n_users();
  double split_total = 0.0;
  for (double r : dp.rate_split) split_total += r;

  for (int k = 0; k < kc; ++k) {
    led.entries.push_back({"private-secrecy", k, rep.private_rate[k] - max_of(rep.eaves_private[k])});
    led.entries.push_back({"common-budget", k, rep.secrecy_common[k] - split_total});
    led.entries.push_back({"rate-split-nonneg", k, dp.rate_split[k]});
  }
  for (int j = 0; j < channels.n_targets(); ++j)
    led.entries.push_back({"beampattern", j, sensing.ratio[j] - config.beampattern_ratio(j)});
  led.entries.push_back({"power-budget", -1, config.power_budget_w() - transmit_power(dp)});

  const StarProfile& v = dp.star;
  for (int n = 0; n < v.n_elements(); ++n)
    led.entries.push_back({"star-energy", n, 1.0 - std::norm(v.v_t[n]) - std::norm(v.v_r[n])});
  const int last = v.n_elements();
  led.entries.push_back({"star-fixed-entry", 0, -std::abs(v.v_t[last] - cdouble(1.0))});
  led.entries.push_back({"star-fixed-entry", 1, -std::abs(v.v_r[last] - cdouble(1.0))});
  return led;
}

}  // namespace secisac
