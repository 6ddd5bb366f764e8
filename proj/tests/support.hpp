#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "secisac/channel.hpp"
#include "secisac/design.hpp"
#include "secisac/harness.hpp"
#include "secisac/scenario.hpp"

namespace testsupport {

using namespace secisac;

struct Realization {
  SystemConfig config;
  ChannelSet channels;
  RunSeeds seeds;
};

inline Realization desk_realization(int run_index, SystemConfig config = desk_config()) {
  Realization r{config, {}, run_seeds(config.master_seed, run_index, false)};
  r.channels = sample_channels(config, sample_geometry(config, r.seeds.geometry), r.seeds.channels);
  return r;
}

// Plain-loop oracles, written against the raw channels rather than G_k.

inline CVec oracle_effective(const ChannelSet& ch, const StarProfile& star, int k) {
  const auto kk = static_cast<std::size_t>(k);
  const CVec& v = ch.cu_regions[kk] == Region::transmission ? star.v_t : star.v_r;
  const int nb = ch.n_bs();
  const int ns = ch.n_elements();
  CVec h(nb);
  for (int b = 0; b < nb; ++b) {
    // received row: conj(v_last) h_B^H + sum_n conj(v_n) conj(h_S,n) H_n,b
    cdouble row = std::conj(v[ns]) * std::conj(ch.h_bs_cu[kk][b]);
    for (int n = 0; n < ns; ++n) row += std::conj(v[n]) * std::conj(ch.h_ris_cu[kk][n]) * ch.h_bs_ris(n, b);
    h[b] = std::conj(row) / ch.noise_comm_std;
  }
  return h;
}

inline cdouble oracle_inner(const CVec& a, const CVec& b) {
  cdouble s = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

inline double oracle_quad(const CVec& a, const CMat& m) {
  cdouble s = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < a.size(); ++j) s += std::conj(a[i]) * m(i, j) * a[j];
  return s.real();
}

struct OracleRates {
  std::vector<double> common, priv, eaves_common, total;
  std::vector<std::vector<double>> eaves_private;  // [k][j]
  double omega = 0.0;
};

// SINR form: signal / (interference + noise).
inline OracleRates oracle_rates(const ChannelSet& ch, const DesignPoint& dp) {
  OracleRates o;
  const int kc = dp.n_users();
  for (int k = 0; k < kc; ++k) {
    const CVec h = oracle_effective(ch, dp.star, k);
    double priv_interf = oracle_quad(h, dp.an_covariance) + 1.0;
    for (int i = 0; i < kc; ++i)
      if (i != k) priv_interf += std::norm(oracle_inner(h, dp.w_private[static_cast<std::size_t>(i)]));
    const double own = std::norm(oracle_inner(h, dp.w_private[static_cast<std::size_t>(k)]));
    const double common_sig = std::norm(oracle_inner(h, dp.w_common));
    o.priv.push_back(std::log2(1.0 + own / priv_interf));
    o.common.push_back(std::log2(1.0 + common_sig / (priv_interf + own)));
  }
  for (std::size_t j = 0; j < ch.g_target.size(); ++j) {
    const CVec& g = ch.g_target[j];
    double d = oracle_quad(g, dp.an_covariance) + std::norm(oracle_inner(g, dp.w_common)) + 1.0;
    for (const auto& w : dp.w_private) d += std::norm(oracle_inner(g, w));
    const double lc = std::norm(oracle_inner(g, dp.w_common));
    o.eaves_common.push_back(std::log2(1.0 + lc / (d - lc)));
  }
  o.eaves_private.resize(static_cast<std::size_t>(kc));
  for (int k = 0; k < kc; ++k)
    for (std::size_t j = 0; j < ch.g_target.size(); ++j) {
      const CVec& g = ch.g_target[j];
      double d = oracle_quad(g, dp.an_covariance) + std::norm(oracle_inner(g, dp.w_common)) + 1.0;
      for (const auto& w : dp.w_private) d += std::norm(oracle_inner(g, w));
      const double lp = std::norm(oracle_inner(g, dp.w_private[static_cast<std::size_t>(k)]));
      o.eaves_private[static_cast<std::size_t>(k)].push_back(std::log2(1.0 + lp / (d - lp)));
    }
  o.omega = 1e300;
  for (int k = 0; k < kc; ++k) {
    double worst = 0.0;
    for (double e : o.eaves_private[static_cast<std::size_t>(k)]) worst = std::max(worst, e);
    o.total.push_back(dp.rate_split[static_cast<std::size_t>(k)] + std::max(0.0, o.priv[static_cast<std::size_t>(k)] - worst));
    o.omega = std::min(o.omega, o.total.back());
  }
  return o;
}

// Tiny hand-built channel set: N_B antennas, N_S elements, users and targets
// with caller-provided raw links, unit noise.
inline ChannelSet manual_channels(const CMat& h_bs_ris, const std::vector<CVec>& h_bs_cu,
                                  const std::vector<CVec>& h_ris_cu, const std::vector<Region>& regions,
                                  const std::vector<CVec>& steer, const std::vector<double>& target_gain) {
  ChannelSet ch;
  ch.h_bs_ris = h_bs_ris;
  ch.h_bs_cu = h_bs_cu;
  ch.h_ris_cu = h_ris_cu;
  ch.cu_regions = regions;
  ch.steer_target = steer;
  for (std::size_t j = 0; j < steer.size(); ++j) {
    ch.h_bs_target.push_back(target_gain[j] * steer[j]);
    ch.g_target.push_back(target_gain[j] * steer[j]);
  }
  for (std::size_t k = 0; k < h_bs_cu.size(); ++k)
    ch.g_cu.push_back(assemble_cu_matrix(h_bs_ris, h_ris_cu[k], h_bs_cu[k], 1.0));
  return ch;
}

}  // namespace testsupport
