#include "secisac/design.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace secisac {

std::string to_string(StarMode mode) {
  switch (mode) {
    case StarMode::star: return "star";
    case StarMode::conventional: return "conventional";
    case StarMode::random: return "random";
    case StarMode::none: return "none";
  }
  return "unknown";
}

double StarProfile::energy_violation() const {
  double worst = -1.0;
  for (int n = 0; n < n_elements(); ++n)
    worst = std::max(worst, std::norm(v_t[n]) + std::norm(v_r[n]) - 1.0);
  return worst;
}

void StarProfile::validate(double tol) const {
  if (v_t.size() != v_r.size() || v_t.size() < 1)
    throw std::invalid_argument("StarProfile: v_t and v_r must have equal length N_S + 1");
  const int n = n_elements();
  if (v_t[n] != cdouble(1.0) || v_r[n] != cdouble(1.0))
    throw std::invalid_argument("StarProfile: last entries must equal 1");
  if (energy_violation() > tol) throw std::invalid_argument("StarProfile: energy conservation violated");
  if (mode == StarMode::conventional) {
    for (int i = 0; i < n / 2; ++i)
      if (v_t[i] != cdouble(0.0)) throw std::invalid_argument("StarProfile: conventional v_t must vanish on the first half");
    for (int i = n / 2; i < n; ++i)
      if (v_r[i] != cdouble(0.0)) throw std::invalid_argument("StarProfile: conventional v_r must vanish on the second half");
  }
  if (mode == StarMode::none) {
    for (int i = 0; i < n; ++i)
      if (v_t[i] != cdouble(0.0) || v_r[i] != cdouble(0.0))
        throw std::invalid_argument("StarProfile: mode none requires zero RIS entries");
  }
}

StarProfile no_ris_profile(int n_elements) {
  StarProfile p;
  p.v_t = CVec::Zero(n_elements + 1);
  p.v_r = CVec::Zero(n_elements + 1);
  p.v_t[n_elements] = 1.0;
  p.v_r[n_elements] = 1.0;
  p.mode = StarMode::none;
  return p;
}

CMat DesignPoint::transmit_covariance() const {
  CMat q = an_covariance;
  q.noalias() += w_common * w_common.adjoint();
  for (const CVec& w : w_private) q.noalias() += w * w.adjoint();
  return q;
}

void DesignPoint::validate() const {
  const Eigen::Index n = w_common.size();
  if (an_covariance.rows() != n || an_covariance.cols() != n)
    throw std::invalid_argument("DesignPoint: R_s must be N_B x N_B");
  if ((an_covariance - an_covariance.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("DesignPoint: R_s must be Hermitian");
  Eigen::SelfAdjointEigenSolver<CMat> eig(an_covariance, Eigen::EigenvaluesOnly);
  if (n > 0 && eig.eigenvalues().minCoeff() < -1e-8)
    throw std::invalid_argument("DesignPoint: R_s must be PSD");
  for (const CVec& w : w_private)
    if (w.size() != n) throw std::invalid_argument("DesignPoint: private beam has wrong length");
  if (rate_split.size() != w_private.size())
    throw std::invalid_argument("DesignPoint: rate_split needs one entry per user");
  for (double r : rate_split)
    if (r < 0.0) throw std::invalid_argument("DesignPoint: rate_split entries must be >= 0");
  star.validate();
}

DesignPoint zero_design(int n_bs, int n_users, int n_elements) {
  DesignPoint dp;
  dp.an_covariance = CMat::Zero(n_bs, n_bs);
  dp.w_common = CVec::Zero(n_bs);
  dp.w_private.assign(static_cast<std::size_t>(n_users), CVec::Zero(n_bs));
  dp.star = no_ris_profile(n_elements);
  dp.rate_split.assign(static_cast<std::size_t>(n_users), 0.0);
  return dp;
}

DesignPoint random_design(int n_bs, int n_users, int n_elements, double power_w, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto cvec = [&](int n) {
    CVec v(n);
    for (int i = 0; i < n; ++i) v[i] = cdouble(gauss(rng), gauss(rng));
    return v;
  };
  DesignPoint dp = zero_design(n_bs, n_users, n_elements);
  dp.w_common = cvec(n_bs);
  for (auto& w : dp.w_private) w = cvec(n_bs);
  CMat a(n_bs, n_bs);
  for (int c = 0; c < n_bs; ++c) a.col(c) = cvec(n_bs);
  dp.an_covariance = a * a.adjoint() / static_cast<double>(n_bs);
  const double scale = std::sqrt(unit(rng) * power_w / dp.transmit_covariance().trace().real());
  dp.w_common *= scale;
  for (auto& w : dp.w_private) w *= scale;
  dp.an_covariance *= scale * scale;
  dp.an_covariance = 0.5 * (dp.an_covariance + dp.an_covariance.adjoint()).eval();
  dp.star.v_t = CVec(n_elements + 1);
  dp.star.v_r = CVec(n_elements + 1);
  for (int n = 0; n < n_elements; ++n) {
    const double split = unit(rng);
    const double energy = unit(rng);
    dp.star.v_t[n] = std::polar(std::sqrt(energy * split), 2.0 * std::numbers::pi * unit(rng));
    dp.star.v_r[n] = std::polar(std::sqrt(energy * (1.0 - split)), 2.0 * std::numbers::pi * unit(rng));
  }
  dp.star.v_t[n_elements] = 1.0;
  dp.star.v_r[n_elements] = 1.0;
  dp.star.mode = StarMode::star;
  return dp;
}

}  // namespace secisac
