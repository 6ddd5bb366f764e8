#include "secisac/conic/barrier.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/QR>

namespace secisac::conic {

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::numerical_limit: return "numerical-limit";
  }
  return "?";
}

SolverSettings SolverSettings::conservative() {
  SolverSettings s;
  s.t_growth = 6.0;
  s.ball_radius = 1e5;
  s.max_centering_steps = 400;
  s.max_newton_steps = 8000;
  return s;
}

RVec SolveResult::value(const std::string& name) const {
  if (!has_primal()) throw std::logic_error("SolveResult: no primal values (status " + to_string(status) + ")");
  for (const auto& v : variables)
    if (v.name == name) return x.segment(v.offset, v.n_real);
  throw std::out_of_range("SolveResult: no variable named " + name);
}

namespace {

struct Block {
  Cone cone = Cone::nonneg;
  int dim = 0;
  int psd_n = 0;
  bool ball = false;
  std::vector<int> cols;
  RMat f;  // dim x cols
  RVec g;
  RMat soc_p;               // f^T J f
  std::vector<RMat> basis;  // psd: one symmetric matrix per column

  double nu() const {
    switch (cone) {
      case Cone::nonneg: return dim;
      case Cone::soc: return 2.0;
      case Cone::psd: return psd_n;
      case Cone::exp: return 3.0;
      case Cone::zero: return 0.0;
    }
    return 0.0;
  }

  void finalize() {
    if (cone == Cone::soc) {
      RMat jf = f;
      jf.bottomRows(dim - 1) *= -1.0;
      soc_p = f.transpose() * jf;
    }
    if (cone == Cone::psd) {
      basis.clear();
      for (Eigen::Index j = 0; j < f.cols(); ++j) {
        const Eigen::Map<const RMat> b(f.col(j).data(), psd_n, psd_n);
        basis.emplace_back(0.5 * (b + b.transpose()));
      }
    }
  }

  RVec slack(const RVec& z) const {
    RVec zl(static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i) zl[static_cast<Eigen::Index>(i)] = z[cols[i]];
    return f * zl + g;
  }

  // Direction e with e in int K used by phase I.
  RVec phase1_direction() const {
    RVec e = RVec::Zero(dim);
    switch (cone) {
      case Cone::nonneg: e.setOnes(); break;
      case Cone::soc: e[0] = 1.0; break;
      case Cone::psd:
        for (int i = 0; i < psd_n; ++i) e[i * psd_n + i] = 1.0;
        break;
      case Cone::exp: e << -1.0, 1.0, 1.0; break;
      case Cone::zero: break;
    }
    return e;
  }
};

RMat psd_matrix(const RVec& s, int n) {
  const Eigen::Map<const RMat> m(s.data(), n, n);
  return 0.5 * (m + m.transpose());
}

double exp_psi(const RVec& s) { return s[1] * std::log(s[2] / s[1]) - s[0]; }

bool interior(const Block& b, const RVec& s) {
  if (!s.allFinite()) return false;
  switch (b.cone) {
    case Cone::nonneg: return s.minCoeff() > 0.0;
    case Cone::soc: return s[0] > 0.0 && s[0] * s[0] - s.tail(b.dim - 1).squaredNorm() > 0.0;
    case Cone::psd: {
      Eigen::LLT<RMat> llt(psd_matrix(s, b.psd_n));
      return llt.info() == Eigen::Success && llt.matrixLLT().diagonal().minCoeff() > 0.0;
    }
    case Cone::exp: return s[1] > 0.0 && s[2] > 0.0 && exp_psi(s) > 0.0;
    case Cone::zero: return true;
  }
  return false;
}

// Change of the block barrier from s_old to s_new (both interior).
double barrier_change(const Block& b, const RVec& s_old, const RVec& s_new) {
  switch (b.cone) {
    case Cone::nonneg: return -(s_new.array() / s_old.array()).log().sum();
    case Cone::soc: {
      const double go = s_old[0] * s_old[0] - s_old.tail(b.dim - 1).squaredNorm();
      const double gn = s_new[0] * s_new[0] - s_new.tail(b.dim - 1).squaredNorm();
      return -std::log(gn / go);
    }
    case Cone::psd: {
      Eigen::LLT<RMat> lo(psd_matrix(s_old, b.psd_n));
      Eigen::LLT<RMat> ln(psd_matrix(s_new, b.psd_n));
      return -2.0 * (ln.matrixLLT().diagonal().array() / lo.matrixLLT().diagonal().array()).log().sum();
    }
    case Cone::exp:
      return -std::log(exp_psi(s_new) / exp_psi(s_old)) - std::log(s_new[1] / s_old[1]) -
             std::log(s_new[2] / s_old[2]);
    case Cone::zero: return 0.0;
  }
  return 0.0;
}

// Gradient and Hessian of the block barrier with respect to its columns.
void derivatives(const Block& b, const RVec& s, RVec& grad, RMat& hess) {
  switch (b.cone) {
    case Cone::nonneg: {
      const RVec inv = s.cwiseInverse();
      grad = -(b.f.transpose() * inv);
      const RMat scaled = inv.asDiagonal() * b.f;
      hess = scaled.transpose() * scaled;
      return;
    }
    case Cone::soc: {
      RVec js = s;
      js.tail(b.dim - 1) *= -1.0;
      const double gamma = s.dot(js);
      const RVec u = b.f.transpose() * js;
      grad = (-2.0 / gamma) * u;
      hess = (-2.0 / gamma) * b.soc_p + (4.0 / (gamma * gamma)) * u * u.transpose();
      return;
    }
    case Cone::psd: {
      const RMat m = psd_matrix(s, b.psd_n);
      Eigen::LLT<RMat> llt(m);
      const RMat inv = llt.solve(RMat::Identity(b.psd_n, b.psd_n));
      const auto k = static_cast<Eigen::Index>(b.basis.size());
      grad.resize(k);
      hess.resize(k, k);
      std::vector<RMat> t(static_cast<std::size_t>(k));
      for (Eigen::Index j = 0; j < k; ++j) {
        const RMat& bj = b.basis[static_cast<std::size_t>(j)];
        grad[j] = -inv.cwiseProduct(bj).sum();
        t[static_cast<std::size_t>(j)] = inv * bj * inv;
      }
      for (Eigen::Index j = 0; j < k; ++j)
        for (Eigen::Index l = j; l < k; ++l) {
          const double v = t[static_cast<std::size_t>(j)].cwiseProduct(b.basis[static_cast<std::size_t>(l)]).sum();
          hess(j, l) = v;
          hess(l, j) = v;
        }
      return;
    }
    case Cone::exp: {
      const double y = s[1];
      const double z = s[2];
      const double psi = exp_psi(s);
      Eigen::Vector3d dpsi(-1.0, std::log(z / y) - 1.0, y / z);
      Eigen::Matrix3d d2psi;
      d2psi << 0.0, 0.0, 0.0, 0.0, -1.0 / y, 1.0 / z, 0.0, 1.0 / z, -y / (z * z);
      Eigen::Vector3d g3 = -dpsi / psi;
      g3[1] -= 1.0 / y;
      g3[2] -= 1.0 / z;
      Eigen::Matrix3d h3 = dpsi * dpsi.transpose() / (psi * psi) - d2psi / psi;
      h3(1, 1) += 1.0 / (y * y);
      h3(2, 2) += 1.0 / (z * z);
      grad = b.f.transpose() * g3;
      hess = b.f.transpose() * h3 * b.f;
      return;
    }
    case Cone::zero: return;
  }
}

// Smallest shift tau (roughly) with s + tau e in int K.
double required_shift(const Block& b, const RVec& s) {
  switch (b.cone) {
    case Cone::nonneg: return -s.minCoeff();
    case Cone::soc: return s.tail(b.dim - 1).norm() - s[0];
    case Cone::psd: {
      Eigen::SelfAdjointEigenSolver<RMat> eig(psd_matrix(s, b.psd_n), Eigen::EigenvaluesOnly);
      return -eig.eigenvalues().minCoeff();
    }
    case Cone::exp: {
      if (interior(b, s)) return -std::min({1.0, s[1], s[2]}) * 1e-3;
      const RVec e = b.phase1_direction();
      double tau = std::max({0.0, -s[1], -s[2]}) + 1.0;
      for (int i = 0; i < 200 && !interior(b, s + tau * e); ++i) tau = 2.0 * tau + 1.0;
      return tau;
    }
    case Cone::zero: return 0.0;
  }
  return 0.0;
}

struct Core {
  int n = 0;
  RVec c;  // minimized
  std::vector<Block> blocks;
  double nu = 0.0;
};

struct CenterOutcome {
  bool centered = false;
  bool stopped_early = false;
  double lambda2 = 0.0;
};

RVec newton_direction(const RMat& hess, const RVec& grad) {
  const Eigen::Index n = hess.rows();
  RVec d(n);
  for (Eigen::Index i = 0; i < n; ++i) d[i] = 1.0 / std::sqrt(std::max(hess(i, i), 1e-300));
  RMat scaled = d.asDiagonal() * hess * d.asDiagonal();
  const RVec rhs = -(d.asDiagonal() * grad);
  double reg = 0.0;
  for (int attempt = 0; attempt < 12; ++attempt) {
    Eigen::LLT<RMat> llt(scaled + reg * RMat::Identity(n, n));
    if (llt.info() == Eigen::Success) {
      RVec step = d.asDiagonal() * llt.solve(rhs);
      if (step.allFinite()) return step;
    }
    reg = reg == 0.0 ? 1e-14 : reg * 100.0;
  }
  return RVec();
}

class Centering {
 public:
  Centering(const Core& core, const SolverSettings& settings, int& budget)
      : core_(core), settings_(settings), budget_(budget) {}

  CenterOutcome run(RVec& z, double t, const std::function<bool(const RVec&)>& stop_early) {
    CenterOutcome out;
    std::vector<RVec> slacks(core_.blocks.size());
    for (std::size_t b = 0; b < core_.blocks.size(); ++b) slacks[b] = core_.blocks[b].slack(z);
    for (int step = 0; step < settings_.max_centering_steps; ++step) {
      if (budget_ <= 0) return out;
      RVec grad = t * core_.c;
      RMat hess = RMat::Zero(core_.n, core_.n);
      RVec gl;
      RMat hl;
      for (std::size_t b = 0; b < core_.blocks.size(); ++b) {
        const Block& blk = core_.blocks[b];
        derivatives(blk, slacks[b], gl, hl);
        for (std::size_t i = 0; i < blk.cols.size(); ++i) {
          const auto ii = static_cast<Eigen::Index>(i);
          grad[blk.cols[i]] += gl[ii];
          for (std::size_t j = 0; j < blk.cols.size(); ++j) hess(blk.cols[i], blk.cols[j]) += hl(ii, static_cast<Eigen::Index>(j));
        }
      }
      const RVec dz = newton_direction(hess, grad);
      if (dz.size() == 0) return out;
      const double slope = grad.dot(dz);
      const double lambda2 = std::max(0.0, -slope);
      out.lambda2 = lambda2;
      if (lambda2 / 2.0 <= settings_.centering_tol) {
        out.centered = true;
        return out;
      }
      const double lambda = std::sqrt(lambda2);
      const double damped = lambda < 0.25 ? 1.0 : 1.0 / (1.0 + lambda);
      const double cdz = core_.c.dot(dz);
      double alpha = 1.0;
      bool accepted = false;
      std::vector<RVec> trial(core_.blocks.size());
      while (alpha >= 1e-14) {
        const RVec zn = z + alpha * dz;
        bool inside = true;
        for (std::size_t b = 0; b < core_.blocks.size() && inside; ++b) {
          trial[b] = core_.blocks[b].slack(zn);
          inside = interior(core_.blocks[b], trial[b]);
        }
        if (inside) {
          if (alpha <= damped) {
            accepted = true;
          } else {
            double change = t * alpha * cdz;
            for (std::size_t b = 0; b < core_.blocks.size(); ++b)
              change += barrier_change(core_.blocks[b], slacks[b], trial[b]);
            accepted = std::isfinite(change) && change <= 0.01 * alpha * slope;
          }
        }
        if (accepted) {
          z = zn;
          slacks.swap(trial);
          break;
        }
        alpha *= 0.5;
      }
      --budget_;
      ++steps_;
      if (!accepted) return out;
      if (stop_early && stop_early(z)) {
        out.stopped_early = true;
        out.centered = true;
        return out;
      }
    }
    return out;
  }

  int steps() const { return steps_; }

 private:
  const Core& core_;
  const SolverSettings& settings_;
  int& budget_;
  int steps_ = 0;
};

struct Reduction {
  RVec x0;
  RMat basis;  // x = x0 + basis z
  bool infeasible = false;
  std::string reason;
};

Reduction eliminate_equalities(const CanonicalProgram& cp) {
  Reduction red;
  const int n = cp.n;
  red.x0 = RVec::Zero(n);
  const Eigen::SparseMatrix<double, Eigen::RowMajor> rows = cp.f;
  std::map<int, double> fixed;
  std::vector<int> general;
  for (const auto& b : cp.blocks) {
    if (b.cone != Cone::zero) continue;
    for (int r = b.row_offset; r < b.row_offset + b.dim; ++r) {
      std::vector<std::pair<int, double>> nz;
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(rows, r); it; ++it)
        if (it.value() != 0.0) nz.emplace_back(static_cast<int>(it.col()), it.value());
      if (nz.empty()) {
        if (std::abs(cp.g[r]) > 1e-12) {
          red.infeasible = true;
          red.reason = "constant equality row '" + b.label + "' is violated";
          return red;
        }
      } else if (nz.size() == 1) {
        const double v = -cp.g[r] / nz[0].second;
        auto [it, inserted] = fixed.emplace(nz[0].first, v);
        if (!inserted && std::abs(it->second - v) > 1e-12 * (1.0 + std::abs(v))) {
          red.infeasible = true;
          red.reason = "conflicting fixed values in '" + b.label + "'";
          return red;
        }
      } else {
        general.push_back(r);
      }
    }
  }
  std::vector<int> free_vars;
  for (int i = 0; i < n; ++i) {
    auto it = fixed.find(i);
    if (it == fixed.end())
      free_vars.push_back(i);
    else
      red.x0[i] = it->second;
  }
  const auto nf = static_cast<Eigen::Index>(free_vars.size());
  RMat select = RMat::Zero(n, nf);
  for (Eigen::Index j = 0; j < nf; ++j) select(free_vars[static_cast<std::size_t>(j)], j) = 1.0;
  if (general.empty()) {
    red.basis = select;
    return red;
  }
  const auto p = static_cast<Eigen::Index>(general.size());
  RMat a = RMat::Zero(p, nf);
  RVec rhs(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    const int r = general[static_cast<std::size_t>(i)];
    double acc = -cp.g[r];
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(rows, r); it; ++it) {
      auto f = fixed.find(static_cast<int>(it.col()));
      if (f != fixed.end()) {
        acc -= it.value() * f->second;
      } else {
        const auto pos = std::lower_bound(free_vars.begin(), free_vars.end(), static_cast<int>(it.col())) - free_vars.begin();
        a(i, pos) = it.value();
      }
    }
    rhs[i] = acc;
  }
  const Eigen::CompleteOrthogonalDecomposition<RMat> cod(a);
  const RVec y0 = cod.solve(rhs);
  if ((a * y0 - rhs).norm() > 1e-9 * (1.0 + rhs.norm())) {
    red.infeasible = true;
    red.reason = "equality rows are inconsistent";
    return red;
  }
  Eigen::ColPivHouseholderQR<RMat> qr(a.transpose());
  const Eigen::Index rank = qr.rank();
  const RMat q = qr.householderQ();
  const RMat null = q.rightCols(nf - rank);
  red.x0 += select * y0;
  red.basis = select * null;
  return red;
}

Block make_ball(int n, double radius) {
  Block b;
  b.cone = Cone::soc;
  b.dim = n + 1;
  b.ball = true;
  for (int i = 0; i < n; ++i) b.cols.push_back(i);
  b.f = RMat::Zero(n + 1, n);
  b.f.bottomRows(n).setIdentity();
  b.g = RVec::Zero(n + 1);
  b.g[0] = radius;
  b.finalize();
  return b;
}

}  // namespace

SolveResult solve(const CanonicalProgram& cp, const SolverSettings& settings) {
  const auto start = std::chrono::steady_clock::now();
  SolveResult result;
  result.variables = cp.variables;
  std::ostringstream diag;
  auto finish = [&](SolveStatus status) {
    result.status = status;
    result.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.diagnostics = diag.str();
    if (status != SolveStatus::optimal) result.x.resize(0);
    return result;
  };

  const Reduction red = eliminate_equalities(cp);
  if (red.infeasible) {
    diag << red.reason;
    return finish(SolveStatus::infeasible);
  }
  const RVec c_user = cp.objective;
  const double sign = cp.maximize ? -1.0 : 1.0;

  const Eigen::SparseMatrix<double, Eigen::RowMajor> f_rows = cp.f;
  Core core;
  core.n = static_cast<int>(red.basis.cols());
  core.c = sign * (red.basis.transpose() * c_user);
  for (const auto& cb : cp.blocks) {
    if (cb.cone == Cone::zero) continue;
    Block b;
    b.cone = cb.cone;
    b.dim = cb.dim;
    b.psd_n = cb.psd_dim;
    const Eigen::SparseMatrix<double, Eigen::RowMajor> fb = f_rows.middleRows(cb.row_offset, cb.dim);
    const RMat dense = fb * red.basis;
    b.g = fb * red.x0 + cp.g.segment(cb.row_offset, cb.dim);
    for (Eigen::Index j = 0; j < dense.cols(); ++j)
      if (dense.col(j).cwiseAbs().maxCoeff() > 0.0) b.cols.push_back(static_cast<int>(j));
    b.f.resize(b.dim, static_cast<Eigen::Index>(b.cols.size()));
    for (std::size_t j = 0; j < b.cols.size(); ++j) b.f.col(static_cast<Eigen::Index>(j)) = dense.col(b.cols[j]);
    if (b.cols.empty()) {
      // constant block: must already be interior
      if (!interior(b, b.g)) {
        diag << "constant block '" << cb.label << "' (" << cb.tag << ") is not strictly feasible";
        return finish(SolveStatus::infeasible);
      }
      continue;
    }
    b.finalize();
    core.blocks.push_back(std::move(b));
  }
  auto objective_at = [&](const RVec& z) {
    return c_user.dot(red.x0 + red.basis * z) + cp.objective_constant;
  };

  if (core.n == 0) {
    result.x = red.x0;
    result.objective = objective_at(RVec());
    return finish(SolveStatus::optimal);
  }
  core.blocks.push_back(make_ball(core.n, settings.ball_radius));
  for (const auto& b : core.blocks) core.nu += b.nu();

  int budget = settings.max_newton_steps;
  RVec z = RVec::Zero(core.n);

  // Phase I: minimize tau with s_b(z) + tau e_b in K_b.
  double tau0 = -std::numeric_limits<double>::infinity();
  bool start_interior = true;
  for (const auto& b : core.blocks) {
    if (b.ball) continue;
    const RVec s = b.slack(z);
    start_interior = start_interior && interior(b, s);
    tau0 = std::max(tau0, required_shift(b, s));
  }
  if (!start_interior) {
    Core p1;
    p1.n = core.n + 1;
    p1.c = RVec::Zero(p1.n);
    p1.c[core.n] = 1.0;
    for (const auto& b : core.blocks) {
      Block a = b;
      if (!b.ball) {
        a.cols.push_back(core.n);
        a.f.conservativeResize(Eigen::NoChange, a.f.cols() + 1);
        a.f.col(a.f.cols() - 1) = b.phase1_direction();
      }
      a.finalize();
      p1.blocks.push_back(std::move(a));
    }
    for (const auto& b : p1.blocks) p1.nu += b.nu();
    tau0 = tau0 + 1.0 + 0.1 * std::abs(tau0);
    RVec z1(p1.n);
    z1.head(core.n).setZero();
    z1[core.n] = tau0;
    Centering centering(p1, settings, budget);
    const double scale = 1.0 + std::abs(tau0);
    bool feasible = false;
    double t = settings.t_initial / scale;
    for (int outer = 0; outer < 200; ++outer) {
      const CenterOutcome co = centering.run(z1, t, [&](const RVec& v) { return v[core.n] < -1e-6 * scale; });
      const double tau = z1[core.n];
      if (tau < 0.0) {
        feasible = true;
        break;
      }
      const double gap = p1.nu / t;
      if (!co.centered && co.lambda2 > 1e-2) {
        result.phase1_iterations = centering.steps();
        result.iterations = centering.steps();
        diag << "phase I stalled at tau=" << tau << " (lambda^2=" << co.lambda2 << ")";
        return finish(SolveStatus::numerical_limit);
      }
      if (tau - gap > 0.0 || gap < 1e-10 * scale) {
        result.phase1_iterations = centering.steps();
        result.iterations = centering.steps();
        diag << "phase I bound: min shift >= " << tau - gap << " (tau=" << tau << ")";
        return finish(SolveStatus::infeasible);
      }
      t *= settings.t_growth;
    }
    result.phase1_iterations = centering.steps();
    if (!feasible) {
      result.iterations = centering.steps();
      diag << "phase I did not reach a strictly feasible point";
      return finish(SolveStatus::numerical_limit);
    }
    z = z1.head(core.n);
  }

  // Phase II.
  Centering centering(core, settings, budget);
  double obj_scale = 1.0 + std::abs(objective_at(z));
  double t = settings.t_initial * core.nu / obj_scale;
  SolveStatus status = SolveStatus::numerical_limit;
  for (int outer = 0; outer < 400; ++outer) {
    const CenterOutcome co = centering.run(z, t, {});
    const double obj = objective_at(z);
    const double gap = core.nu / t;
    result.gap = gap;
    if (gap <= settings.tol_abs + settings.tol_rel * std::abs(obj)) {
      status = SolveStatus::optimal;
      if (!co.centered) diag << "final centering incomplete (lambda^2=" << co.lambda2 << "); ";
      break;
    }
    if (!co.centered) {
      if (co.lambda2 < 1e-2 && gap <= settings.stall_accept_rel * (1.0 + std::abs(obj))) {
        diag << "stalled at gap " << gap << ", accepted; ";
        status = SolveStatus::optimal;
      } else {
        diag << "centering failed at t=" << t << " gap=" << gap << " lambda^2=" << co.lambda2 << "; ";
      }
      break;
    }
    t *= settings.t_growth;
  }
  result.iterations = result.phase1_iterations + centering.steps();
  if (status == SolveStatus::optimal && z.norm() >= (1.0 - 1e-3) * settings.ball_radius) {
    diag << "solution reached the bounding ball";
    return finish(SolveStatus::unbounded);
  }
  result.x = red.x0 + red.basis * z;
  result.objective = objective_at(z);
  return finish(status);
}

SolveResult solve(const ConicProgram& program, const SolverSettings& settings) {
  return solve(canonicalize(program), settings);
}

}  // namespace secisac::conic
