#include "secisac/conic/program.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace secisac::conic {

std::string to_string(Cone cone) {
  switch (cone) {
    case Cone::zero: return "zero";
    case Cone::nonneg: return "nonneg";
    case Cone::soc: return "soc";
    case Cone::psd: return "psd";
    case Cone::exp: return "exp";
  }
  return "?";
}

Cone cone_from_string(const std::string& name) {
  if (name == "zero") return Cone::zero;
  if (name == "nonneg") return Cone::nonneg;
  if (name == "soc") return Cone::soc;
  if (name == "psd") return Cone::psd;
  if (name == "exp") return Cone::exp;
  throw std::invalid_argument("unknown cone: " + name);
}

int ConicProgram::reserve(const std::string& name, VarKind kind, int n_real, int dim) {
  for (const auto& v : vars_)
    if (v.name == name) throw std::logic_error("ConicProgram: duplicate variable " + name);
  const int offset = n_vars_;
  vars_.push_back({name, kind, offset, n_real, dim});
  n_vars_ += n_real;
  return offset;
}

RealVar ConicProgram::add_real(const std::string& name, int size) {
  return {reserve(name, VarKind::real, size, size), size};
}

ComplexVar ConicProgram::add_complex(const std::string& name, int size) {
  return {reserve(name, VarKind::complex, 2 * size, size), size};
}

HermitianVar ConicProgram::add_hermitian(const std::string& name, int n) {
  return {reserve(name, VarKind::hermitian, n * n, n), n};
}

const VariableInfo& ConicProgram::variable(const std::string& name) const {
  for (const auto& v : vars_)
    if (v.name == name) return v;
  throw std::out_of_range("ConicProgram: no variable named " + name);
}

void ConicProgram::maximize(LinExpr objective) {
  objective_ = std::move(objective.compress());
  maximize_ = true;
}

void ConicProgram::minimize(LinExpr objective) {
  objective_ = std::move(objective.compress());
  maximize_ = false;
}

void ConicProgram::add(Constraint c) {
  for (auto& r : c.rows) r.compress();
  constraints_.push_back(std::move(c));
}

void ConicProgram::add_zero(const std::string& tag, const std::string& label, std::vector<LinExpr> rows) {
  add({tag, label, Cone::zero, std::move(rows), 0});
}

void ConicProgram::add_nonneg(const std::string& tag, const std::string& label, LinExpr row) {
  add({tag, label, Cone::nonneg, {std::move(row)}, 0});
}

void ConicProgram::add_soc(const std::string& tag, const std::string& label, LinExpr t, std::vector<LinExpr> x) {
  std::vector<LinExpr> rows;
  rows.reserve(x.size() + 1);
  rows.push_back(std::move(t));
  for (auto& e : x) rows.push_back(std::move(e));
  add({tag, label, Cone::soc, std::move(rows), 0});
}

void ConicProgram::add_psd(const std::string& tag, const std::string& label, int n, std::vector<LinExpr> entries) {
  add({tag, label, Cone::psd, std::move(entries), n});
}

void ConicProgram::add_exp(const std::string& tag, const std::string& label, LinExpr x, LinExpr y, LinExpr z) {
  add({tag, label, Cone::exp, {std::move(x), std::move(y), std::move(z)}, 0});
}

int ConicProgram::count_tag(const std::string& tag) const {
  std::set<std::string> labels;
  for (const auto& c : constraints_)
    if (c.tag == tag) labels.insert(c.label);
  return static_cast<int>(labels.size());
}

std::map<std::string, int> ConicProgram::tag_counts() const {
  std::map<std::string, std::set<std::string>> labels;
  for (const auto& c : constraints_) labels[c.tag].insert(c.label);
  std::map<std::string, int> out;
  for (const auto& [tag, set] : labels) out[tag] = static_cast<int>(set.size());
  return out;
}

double cone_violation(Cone cone, const RVec& s, int psd_dim) {
  switch (cone) {
    case Cone::zero: return s.size() ? s.cwiseAbs().maxCoeff() : 0.0;
    case Cone::nonneg: return s.size() ? -s.minCoeff() : 0.0;
    case Cone::soc: return s.tail(s.size() - 1).norm() - s[0];
    case Cone::psd: {
      const Eigen::Map<const RMat> m(s.data(), psd_dim, psd_dim);
      const RMat sym = 0.5 * (m + m.transpose());
      Eigen::SelfAdjointEigenSolver<RMat> eig(sym, Eigen::EigenvaluesOnly);
      return -eig.eigenvalues().minCoeff();
    }
    case Cone::exp: {
      const double x = s[0];
      const double y = s[1];
      const double z = s[2];
      if (y > 0.0 && z > 0.0) return y * std::exp(x / y) - z;
      // closure: {(x, 0, z): x <= 0, z >= 0}
      return std::max({-y, -z, y <= 0.0 ? x : y * std::exp(x / y) - z});
    }
  }
  return 0.0;
}

std::vector<ConstraintResidual> ConicProgram::residuals(const RVec& x) const {
  std::vector<ConstraintResidual> out;
  for (const auto& c : constraints_) {
    RVec s(static_cast<Eigen::Index>(c.rows.size()));
    for (std::size_t i = 0; i < c.rows.size(); ++i) s[static_cast<Eigen::Index>(i)] = c.rows[i].eval(x);
    out.push_back({c.tag, c.label, cone_violation(c.cone, s, c.psd_dim)});
  }
  return out;
}

double ConicProgram::max_violation(const RVec& x) const {
  double worst = 0.0;
  for (const auto& r : residuals(x)) worst = std::max(worst, r.violation);
  return worst;
}

void ConicProgram::validate() const {
  for (const auto& c : constraints_) {
    const auto dim = static_cast<int>(c.rows.size());
    bool ok = dim > 0;
    switch (c.cone) {
      case Cone::soc: ok = ok && dim >= 1; break;
      case Cone::psd: ok = ok && c.psd_dim > 0 && dim == c.psd_dim * c.psd_dim; break;
      case Cone::exp: ok = ok && dim == 3; break;
      default: break;
    }
    if (!ok) throw std::logic_error("ConicProgram: block '" + c.label + "' has dimensions inconsistent with its cone");
    for (const auto& r : c.rows)
      for (const auto& [i, coef] : r.terms())
        if (i < 0 || i >= n_vars_)
          throw std::logic_error("ConicProgram: block '" + c.label + "' references an unregistered variable");
  }
  for (const auto& [i, coef] : objective_.terms())
    if (i < 0 || i >= n_vars_) throw std::logic_error("ConicProgram: objective references an unregistered variable");
}

Constraint soc_of_quadratic(const std::string& tag, const std::string& label, const std::vector<LinExpr>& x,
                            const LinExpr& bound) {
  Constraint c{tag, label, Cone::soc, {}, 0};
  c.rows.push_back(bound + LinExpr(1.0));
  for (const auto& e : x) c.rows.push_back(2.0 * e);
  c.rows.push_back(bound - LinExpr(1.0));
  return c;
}

Constraint hypograph_log(const std::string& tag, const std::string& label, const LinExpr& arg, const LinExpr& level) {
  return {tag, label, Cone::exp, {std::numbers::ln2 * level, LinExpr(1.0), arg}, 0};
}

CanonicalProgram canonicalize(const ConicProgram& program) {
  program.validate();
  CanonicalProgram cp;
  cp.n = program.num_vars();
  cp.maximize = program.is_maximize();
  cp.variables = program.variables();
  cp.objective = RVec::Zero(cp.n);
  for (const auto& [i, c] : program.objective().terms()) cp.objective[i] += c;
  cp.objective_constant = program.objective().constant();

  std::vector<Eigen::Triplet<double>> trips;
  std::vector<double> g;
  for (const auto& c : program.constraints()) {
    ConeBlock b;
    b.cone = c.cone;
    b.row_offset = static_cast<int>(g.size());
    b.dim = static_cast<int>(c.rows.size());
    b.psd_dim = c.psd_dim;
    b.tag = c.tag;
    b.label = c.label;
    for (const auto& r : c.rows) {
      const int row = static_cast<int>(g.size());
      for (const auto& [i, coef] : r.terms()) trips.emplace_back(row, i, coef);
      g.push_back(r.constant());
    }
    cp.blocks.push_back(std::move(b));
  }
  cp.g = Eigen::Map<const RVec>(g.data(), static_cast<Eigen::Index>(g.size()));
  cp.f.resize(static_cast<Eigen::Index>(g.size()), cp.n);
  cp.f.setFromTriplets(trips.begin(), trips.end());
  return cp;
}

}  // namespace secisac::conic
