#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "secisac/conic/expr.hpp"

namespace secisac::conic {

enum class Cone { zero, nonneg, soc, psd, exp };

std::string to_string(Cone cone);
Cone cone_from_string(const std::string& name);

// One cone membership s(x) in K, with s given row by row.
//  zero:   s == 0
//  nonneg: s >= 0
//  soc:    s_0 >= ||s_1..||
//  psd:    s is an n x n symmetric matrix in column-major order, PSD
//  exp:    (s_0, s_1, s_2) with s_1 exp(s_0 / s_1) <= s_2, s_1 > 0
//
// `tag` names the modelling constraint the block encodes; `label` identifies
// the instance (several blocks may share a label when one constraint needs
// more than one cone).
struct Constraint {
  std::string tag;
  std::string label;
  Cone cone = Cone::nonneg;
  std::vector<LinExpr> rows;
  int psd_dim = 0;
};

enum class VarKind { real, complex, hermitian };

struct VariableInfo {
  std::string name;
  VarKind kind = VarKind::real;
  int offset = 0;
  int n_real = 0;
  int dim = 0;  // vector length or matrix order
};

struct ConstraintResidual {
  std::string tag;
  std::string label;
  double violation = 0.0;  // <= 0 when satisfied
};

class ConicProgram {
 public:
  RealVar add_real(const std::string& name, int size = 1);
  ComplexVar add_complex(const std::string& name, int size);
  HermitianVar add_hermitian(const std::string& name, int n);

  void maximize(LinExpr objective);
  void minimize(LinExpr objective);

  void add(Constraint c);
  void add_zero(const std::string& tag, const std::string& label, std::vector<LinExpr> rows);
  void add_nonneg(const std::string& tag, const std::string& label, LinExpr row);
  // ||x|| <= t
  void add_soc(const std::string& tag, const std::string& label, LinExpr t, std::vector<LinExpr> x);
  // Full n x n symmetric matrix, column-major.
  void add_psd(const std::string& tag, const std::string& label, int n, std::vector<LinExpr> entries);
  void add_exp(const std::string& tag, const std::string& label, LinExpr x, LinExpr y, LinExpr z);

  int num_vars() const { return n_vars_; }
  const std::vector<VariableInfo>& variables() const { return vars_; }
  const VariableInfo& variable(const std::string& name) const;
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const LinExpr& objective() const { return objective_; }
  bool is_maximize() const { return maximize_; }

  // Number of distinct labels carrying `tag`.
  int count_tag(const std::string& tag) const;
  std::map<std::string, int> tag_counts() const;

  // Cone-membership violation of every block at point x.
  std::vector<ConstraintResidual> residuals(const RVec& x) const;
  double max_violation(const RVec& x) const;

  // Throws std::logic_error on malformed blocks or unregistered variables.
  void validate() const;

 private:
  int reserve(const std::string& name, VarKind kind, int n_real, int dim);

  int n_vars_ = 0;
  std::vector<VariableInfo> vars_;
  std::vector<Constraint> constraints_;
  LinExpr objective_;
  bool maximize_ = true;
};

// ||x||^2 <= bound as the second-order cone ||(2x, bound - 1)|| <= bound + 1.
Constraint soc_of_quadratic(const std::string& tag, const std::string& label, const std::vector<LinExpr>& x,
                            const LinExpr& bound);

// level <= log2(arg) as the exponential-cone membership (level ln2, 1, arg).
Constraint hypograph_log(const std::string& tag, const std::string& label, const LinExpr& arg, const LinExpr& level);

// Violation of s in K for a numeric vector (<= 0 when inside).
double cone_violation(Cone cone, const RVec& s, int psd_dim);

// Solver-facing form: s = F x + g, stacked block by block.
struct ConeBlock {
  Cone cone = Cone::nonneg;
  int row_offset = 0;
  int dim = 0;
  int psd_dim = 0;
  std::string tag;
  std::string label;
};

struct CanonicalProgram {
  int n = 0;
  RVec objective;  // coefficients of the (maximized or minimized) objective
  double objective_constant = 0.0;
  bool maximize = true;
  std::vector<ConeBlock> blocks;
  Eigen::SparseMatrix<double> f;
  RVec g;
  std::vector<VariableInfo> variables;

  int rows() const { return static_cast<int>(g.size()); }
};

CanonicalProgram canonicalize(const ConicProgram& program);

}  // namespace secisac::conic
