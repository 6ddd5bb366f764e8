#pragma once

#include <utility>
#include <vector>

#include "secisac/types.hpp"

namespace secisac::conic {

// Real affine expression sum_i coef_i * x[index_i] + constant over the flat
// real decision vector of a ConicProgram.
class LinExpr {
 public:
  LinExpr() = default;
  LinExpr(double constant) : constant_(constant) {}  // NOLINT(google-explicit-constructor)

  static LinExpr variable(int index, double coef = 1.0);

  const std::vector<std::pair<int, double>>& terms() const { return terms_; }
  double constant() const { return constant_; }

  LinExpr& operator+=(const LinExpr& other);
  LinExpr& operator-=(const LinExpr& other);
  LinExpr& operator*=(double scale);

  // Merges repeated indices and drops zero coefficients.
  LinExpr& compress();

  double eval(const RVec& x) const;
  bool is_constant() const;

 private:
  std::vector<std::pair<int, double>> terms_;
  double constant_ = 0.0;
};

LinExpr operator+(LinExpr a, const LinExpr& b);
LinExpr operator-(LinExpr a, const LinExpr& b);
LinExpr operator-(LinExpr a);
LinExpr operator*(double s, LinExpr a);
LinExpr operator*(LinExpr a, double s);

// Complex affine expression stored as two real ones.
struct ComplexExpr {
  LinExpr re;
  LinExpr im;

  ComplexExpr() = default;
  ComplexExpr(LinExpr r, LinExpr i) : re(std::move(r)), im(std::move(i)) {}
  ComplexExpr(cdouble c) : re(c.real()), im(c.imag()) {}  // NOLINT(google-explicit-constructor)

  ComplexExpr& operator+=(const ComplexExpr& other);
  cdouble eval(const RVec& x) const { return {re.eval(x), im.eval(x)}; }
};

ComplexExpr operator+(ComplexExpr a, const ComplexExpr& b);
ComplexExpr operator-(ComplexExpr a, const ComplexExpr& b);
ComplexExpr operator*(cdouble s, const ComplexExpr& a);
ComplexExpr conj(const ComplexExpr& a);

// Re(conj(b) * u) for a fixed complex b.
LinExpr real_part_of_conj_product(cdouble b, const ComplexExpr& u);

struct RealVar {
  int offset = 0;
  int size = 0;
  LinExpr operator[](int i) const { return LinExpr::variable(offset + i); }
};

// Complex vector, real parts at [offset, offset+size), imaginary parts right after.
struct ComplexVar {
  int offset = 0;
  int size = 0;
  ComplexExpr operator[](int i) const {
    return {LinExpr::variable(offset + i), LinExpr::variable(offset + size + i)};
  }
  int n_real() const { return 2 * size; }
};

// Hermitian n x n matrix: n real diagonal entries, then (re, im) for each
// strictly-upper entry in row-major order.
struct HermitianVar {
  int offset = 0;
  int n = 0;
  ComplexExpr operator()(int r, int c) const;
  int n_real() const { return n * n; }
};

// a^H w
ComplexExpr inner(const CVec& a, const ComplexVar& w);
// a^H R a (real)
LinExpr quad_form(const CVec& a, const HermitianVar& r);
LinExpr trace(const HermitianVar& r);
// Real components [Re u_0, Im u_0, Re u_1, ...] of a list of complex expressions.
std::vector<LinExpr> stack_real(const std::vector<ComplexExpr>& values);

}  // namespace secisac::conic
