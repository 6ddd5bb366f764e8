#include "secisac/conic/embed.hpp"

#include <stdexcept>

namespace secisac::conic {

RMat embed_hermitian(const CMat& m, double tol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("embed_hermitian: matrix is not square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol * scale)
    throw std::invalid_argument("embed_hermitian: matrix is not Hermitian");
  const auto n = m.rows();
  RMat out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = m.real();
  out.topRightCorner(n, n) = -m.imag();
  out.bottomLeftCorner(n, n) = m.imag();
  out.bottomRightCorner(n, n) = m.real();
  return out;
}

std::vector<LinExpr> embed_hermitian(const HermitianVar& var) {
  const int n = var.n;
  const int d = 2 * n;
  std::vector<LinExpr> out(static_cast<std::size_t>(d * d));
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) {
      const ComplexExpr e = var(r, c);
      auto at = [&](int row, int col) -> LinExpr& { return out[static_cast<std::size_t>(col * d + row)]; };
      at(r, c) = e.re;
      at(r + n, c + n) = e.re;
      at(r + n, c) = e.im;
      at(r, c + n) = -e.im;
    }
  }
  return out;
}

CMat extract_hermitian(const RMat& embedding) {
  if (embedding.rows() != embedding.cols() || embedding.rows() % 2 != 0)
    throw std::invalid_argument("extract_hermitian: embedding must be square with even order");
  const auto n = embedding.rows() / 2;
  const RMat re = 0.5 * (embedding.topLeftCorner(n, n) + embedding.bottomRightCorner(n, n));
  const RMat im = 0.5 * (embedding.bottomLeftCorner(n, n) - embedding.topRightCorner(n, n));
  CMat m(n, n);
  m.real() = re;
  m.imag() = im;
  return 0.5 * (m + m.adjoint());
}

CMat hermitian_value(const HermitianVar& var, const RVec& x) {
  CMat m(var.n, var.n);
  for (int r = 0; r < var.n; ++r)
    for (int c = 0; c < var.n; ++c) m(r, c) = var(r, c).eval(x);
  return m;
}

CVec complex_value(const ComplexVar& var, const RVec& x) {
  CVec v(var.size);
  for (int i = 0; i < var.size; ++i) v[i] = {x[var.offset + i], x[var.offset + var.size + i]};
  return v;
}

void assign_hermitian(const HermitianVar& var, const CMat& m, RVec& x) {
  const CMat h = 0.5 * (m + m.adjoint());
  for (int r = 0; r < var.n; ++r) {
    x[var.offset + r] = h(r, r).real();
    for (int c = r + 1; c < var.n; ++c) {
      const ComplexExpr e = var(r, c);
      x[e.re.terms().front().first] = h(r, c).real();
      x[e.im.terms().front().first] = h(r, c).imag();
    }
  }
}

void assign_complex(const ComplexVar& var, const CVec& v, RVec& x) {
  for (int i = 0; i < var.size; ++i) {
    x[var.offset + i] = v[i].real();
    x[var.offset + var.size + i] = v[i].imag();
  }
}

}  // namespace secisac::conic
