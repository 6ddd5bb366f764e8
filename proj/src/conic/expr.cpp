#include "secisac/conic/expr.hpp"

#include <algorithm>

namespace secisac::conic {

LinExpr LinExpr::variable(int index, double coef) {
  LinExpr e;
  e.terms_.emplace_back(index, coef);
  return e;
}

LinExpr& LinExpr::operator+=(const LinExpr& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  constant_ += other.constant_;
  return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& other) {
  for (const auto& [i, c] : other.terms_) terms_.emplace_back(i, -c);
  constant_ -= other.constant_;
  return *this;
}

LinExpr& LinExpr::operator*=(double scale) {
  for (auto& t : terms_) t.second *= scale;
  constant_ *= scale;
  return *this;
}

LinExpr& LinExpr::compress() {
  std::sort(terms_.begin(), terms_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<int, double>> merged;
  for (const auto& t : terms_) {
    if (!merged.empty() && merged.back().first == t.first)
      merged.back().second += t.second;
    else
      merged.push_back(t);
  }
  std::erase_if(merged, [](const auto& t) { return t.second == 0.0; });
  terms_ = std::move(merged);
  return *this;
}

double LinExpr::eval(const RVec& x) const {
  double v = constant_;
  for (const auto& [i, c] : terms_) v += c * x[i];
  return v;
}

bool LinExpr::is_constant() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second == 0.0; });
}

LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
LinExpr operator-(LinExpr a) { return a *= -1.0; }
LinExpr operator*(double s, LinExpr a) { return a *= s; }
LinExpr operator*(LinExpr a, double s) { return a *= s; }

ComplexExpr& ComplexExpr::operator+=(const ComplexExpr& other) {
  re += other.re;
  im += other.im;
  return *this;
}

ComplexExpr operator+(ComplexExpr a, const ComplexExpr& b) { return a += b; }

ComplexExpr operator-(ComplexExpr a, const ComplexExpr& b) {
  a.re -= b.re;
  a.im -= b.im;
  return a;
}

ComplexExpr operator*(cdouble s, const ComplexExpr& a) {
  // (sr + i si)(ar + i ai)
  return {s.real() * a.re - s.imag() * a.im, s.real() * a.im + s.imag() * a.re};
}

ComplexExpr conj(const ComplexExpr& a) { return {a.re, -a.im}; }

LinExpr real_part_of_conj_product(cdouble b, const ComplexExpr& u) {
  // Re((br - i bi)(ur + i ui)) = br ur + bi ui
  return b.real() * u.re + b.imag() * u.im;
}

ComplexExpr HermitianVar::operator()(int r, int c) const {
  if (r == c) return {LinExpr::variable(offset + r), LinExpr(0.0)};
  const int lo = std::min(r, c);
  const int hi = std::max(r, c);
  // index of (lo, hi) among strictly-upper entries, row-major
  const int k = lo * n - lo * (lo + 1) / 2 + (hi - lo - 1);
  const int base = offset + n + 2 * k;
  LinExpr im = LinExpr::variable(base + 1);
  if (r > c) im *= -1.0;
  return {LinExpr::variable(base), im};
}

ComplexExpr inner(const CVec& a, const ComplexVar& w) {
  ComplexExpr out;
  for (int i = 0; i < w.size; ++i) out += std::conj(a[i]) * w[i];
  return out;
}

LinExpr quad_form(const CVec& a, const HermitianVar& r) {
  LinExpr out;
  for (int i = 0; i < r.n; ++i) {
    out += std::norm(a[i]) * r(i, i).re;
    for (int j = i + 1; j < r.n; ++j) {
      // conj(a_i) R_ij a_j + conj(a_j) R_ji a_i = 2 Re(conj(a_i) a_j R_ij)
      const cdouble z = std::conj(a[i]) * a[j];
      const ComplexExpr rij = r(i, j);
      out += 2.0 * (z.real() * rij.re - z.imag() * rij.im);
    }
  }
  return out;
}

LinExpr trace(const HermitianVar& r) {
  LinExpr out;
  for (int i = 0; i < r.n; ++i) out += r(i, i).re;
  return out;
}

std::vector<LinExpr> stack_real(const std::vector<ComplexExpr>& values) {
  std::vector<LinExpr> out;
  out.reserve(2 * values.size());
  for (const auto& v : values) {
    out.push_back(v.re);
    out.push_back(v.im);
  }
  return out;
}

}  // namespace secisac::conic
