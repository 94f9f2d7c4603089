#include "skewspin/clifford.hpp"

#include <cmath>

namespace skewspin {
namespace {

const Complex I{0.0, 1.0};

Mat2 pauli(int k) {
  Mat2 s;
  switch (k) {
    case 1: s(0, 1) = 1.0; s(1, 0) = 1.0; break;
    case 2: s(0, 1) = -I; s(1, 0) = I; break;
    case 3: s(0, 0) = 1.0; s(1, 1) = -1.0; break;
    default: throw std::out_of_range("pauli index");
  }
  return s;
}

}  // namespace

Mat2 operator*(const Mat2& a, const Mat2& b) {
  Mat2 out;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) out(r, c) = a(r, 0) * b(0, c) + a(r, 1) * b(1, c);
  return out;
}

Mat2 operator+(const Mat2& a, const Mat2& b) {
  Mat2 out;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) out(r, c) = a(r, c) + b(r, c);
  return out;
}

Mat2 operator-(const Mat2& a, const Mat2& b) { return a + Complex(-1.0) * b; }

Mat2 operator*(Complex z, const Mat2& a) {
  Mat2 out;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) out(r, c) = z * a(r, c);
  return out;
}

Spinor operator*(const Mat2& a, const Spinor& s) {
  return {a(0, 0) * s[0] + a(0, 1) * s[1], a(1, 0) * s[0] + a(1, 1) * s[1]};
}

double max_abs_diff(const Mat2& a, const Mat2& b) {
  double d = 0.0;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) d = std::max(d, std::abs(a(r, c) - b(r, c)));
  return d;
}

CliffordRep CliffordRep::dim2() {
  CliffordRep rep;
  rep.dim_ = 2;
  rep.gammas_ = {I * pauli(1), I * pauli(2)};
  // s -> (conj s_2, -conj s_1): commutes with both gammas, squares to -1.
  rep.conj_(0, 1) = 1.0;
  rep.conj_(1, 0) = -1.0;
  return rep;
}

CliffordRep CliffordRep::dim3() {
  CliffordRep rep;
  rep.dim_ = 3;
  rep.gammas_ = {-I * pauli(1), -I * pauli(2), -I * pauli(3)};
  return rep;
}

CliffordRep CliffordRep::of_dimension(int dim) {
  if (dim == 2) return dim2();
  if (dim == 3) return dim3();
  throw std::invalid_argument("Clifford representations exist only for dimension 2 or 3");
}

Mat2 CliffordRep::vector(std::span<const double> v) const {
  if (static_cast<int>(v.size()) != dim_) throw std::invalid_argument("vector length does not match Clifford dimension");
  Mat2 out;
  for (int i = 0; i < dim_; ++i) out = out + Complex(v[i]) * gammas_[i];
  return out;
}

Mat2 CliffordRep::omega() const {
  if (dim_ != 2) throw UnsupportedOperation("the real volume element omega is defined for dimension 2");
  return gammas_[0] * gammas_[1];
}

const Mat2& CliffordRep::conjugation_matrix() const {
  if (dim_ != 2) throw UnsupportedOperation("spinor conjugation is only provided in dimension 2");
  return conj_;
}

Spinor clifford_mul(std::span<const double> v, const Spinor& s, const CliffordRep& rep) {
  return rep.vector(v) * s;
}

Complex herm(const Spinor& s, const Spinor& t) { return std::conj(s[0]) * t[0] + std::conj(s[1]) * t[1]; }

double norm2(const Spinor& s) { return std::norm(s[0]) + std::norm(s[1]); }

Spinor conjugate(const Spinor& s, const CliffordRep& rep) {
  return rep.conjugation_matrix() * Spinor{std::conj(s[0]), std::conj(s[1])};
}

Spinor operator+(const Spinor& a, const Spinor& b) { return {a[0] + b[0], a[1] + b[1]}; }
Spinor operator-(const Spinor& a, const Spinor& b) { return {a[0] - b[0], a[1] - b[1]}; }
Spinor operator*(Complex z, const Spinor& a) { return {z * a[0], z * a[1]}; }

SpinorJet operator*(const Mat2& a, const SpinorJet& s) {
  SpinorJet out;
  for (int r = 0; r < 2; ++r) out.c[r] = a(r, 0) * s.c[0] + a(r, 1) * s.c[1];
  return out;
}

SpinorJet clifford_mul(const VecJet& v, const SpinorJet& s, const CliffordRep& rep) {
  if (static_cast<int>(v.size()) != rep.dim()) throw std::invalid_argument("vector length does not match Clifford dimension");
  SpinorJet out;
  for (int i = 0; i < rep.dim(); ++i) {
    SpinorJet term = v[i] * (rep.gamma(i) * s);
    if (i == 0)
      out = term;
    else
      out += term;
  }
  return out;
}

CJet herm(const SpinorJet& s, const SpinorJet& t) { return s.c[0].conj() * t.c[0] + s.c[1].conj() * t.c[1]; }

Jet norm2(const SpinorJet& s) {
  return s.c[0].re * s.c[0].re + s.c[0].im * s.c[0].im + s.c[1].re * s.c[1].re + s.c[1].im * s.c[1].im;
}

SpinorJet conjugate(const SpinorJet& s, const CliffordRep& rep) {
  const SpinorJet bar{{s.c[0].conj(), s.c[1].conj()}};
  return rep.conjugation_matrix() * bar;
}

}  // namespace skewspin
