#pragma once

// Fixed complex 2x2 representations of the Clifford algebras of R^2 and R^3
// with the convention X.Y + Y.X = -2 g(X, Y).
//
//   dim 2: gamma_1 = i sigma_1, gamma_2 = i sigma_2; omega = gamma_1 gamma_2.
//   dim 3: gamma_k = -i sigma_k, so the complex volume element
//          -gamma_1 gamma_2 gamma_3 acts as the identity.

#include <array>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "skewspin/jet.hpp"

namespace skewspin {

using Complex = std::complex<double>;
using Spinor = std::array<Complex, 2>;

struct Mat2 {
  std::array<std::array<Complex, 2>, 2> m{};

  static Mat2 identity() { return {{{{1.0, 0.0}, {0.0, 1.0}}}}; }
  Complex operator()(int r, int c) const { return m[r][c]; }
  Complex& operator()(int r, int c) { return m[r][c]; }
};

Mat2 operator*(const Mat2& a, const Mat2& b);
Mat2 operator+(const Mat2& a, const Mat2& b);
Mat2 operator-(const Mat2& a, const Mat2& b);
Mat2 operator*(Complex z, const Mat2& a);
Spinor operator*(const Mat2& a, const Spinor& s);
double max_abs_diff(const Mat2& a, const Mat2& b);

class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// conjugate(conjugate(s)) == kConjugationSquare * s.
inline constexpr double kConjugationSquare = -1.0;

class CliffordRep {
 public:
  static CliffordRep dim2();
  static CliffordRep dim3();
  static CliffordRep of_dimension(int dim);

  int dim() const { return dim_; }
  const Mat2& gamma(int i) const { return gammas_.at(i); }
  /// Clifford action of the frame vector with components v.
  Mat2 vector(std::span<const double> v) const;
  /// Real volume element gamma_1 gamma_2 (dim 2 only).
  Mat2 omega() const;
  /// Matrix M of the conjugation s -> M conj(s) (dim 2 only).
  const Mat2& conjugation_matrix() const;

 private:
  int dim_ = 0;
  std::vector<Mat2> gammas_;
  Mat2 conj_{};
};

Spinor clifford_mul(std::span<const double> v, const Spinor& s, const CliffordRep& rep);
Complex herm(const Spinor& s, const Spinor& t);
double norm2(const Spinor& s);
Spinor conjugate(const Spinor& s, const CliffordRep& rep);

Spinor operator+(const Spinor& a, const Spinor& b);
Spinor operator-(const Spinor& a, const Spinor& b);
Spinor operator*(Complex z, const Spinor& a);

// Jet-valued spinors.

struct SpinorJet {
  std::array<CJet, 2> c;

  static SpinorJet constant(const Spinor& s, int order) {
    return {{CJet::constant(s[0], order), CJet::constant(s[1], order)}};
  }
  int order() const { return std::min(c[0].order(), c[1].order()); }
  Spinor value() const { return {c[0].value(), c[1].value()}; }
  SpinorJet diff(int var) const { return {{c[0].diff(var), c[1].diff(var)}}; }

  SpinorJet& operator+=(const SpinorJet& o) { c[0] += o.c[0]; c[1] += o.c[1]; return *this; }
  SpinorJet& operator-=(const SpinorJet& o) { c[0] -= o.c[0]; c[1] -= o.c[1]; return *this; }
};

using VecJet = std::vector<Jet>;

inline SpinorJet operator+(SpinorJet a, const SpinorJet& b) { return a += b; }
inline SpinorJet operator-(SpinorJet a, const SpinorJet& b) { return a -= b; }
inline SpinorJet operator*(const Jet& f, const SpinorJet& s) { return {{f * s.c[0], f * s.c[1]}}; }
inline SpinorJet operator*(const CJet& f, const SpinorJet& s) { return {{f * s.c[0], f * s.c[1]}}; }
inline SpinorJet operator*(Complex z, const SpinorJet& s) { return {{z * s.c[0], z * s.c[1]}}; }
SpinorJet operator*(const Mat2& a, const SpinorJet& s);

/// (sum_i v_i gamma_i) s for jet-valued components v.
SpinorJet clifford_mul(const VecJet& v, const SpinorJet& s, const CliffordRep& rep);
CJet herm(const SpinorJet& s, const SpinorJet& t);
Jet norm2(const SpinorJet& s);
SpinorJet conjugate(const SpinorJet& s, const CliffordRep& rep);

}  // namespace skewspin
