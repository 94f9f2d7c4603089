#pragma once

// Truncated multivariate Taylor polynomials ("jets") in up to three chart
// coordinates. A jet of order K at a point carries every partial derivative
// of order <= K, so composing jets is forward-mode differentiation to that
// order. Differentiating a jet lowers its order by one.

#include <algorithm>
#include <array>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <vector>

namespace skewspin {

inline constexpr int kMaxVars = 3;
inline constexpr int kMaxOrder = 4;
inline constexpr int kMaxTerms = 35;  // C(kMaxOrder + 3, 3)

using MultiIndex = std::array<int, kMaxVars>;

/// Number of Taylor coefficients of a jet of the given order.
int jet_terms(int order);

class Jet {
 public:
  Jet() = default;

  static Jet constant(double value, int order);
  /// The coordinate function x_var shifted to take `value` at the base point.
  static Jet variable(double value, int var, int order);
  /// Builds a jet from partial derivatives d^alpha f, one per multi-index of
  /// degree <= order, in the library's monomial ordering.
  static Jet from_derivatives(const std::vector<double>& derivs, int order);

  int order() const { return order_; }
  double value() const { return c_[0]; }

  double coeff(std::size_t index) const { return c_[index]; }
  double& coeff(std::size_t index) { return c_[index]; }

  /// d^alpha f at the base point.
  double derivative(const MultiIndex& alpha) const;
  double partial(int var) const;
  double second(int var_a, int var_b) const;

  Jet diff(int var) const;
  Jet truncated(int order) const;

  /// Inverse of diff: the jet F of order (order()+1) with dF/dx_var = *this
  /// for each var, given value F(0). Components must form a closed 1-form.
  static Jet antiderivative(double value, const std::array<Jet, kMaxVars>& gradient, int nvars);

  bool is_constant() const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);
  Jet& operator+=(double v) { c_[0] += v; return *this; }
  Jet& operator-=(double v) { c_[0] -= v; return *this; }
  Jet& operator*=(double v);
  Jet& operator/=(double v) { return *this *= 1.0 / v; }

  friend Jet operator*(const Jet& a, const Jet& b);

 private:
  int order_ = 0;
  std::array<double, kMaxTerms> c_{};
};

Jet operator-(const Jet& a);
inline Jet operator+(Jet a, const Jet& b) { return a += b; }
inline Jet operator-(Jet a, const Jet& b) { return a -= b; }
inline Jet operator/(Jet a, const Jet& b) { return a /= b; }
inline Jet operator+(Jet a, double v) { return a += v; }
inline Jet operator+(double v, Jet a) { return a += v; }
inline Jet operator-(Jet a, double v) { return a -= v; }
inline Jet operator-(double v, const Jet& a) { return -a + v; }
inline Jet operator*(Jet a, double v) { return a *= v; }
inline Jet operator*(double v, Jet a) { return a *= v; }
inline Jet operator/(Jet a, double v) { return a /= v; }
Jet operator/(double v, const Jet& a);

// Elementary functions. Domain violations throw std::domain_error.
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet sqrt(const Jet& a);
Jet pow(const Jet& a, double p);
Jet pow(const Jet& a, const Jet& p);
Jet recip(const Jet& a);

std::ostream& operator<<(std::ostream& os, const Jet& j);

/// Monomial exponents of coefficient `index` (graded ordering).
const MultiIndex& jet_monomial(std::size_t index);

/// Value plus first and second partials of a scalar, the second-order view
/// of a jet.
struct DiffScalar {
  double value = 0.0;
  std::vector<double> grad;
  std::vector<std::vector<double>> hess;

  static DiffScalar from_jet(const Jet& j, int nvars);
};

/// Complex-valued jet, stored as real and imaginary parts.
struct CJet {
  Jet re;
  Jet im;

  static CJet constant(std::complex<double> v, int order) {
    return {Jet::constant(v.real(), order), Jet::constant(v.imag(), order)};
  }
  int order() const { return std::min(re.order(), im.order()); }
  std::complex<double> value() const { return {re.value(), im.value()}; }
  CJet conj() const { return {re, -im}; }
  CJet diff(int var) const { return {re.diff(var), im.diff(var)}; }

  CJet& operator+=(const CJet& o) { re += o.re; im += o.im; return *this; }
  CJet& operator-=(const CJet& o) { re -= o.re; im -= o.im; return *this; }
};

inline CJet operator+(CJet a, const CJet& b) { return a += b; }
inline CJet operator-(CJet a, const CJet& b) { return a -= b; }
inline CJet operator-(const CJet& a) { return {-a.re, -a.im}; }
inline CJet operator*(const CJet& a, const CJet& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline CJet operator*(const Jet& a, const CJet& b) { return {a * b.re, a * b.im}; }
inline CJet operator*(const CJet& a, const Jet& b) { return b * a; }
inline CJet operator*(std::complex<double> z, const CJet& b) {
  return {z.real() * b.re - z.imag() * b.im, z.real() * b.im + z.imag() * b.re};
}

}  // namespace skewspin
