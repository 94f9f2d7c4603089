#include "skewspin/jet.hpp"

#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>

namespace skewspin {
namespace {

struct ProductTerm {
  std::uint8_t a, b, out;
};

struct Tables {
  std::array<MultiIndex, kMaxTerms> monomial{};
  std::array<int, kMaxTerms> degree{};
  int index_of[kMaxOrder + 1][kMaxOrder + 1][kMaxOrder + 1];
  std::array<std::vector<ProductTerm>, kMaxOrder + 1> products;
  std::array<double, kMaxTerms> factorial_weight{};  // alpha!

  Tables() {
    for (auto& plane : index_of)
      for (auto& row : plane)
        for (auto& v : row) v = -1;
    int n = 0;
    for (int d = 0; d <= kMaxOrder; ++d)
      for (int a = d; a >= 0; --a)
        for (int b = d - a; b >= 0; --b) {
          const int c = d - a - b;
          monomial[n] = {a, b, c};
          degree[n] = d;
          index_of[a][b][c] = n;
          ++n;
        }
    auto fact = [](int k) {
      double f = 1.0;
      for (int i = 2; i <= k; ++i) f *= i;
      return f;
    };
    for (int i = 0; i < kMaxTerms; ++i) {
      const auto& m = monomial[i];
      factorial_weight[i] = fact(m[0]) * fact(m[1]) * fact(m[2]);
    }
    for (int order = 0; order <= kMaxOrder; ++order) {
      const int terms = jet_terms(order);
      for (int i = 0; i < terms; ++i)
        for (int j = 0; j < terms; ++j) {
          if (degree[i] + degree[j] > order) continue;
          const auto& mi = monomial[i];
          const auto& mj = monomial[j];
          const int k = index_of[mi[0] + mj[0]][mi[1] + mj[1]][mi[2] + mj[2]];
          products[order].push_back({static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j),
                                     static_cast<std::uint8_t>(k)});
        }
    }
  }

  int index(const MultiIndex& m) const {
    if (m[0] < 0 || m[1] < 0 || m[2] < 0) return -1;
    if (m[0] + m[1] + m[2] > kMaxOrder) return -1;
    return index_of[m[0]][m[1]][m[2]];
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

void check_order(int order) {
  if (order < 0 || order > kMaxOrder) throw std::out_of_range("jet order out of range");
}

// f(u) from the derivatives f^(k)(u0), k = 0..order, by Taylor composition.
Jet compose(const Jet& u, const std::array<double, kMaxOrder + 1>& fk) {
  const int order = u.order();
  Jet delta = u;
  delta.coeff(0) = 0.0;
  Jet out = Jet::constant(fk[0], order);
  Jet power = delta;
  double inv_fact = 1.0;
  for (int k = 1; k <= order; ++k) {
    inv_fact /= k;
    out += power * (fk[k] * inv_fact);
    if (k < order) power = power * delta;
  }
  return out;
}

}  // namespace

int jet_terms(int order) {
  check_order(order);
  return (order + 1) * (order + 2) * (order + 3) / 6;
}

const MultiIndex& jet_monomial(std::size_t index) { return tables().monomial.at(index); }

Jet Jet::constant(double value, int order) {
  check_order(order);
  Jet j;
  j.order_ = order;
  j.c_[0] = value;
  return j;
}

Jet Jet::variable(double value, int var, int order) {
  if (var < 0 || var >= kMaxVars) throw std::out_of_range("jet variable index");
  Jet j = constant(value, order);
  if (order >= 1) {
    MultiIndex m{0, 0, 0};
    m[var] = 1;
    j.c_[tables().index(m)] = 1.0;
  }
  return j;
}

Jet Jet::from_derivatives(const std::vector<double>& derivs, int order) {
  Jet j = constant(0.0, order);
  const int terms = jet_terms(order);
  if (static_cast<int>(derivs.size()) < terms) throw std::invalid_argument("too few derivatives for jet order");
  for (int i = 0; i < terms; ++i) j.c_[i] = derivs[i] / tables().factorial_weight[i];
  return j;
}

double Jet::derivative(const MultiIndex& alpha) const {
  const int idx = tables().index(alpha);
  if (idx < 0 || alpha[0] + alpha[1] + alpha[2] > order_) throw std::out_of_range("derivative beyond jet order");
  return c_[idx] * tables().factorial_weight[idx];
}

double Jet::partial(int var) const {
  MultiIndex m{0, 0, 0};
  m[var] = 1;
  return derivative(m);
}

double Jet::second(int var_a, int var_b) const {
  MultiIndex m{0, 0, 0};
  m[var_a] += 1;
  m[var_b] += 1;
  return derivative(m);
}

Jet Jet::diff(int var) const {
  if (order_ == 0) throw std::logic_error("cannot differentiate an order-0 jet");
  const auto& t = tables();
  Jet out = constant(0.0, order_ - 1);
  const int terms = jet_terms(order_ - 1);
  for (int i = 0; i < terms; ++i) {
    MultiIndex up = t.monomial[i];
    up[var] += 1;
    out.c_[i] = up[var] * c_[t.index(up)];
  }
  return out;
}

Jet Jet::truncated(int order) const {
  if (order > order_) throw std::logic_error("cannot raise jet order");
  Jet out = constant(0.0, order);
  const int terms = jet_terms(order);
  for (int i = 0; i < terms; ++i) out.c_[i] = c_[i];
  return out;
}

Jet Jet::antiderivative(double value, const std::array<Jet, kMaxVars>& gradient, int nvars) {
  int order = kMaxOrder;
  for (int v = 0; v < nvars; ++v) order = std::min(order, gradient[v].order() + 1);
  const auto& t = tables();
  Jet out = constant(value, order);
  const int terms = jet_terms(order);
  for (int i = 1; i < terms; ++i) {
    const MultiIndex& m = t.monomial[i];
    int var = 0;
    while (m[var] == 0) ++var;
    if (var >= nvars) continue;
    MultiIndex down = m;
    down[var] -= 1;
    out.c_[i] = gradient[var].c_[t.index(down)] / m[var];
  }
  return out;
}

bool Jet::is_constant() const {
  const int terms = jet_terms(order_);
  for (int i = 1; i < terms; ++i)
    if (c_[i] != 0.0) return false;
  return true;
}

Jet& Jet::operator+=(const Jet& o) {
  order_ = std::min(order_, o.order_);
  const int terms = jet_terms(order_);
  for (int i = 0; i < terms; ++i) c_[i] += o.c_[i];
  for (int i = terms; i < kMaxTerms; ++i) c_[i] = 0.0;
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  order_ = std::min(order_, o.order_);
  const int terms = jet_terms(order_);
  for (int i = 0; i < terms; ++i) c_[i] -= o.c_[i];
  for (int i = terms; i < kMaxTerms; ++i) c_[i] = 0.0;
  return *this;
}

Jet& Jet::operator*=(double v) {
  const int terms = jet_terms(order_);
  for (int i = 0; i < terms; ++i) c_[i] *= v;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  const int order = std::min(a.order_, b.order_);
  Jet out = Jet::constant(0.0, order);
  for (const auto& p : tables().products[order]) out.c_[p.out] += a.c_[p.a] * b.c_[p.b];
  return out;
}

Jet& Jet::operator*=(const Jet& o) { return *this = *this * o; }
Jet& Jet::operator/=(const Jet& o) { return *this = *this * recip(o); }

Jet operator-(const Jet& a) { return a * -1.0; }
Jet operator/(double v, const Jet& a) { return recip(a) * v; }

Jet exp(const Jet& a) {
  std::array<double, kMaxOrder + 1> fk;
  fk.fill(std::exp(a.value()));
  return compose(a, fk);
}

Jet log(const Jet& a) {
  const double x = a.value();
  if (!(x > 0.0)) throw std::domain_error("log of non-positive value");
  std::array<double, kMaxOrder + 1> fk{};
  fk[0] = std::log(x);
  double f = 1.0;  // (k-1)!
  for (int k = 1; k <= kMaxOrder; ++k) {
    if (k > 1) f *= (k - 1);
    fk[k] = ((k % 2) ? 1.0 : -1.0) * f / std::pow(x, k);
  }
  return compose(a, fk);
}

Jet sin(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const std::array<double, 4> cycle{s, c, -s, -c};
  std::array<double, kMaxOrder + 1> fk;
  for (int k = 0; k <= kMaxOrder; ++k) fk[k] = cycle[k % 4];
  return compose(a, fk);
}

Jet cos(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const std::array<double, 4> cycle{c, -s, -c, s};
  std::array<double, kMaxOrder + 1> fk;
  for (int k = 0; k <= kMaxOrder; ++k) fk[k] = cycle[k % 4];
  return compose(a, fk);
}

Jet recip(const Jet& a) {
  const double x = a.value();
  if (x == 0.0) throw std::domain_error("division by zero");
  std::array<double, kMaxOrder + 1> fk{};
  double f = 1.0;  // k!
  for (int k = 0; k <= kMaxOrder; ++k) {
    if (k > 0) f *= k;
    fk[k] = ((k % 2) ? -1.0 : 1.0) * f / std::pow(x, k + 1);
  }
  return compose(a, fk);
}

Jet pow(const Jet& a, double p) {
  const double x = a.value();
  if (p == std::round(p) && std::abs(p) <= 64.0) {
    int n = static_cast<int>(std::abs(p));
    Jet base = a;
    Jet out = Jet::constant(1.0, a.order());
    while (n > 0) {
      if (n & 1) out = out * base;
      n >>= 1;
      if (n) base = base * base;
    }
    return p < 0 ? recip(out) : out;
  }
  if (x < 0.0) throw std::domain_error("fractional power of negative value");
  if (x == 0.0) {
    if (a.order() == 0 && p > 0.0) return Jet::constant(0.0, 0);
    throw std::domain_error("fractional power not differentiable at zero");
  }
  std::array<double, kMaxOrder + 1> fk{};
  double falling = 1.0;
  for (int k = 0; k <= kMaxOrder; ++k) {
    fk[k] = falling * std::pow(x, p - k);
    falling *= (p - k);
  }
  return compose(a, fk);
}

Jet pow(const Jet& a, const Jet& p) {
  if (p.is_constant()) return pow(a, p.value()).truncated(std::min(a.order(), p.order()));
  return exp(p * log(a));
}

Jet sqrt(const Jet& a) {
  if (a.value() < 0.0) throw std::domain_error("sqrt of negative value");
  return pow(a, 0.5);
}

std::ostream& operator<<(std::ostream& os, const Jet& j) {
  os << "Jet(order=" << j.order() << ", value=" << j.value() << ')';
  return os;
}

DiffScalar DiffScalar::from_jet(const Jet& j, int nvars) {
  DiffScalar d;
  d.value = j.value();
  d.grad.assign(nvars, 0.0);
  d.hess.assign(nvars, std::vector<double>(nvars, 0.0));
  if (j.order() >= 1)
    for (int a = 0; a < nvars; ++a) d.grad[a] = j.partial(a);
  if (j.order() >= 2)
    for (int a = 0; a < nvars; ++a)
      for (int b = 0; b < nvars; ++b) d.hess[a][b] = j.second(a, b);
  return d;
}

}  // namespace skewspin
