#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "skewspin/field.hpp"
#include "skewspin/jet.hpp"

using namespace skewspin;

namespace {

Jet var(double v, int i, int order = 4) { return Jet::variable(v, i, order); }

}  // namespace

TEST_CASE("monomial table is graded and complete") {
  CHECK(jet_terms(0) == 1);
  CHECK(jet_terms(1) == 4);
  CHECK(jet_terms(2) == 10);
  CHECK(jet_terms(4) == kMaxTerms);
  int prev = 0;
  for (int i = 0; i < kMaxTerms; ++i) {
    const auto& m = jet_monomial(i);
    const int d = m[0] + m[1] + m[2];
    CHECK(d >= prev);
    prev = d;
  }
}

TEST_CASE("product rule for x*y") {
  const Jet f = var(2.0, 0) * var(3.0, 1);
  CHECK(f.value() == doctest::Approx(6.0));
  CHECK(f.partial(0) == doctest::Approx(3.0));
  CHECK(f.partial(1) == doctest::Approx(2.0));
  CHECK(f.second(0, 1) == doctest::Approx(1.0));
  CHECK(f.second(0, 0) == doctest::Approx(0.0));
}

TEST_CASE("univariate elementary functions match closed-form derivatives") {
  const double x0 = 0.7;
  const Jet x = var(x0, 0);
  auto d = [](const Jet& j, int k) { return j.derivative({k, 0, 0}); };

  const Jet e = exp(x * 2.0);
  for (int k = 0; k <= 4; ++k) CHECK(d(e, k) == doctest::Approx(std::pow(2.0, k) * std::exp(2 * x0)));

  const Jet l = log(x);
  CHECK(d(l, 0) == doctest::Approx(std::log(x0)));
  CHECK(d(l, 1) == doctest::Approx(1 / x0));
  CHECK(d(l, 2) == doctest::Approx(-1 / (x0 * x0)));
  CHECK(d(l, 3) == doctest::Approx(2 / std::pow(x0, 3)));
  CHECK(d(l, 4) == doctest::Approx(-6 / std::pow(x0, 4)));

  const Jet s = sin(x);
  const Jet c = cos(x);
  CHECK(d(s, 3) == doctest::Approx(-std::cos(x0)));
  CHECK(d(c, 4) == doctest::Approx(std::cos(x0)));
  CHECK(d(s * s + c * c, 2) == doctest::Approx(0.0).epsilon(1e-12));

  const Jet r = sqrt(x);
  CHECK(d(r, 2) == doctest::Approx(-0.25 * std::pow(x0, -1.5)));
  const Jet q = pow(x, -3.0);
  CHECK(d(q, 2) == doctest::Approx(12.0 * std::pow(x0, -5.0)));
  const Jet inv = 1.0 / x;
  CHECK(d(inv, 3) == doctest::Approx(-6.0 / std::pow(x0, 4)));
}

TEST_CASE("mixed partials of a composite function") {
  const double x0 = 0.3, y0 = -0.4, z0 = 1.1;
  const Jet x = var(x0, 0), y = var(y0, 1), z = var(z0, 2);
  const Jet f = exp(x * y) * sin(z);
  // d^3 f / dx dy dz = (1 + x y) e^{xy} cos z
  CHECK(f.derivative({1, 1, 1}) == doctest::Approx((1 + x0 * y0) * std::exp(x0 * y0) * std::cos(z0)));
  // d^4 f / dx^2 dy^2 = (2 + 4xy + x^2y^2) e^{xy} sin z
  const double p = x0 * y0;
  CHECK(f.derivative({2, 2, 0}) == doctest::Approx((2 + 4 * p + p * p) * std::exp(p) * std::sin(z0)));
}

TEST_CASE("diff lowers the order and antiderivative inverts it") {
  const Jet x = var(0.2, 0), y = var(0.5, 1), z = var(-0.3, 2);
  const Jet f = exp(x) * cos(y * z) + x * y * y;
  const std::array<Jet, kMaxVars> grad{f.diff(0), f.diff(1), f.diff(2)};
  CHECK(grad[0].order() == 3);
  const Jet g = Jet::antiderivative(f.value(), grad, 3);
  CHECK(g.order() == 4);
  for (int i = 0; i < kMaxTerms; ++i) CHECK(g.coeff(i) == doctest::Approx(f.coeff(i)).epsilon(1e-13));
}

TEST_CASE("mixed-order arithmetic keeps the lower order") {
  const Jet a = var(1.0, 0, 4);
  const Jet b = var(1.0, 1, 2);
  CHECK((a + b).order() == 2);
  CHECK((a * b).order() == 2);
}

TEST_CASE("domain violations throw") {
  CHECK_THROWS_AS(log(Jet::constant(-1.0, 2)), std::domain_error);
  CHECK_THROWS_AS(recip(Jet::constant(0.0, 2)), std::domain_error);
  CHECK_THROWS_AS(sqrt(Jet::constant(-1.0, 1)), std::domain_error);
  CHECK_THROWS_AS(pow(Jet::constant(-2.0, 1), 0.5), std::domain_error);
  CHECK_THROWS_AS(Jet::constant(1.0, 0).diff(0), std::logic_error);
  CHECK(pow(Jet::constant(-2.0, 2), 3.0).value() == doctest::Approx(-8.0));
}

TEST_CASE("finite-difference jets reproduce AD jets") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  auto f_jet = [](const Point& p, int order) {
    const Jet x = Jet::variable(p[0], 0, order), y = Jet::variable(p[1], 1, order), z = Jet::variable(p[2], 2, order);
    return exp(x * 0.5) * sin(y + z * z) + x * y * z;
  };
  auto f_val = [&](const Point& p) { return f_jet(p, 0).value(); };
  for (int trial = 0; trial < 20; ++trial) {
    const Point p{u(rng), u(rng), u(rng)};
    const Jet ad = f_jet(p, 3);
    const Jet fd = finite_difference_jet(f_val, p, 3, 3, 1e-4);
    for (int i = 0; i < jet_terms(3); ++i) {
      const auto& m = jet_monomial(i);
      const int deg = m[0] + m[1] + m[2];
      const double tol = deg <= 1 ? 1e-7 : (deg == 2 ? 1e-6 : 1e-4);
      CHECK(std::abs(ad.derivative(m) - fd.derivative(m)) < tol);
    }
  }
}

TEST_CASE("DiffScalar view is symmetric") {
  const Jet x = var(0.4, 0), y = var(0.9, 1);
  const DiffScalar d = DiffScalar::from_jet(sin(x * y) * y, 2);
  CHECK(d.hess[0][1] == doctest::Approx(d.hess[1][0]));
  CHECK(d.grad.size() == 2);
}
