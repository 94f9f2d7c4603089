#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "random_expr.hpp"
#include "skewspin/expr.hpp"

using namespace skewspin;

namespace {

using testing::kXYZ;
using testing::RandomExpr;

double value_of(const std::string& src, std::map<std::string, double> params = {}) {
  const double p[3] = {0.0, 0.0, 0.0};
  return BoundExpr(parse(src), kXYZ, params).eval(p);
}

}  // namespace

TEST_CASE("parse classifies coordinates and parameters") {
  const Expr e = parse("c*x + d*y + e");
  CHECK(e.coordinates() == std::set<std::string>{"x", "y"});
  CHECK(e.parameters() == std::set<std::string>{"c", "d", "e"});

  const Expr zero = parse("0");
  CHECK(zero.node().op == Op::Number);
  CHECK(zero.node().number == 0.0);

  const Expr ex = parse("A*exp(sqrt(H)*x) + B*exp(-sqrt(H)*x)");
  CHECK(ex.parameters() == std::set<std::string>{"A", "B", "H"});
  CHECK(ex.coordinates() == std::set<std::string>{"x"});
}

TEST_CASE("precedence and associativity") {
  CHECK(value_of("2^3^2") == doctest::Approx(512.0));
  CHECK(value_of("-2^2") == doctest::Approx(-4.0));
  CHECK(value_of("8 - 3 - 2") == doctest::Approx(3.0));
  CHECK(value_of("8/4/2") == doctest::Approx(1.0));
  CHECK(value_of("2*3 + 4*5") == doctest::Approx(26.0));
  CHECK(value_of("2^-1") == doctest::Approx(0.5));
  CHECK(value_of("1.5e2 + .5") == doctest::Approx(150.5));
  CHECK(value_of("--3") == doctest::Approx(3.0));
}

TEST_CASE("syntax errors carry byte offsets") {
  try {
    parse("x + * y");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
  }
  CHECK_THROWS_AS(parse("(x + 1"), ParseError);
  CHECK_THROWS_AS(parse("x y"), ParseError);
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("exp x"), ParseError);
  CHECK_THROWS_AS(parse("x $ 2"), ParseError);
}

TEST_CASE("unknown identifiers list the declared symbols") {
  const std::set<std::string> declared{"x", "y", "c"};
  try {
    parse("c*x + q", &declared);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("'q'") != std::string::npos);
    CHECK(msg.find("c, x, y") != std::string::npos);
    CHECK(e.offset() == 6);
  }
}

TEST_CASE("eval_diff on x*y") {
  const DiffScalar d = eval_diff(parse("x*y"), {"x", "y"}, {2.0, 3.0}, {});
  CHECK(d.value == doctest::Approx(6.0));
  CHECK(d.grad[0] == doctest::Approx(3.0));
  CHECK(d.grad[1] == doctest::Approx(2.0));
  CHECK(d.hess[0][1] == doctest::Approx(1.0));
  CHECK(d.hess[0][0] == doctest::Approx(0.0));
}

TEST_CASE("eval_diff on exp(2*b*x) agrees with central differences") {
  const Expr e = parse("exp(2*b*x)");
  const std::map<std::string, double> params{{"b", 0.5}};
  const DiffScalar d = eval_diff(e, {"x"}, {1.0}, params);
  CHECK(d.value == doctest::Approx(std::exp(1.0)));
  CHECK(d.grad[0] == doctest::Approx(std::exp(1.0)));
  const BoundExpr bound(e, {"x"}, params);
  const double h = 1e-5;
  const double xp = 1.0 + h, xm = 1.0 - h;
  const double fd = (bound.eval(&xp) - bound.eval(&xm)) / (2 * h);
  CHECK(std::abs(fd - d.grad[0]) / std::abs(d.grad[0]) <= 1e-8);
}

TEST_CASE("evaluation faults name the subexpression") {
  CHECK_THROWS_AS(eval_diff(parse("x*q"), {"x"}, {1.0}, {}), EvalError);
  try {
    eval_diff(parse("1 + 1/(x - 1)"), {"x"}, {1.0}, {});
    FAIL("expected an evaluation error");
  } catch (const EvalError& e) {
    CHECK(e.subexpression() == "1/(x - 1)");
  }
  try {
    const double p[1] = {-2.0};
    BoundExpr(parse("3 + log(x)"), {"x"}, {}).eval(p);
    FAIL("expected an evaluation error");
  } catch (const EvalError& e) {
    CHECK(e.subexpression() == "log(x)");
  }
  try {
    const double p[1] = {-2.0};
    BoundExpr(parse("sqrt(x)"), {"x"}, {}).eval_jet(p, 2);
    FAIL("expected an evaluation error");
  } catch (const EvalError& e) {
    CHECK(e.subexpression() == "sqrt(x)");
  }
}

TEST_CASE("pretty printer uses minimal parentheses") {
  CHECK(parse("(a + b) + c").str() == "a + b + c");
  CHECK(parse("a + (b + c)").str() == "a + (b + c)");
  CHECK(parse("a - (b - c)").str() == "a - (b - c)");
  CHECK(parse("(a*b)^2").str() == "(a*b)^2");
  CHECK(parse("a^(b^c)").str() == "a^b^c");
  CHECK(parse("(a^b)^c").str() == "(a^b)^c");
  CHECK(parse("-(x*y)").str() == "-(x*y)");
  CHECK(parse("(-x)*y").str() == "-x*y");
  CHECK(Expr::binary(Op::Pow, Expr::number(-2.0), Expr::symbol("x")).str() == "(-2)^x");
}

TEST_CASE("round trip is a fixed point on 1000 random trees") {
  RandomExpr gen(12345);
  for (int i = 0; i < 1000; ++i) {
    std::uniform_int_distribution<int> depth(0, 6);
    const Expr e = gen.make(depth(gen.rng()));
    const std::string once = e.str();
    const Expr reparsed = parse(once);
    const std::string twice = reparsed.str();
    REQUIRE_MESSAGE(once == twice, once);
    CHECK(parse(twice) == reparsed);
  }
}

TEST_CASE("AD matches central differences on 1000 random expressions") {
  RandomExpr gen(2024);
  std::uniform_real_distribution<double> coord(0.3, 1.5);
  std::uniform_int_distribution<int> depth(1, 6);
  const double h = 1e-5;
  int accepted = 0, attempts = 0;
  while (accepted < 1000) {
    ++attempts;
    REQUIRE(attempts < 200000);
    const Expr e = gen.make(depth(gen.rng()));
    const BoundExpr bound(e, kXYZ, {});
    const double p[3] = {coord(gen.rng()), coord(gen.rng()), coord(gen.rng())};
    DiffScalar d;
    double f[3][3][3];
    try {
      d = DiffScalar::from_jet(bound.eval_jet(p, 2), 3);
      for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b)
          for (int c = -1; c <= 1; ++c) {
            const double q[3] = {p[0] + a * h, p[1] + b * h, p[2] + c * h};
            f[a + 1][b + 1][c + 1] = bound.eval(q);
          }
    } catch (const EvalError&) {
      continue;
    }
    // Keep to well-conditioned samples: finite, moderate size, and away
    // from the kinks of near-zero fractional powers.
    double scale = std::abs(d.value);
    bool ok = std::isfinite(d.value);
    for (int a = 0; a < 3; ++a) {
      ok = ok && std::isfinite(d.grad[a]);
      scale = std::max(scale, std::abs(d.grad[a]));
      for (int b = 0; b < 3; ++b) {
        ok = ok && std::isfinite(d.hess[a][b]);
        scale = std::max(scale, std::abs(d.hess[a][b]));
      }
    }
    for (auto& plane : f)
      for (auto& row : plane)
        for (double v : row) ok = ok && std::isfinite(v) && std::abs(v - d.value) < 1e-3 * std::max(1.0, scale);
    if (!ok || scale > 1e4) continue;
    const Jet third = bound.eval_jet(p, 3);
    double third_scale = 0.0;
    for (int i = jet_terms(2); i < jet_terms(3); ++i)
      third_scale = std::max(third_scale, std::abs(third.derivative(jet_monomial(i))));
    if (third_scale > 1e4) continue;
    ++accepted;
    const double rel = std::max(1.0, scale);
    auto at = [&](int a, int b, int c) { return f[a + 1][b + 1][c + 1]; };
    const double grad_fd[3] = {(at(1, 0, 0) - at(-1, 0, 0)) / (2 * h), (at(0, 1, 0) - at(0, -1, 0)) / (2 * h),
                               (at(0, 0, 1) - at(0, 0, -1)) / (2 * h)};
    for (int a = 0; a < 3; ++a) CHECK_MESSAGE(std::abs(grad_fd[a] - d.grad[a]) <= 1e-6 * rel, e.str());
    auto off = [](int axis, int s) {
      std::array<int, 3> o{0, 0, 0};
      o[axis] = s;
      return o;
    };
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        double fd;
        if (a == b) {
          const auto p1 = off(a, 1), m1 = off(a, -1);
          fd = (at(p1[0], p1[1], p1[2]) - 2 * d.value + at(m1[0], m1[1], m1[2])) / (h * h);
        } else {
          auto o = [&](int sa, int sb) {
            std::array<int, 3> k{0, 0, 0};
            k[a] = sa;
            k[b] = sb;
            return at(k[0], k[1], k[2]);
          };
          fd = (o(1, 1) - o(1, -1) - o(-1, 1) + o(-1, -1)) / (4 * h * h);
        }
        CHECK_MESSAGE(std::abs(fd - d.hess[a][b]) <= 1e-4 * rel, e.str());
      }
  }
}

TEST_CASE("symbolic differentiation agrees with AD") {
  const Expr e = parse("exp(z)*sin(x*y) + x^3/(1 + y^2) + sqrt(1 + z^2)*log(2 + x)");
  const double p[3] = {0.4, -0.7, 0.3};
  const BoundExpr bound(e, kXYZ, {});
  const Jet j = bound.eval_jet(p, 1);
  for (int v = 0; v < 3; ++v) {
    const BoundExpr dv(differentiate(e, kXYZ[v]), kXYZ, {});
    CHECK(dv.eval(p) == doctest::Approx(j.partial(v)).epsilon(1e-12));
  }
  CHECK(differentiate(parse("c*x + d"), "y").str() == "0");
  CHECK(differentiate(parse("x^y"), "y").str().find("log(x)") != std::string::npos);
}

TEST_CASE("substitute replaces symbols") {
  const Expr e = substitute(parse("a*x + b"), {{"a", parse("2")}, {"b", parse("y^2")}});
  CHECK(e.str() == "2*x + y^2");
}

TEST_CASE("evaluation is deterministic") {
  const Expr e = parse("sin(x)*exp(y) - z^2/3");
  const double p[3] = {0.1, 0.2, 0.3};
  const BoundExpr bound(e, kXYZ, {});
  const Jet a = bound.eval_jet(p, 4);
  const Jet b = bound.eval_jet(p, 4);
  for (int i = 0; i < kMaxTerms; ++i) CHECK(a.coeff(i) == b.coeff(i));
}
