#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "skewspin/expr.hpp"
#include "skewspin/geometry.hpp"

using namespace skewspin;

namespace {

FrameChart expr_chart(std::vector<std::string> coords, std::vector<Interval> bounds,
                      const std::vector<std::vector<std::string>>& frame) {
  std::vector<std::vector<ScalarField>> f;
  for (const auto& row : frame) {
    f.emplace_back();
    for (const auto& e : row) f.back().push_back(ScalarField::from_expr(parse(e), coords, {}));
  }
  return FrameChart::coordinate(std::move(coords), std::move(bounds), std::move(f));
}

FrameChart sphere2() {
  // Stereographic unit sphere: E_i = (1 + x^2 + y^2)/2 d_i.
  const std::string s = "(1 + x^2 + y^2)/2";
  return expr_chart({"x", "y"}, {{-0.8, 0.8}, {-0.8, 0.8}}, {{s, "0"}, {"0", s}});
}

FrameChart warped3() {
  // A non-diagonal, non-commuting frame: no symmetry hides sign errors.
  return expr_chart({"x", "y", "z"}, {{-0.5, 0.5}, {-0.5, 0.5}, {-0.5, 0.5}},
                    {{"exp(-z)", "0.3*y", "0"}, {"0", "exp(-z)*(1 + 0.2*x^2)", "0.1"}, {"0.2*x*y", "0", "1 + 0.1*x"}});
}

FrameChart hyperbolic_group() {
  std::vector<std::vector<std::vector<ScalarField>>> c(3, std::vector<std::vector<ScalarField>>(3, std::vector<ScalarField>(3)));
  c[0][2][0] = ScalarField::constant(1.0);
  c[2][0][0] = ScalarField::constant(-1.0);
  c[1][2][1] = ScalarField::constant(1.0);
  c[2][1][1] = ScalarField::constant(-1.0);
  return FrameChart::structural({"x", "y", "z"}, {{-1, 1}, {-1, 1}, {-1, 1}}, c);
}

}  // namespace

TEST_CASE("flat coordinate frame has vanishing connection") {
  const FrameChart flat = expr_chart({"x", "y", "z"}, {{-1, 1}, {-1, 1}, {-1, 1}},
                                     {{"1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}});
  const ConnectionData conn = christoffel(flat, {0.2, 0.1, -0.3}, 3);
  const CurvatureData curv = riemann(conn);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(curv.ricci[i][j].value() == 0.0);
      for (int k = 0; k < 3; ++k) CHECK(conn.gamma[i][j][k].value() == 0.0);
    }
}

TEST_CASE("round sphere has sectional curvature one") {
  const FrameChart s = sphere2();
  for (const Point& p : s.grid(5)) {
    const ConnectionData conn = christoffel(s, p, 2);
    CHECK(riemann(conn).r1212() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("scaled sphere curvature matches the metric oracle") {
  const FrameChart s = expr_chart({"x", "y"}, {{-0.8, 0.8}, {-0.8, 0.8}},
                                  {{"0.7*(1 + x^2 + y^2)", "0"}, {"0", "0.7*(1 + x^2 + y^2)"}});
  const oracle::Curvature o(s);
  for (const Point& p : s.grid(4)) {
    const double r = riemann(christoffel(s, p, 2)).r1212();
    CHECK(r == doctest::Approx(4 * 0.49).epsilon(1e-12));
    CHECK(std::abs(r - o.r1212(p)) < 1e-4);
  }
}

TEST_CASE("Ricci tensor of a generic 3D frame matches the metric oracle") {
  const FrameChart w = warped3();
  const oracle::Curvature o(w);
  for (const Point& p : w.grid(3)) {
    const CurvatureData curv = riemann(christoffel(w, p, 2));
    const auto ric = o.ricci(p);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(std::abs(curv.ricci[i][j].value() - ric[i][j]) < 1e-4);
  }
}

TEST_CASE("curvature symmetries, Bianchi, Jacobi and Koszul antisymmetry") {
  const FrameChart w = warped3();
  for (const Point& p : w.grid(3)) {
    const ConnectionData conn = christoffel(w, p, 2);
    const CurvatureData curv = riemann(conn);
    CHECK(curvature_symmetry_residual(curv) < 1e-10);
    CHECK(bianchi_residual(curv) < 1e-10);
    CHECK(jacobi_residual(conn) < 1e-10);
    CHECK(koszul_antisymmetry_residual(conn) < 1e-12);
  }
}

TEST_CASE("AD and FD connection coefficients agree") {
  const FrameChart w = warped3();
  EvalOptions fd;
  fd.engine = Engine::fd;
  const Point p{0.1, -0.2, 0.15};
  const ConnectionData a = christoffel(w, p, 2), f = christoffel(w, p, 2, fd);
  const CurvatureData ra = riemann(a), rf = riemann(f);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(std::abs(ra.ricci[i][j].value() - rf.ricci[i][j].value()) < 1e-4);
      for (int k = 0; k < 3; ++k) CHECK(std::abs(a.gamma[i][j][k].value() - f.gamma[i][j][k].value()) < 1e-6);
    }
}

TEST_CASE("hyperbolic group connection table") {
  const FrameChart h = hyperbolic_group();
  const ConnectionData conn = christoffel(h, h.center(), 2);
  double expect[3][3][3] = {};
  expect[0][0][2] = -1;  // Gamma_11^3
  expect[1][1][2] = -1;  // Gamma_22^3
  expect[0][2][0] = 1;   // Gamma_13^1
  expect[1][2][1] = 1;   // Gamma_23^2
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) CHECK(conn.gamma[i][j][k].value() == expect[i][j][k]);
  const CurvatureData curv = riemann(conn);
  CHECK(curv.scal.value() == doctest::Approx(-6.0).epsilon(1e-14));
  for (int i = 0; i < 3; ++i) CHECK(curv.ricci[i][i].value() == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(schouten_symmetry_residual(h, 3) < 1e-12);
}

TEST_CASE("hyperbolic group coordinate realisation reproduces the brackets") {
  const FrameChart h = expr_chart({"x", "y", "z"}, {{-1, 1}, {-1, 1}, {-1, 1}},
                                  {{"exp(z)", "0", "0"}, {"0", "exp(z)", "0"}, {"0", "0", "-1"}});
  const FrameChart s = hyperbolic_group();
  const JetCube declared = s.declared_structure(0);
  for (const Point& p : h.grid(3)) {
    const ConnectionData conn = christoffel(h, p, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) CHECK(std::abs(conn.c[i][j][k].value() - declared[i][j][k].value()) < 1e-12);
    CHECK(riemann(conn).scal.value() == doctest::Approx(-6.0).epsilon(1e-12));
  }
  CHECK(schouten_symmetry_residual(h, 3) < 1e-10);
}

TEST_CASE("Schouten symmetry fails for a non conformally flat frame") {
  // Berger-type left-invariant frame on SU(2): [E1,E2] = 2E3 scaled anisotropically.
  std::vector<std::vector<std::vector<ScalarField>>> c(3, std::vector<std::vector<ScalarField>>(3, std::vector<ScalarField>(3)));
  const double k[3] = {1.0, 1.0, 3.0};
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, l = (i + 2) % 3;
    c[i][j][l] = ScalarField::constant(2 * k[l] / (k[i] * k[j]));
    c[j][i][l] = ScalarField::constant(-2 * k[l] / (k[i] * k[j]));
  }
  const FrameChart b = FrameChart::structural({"x", "y", "z"}, {{-1, 1}, {-1, 1}, {-1, 1}}, c);
  const ConnectionData conn = christoffel(b, b.center(), 3);
  CHECK(jacobi_residual(conn) < 1e-12);
  CHECK(schouten_symmetry_residual(b, 3) > 1e-2);
}

TEST_CASE("exterior derivative routes agree and d of an exact form vanishes") {
  const FrameChart w = warped3();
  const ScalarField f = ScalarField::from_expr(parse("sin(x)*y + z^2*x"), {"x", "y", "z"}, {});
  for (const Point& p : w.grid(3)) {
    const ConnectionData conn = christoffel(w, p, 2);
    const Jet fj = f.jet(p, 2);
    JetVec df;
    for (int i = 0; i < 3; ++i) df[i] = conn.frame_derivative(fj, i);
    CHECK(two_form_norm(d_oneform(conn, df), 3) < 1e-12);
    JetVec alpha{fj.truncated(1), fj.truncated(1) * fj.truncated(1), Jet::constant(1.0, 1)};
    const JetMat d1 = d_oneform(conn, alpha), d2 = d_oneform_brackets(conn, alpha);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(std::abs(d1[i][j].value() - d2[i][j].value()) < 1e-12);
  }
}

TEST_CASE("Hodge star orientations") {
  const std::array<double, 3> e1{1, 0, 0}, e2{0, 1, 0}, e3{0, 0, 1};
  const auto f = hodge_star3(e1, e2, Orientation::frame);
  CHECK(f == e3);
  const auto c = hodge_star3(e1, e2, Orientation::clifford);
  CHECK(c[2] == -1.0);
  // -1/2 *(du ^ e1) with du = e3 (frame orientation) is -1/2 e2.
  const auto a = hodge_star3(e3, e1, Orientation::frame);
  CHECK(-0.5 * a[1] == -0.5);
}

TEST_CASE("conformal rescaling scales curvature") {
  // e^{2u} g with u constant divides curvature by e^{2u}.
  const FrameChart s = sphere2().rescaled(ScalarField::constant(std::log(2.0)));
  const ConnectionData conn = christoffel(s, {0.1, 0.2, 0}, 2);
  CHECK(riemann(conn).r1212() == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("diagonal metric charts are orthonormal") {
  const FrameChart d = FrameChart::diagonal_metric({"x", "y"}, {{0.5, 1.5}, {-1, 1}}, {parse("x^2"), parse("exp(y)")}, {});
  for (const Point& p : d.grid(4)) CHECK(d.orthonormality_residual(p) < 1e-14);
}

TEST_CASE("structural charts reject non-constant data") {
  const FrameChart h = hyperbolic_group();
  const ConnectionData conn = christoffel(h, h.center(), 1);
  CHECK_THROWS_AS(conn.frame_derivative(Jet::variable(0.0, 0, 1), 0), GeometryError);
  CHECK_THROWS_AS(h.rescaled(ScalarField::constant(1.0)), GeometryError);
}

TEST_CASE("grid stays inside shrunk bounds") {
  const FrameChart s = sphere2();
  const auto g = s.grid(21);
  CHECK(g.size() == 441);
  for (const Point& p : g) {
    CHECK(std::abs(p[0]) <= 0.8 * 0.9 + 1e-12);
    CHECK(s.contains(p));
  }
}
