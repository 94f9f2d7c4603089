#include "skewspin/catalog.hpp"

#include <charconv>
#include <cmath>
#include <set>

#include <boost/math/quadrature/gauss.hpp>

#include "skewspin/expr.hpp"

namespace skewspin {
namespace {

const Spinor kPsi0{Complex(0.6, 0.0), Complex(0.0, 0.8)};

// ------------------------------------------------------------------ params

double parse_number(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && last[-1] == ' ') --last;
  if (first < last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last)
    throw std::invalid_argument("parameter '" + key + "' expects a number, got '" + text + "'");
  return v;
}

struct Params {
  std::map<std::string, std::string> raw;

  double num(const std::string& k) const { return parse_number(k, raw.at(k)); }

  /// A parameter holding an expression in the given coordinates.
  Expr expr(const std::string& k, const std::vector<std::string>& coords) const {
    const std::set<std::string> declared(coords.begin(), coords.end());
    try {
      return parse(raw.at(k), &declared);
    } catch (const ParseError& e) {
      throw std::invalid_argument("parameter '" + k + "': " + e.what());
    }
  }
};

Params resolve(const std::string& entry, const std::vector<ParamSpec>& schema,
               const std::map<std::string, std::string>& overrides) {
  Params p;
  for (const auto& s : schema) p.raw[s.name] = s.default_value;
  for (const auto& [k, v] : overrides) {
    if (!p.raw.count(k)) {
      std::string known;
      for (const auto& s : schema) known += (known.empty() ? "" : ", ") + s.name;
      throw std::invalid_argument("unknown parameter '" + k + "' for " + entry +
                                  (known.empty() ? " (it takes no parameters)" : "; known: " + known));
    }
    p.raw[k] = v;
  }
  return p;
}

std::optional<double> const_value(const Expr& e) {
  if (!e.free_symbols().empty()) return std::nullopt;
  return ScalarField::from_expr(e, {}, {}).value({});
}

ScalarField field(const Expr& e, const std::vector<std::string>& coords) { return ScalarField::from_expr(e, coords, {}); }

ScalarField field(const std::string& src, const std::vector<std::string>& coords,
                  const std::map<std::string, double>& params = {}) {
  return ScalarField::from_expr(parse(src), coords, params);
}

std::vector<std::vector<ScalarField>> identity_frame(int dim) {
  std::vector<std::vector<ScalarField>> f(dim, std::vector<ScalarField>(dim));
  for (int i = 0; i < dim; ++i) f[i][i] = ScalarField::constant(1.0);
  return f;
}

std::vector<std::vector<ScalarField>> diagonal_frame(const std::vector<ScalarField>& d) {
  std::vector<std::vector<ScalarField>> f(d.size(), std::vector<ScalarField>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) f[i][i] = d[i];
  return f;
}

CheckResult with_values(CheckResult c, const std::map<std::string, double>& values, const std::string& note = "") {
  for (const auto& [k, v] : values) c.values[k] = v;
  if (!note.empty()) c.note = note;
  return c;
}

// ------------------------------------------------------------------ spinors

SpinorJet constant_jet(const Spinor& s, int order) {
  return {{CJet::constant(s[0], order), CJet::constant(s[1], order)}};
}

/// (1 + r^2)^(-1/2) (1 + c (x V1 + y V2)) psi0 with Clifford-type matrices V.
SpinorSection stereographic_spinor(const Spinor& psi0, Complex c, const Mat2& v1, const Mat2& v2, int x_var, int y_var,
                                   double r2_sign, const std::string& label) {
  return SpinorSection::from_function(
      [=](const Point& p, int order, const EvalOptions&) {
        const Jet x = Jet::variable(p[x_var], x_var, order), y = Jet::variable(p[y_var], y_var, order);
        const Jet pre = pow(1.0 + r2_sign * (x * x + y * y), -0.5);
        const SpinorJet base = pre * constant_jet(psi0, order);
        SpinorJet out = base;
        out += c * (x * (v1 * base));
        out += c * (y * (v2 * base));
        return out;
      },
      3, label);
}

SpinorSection scaled_sum(const SpinorSection& phi, const Mat2& m, double s, double scale, const std::string& label) {
  return SpinorSection::from_function(
      [=](const Point& p, int order, const EvalOptions& opts) {
        const SpinorJet f = phi.jet(p, order, opts);
        SpinorJet out = f;
        out += Complex(s) * (m * f);
        return Complex(scale) * out;
      },
      3, label);
}

// ------------------------------------------------------------------ suites

std::vector<CheckResult> flipped(std::vector<CheckResult> checks) {
  for (auto& c : checks) c.name = "sign-flipped frame: " + c.name;
  return checks;
}

CheckResult sign_covariance(const std::vector<CheckResult>& a, const std::vector<CheckResult>& b, const std::string& what) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size() && k < b.size(); ++k) {
    const double d = std::abs(a[k].residual - b[k].residual);
    worst = std::isnan(d) ? d : std::max(worst, d);
  }
  CheckResult c = make_check("sign covariance of the " + what + " residuals under (xi,e1,e2,b) -> (-xi,e2,e1,-b)",
                             "the equations above remain the same", worst, 1e-10, a.empty() ? 0 : a[0].grid_points);
  c.engine = a.empty() ? "ad" : a[0].engine;
  return c;
}

}  // namespace

// ------------------------------------------------------------------ entry

std::vector<std::string> CatalogEntry::suite_names() const {
  std::vector<std::string> out;
  for (const auto& [n, fn] : suites)
    if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
  return out;
}

bool CatalogEntry::has_suite(const std::string& suite) const {
  for (const auto& s : suites)
    if (s.first == suite) return true;
  return false;
}

void CatalogEntry::add_suite(const std::string& suite, SuiteFn fn) { suites.emplace_back(suite, std::move(fn)); }

std::vector<CheckResult> CatalogEntry::run(const std::string& suite, const SuiteContext& ctx) const {
  if (suite != "all" && std::find(kSuiteNames.begin(), kSuiteNames.end(), suite) == kSuiteNames.end())
    throw std::invalid_argument("unknown suite '" + suite + "'");
  std::vector<CheckResult> out;
  for (const auto& [name, fn] : suites) {
    if (suite != "all" && name != suite) continue;
    try {
      for (auto& c : fn(ctx)) out.push_back(std::move(c));
    } catch (const std::exception& e) {
      out.push_back(failed_check(name + " suite", "", 0.0, e.what()));
    }
  }
  return out;
}

SpinorSection sphere_killing_spinor(const Spinor& psi0, double sign) {
  const CliffordRep rep = CliffordRep::dim2();
  return stereographic_spinor(psi0, Complex(sign), rep.gamma(0), rep.gamma(1), 0, 1, 1.0, "phi");
}

SpinorSection hyperbolic_killing_spinor(const Spinor& psi0, double sign) {
  const CliffordRep rep = CliffordRep::dim2();
  return stereographic_spinor(psi0, Complex(0.0, sign), rep.gamma(0), rep.gamma(1), 0, 1, -1.0, "phi");
}

void add_standard_suites(CatalogEntry& e) {
  if (!e.chart) return;
  const FrameChart chart = *e.chart;
  const int dim = chart.dim();
  const std::optional<SpinorSection> psi = e.psi;
  const std::optional<EndoField> a = e.a;
  const KillingMode mode = e.mode;

  if (psi && a) {
    e.add_suite("skew", [=](const SuiteContext& c) {
      std::vector<CheckResult> out;
      out.push_back(skew_killing_residual(chart, *psi, *a, mode, c.grid, c.tol.ad(1e-7)));
      out.push_back(metric_compatibility(chart, *psi, c.grid, c.tol.ad(1e-8)));
      out.push_back(dirac_consistency(chart, *psi, c.grid, c.tol.ad(1e-10)));
      if (dim == 2 && mode == KillingMode::real)
        for (auto& r : dirac_remark_2d(chart, *psi, *a, c.grid, c.tol.ad(1e-6))) out.push_back(r);
      if (dim == 3) {
        out.push_back(dirac_skew_3d(chart, *psi, *a, c.grid, c.tol.ad(1e-7)));
        out.push_back(skew_structure_3d(chart, *a, c.grid, c.tol.ad(1e-10)));
      }
      return out;
    });
  }

  e.add_suite("curvature", [=](const SuiteContext& c) {
    std::vector<CheckResult> out;
    if (psi) out.push_back(ricci_identity(chart, *psi, c.grid, c.tol.ad(1e-6)));
    out.push_back(sweep("curvature symmetries and first Bianchi identity", "R(X,Y) = nabla_X nabla_Y - ...",
                        c.tol.ad(1e-10), chart, c.grid, [&](const Point& p) {
                          const CurvatureData curv = riemann(christoffel(chart, p, 2, c.grid.eval));
                          return std::max(curvature_symmetry_residual(curv), bianchi_residual(curv));
                        }));
    if (dim == 3) {
      out.push_back(sweep("Jacobi identity of the structure constants", "[e_i,e_j] = sum c_ij^k e_k", c.tol.ad(1e-10),
                          chart, c.grid, [&](const Point& p) {
                            return jacobi_residual(christoffel(chart, p, 2, c.grid.eval));
                          }));
      if (psi && a)
        out.push_back(sweep("Schouten tensor is Codazzi (conformal flatness)",
                            "M is conformally flat: the Schouten tensor is a Codazzi tensor", c.tol.ad(1e-5), chart,
                            c.grid, [&](const Point& p) {
                              const ConnectionData conn = christoffel(chart, p, 3, c.grid.eval);
                              return schouten_symmetry_residual(conn, riemann(conn));
                            }));
    }
    return out;
  });

  if (dim == 3 && a) {
    e.add_suite("integrability", [=](const SuiteContext& c) {
      SkewOptions flip;
      flip.flip = true;
      const double tol = c.tol.ad(1e-6);
      std::vector<CheckResult> out = integrability_3d(chart, *a, c.grid, {}, tol);
      const auto in_flip = integrability_3d(chart, *a, c.grid, flip, tol);
      const auto ric = ricci_system_3d(chart, *a, c.grid, {}, tol);
      const auto ric_flip = ricci_system_3d(chart, *a, c.grid, flip, tol);
      const CheckResult cov_i = sign_covariance(out, in_flip, "integrability");
      const CheckResult cov_r = sign_covariance(ric, ric_flip, "Ricci system");
      for (auto& r : flipped(in_flip)) out.push_back(r);
      for (auto& r : ric) out.push_back(r);
      for (auto& r : flipped(ric_flip)) out.push_back(r);
      out.push_back(cov_i);
      out.push_back(cov_r);
      return out;
    });
    e.add_suite("diagnostics", [=](const SuiteContext& c) {
      if (psi) return tau_zeta_diagnostics(chart, *psi, *a, c.grid, c.tol.ad(1e-7));
      return std::vector<CheckResult>{tau_closed(chart, *a, c.grid, c.tol.ad(1e-7))};
    });
    if (psi && !chart.is_structural())
      e.add_suite("conformal", [=](const SuiteContext& c) {
        return conformal_to_parallel(chart, *psi, *a, c.grid, c.tol.ad(1e-6)).checks;
      });
  }

  if (dim == 2 && a) {
    const GaussSign sign = mode == KillingMode::real ? GaussSign::spherical : GaussSign::lorentzian;
    e.add_suite("gauss-codazzi", [=](const SuiteContext& c) {
      std::vector<CheckResult> out = gauss_codazzi_2d(chart, *a, sign, c.grid, c.tol.ad(1e-6));
      out.push_back(skew_part_analysis(chart, *a, c.grid, c.tol.ad(1e-8)).db);
      return out;
    });
  }
}

// ------------------------------------------------------------------ entries

namespace {

struct EntryDef {
  std::string name;
  std::string description;
  std::string citation;
  std::vector<ParamSpec> schema;
  std::function<void(CatalogEntry&, const Params&)> make;
};

void make_flat3(CatalogEntry& e, const Params&) {
  e.chart = FrameChart::coordinate({"x", "y", "z"}, {{-1, 1}, {-1, 1}, {-1, 1}}, identity_frame(3));
  e.psi = SpinorSection::constant(kPsi0);
  e.a = EndoField::zero(3);
  add_standard_suites(e);
}

void make_flat2(CatalogEntry& e, const Params&) {
  const FrameChart chart = FrameChart::coordinate({"x", "y"}, {{-1, 1}, {-1, 1}}, identity_frame(2));
  e.chart = chart;
  e.psi = SpinorSection::constant(kPsi0);
  e.a = EndoField::zero(2);
  e.default_grid = 21;
  add_standard_suites(e);
  e.add_suite("twistor", [chart](const SuiteContext& c) {
    return twistor_decompose(chart, SpinorSection::constant(kPsi0), c.grid, c.tol.ad(1e-6)).checks;
  });
  e.add_suite("gauss-codazzi", [chart](const SuiteContext& c) {
    std::vector<CheckResult> out;
    const SpinorSection up = SpinorSection::constant({Complex(1.0), Complex(0.0)});
    const SpinorSection down = SpinorSection::constant({Complex(0.0), Complex(0.0, 1.0)});
    for (auto& r : imaginary_pair_check(chart, up, down, EndoField::zero(2), c.grid, c.tol.ad(1e-10)))
      out.push_back(with_values(r, {}, "constant orthogonal pair with A = 0"));
    // A = J/2 admits no spinor here; its Lorentzian Gauss scalar must read 1.
    const auto lor = gauss_codazzi_2d(chart, EndoField::twistor2(ScalarField::constant(0.0), ScalarField::constant(0.5)),
                                      GaussSign::lorentzian, c.grid, 1.0);
    out.push_back(with_values(
        make_check("A = J/2 on the flat plane: Lorentzian Gauss scalar R_1212 + 4det T equals 1 (flagged)",
                   "Therefore, G = 0 and C = 0", std::abs(lor[0].residual - 1.0), c.tol.ad(1e-12), lor[0].grid_points),
        {{"G", lor[0].residual}}));
    // Non-constant a in A = a Id + a J breaks the Codazzi equation.
    const ScalarField x = field("x", {"x", "y"});
    const auto cod = gauss_codazzi_2d(chart, EndoField::twistor2(x, x), GaussSign::spherical, c.grid, 1.0);
    out.push_back(with_values(
        make_check("A = x Id + x J: Codazzi vector has norm sqrt(2) (a must be constant)",
                   "e_1(a) = e_2(a) = 0 is forced", std::abs(cod[1].residual - std::sqrt(2.0)), c.tol.ad(1e-10),
                   cod[1].grid_points),
        {{"|C|", cod[1].residual}}));
    const auto sp = skew_part_analysis(chart, EndoField::twistor2(ScalarField::constant(0.0), x), c.grid, 1.0);
    out.push_back(with_values(make_check("A = x J: skew part gradient |grad b| equals 1 (flagged non-Codazzi)",
                                         "d^nabla T = 0 forces b constant", std::abs(sp.db.residual - 1.0),
                                         c.tol.ad(1e-10), sp.db.grid_points),
                              {{"|grad b|", sp.db.residual}}));
    for (auto& r : out) r.engine = c.grid.eval.engine == Engine::ad ? "ad" : "fd";
    return out;
  });
}

std::vector<std::vector<std::vector<ScalarField>>> hyperbolic_brackets() {
  std::vector<std::vector<std::vector<ScalarField>>> c(
      3, std::vector<std::vector<ScalarField>>(3, std::vector<ScalarField>(3)));
  c[0][2][0] = ScalarField::constant(1.0);
  c[2][0][0] = ScalarField::constant(-1.0);
  c[1][2][1] = ScalarField::constant(1.0);
  c[2][1][1] = ScalarField::constant(-1.0);
  return c;
}

void make_hyperbolic_group(CatalogEntry& e, const Params&) {
  const std::vector<std::string> co{"x", "y", "z"};
  const std::vector<Interval> bounds{{-1, 1}, {-1, 1}, {-1, 1}};
  const FrameChart chart = FrameChart::structural(co, bounds, hyperbolic_brackets());
  const FrameChart real = FrameChart::coordinate(
      co, bounds, {{field("exp(z)", co), ScalarField::constant(0), ScalarField::constant(0)},
                   {ScalarField::constant(0), field("exp(z)", co), ScalarField::constant(0)},
                   {ScalarField::constant(0), ScalarField::constant(0), ScalarField::constant(-1)}});
  e.chart = chart;
  e.psi = SpinorSection::constant(kPsi0);
  e.a = EndoField::skew3(2, ScalarField::constant(0.5));
  add_standard_suites(e);
  const SpinorSection psi = *e.psi;
  const EndoField a = *e.a;
  e.add_suite("skew", [=](const SuiteContext& c) {
    CheckResult r = skew_killing_residual(real, psi, a, KillingMode::real, c.grid, c.tol.ad(1e-7));
    r.name = "coordinate realisation e1 = e^z d_x, e2 = e^z d_y, e3 = -d_z: " + r.name;
    return std::vector<CheckResult>{r};
  });
  e.add_suite("curvature", [=](const SuiteContext& c) {
    std::vector<CheckResult> out;
    double table[3][3][3] = {};
    table[0][0][2] = table[1][1][2] = -1.0;
    table[0][2][0] = table[1][2][1] = 1.0;
    out.push_back(sweep("connection coefficients match the table Gamma_11^3 = Gamma_22^3 = -Gamma_13^1 = -Gamma_23^2 = -1",
                        "The Christoffel symbols are then equal to", c.tol.ad(0.0), chart, c.grid,
                        [&](const Point& p) {
                          const ConnectionData conn = christoffel(chart, p, 1, c.grid.eval);
                          double worst = 0.0;
                          for (int i = 0; i < 3; ++i)
                            for (int j = 0; j < 3; ++j)
                              for (int k = 0; k < 3; ++k)
                                worst = std::max(worst, std::abs(conn.gamma[i][j][k].value() - table[i][j][k]));
                          return worst;
                        }));
    SkewOptions so = resolve_skew_options(chart, a, {}, c.grid.eval);
    const auto scal = sweep_multi(
        {{"scalar curvature -6 from the curvature tensor", "H^3 has Scal = -6", c.tol.ad(1e-6)},
         {"scalar curvature -6 from 8(b^2 - xi(b) - b Tr h)", "the scalar curvature of M is", c.tol.ad(1e-6)}},
        chart, c.grid, [&](const Point& p) {
          const ConnectionData conn = christoffel(chart, p, 2, c.grid.eval);
          const SkewValues v = skew_values(conn, a.jets(p, 1, c.grid.eval), so);
          const double formula = 8 * (v.b * v.b - v.xi_b - v.b * v.trace_h);
          return std::vector<double>{std::abs(riemann(conn).scal.value() + 6.0), std::abs(formula + 6.0)};
        });
    out.insert(out.end(), scal.begin(), scal.end());
    const JetCube declared = chart.declared_structure(0);
    out.push_back(sweep("coordinate realisation reproduces the declared brackets", "given by the Lie brackets",
                        c.tol.ad(1e-12), real, c.grid, [&](const Point& p) {
                          const ConnectionData conn = christoffel(real, p, 1, c.grid.eval);
                          double worst = 0.0;
                          for (int i = 0; i < 3; ++i)
                            for (int j = 0; j < 3; ++j)
                              for (int k = 0; k < 3; ++k)
                                worst = std::max(worst, std::abs(conn.c[i][j][k].value() - declared[i][j][k].value()));
                          return worst;
                        }));
    return out;
  });
  e.add_suite("conformal", [=](const SuiteContext& c) {
    auto checks = conformal_to_parallel(real, psi, a, c.grid, c.tol.ad(1e-6)).checks;
    for (auto& r : checks) r.name = "coordinate realisation: " + r.name;
    return checks;
  });
}

/// f and b for the warped product with kernel along the line.
void make_warped_plane_line(CatalogEntry& e, const Params& p) {
  const std::vector<std::string> co{"x", "y", "z"};
  const Expr theta = p.expr("theta", {"z"});
  const Expr c = p.expr("c", {"z"}), d = p.expr("d", {"z"}), ez = p.expr("e", {"z"});
  const Expr f = parse("(" + c.str() + ")*x + (" + d.str() + ")*y + (" + ez.str() + ")");
  const Expr b = parse("(" + differentiate(theta, "z").str() + ")/(2*(" + theta.str() + ")*(" + f.str() + "))");
  const double L = p.num("half_width");
  e.chart = FrameChart::coordinate(co, {{-L, L}, {-L, L}, {-L, L}},
                                   diagonal_frame({field(parse("1/(" + theta.str() + ")"), co),
                                                   field(parse("1/(" + theta.str() + ")"), co),
                                                   field(parse("1/(" + f.str() + ")"), co)}));
  e.a = EndoField::skew3(2, field(b, co));
  // A constant spinor is skew Killing exactly when f depends on z alone.
  if (const_value(c) == 0.0 && const_value(d) == 0.0)
    e.psi = SpinorSection::constant(kPsi0);
  e.params["b"] = b.str();
  add_standard_suites(e);
}

void make_frame2_periodic(CatalogEntry& e, const Params& p) {
  const std::vector<std::string> co{"x", "y", "z"};
  const double b = p.num("b");
  if (b == 0.0) throw ConstraintError("relation b != 0 violated: the closed form divides by b");
  const Expr c = p.expr("c", {"z"}), d = p.expr("d", {"z"}), ez = p.expr("e", {"z"});
  const std::string bs = p.raw.at("b");
  const Expr f = parse("(" + c.str() + ")/(2*(" + bs + "))*exp(2*(" + bs + ")*x) + (" + d.str() + ")*cos(2*(" + bs +
                       ")*y) + (" + ez.str() + ")*sin(2*(" + bs + ")*y)");
  const double L = p.num("half_width");
  const ScalarField inv_f = field(parse("1/(" + f.str() + ")"), co);
  e.chart = FrameChart::coordinate(co, {{-L, L}, {-L, L}, {-L, L}},
                                   diagonal_frame({ScalarField::constant(1.0), inv_f, inv_f}));
  e.a = EndoField::skew3(0, ScalarField::constant(b));
  e.params["f"] = f.str();
  add_standard_suites(e);
  const bool descends = const_value(c) == 0.0;
  e.add_suite("integrability", [descends, f](const SuiteContext&) {
    CheckResult r = make_check("torus descent condition c = 0 (reported)", "descends to the product T^2 x R", 0.0, 0.0, 1);
    r.values["descends to T^2 x R"] = descends ? 1.0 : 0.0;
    r.note = descends ? "f descends to T^2 x R" : "c != 0: f does not descend to T^2 x R";
    return std::vector<CheckResult>{r};
  });
}

void make_frame2_exp(CatalogEntry& e, const Params& p) {
  const std::vector<std::string> co{"x", "y", "z"};
  const double c = p.num("c"), d = p.num("d"), H = p.num("H"), A = p.num("A"), B = p.num("B");
  if (c == 0.0) throw ConstraintError("relation c != 0 violated");
  if (H <= 0.0) throw ConstraintError("relation H > 0 violated: H = " + p.raw.at("H"));
  const double lhs = 4 * A * B * H, rhs = c * c;
  if (std::abs(lhs - rhs) > 1e-12 * std::max(1.0, std::abs(rhs)))
    throw ConstraintError("relation 4ABH = c^2 violated: 4ABH = " + std::to_string(lhs) +
                          ", c^2 = " + std::to_string(rhs));
  const std::map<std::string, double> k{{"c", c}, {"d", d}, {"H", H}, {"A", A}, {"B", B}};
  const Expr theta = parse("c*z + d");
  const Expr f = parse("A*exp(sqrt(H)*x) + B*exp(-sqrt(H)*x)");
  const Expr b = parse("(" + differentiate(f, "x").str() + ")/(2*(" + theta.str() + ")*(" + f.str() + "))");
  const double zl = p.num("z_lo"), zh = p.num("z_hi"), L = p.num("half_width");
  auto fld = [&](const Expr& ex) { return ScalarField::from_expr(ex, co, k); };
  const ScalarField inv_f = fld(parse("1/(" + f.str() + ")"));
  e.chart = FrameChart::coordinate(co, {{-L, L}, {-L, L}, {zl, zh}},
                                   diagonal_frame({fld(parse("1/(" + theta.str() + ")")), inv_f, inv_f}));
  e.a = EndoField::skew3(0, fld(b));
  add_standard_suites(e);
}

void make_warped_line_sphere(CatalogEntry& e, const Params& p) {
  const std::vector<std::string> co{"t", "x", "y"};
  const Expr f = p.expr("f", {"t"}), b = p.expr("b", {"t"});
  const Expr fdot = differentiate(f, "t");
  const ScalarField ff = field(f, co), bf = field(b, co), fd = field(fdot, co);
  const double t_lo = p.num("t_lo"), t_hi = p.num("t_hi"), L = p.num("half_width");
  // The relation fixes the sign eps = 2bf - f' = +-1 selecting the spinor.
  double eps = 0.0;
  for (int k = 0; k <= 20; ++k) {
    const Point q{t_lo + (t_hi - t_lo) * k / 20.0, 0, 0};
    const double r = 2 * bf.value(q) * ff.value(q) - fd.value(q);
    if (std::abs(r * r - 1.0) > 1e-9)
      throw ConstraintError("relation (f' - 2bf)^2 = 1 violated at t = " + std::to_string(q[0]) + ": value " +
                            std::to_string(r * r));
    if (k == 0) eps = r > 0 ? 1.0 : -1.0;
    if ((r > 0 ? 1.0 : -1.0) != eps) throw ConstraintError("relation (f' - 2bf)^2 = 1 changes branch inside the chart");
  }
  const ScalarField e12 = field(parse("(1 + x^2 + y^2)/(2*(" + f.str() + "))"), co);
  const FrameChart chart = FrameChart::coordinate(co, {{t_lo, t_hi}, {-L, L}, {-L, L}},
                                                  {{ScalarField::constant(1), ScalarField::constant(0), ScalarField::constant(0)},
                                                   {ScalarField::constant(0), e12, ScalarField::constant(0)},
                                                   {ScalarField::constant(0), ScalarField::constant(0), e12}});
  const CliffordRep rep = CliffordRep::dim3();
  e.chart = chart;
  e.psi = stereographic_spinor(kPsi0, Complex(eps), rep.gamma(0) * rep.gamma(1), rep.gamma(0) * rep.gamma(2), 1, 2, 1.0,
                               "psi");
  e.a = EndoField::skew3(0, bf);
  add_standard_suites(e);
  const SpinorSection psi = *e.psi;
  const EndoField a = *e.a;
  e.add_suite("skew", [=](const SuiteContext& c) {
    return std::vector<CheckResult>{sweep("relation (f' - 2bf)^2 = 1", "we get the relation", c.tol.ad(1e-12), chart,
                                          c.grid, [&](const Point& q) {
                                            const double r = fd.value(q, c.grid.eval) -
                                                             2 * bf.value(q, c.grid.eval) * ff.value(q, c.grid.eval);
                                            return std::abs(r * r - 1.0);
                                          })};
  });
  const bool model = const_value(f) == 1.0 && const_value(b) == 0.5;
  if (!model) return;
  e.add_suite("conformal", [=](const SuiteContext& c) {
    std::vector<CheckResult> out;
    const ConformalResult conf = conformal_to_parallel(chart, psi, a, c.grid, c.tol.ad(1e-6));
    const Point center = chart.center();
    const double u0 = conf.u.value(center, c.grid.eval) + center[0];
    out.push_back(sweep("recovered u = -t up to a constant", "the metric e^{-2t}(dt^2 + g_stan)", c.tol.ad(1e-6), chart,
                        c.grid, [&](const Point& q) { return std::abs(conf.u.value(q, c.grid.eval) + q[0] - u0); }));
    // Cauchy sequence (n, x): on a chart widened in t, lengths of t-curves
    // under e^{2u} g with u normalised to vanish at t = 0.
    const FrameChart wide = chart.with_bounds({{-1.0, 21.0}, {-L, L}, {-L, L}});
    const ScalarField uw = conformal_potential(wide, a);
    const double shift = uw.value({0.0, 0.0, 0.0}, c.grid.eval);
    auto length = [&](double q, double pp) {
      return boost::math::quadrature::gauss<double, 30>::integrate(
          [&](double t) { return std::exp(uw.value({t, 0.0, 0.0}, c.grid.eval) - shift); }, q, pp);
    };
    double worst = 0.0, monotone = 0.0, prev = -1.0;
    std::map<std::string, double> vals;
    for (int n = 6; n <= 20; ++n) {
      const double l = length(5.0, n);
      worst = std::max(worst, l);
      if (l <= prev) monotone += 1.0;
      prev = l;
      vals["length t=5..t=" + std::to_string(n)] = l;
    }
    CheckResult cauchy = make_check("incompleteness: t-curve lengths from t=5 to t=n, n = 6..20, bounded by 1e-2",
                                    "it is not a complete metric", worst, 1e-2, 15);
    cauchy.values = vals;
    cauchy.values["coordinate separation t=5..t=20"] = 15.0;
    cauchy.note = "lengths converge while coordinate separation n - 5 diverges: (n, x) is Cauchy but divergent";
    out.push_back(cauchy);
    out.push_back(make_check("incompleteness: length to t=n strictly increasing and length from t=q strictly decreasing",
                             "a Cauchy sequence", monotone + (length(6.0, 20.0) < length(5.0, 20.0) ? 0.0 : 1.0), 0.0,
                             15));
    const double q = 1.0, pp = 3.0;
    const double computed = length(q, pp), closed = std::exp(-q) - std::exp(-pp);
    CheckResult oracle = make_check("t-curve length oracle e^{-q} - e^{-p} (q = 1, p = 3)",
                                    "the distance d(u_p,u_q)", std::abs(computed - closed), c.tol.ad(1e-10), 30);
    oracle.values["computed length"] = computed;
    oracle.values["closed form e^{-q} - e^{-p}"] = closed;
    oracle.values["displayed figure (e^{-2q} - e^{-2p})/2"] = 0.5 * (std::exp(-2 * q) - std::exp(-2 * pp));
    oracle.note =
        "the displayed figure integrates the conformal factor e^{-2t} itself; the length element of "
        "e^{-2t}(dt^2 + g_stan) along t-curves is e^{-t} dt";
    out.push_back(oracle);
    for (auto& r : out) r.engine = c.grid.eval.engine == Engine::ad ? "ad" : "fd";
    return out;
  });
}

void make_round_s2(CatalogEntry& e, const Params& p) {
  const std::vector<std::string> co{"x", "y"};
  const double lambda = p.num("lambda"), s = p.num("s"), L = p.num("half_width");
  if (lambda <= 0.0) throw ConstraintError("relation lambda > 0 violated");
  const ScalarField ef = field("lambda*(1 + x^2 + y^2)", co, {{"lambda", lambda}});
  const FrameChart chart = FrameChart::coordinate(co, {{-L, L}, {-L, L}}, diagonal_frame({ef, ef}));
  const CliffordRep rep = CliffordRep::dim2();
  const SpinorSection phi = sphere_killing_spinor(kPsi0, 1.0);
  const double scale = 1.0 / std::sqrt(1.0 + s * s);
  const SpinorSection omega_phi = SpinorSection::from_function(
      [phi, rep](const Point& q, int order, const EvalOptions& opts) { return rep.omega() * phi.jet(q, order, opts); },
      2, "omega.phi");
  const SpinorSection psi = scaled_sum(phi, rep.omega(), s, scale, "psi");
  e.chart = chart;
  e.psi = phi;
  e.a = EndoField::scalar(2, ScalarField::constant(lambda));
  e.default_grid = 21;
  add_standard_suites(e);
  const double a_exp = lambda * (1 - s * s) / (1 + s * s), b_exp = 2 * lambda * s / (1 + s * s);
  e.add_suite("skew", [=](const SuiteContext& c) {
    CheckResult r = skew_killing_residual(chart, omega_phi, EndoField::scalar(2, ScalarField::constant(-lambda)),
                                          KillingMode::real, c.grid, c.tol.ad(1e-7));
    r.name = "theta = omega.phi is Killing with constant -lambda: " + r.name;
    CheckResult rr = sweep("R_1212 = 4 lambda^2", "the round sphere", c.tol.ad(1e-10), chart, c.grid,
                           [&](const Point& q) {
                             return std::abs(riemann(christoffel(chart, q, 2, c.grid.eval)).r1212() -
                                             4 * lambda * lambda);
                           });
    return std::vector<CheckResult>{r, rr};
  });
  e.add_suite("twistor", [=](const SuiteContext& c) {
    const TwistorDecomposition td = twistor_decompose(chart, psi, c.grid, c.tol.ad(1e-6));
    std::vector<CheckResult> out = td.checks;
    out.push_back(sweep("Re(D psi, psi) is constant and equals |theta|^2 - |phi|^2", "the real product",
                        c.tol.ad(1e-7), chart, c.grid, [&](const Point& q) {
                          const ConnectionData conn = christoffel(chart, q, 1, c.grid.eval);
                          const SpinorJet sj = psi.jet(q, 1, c.grid.eval);
                          const double re = herm(dirac(conn, rep, sj).value(), sj.value()).real();
                          const double nphi = norm2(phi.value(q, c.grid.eval)) * scale * scale;
                          const double ntheta = norm2(omega_phi.value(q, c.grid.eval)) * s * s * scale * scale;
                          const double constant = (s * s - 1) / (1 + s * s);
                          return std::max(std::abs(re - (ntheta - nphi)), std::abs(re - constant));
                        }));
    out.push_back(with_values(
        sweep("decomposition a, b match lambda(1-s^2)/(1+s^2) and 2 lambda s/(1+s^2)", "it is a direct fact",
              c.tol.ad(1e-6), chart, c.grid,
              [&](const Point& q) {
                return std::max(std::abs(td.a.value(q, c.grid.eval) - a_exp), std::abs(td.b.value(q, c.grid.eval) - b_exp));
              }),
        {{"a expected", a_exp}, {"b expected", b_exp}}));
    out.push_back(sweep("R_1212 = 4a^2 + 4b^2 (sphere of curvature 4a^2 + 4b^2)", "isometric to the sphere",
                        c.tol.ad(1e-6), chart, c.grid, [&](const Point& q) {
                          const double a = td.a.value(q, c.grid.eval), b = td.b.value(q, c.grid.eval);
                          return std::abs(riemann(christoffel(chart, q, 2, c.grid.eval)).r1212() - 4 * a * a -
                                          4 * b * b);
                        }));
    SkewPart sp = skew_part_analysis(chart, td.endo, c.grid, c.tol.ad(1e-8));
    sp.db.name = "decomposition: " + sp.db.name;
    out.push_back(sp.db);
    for (auto r : gauss_codazzi_2d(chart, td.endo, GaussSign::spherical, c.grid, c.tol.ad(1e-6))) {
      r.name = "decomposition: " + r.name;
      out.push_back(r);
    }
    return out;
  });
}

void make_conjugate_twistor(CatalogEntry& e, const Params& p) {
  const std::vector<std::string> co{"x", "y"};
  const double lambda = p.num("lambda"), s = p.num("s"), L = p.num("half_width");
  if (lambda <= 0.0) throw ConstraintError("relation lambda > 0 violated");
  if (L >= 1.0) throw ConstraintError("relation half_width < 1 violated: the disk chart ends at r = 1");
  const ScalarField ef = field("lambda*(1 - x^2 - y^2)", co, {{"lambda", lambda}});
  const FrameChart chart = FrameChart::coordinate(co, {{-L, L}, {-L, L}}, diagonal_frame({ef, ef}));
  const CliffordRep rep = CliffordRep::dim2();
  const SpinorSection phi = hyperbolic_killing_spinor(kPsi0, 1.0);
  const double scale = 1.0 / std::sqrt(1.0 + s * s);
  const SpinorSection psi = scaled_sum(phi, rep.omega(), s, scale, "psi");
  e.chart = chart;
  e.psi = phi;
  e.a = EndoField::scalar(2, ScalarField::constant(lambda));
  e.mode = KillingMode::imaginary;
  e.default_grid = 21;
  add_standard_suites(e);
  const double a_exp = lambda * (1 - s * s) / (1 + s * s), b_exp = 2 * lambda * s / (1 + s * s);
  e.add_suite("twistor", [=](const SuiteContext& c) {
    const TwistorDecomposition td = twistor_decompose_imaginary(chart, psi, c.grid, c.tol.ad(1e-6));
    std::vector<CheckResult> out = td.checks;
    out.push_back(with_values(
        sweep("imaginary decomposition a, b match lambda(1-s^2)/(1+s^2) and 2 lambda s/(1+s^2)", "is an orthonormal frame",
              c.tol.ad(1e-6), chart, c.grid,
              [&](const Point& q) {
                return std::max(std::abs(td.a.value(q, c.grid.eval) - a_exp), std::abs(td.b.value(q, c.grid.eval) - b_exp));
              }),
        {{"a expected", a_exp}, {"b expected", b_exp}}));
    for (auto r : gauss_codazzi_2d(chart, td.endo, GaussSign::lorentzian, c.grid, c.tol.ad(1e-6))) {
      r.name = "decomposition: " + r.name;
      out.push_back(r);
    }
    out.push_back(with_values(
        sweep("Re(psi, conj psi) vanishes identically for the commuting conjugation", "Re(psi, psi bar) = 1",
              c.tol.ad(1e-12), chart, c.grid,
              [&](const Point& q) {
                const Spinor v = psi.value(q, c.grid.eval);
                return std::abs(herm(v, conjugate(v, rep)).real());
              }),
        {}, "the normalisation Re(psi, psi bar) = 1 cannot hold; the decomposition uses the frame i psi, i e_k psi"));
    return out;
  });
}

void make_conformal_flat(CatalogEntry& e, const Params& p) {
  const std::vector<std::string> co{"x", "y", "z"};
  const double L = p.num("half_width");
  const Expr u_expr = p.expr("u", co);
  const ScalarField u = field(u_expr, co);
  const FrameChart flat = FrameChart::coordinate(co, {{-L, L}, {-L, L}, {-L, L}}, identity_frame(3));
  const SpinorSection psi0 = SpinorSection::constant(kPsi0);
  GridOptions g0;
  const SkewFromParallel sk = parallel_to_skew(flat, psi0, u, g0);
  e.chart = sk.chart;
  e.psi = psi0;
  e.a = sk.a;
  add_standard_suites(e);
  const FrameChart bar = sk.chart;
  const EndoField a = sk.a;
  e.add_suite("conformal", [=](const SuiteContext& c) {
    std::vector<CheckResult> out = parallel_to_skew(flat, psi0, u, c.grid, c.tol.ad(1e-7)).checks;
    const ConformalResult back = conformal_to_parallel(bar, psi0, a, c.grid, c.tol.ad(1e-6));
    for (auto r : back.checks) {
      r.name = "round trip: " + r.name;
      out.push_back(r);
    }
    const Point center = bar.center();
    const double k = back.u.value(center, c.grid.eval) + u.value(center, c.grid.eval);
    out.push_back(sweep("round trip: recovered potential cancels u up to a constant", "bijective correspondence",
                        c.tol.ad(1e-6), bar, c.grid, [&](const Point& q) {
                          return std::abs(back.u.value(q, c.grid.eval) + u.value(q, c.grid.eval) - k);
                        }));
    return out;
  });
}

const std::vector<EntryDef>& registry() {
  static const std::vector<EntryDef> defs{
      {"flat-r3", "Euclidean R^3 with a constant spinor and A = 0", "trivial model", {}, make_flat3},
      {"flat-r2", "Euclidean plane with a constant spinor and A = 0, plus negative demonstrations", "trivial model", {},
       make_flat2},
      {"hyperbolic-group",
       "left-invariant frame [e1,e2] = 0, [e1,e3] = e1, [e2,e3] = e2 (hyperbolic space), constant spinor, b = 1/2",
       "solvable group model of hyperbolic space",
       {},
       make_hyperbolic_group},
      {"warped-plane-line",
       "theta(z)^2 g_stan + f^2 dz^2 with f = c(z)x + d(z)y + e(z), xi = d_z/f, b = theta'/(2 theta f)",
       "warped product over a line, kernel along the line",
       {{"theta", "exp(z)", "warping function of z"},
        {"c", "0", "coefficient of x in f, function of z"},
        {"d", "0", "coefficient of y in f, function of z"},
        {"e", "1", "constant term of f, function of z"},
        {"half_width", "0.5", "chart is the cube [-w, w]^3"}},
       make_warped_plane_line},
      {"example1-frame2-periodic",
       "dx^2 + f^2 (dy^2 + dz^2), xi = d_x, f = (c/2b) e^{2bx} + d cos(2by) + e sin(2by), constant b",
       "warped product, kernel along x, theta = 1",
       {{"b", "0.5", "constant skew part"},
        {"c", "1", "function of z"},
        {"d", "0", "function of z"},
        {"e", "0", "function of z"},
        {"half_width", "0.5", "chart is the cube [-w, w]^3"}},
       make_frame2_periodic},
      {"example1-frame2-exp",
       "theta^2 dx^2 + f^2 (dy^2 + dz^2), theta = cz + d, f = A e^{sqrt(H) x} + B e^{-sqrt(H) x}, b = f_x/(2 theta f)",
       "warped product, kernel along x, f independent of y",
       {{"c", "2", "slope of theta, nonzero"},
        {"d", "1", "offset of theta"},
        {"H", "1", "positive rate"},
        {"A", "1", "coefficient"},
        {"B", "1", "coefficient; 4ABH = c^2 is required"},
        {"z_lo", "-0.4", "lower z bound (theta > 0)"},
        {"z_hi", "0.4", "upper z bound"},
        {"half_width", "0.5", "x and y range [-w, w]"}},
       make_frame2_exp},
      {"warped-line-sphere",
       "dt^2 + f(t)^2 g_stan on a stereographic chart, xi = d_t, (f' - 2bf)^2 = 1",
       "warped product of a line and a sphere",
       {{"f", "1", "warping function of t"},
        {"b", "1/2", "skew part, function of t"},
        {"t_lo", "-1", "lower t bound"},
        {"t_hi", "1", "upper t bound"},
        {"half_width", "1", "stereographic range [-w, w]^2"}},
       make_warped_line_sphere},
      {"round-s2",
       "stereographic round sphere of curvature 4 lambda^2, Killing spinor phi, twistor spinor (phi + s omega.phi)/|.|",
       "sphere constructions",
       {{"lambda", "0.5", "Killing constant"},
        {"s", "0.5", "weight of the -lambda Killing spinor in the twistor sum"},
        {"half_width", "0.8", "stereographic range [-w, w]^2"}},
       make_round_s2},
      {"conjugate-twistor",
       "Poincare disk of curvature -4 lambda^2, imaginary Killing spinor and imaginary twistor decomposition",
       "imaginary skew Killing spinors in dimension 2",
       {{"lambda", "0.5", "imaginary Killing constant"},
        {"s", "0.5", "weight of the -lambda imaginary Killing spinor"},
        {"half_width", "0.6", "disk chart range [-w, w]^2, w < 1"}},
       make_conjugate_twistor},
      {"conformal-flat-3d", "flat R^3 rescaled by e^{2u}, parallel spinor turned skew Killing",
       "parallel spinors and conformal change",
       {{"u", "0.3*x", "conformal potential in x, y, z"}, {"half_width", "1", "chart is the cube [-w, w]^3"}},
       make_conformal_flat},
  };
  return defs;
}

const EntryDef& find_def(const std::string& name) {
  for (const auto& d : registry())
    if (d.name == name) return d;
  std::string known;
  for (const auto& d : registry()) known += (known.empty() ? "" : ", ") + d.name;
  throw std::invalid_argument("unknown catalog entry '" + name + "'; known: " + known);
}

}  // namespace

std::vector<std::string> catalog_names() {
  std::vector<std::string> out;
  for (const auto& d : registry()) out.push_back(d.name);
  return out;
}

std::vector<ParamSpec> catalog_schema(const std::string& name) { return find_def(name).schema; }

std::string catalog_description(const std::string& name) { return find_def(name).description; }

CatalogEntry build(const std::string& name, const std::map<std::string, std::string>& overrides) {
  const EntryDef& def = find_def(name);
  const Params p = resolve(name, def.schema, overrides);
  CatalogEntry e;
  e.name = def.name;
  e.description = def.description;
  e.citation = def.citation;
  e.schema = def.schema;
  e.params = p.raw;
  def.make(e, p);
  return e;
}

}  // namespace skewspin
