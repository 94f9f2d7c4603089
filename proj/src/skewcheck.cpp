#include "skewspin/skewcheck.hpp"

#include <cmath>
#include <map>
#include <memory>

#include <boost/math/quadrature/gauss.hpp>

namespace skewspin {
namespace {

const Complex kI{0.0, 1.0};

double norm_of(const Spinor& s, const Point& p, int dim) {
  const double n = std::sqrt(norm2(s));
  if (n < 1e-12) throw GeometryError("spinor vanishes at " + format_point(p, dim));
  return n;
}

std::vector<double> column(const JetMat& a, int j, int dim) {
  std::vector<double> v(dim);
  for (int k = 0; k < dim; ++k) v[k] = a[k][j].value();
  return v;
}

Jet dot(const JetVec& x, const JetVec& y, int dim) {
  Jet v = x[0] * y[0];
  for (int k = 1; k < dim; ++k) v += x[k] * y[k];
  return v;
}

JetVec cross(const JetVec& x, const JetVec& y) { return hodge_star3(x, y, Orientation::frame); }

JetVec unit_axis(int axis, int order) {
  JetVec e;
  for (int k = 0; k < 3; ++k) e[k] = Jet::constant(k == axis ? 1.0 : 0.0, order);
  return e;
}

int order_of(const JetMat& m, int dim) {
  int o = kMaxOrder;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) o = std::min(o, m[i][j].order());
  return o;
}

/// Frame components of the axial vector w of the skew part: T(X) = w x X.
JetVec axial(const JetMat& a) {
  return {(a[2][1] - a[1][2]) * 0.5, (a[0][2] - a[2][0]) * 0.5, (a[1][0] - a[0][1]) * 0.5};
}

}  // namespace

// ------------------------------------------------------------------ EndoField

EndoField::EndoField(std::vector<std::vector<ScalarField>> entries) : entries_(std::move(entries)) {
  for (const auto& row : entries_)
    if (row.size() != entries_.size()) throw std::invalid_argument("endomorphism field must be square");
}

EndoField EndoField::zero(int dim) { return EndoField(std::vector<std::vector<ScalarField>>(dim, std::vector<ScalarField>(dim))); }

EndoField EndoField::scalar(int dim, const ScalarField& a) {
  EndoField e = zero(dim);
  for (int i = 0; i < dim; ++i) e.entries_[i][i] = a;
  return e;
}

EndoField EndoField::twistor2(const ScalarField& a, const ScalarField& b) {
  EndoField e = scalar(2, a);
  e.entries_[1][0] = b;
  const ScalarField nb = ScalarField::from_function(
      [b](const Point& p, int order, const EvalOptions& opts) { return -b.jet(p, order, opts); }, kMaxVars,
      "-" + b.label());
  e.entries_[0][1] = b.is_constant() ? ScalarField::constant(-b.value({})) : nb;
  return e;
}

EndoField EndoField::skew3(int axis, const ScalarField& b) {
  EndoField e = zero(3);
  e.kernel_axis_ = axis;
  const int i1 = (axis + 1) % 3, i2 = (axis + 2) % 3;
  e.entries_[i2][i1] = b;
  e.entries_[i1][i2] = b.is_constant() ? ScalarField::constant(-b.value({}))
                                       : ScalarField::from_function(
                                             [b](const Point& p, int order, const EvalOptions& opts) {
                                               return -b.jet(p, order, opts);
                                             },
                                             kMaxVars, "-" + b.label());
  return e;
}

EndoField EndoField::from_function(int dim, MatrixFn fn, int kernel_axis) {
  auto shared = std::make_shared<MatrixFn>(std::move(fn));
  std::vector<std::vector<ScalarField>> entries(dim, std::vector<ScalarField>(dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      entries[i][j] = ScalarField::from_function(
          [shared, i, j](const Point& p, int order, const EvalOptions& opts) { return (*shared)(p, order, opts)[i][j]; },
          kMaxVars, "A" + std::to_string(i + 1) + std::to_string(j + 1));
  EndoField e(std::move(entries));
  e.matrix_ = [shared](const Point& p, int order, const EvalOptions& opts) { return (*shared)(p, order, opts); };
  e.kernel_axis_ = kernel_axis;
  return e;
}

JetMat EndoField::jets(const Point& p, int order, const EvalOptions& opts) const {
  if (matrix_) {
    if (opts.engine == Engine::ad || order == 0) return matrix_(p, order, opts);
    // Finite differences of every entry from one matrix evaluation per stencil point.
    std::map<Point, JetMat> cache;
    auto at = [&](const Point& q) -> const JetMat& {
      auto it = cache.find(q);
      if (it == cache.end()) it = cache.emplace(q, matrix_(q, 0, opts)).first;
      return it->second;
    };
    JetMat m;
    for (int i = 0; i < dim(); ++i)
      for (int j = 0; j < dim(); ++j)
        m[i][j] = finite_difference_jet([&](const Point& q) { return at(q)[i][j].value(); }, p, order, kMaxVars,
                                        opts.fd_step);
    return m;
  }
  JetMat m;
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j) m[i][j] = entries_[i][j].jet(p, order, opts);
  return m;
}

JetMat symmetric_part(const JetMat& a, int dim) {
  JetMat s;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) s[i][j] = (a[i][j] + a[j][i]) * 0.5;
  return s;
}

JetMat skew_part(const JetMat& a, int dim) {
  JetMat s;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) s[i][j] = (a[i][j] - a[j][i]) * 0.5;
  return s;
}

CheckResult sweep(const std::string& name, const std::string& citation, double tol, const FrameChart& chart,
                  const GridOptions& g, const std::function<double(const Point&)>& fn) {
  const auto pts = chart.grid(g.n);
  double worst = 0.0;
  try {
    for (const Point& p : pts) {
      const double r = fn(p);
      if (std::isnan(r)) {
        worst = r;
        break;
      }
      worst = std::max(worst, r);
    }
  } catch (const std::exception& e) {
    CheckResult c = failed_check(name, citation, tol, e.what());
    c.grid_points = static_cast<int>(pts.size());
    c.engine = g.eval.engine == Engine::ad ? "ad" : "fd";
    return c;
  }
  CheckResult c = make_check(name, citation, worst, tol, static_cast<int>(pts.size()));
  c.engine = g.eval.engine == Engine::ad ? "ad" : "fd";
  return c;
}

std::vector<CheckResult> sweep_multi(const std::vector<CheckSpec>& specs, const FrameChart& chart,
                                     const GridOptions& g, const std::function<std::vector<double>(const Point&)>& fn) {
  const auto pts = chart.grid(g.n);
  const std::string engine = g.eval.engine == Engine::ad ? "ad" : "fd";
  std::vector<double> worst(specs.size(), 0.0);
  std::vector<CheckResult> out;
  try {
    for (const Point& p : pts) {
      const std::vector<double> r = fn(p);
      for (std::size_t k = 0; k < specs.size(); ++k)
        if (std::isnan(r[k]) || std::isnan(worst[k]))
          worst[k] = NAN;
        else
          worst[k] = std::max(worst[k], r[k]);
    }
  } catch (const std::exception& e) {
    for (const auto& s : specs) {
      out.push_back(failed_check(s.name, s.citation, s.tolerance, e.what()));
      out.back().grid_points = static_cast<int>(pts.size());
      out.back().engine = engine;
    }
    return out;
  }
  for (std::size_t k = 0; k < specs.size(); ++k) {
    out.push_back(make_check(specs[k].name, specs[k].citation, worst[k], specs[k].tolerance, static_cast<int>(pts.size())));
    out.back().engine = engine;
  }
  return out;
}

// ------------------------------------------------------------------ both dims

CheckResult skew_killing_residual(const FrameChart& chart, const SpinorSection& psi, const EndoField& a,
                                  KillingMode mode, const GridOptions& g, double tol) {
  const CliffordRep rep = CliffordRep::of_dimension(chart.dim());
  const bool imag = mode == KillingMode::imaginary;
  const std::string name = imag ? "imaginary skew Killing residual" : "skew Killing residual";
  const std::string cite = imag ? "nabla_X psi = i A(X).psi" : "nabla_X psi = A(X).psi for an endomorphism field A";
  return sweep(name, cite, tol, chart, g, [&](const Point& p) {
    const ConnectionData conn = christoffel(chart, p, 1, g.eval);
    const SpinorJet s = psi.jet(p, 1, g.eval);
    const JetMat am = a.jets(p, 0, g.eval);
    const Spinor s0 = s.value();
    const double n = norm_of(s0, p, chart.dim());
    double worst = 0.0;
    for (int i = 0; i < chart.dim(); ++i) {
      const Spinor lhs = spin_covariant_derivative(conn, rep, s, i).value();
      Spinor rhs = clifford_mul(column(am, i, chart.dim()), s0, rep);
      if (imag) rhs = kI * rhs;
      worst = std::max(worst, spinor_distance(lhs, rhs) / n);
    }
    return worst;
  });
}

CheckResult metric_compatibility(const FrameChart& chart, const SpinorSection& psi, const GridOptions& g,
                                 double tol) {
  const CliffordRep rep = CliffordRep::of_dimension(chart.dim());
  return sweep("spin connection metric compatibility", "Re(nabla_X psi, psi) = X(|psi|^2)/2", tol, chart, g,
               [&](const Point& p) {
                 const ConnectionData conn = christoffel(chart, p, 1, g.eval);
                 const SpinorJet s = psi.jet(p, 1, g.eval);
                 const Jet n2 = norm2(s);
                 double worst = 0.0;
                 for (int i = 0; i < chart.dim(); ++i) {
                   const double lhs = herm(spin_covariant_derivative(conn, rep, s, i).value(), s.value()).real();
                   const double rhs = 0.5 * conn.frame_derivative(n2, i).value();
                   worst = std::max(worst, std::abs(lhs - rhs) / std::max(n2.value(), 1e-300));
                 }
                 return worst;
               });
}

CheckResult dirac_consistency(const FrameChart& chart, const SpinorSection& psi, const GridOptions& g, double tol) {
  const CliffordRep rep = CliffordRep::of_dimension(chart.dim());
  return sweep("Dirac operator definitional consistency", "D = sum_i e_i . nabla_{e_i}", tol, chart, g,
               [&](const Point& p) {
                 const ConnectionData conn = christoffel(chart, p, 1, g.eval);
                 const SpinorJet s = psi.jet(p, 1, g.eval);
                 const double n = norm_of(s.value(), p, chart.dim());
                 Spinor sum{};
                 for (int i = 0; i < chart.dim(); ++i)
                   sum = sum + rep.gamma(i) * spin_covariant_derivative(conn, rep, s, i).value();
                 return spinor_distance(dirac(conn, rep, s).value(), sum) / n;
               });
}

// ------------------------------------------------------------------ dim 2

std::vector<CheckResult> gauss_codazzi_2d(const FrameChart& chart, const EndoField& a, GaussSign sign,
                                          const GridOptions& g, double tol) {
  if (chart.dim() != 2) throw std::invalid_argument("Gauss-Codazzi residuals are two-dimensional");
  const double s = sign == GaussSign::spherical ? 1.0 : -1.0;
  const std::string tag = sign == GaussSign::spherical ? "" : "lorentzian ";
  const std::string gauss_cite = sign == GaussSign::spherical ? "Gauss equation R_1212 - 4det(S) - 4det(T) = 0"
                                                              : "Gauss equation R_1212 + 4det(S) + 4det(T) = 0";
  auto gauss = [&](const Point& p) {
    const ConnectionData conn = christoffel(chart, p, 2, g.eval);
    const CurvatureData curv = riemann(conn);
    const JetMat am = a.jets(p, 0, g.eval);
    const JetMat sm = symmetric_part(am, 2), tm = skew_part(am, 2);
    const double det_s = sm[0][0].value() * sm[1][1].value() - sm[0][1].value() * sm[1][0].value();
    const double b = tm[1][0].value();
    return curv.r1212() - s * (4.0 * det_s + 4.0 * b * b);
  };
  CheckResult gres = sweep(tag + "Gauss scalar", gauss_cite, tol, chart, g,
                           [&](const Point& p) { return std::abs(gauss(p)); });
  try {
    gres.values["G at center"] = gauss(chart.center());
    const ConnectionData conn = christoffel(chart, chart.center(), 2, g.eval);
    gres.values["R_1212 at center"] = riemann(conn).r1212();
  } catch (const std::exception&) {
  }
  CheckResult cres = sweep(tag + "Codazzi vector", "d^nabla A(e1,e2) = 0", tol, chart, g, [&](const Point& p) {
    const ConnectionData conn = christoffel(chart, p, 1, g.eval);
    const JetMat am = a.jets(p, 1, g.eval);
    const JetVec ae1{am[0][0], am[1][0], Jet()};
    const JetVec ae2{am[0][1], am[1][1], Jet()};
    const JetVec d12 = conn.covariant(ae2, 0);
    const JetVec d21 = conn.covariant(ae1, 1);
    double n2 = 0.0;
    for (int k = 0; k < 2; ++k) {
      double v = d12[k].value() - d21[k].value();
      for (int l = 0; l < 2; ++l) v -= conn.c[0][1][l].value() * am[k][l].value();
      n2 += v * v;
    }
    return std::sqrt(n2);
  });
  return {gres, cres};
}

SkewPart skew_part_analysis(const FrameChart& chart, const EndoField& a, const GridOptions& g, double tol) {
  SkewPart out;
  out.b = ScalarField::from_function(
      [a](const Point& p, int order, const EvalOptions& opts) {
        const JetMat am = a.jets(p, order, opts);
        return (am[1][0] - am[0][1]) * 0.5;
      },
      chart.dim(), "b");
  const ScalarField b = out.b;
  out.db = sweep("skew part gradient |grad b|", "d^nabla T = 0 forces b constant", tol, chart, g,
                 [&](const Point& p) {
                   const ConnectionData conn = christoffel(chart, p, 1, g.eval);
                   const Jet bj = b.jet(p, 1, g.eval);
                   const double d1 = conn.frame_derivative(bj, 0).value(), d2 = conn.frame_derivative(bj, 1).value();
                   return std::sqrt(d1 * d1 + d2 * d2);
                 });
  try {
    out.db.values["b at center"] = b.value(chart.center(), g.eval);
  } catch (const std::exception&) {
  }
  return out;
}

std::vector<CheckResult> dirac_remark_2d(const FrameChart& chart, const SpinorSection& psi, const EndoField& a,
                                         const GridOptions& g, double tol) {
  const CliffordRep rep = CliffordRep::dim2();
  CheckResult d = sweep("Dirac equation D psi = H psi + 2b omega.psi, H = -Tr S",
                        "a skew Killing spinor solves a Dirac equation", tol, chart, g, [&](const Point& p) {
                          const ConnectionData conn = christoffel(chart, p, 1, g.eval);
                          const SpinorJet s = psi.jet(p, 1, g.eval);
                          const JetMat am = a.jets(p, 0, g.eval);
                          const Spinor s0 = s.value();
                          const double n = norm_of(s0, p, 2);
                          const double tr = am[0][0].value() + am[1][1].value();
                          const double b = 0.5 * (am[1][0].value() - am[0][1].value());
                          const Spinor rhs = Complex(-tr) * s0 + Complex(2.0 * b) * (rep.omega() * s0);
                          return spinor_distance(dirac(conn, rep, s).value(), rhs) / n;
                        });
  double lo = INFINITY, hi = 0.0;
  const auto pts = chart.grid(g.n);
  CheckResult c;
  try {
    for (const Point& p : pts) {
      const double n = std::sqrt(norm2(psi.value(p, g.eval)));
      lo = std::min(lo, n);
      hi = std::max(hi, n);
    }
    c = make_check("spinor has constant norm", "a spinor of constant norm", (hi - lo) / std::max(hi, 1e-300), tol,
                   static_cast<int>(pts.size()));
    c.values["norm"] = hi;
  } catch (const std::exception& e) {
    c = failed_check("spinor has constant norm", "a spinor of constant norm", tol, e.what());
  }
  return {d, c};
}

CheckResult twistor_residual(const FrameChart& chart, const SpinorSection& psi, const GridOptions& g, double tol) {
  const CliffordRep rep = CliffordRep::of_dimension(chart.dim());
  return sweep("twistor residual", "twistor equation nabla_X psi = -1/2 X.D psi", tol, chart, g,
               [&](const Point& p) {
                 const ConnectionData conn = christoffel(chart, p, 1, g.eval);
                 const SpinorJet s = psi.jet(p, 1, g.eval);
                 const double n = norm_of(s.value(), p, chart.dim());
                 const Spinor dpsi = dirac(conn, rep, s).value();
                 double worst = 0.0;
                 for (int i = 0; i < chart.dim(); ++i) {
                   const Spinor r = spin_covariant_derivative(conn, rep, s, i).value() + Complex(0.5) * (rep.gamma(i) * dpsi);
                   worst = std::max(worst, std::sqrt(norm2(r)) / n);
                 }
                 return worst;
               });
}

namespace {

// Re herm(x, y) / |psi|^2 as jets.
Jet real_product(const SpinorJet& x, const SpinorJet& y) { return herm(x, y).re; }

struct TwistorJets {
  Jet a, b;
};

TwistorJets twistor_ab(const ConnectionData& conn, const CliffordRep& rep, const SpinorJet& s, bool imaginary) {
  const Jet inv_n2 = recip(norm2(s));
  const SpinorJet d1 = spin_covariant_derivative(conn, rep, s, 0);
  if (!imaginary) {
    const SpinorJet dpsi = dirac(conn, rep, s);
    return {real_product(dpsi, s) * inv_n2 * -0.5, real_product(d1, rep.gamma(1) * s) * inv_n2};
  }
  const SpinorJet ie1 = kI * (rep.gamma(0) * s), ie2 = kI * (rep.gamma(1) * s);
  return {real_product(d1, ie1) * inv_n2, real_product(d1, ie2) * inv_n2};
}

TwistorDecomposition decompose(const FrameChart& chart, const SpinorSection& psi, const GridOptions& g, double tol,
                               bool imaginary) {
  if (chart.dim() != 2) throw std::invalid_argument("twistor decomposition is two-dimensional");
  const CliffordRep rep = CliffordRep::dim2();
  auto field = [chart, psi, rep, imaginary](bool want_b) {
    return ScalarField::from_function(
        [chart, psi, rep, imaginary, want_b](const Point& p, int order, const EvalOptions& opts) {
          const ConnectionData conn = christoffel(chart, p, order + 1, opts);
          const SpinorJet s = psi.jet(p, order + 1, opts);
          const TwistorJets ab = twistor_ab(conn, rep, s, imaginary);
          return want_b ? ab.b : ab.a;
        },
        2, want_b ? "b" : "a");
  };
  TwistorDecomposition out;
  out.a = field(false);
  out.b = field(true);
  out.endo = EndoField::twistor2(out.a, out.b);
  const std::string pre = imaginary ? "imaginary twistor decomposition: " : "twistor decomposition: ";
  const std::string cite = imaginary ? "nabla_X psi = i a X.psi + i b J(X).psi for a twistor spinor"
                                     : "twistor spinor of norm 1 gives nabla_X psi = a X.psi + b J(X).psi";
  if (!imaginary)
    out.checks.push_back(sweep(pre + "unit norm", cite, tol, chart, g, [&](const Point& p) {
      return std::abs(std::sqrt(norm2(psi.value(p, g.eval))) - 1.0);
    }));
  CheckResult tw = twistor_residual(chart, psi, g, tol);
  tw.name = pre + tw.name;
  out.checks.push_back(tw);
  // The components of nabla_{e_i} psi along psi and e1.e2.psi (times i in
  // the imaginary case) vanish; the e_i and J(e_i) components give a and b
  // from either direction.
  out.checks.push_back(sweep(pre + "vanishing and direction-independent components", cite, tol, chart, g,
                             [&](const Point& p) {
                               const ConnectionData conn = christoffel(chart, p, 1, g.eval);
                               const SpinorJet sj = psi.jet(p, 1, g.eval);
                               const Spinor s = sj.value();
                               const double n2 = norm2(s);
                               if (n2 < 1e-24) throw GeometryError("spinor vanishes at " + format_point(p, 2));
                               const TwistorJets ab = twistor_ab(conn, rep, sj, imaginary);
                               const double a = ab.a.value(), b = ab.b.value();
                               const Complex f = imaginary ? kI : Complex(1.0);
                               const Spinor e1 = f * (rep.gamma(0) * s), e2 = f * (rep.gamma(1) * s);
                               const Spinor one = f * s, vol = f * (rep.omega() * s);
                               const Spinor d1 = spin_covariant_derivative(conn, rep, sj, 0).value();
                               const Spinor d2 = spin_covariant_derivative(conn, rep, sj, 1).value();
                               const double r[] = {herm(d1, one).real() / n2,
                                                   herm(d2, one).real() / n2,
                                                   herm(d1, vol).real() / n2,
                                                   herm(d2, vol).real() / n2,
                                                   herm(d1, e1).real() / n2 - a,
                                                   herm(d2, e2).real() / n2 - a,
                                                   herm(d2, e1).real() / n2 + b};
                               double worst = 0.0;
                               for (double v : r) worst = std::max(worst, std::abs(v));
                               return worst;
                             }));
  CheckResult rec = skew_killing_residual(chart, psi, out.endo, imaginary ? KillingMode::imaginary : KillingMode::real,
                                          g, tol);
  rec.name = pre + "reconstruction residual";
  out.checks.push_back(rec);
  try {
    out.checks.back().values["a at center"] = out.a.value(chart.center(), g.eval);
    out.checks.back().values["b at center"] = out.b.value(chart.center(), g.eval);
  } catch (const std::exception&) {
  }
  return out;
}

}  // namespace

TwistorDecomposition twistor_decompose(const FrameChart& chart, const SpinorSection& psi, const GridOptions& g,
                                       double tol) {
  return decompose(chart, psi, g, tol, false);
}

TwistorDecomposition twistor_decompose_imaginary(const FrameChart& chart, const SpinorSection& psi,
                                                 const GridOptions& g, double tol) {
  return decompose(chart, psi, g, tol, true);
}

std::vector<CheckResult> imaginary_pair_check(const FrameChart& chart, const SpinorSection& phi,
                                              const SpinorSection& psi, const EndoField& a, const GridOptions& g,
                                              double tol) {
  std::vector<CheckResult> out;
  out.push_back(sweep("pair orthogonality |(phi,psi)|/(|phi||psi|)", "two orthogonal and nowhere vanishing spinors",
                      tol, chart, g, [&](const Point& p) {
                        const Spinor f = phi.value(p, g.eval), s = psi.value(p, g.eval);
                        const double nf = norm_of(f, p, 2), ns = norm_of(s, p, 2);
                        return std::abs(herm(f, s)) / (nf * ns);
                      }));
  CheckResult rf = skew_killing_residual(chart, phi, a, KillingMode::imaginary, g, tol);
  rf.name = "first spinor: " + rf.name;
  CheckResult rs = skew_killing_residual(chart, psi, a, KillingMode::imaginary, g, tol);
  rs.name = "second spinor: " + rs.name;
  out.push_back(rf);
  out.push_back(rs);
  for (auto& c : gauss_codazzi_2d(chart, a, GaussSign::lorentzian, g, tol)) out.push_back(c);
  return out;
}

// ------------------------------------------------------------------ dim 3

SkewFrame skew_frame(const JetMat& a, int e1_axis, bool flip, int kernel_axis) {
  const int order = order_of(a, 3);
  const JetVec w = axial(a);
  SkewFrame f;
  const Jet b2 = dot(w, w, 3);
  if (kernel_axis >= 0) {
    f.b = w[kernel_axis];
    f.xi = unit_axis(kernel_axis, order);
    if (e1_axis < 0) e1_axis = (kernel_axis + 1) % 3;
  } else if (b2.value() < 1e-24) {
    f.b = Jet::constant(0.0, order);
    f.xi = unit_axis(2, order);
  } else {
    f.b = sqrt(b2);
    const Jet inv = recip(f.b);
    for (int k = 0; k < 3; ++k) f.xi[k] = w[k] * inv;
  }
  if (e1_axis < 0) {
    e1_axis = 0;
    for (int k = 1; k < 3; ++k)
      if (std::abs(f.xi[k].value()) < std::abs(f.xi[e1_axis].value())) e1_axis = k;
  }
  JetVec e = unit_axis(e1_axis, order);
  for (int k = 0; k < 3; ++k) e[k] -= f.xi[e1_axis] * f.xi[k];
  const Jet inv_len = recip(sqrt(dot(e, e, 3)));
  for (int k = 0; k < 3; ++k) f.e1[k] = e[k] * inv_len;
  f.e2 = cross(f.xi, f.e1);
  if (flip) {
    f.b = -f.b;
    for (int k = 0; k < 3; ++k) f.xi[k] = -f.xi[k];
    std::swap(f.e1, f.e2);
  }
  return f;
}

int choose_e1_axis(const FrameChart& chart, const EndoField& a, const EvalOptions& opts) {
  if (a.kernel_axis() >= 0) return (a.kernel_axis() + 1) % 3;
  const JetMat am = a.jets(chart.center(), 0, opts);
  const JetVec w = axial(am);
  const double n = std::sqrt(dot(w, w, 3).value());
  if (n < 1e-12) return 0;
  int axis = 0;
  for (int k = 1; k < 3; ++k)
    if (std::abs(w[k].value()) < std::abs(w[axis].value())) axis = k;
  return axis;
}

SkewOptions resolve_skew_options(const FrameChart& chart, const EndoField& a, SkewOptions so,
                                 const EvalOptions& opts) {
  if (so.kernel_axis < 0 && a.kernel_axis() >= 0) {
    so.kernel_axis = a.kernel_axis();
    if (axial(a.jets(chart.center(), 0, opts))[so.kernel_axis].value() < 0) so.flip = !so.flip;
  }
  if (so.e1_axis < 0) so.e1_axis = so.kernel_axis >= 0 ? (so.kernel_axis + 1) % 3 : choose_e1_axis(chart, a, opts);
  return so;
}

SkewValues skew_values(const ConnectionData& conn, const JetMat& a, const SkewOptions& so) {
  const SkewFrame f = skew_frame(a, so.e1_axis, so.flip, so.kernel_axis);
  SkewValues v;
  v.b = f.b.value();
  const JetVec* e[2] = {&f.e1, &f.e2};
  for (int i = 0; i < 2; ++i) {
    const JetVec d = conn.covariant_along(*e[i], f.xi);
    for (int c = 0; c < 2; ++c) v.h[i][c] = dot(d, *e[c], 3).value();
    v.e_b[i] = conn.derivative_along(*e[i], f.b).value();
  }
  v.trace_h = v.h[0][0] + v.h[1][1];
  const JetVec kappa = conn.covariant_along(f.xi, f.xi);
  v.kappa[0] = dot(kappa, f.e1, 3).value();
  v.kappa[1] = dot(kappa, f.e2, 3).value();
  v.kappa_xi = dot(kappa, f.xi, 3).value();
  v.xi_b = conn.derivative_along(f.xi, f.b).value();
  const JetVec d12 = conn.covariant_along(f.e1, f.e2), d21 = conn.covariant_along(f.e2, f.e1);
  JetVec br;
  for (int k = 0; k < 3; ++k) br[k] = d12[k] - d21[k];
  v.bracket_xi = dot(br, f.xi, 3).value();
  return v;
}

std::vector<CheckResult> integrability_3d(const FrameChart& chart, const EndoField& a, const GridOptions& g,
                                          const SkewOptions& so_in, double tol) {
  const SkewOptions so = resolve_skew_options(chart, a, so_in, g.eval);
  const std::string cite = "integrability conditions g(h e1,e2) = g(h e2,e1), e_i(b) = b g(kappa,e_i)";
  return sweep_multi({{"integrability: h symmetric on xi-perp", cite, tol},
                      {"integrability: e1(b) = b g(kappa,e1)", cite, tol},
                      {"integrability: e2(b) = b g(kappa,e2)", cite, tol},
                      {"integrability: normal bundle g([e1,e2],xi) = 0",
                       "the normal bundle of the kernel line is integrable", tol}},
                     chart, g, [&](const Point& p) {
                       const ConnectionData conn = christoffel(chart, p, 1, g.eval);
                       const SkewValues v = skew_values(conn, a.jets(p, 1, g.eval), so);
                       return std::vector<double>{std::abs(v.h[0][1] - v.h[1][0]), std::abs(v.e_b[0] - v.b * v.kappa[0]),
                                                  std::abs(v.e_b[1] - v.b * v.kappa[1]), std::abs(v.bracket_xi)};
                     });
}

std::vector<CheckResult> ricci_system_3d(const FrameChart& chart, const EndoField& a, const GridOptions& g,
                                         const SkewOptions& so_in, double tol) {
  const SkewOptions so = resolve_skew_options(chart, a, so_in, g.eval);
  struct Sample {
    SkewValues v;
    double ric[3][3];  // Ric in the (xi, e1, e2) frame
    double scal;
  };
  auto sample = [&](const Point& p) {
    const ConnectionData conn = christoffel(chart, p, 2, g.eval);
    const CurvatureData curv = riemann(conn);
    const JetMat am = a.jets(p, 1, g.eval);
    Sample s;
    s.v = skew_values(conn, am, so);
    const SkewFrame f = skew_frame(am, so.e1_axis, so.flip, so.kernel_axis);
    const JetVec* basis[3] = {&f.xi, &f.e1, &f.e2};
    for (int x = 0; x < 3; ++x)
      for (int y = 0; y < 3; ++y) {
        double r = 0.0;
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) r += (*basis[x])[i].value() * (*basis[y])[j].value() * curv.ricci[i][j].value();
        s.ric[x][y] = r;
      }
    s.scal = curv.scal.value();
    return s;
  };
  auto scal_formula = [](const SkewValues& v) { return 8 * (v.b * v.b - v.xi_b - v.b * v.trace_h); };
  // Coefficients of psi, xi.psi, e1.psi, e2.psi in -1/2 Ric(X).psi, X = e1, e2, xi.
  auto compare = [](const double lhs[4], const double rhs[4]) {
    double worst = 0.0;
    for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(lhs[k] - rhs[k]));
    return worst;
  };
  const std::string cite = "Ricci curvatures -1/2 Ric(X).psi via the Ricci identity";
  std::vector<CheckResult> out = sweep_multi(
      {{"Ricci system: -1/2 Ric(e1)", cite, tol},
       {"Ricci system: -1/2 Ric(e2)", cite, tol},
       {"Ricci system: -1/2 Ric(xi)", cite, tol},
       {"scalar curvature Scal = 8(b^2 - xi(b) - b Tr h)", "the scalar curvature of M is", tol}},
      chart, g, [&](const Point& p) {
        const Sample s = sample(p);
        const SkewValues& v = s.v;
        const double lhs1[4] = {0.0, -0.5 * s.ric[1][0], -0.5 * s.ric[1][1], -0.5 * s.ric[1][2]};
        const double rhs1[4] = {v.e_b[1] - v.b * v.kappa[1], v.e_b[0],
                                -2 * v.b * v.b + v.b * v.trace_h + v.b * v.h[0][0] + v.xi_b, v.b * v.h[0][1]};
        const double lhs2[4] = {0.0, -0.5 * s.ric[2][0], -0.5 * s.ric[2][1], -0.5 * s.ric[2][2]};
        const double rhs2[4] = {-v.e_b[0] + v.b * v.kappa[0], v.e_b[1], v.b * v.h[1][0],
                                -2 * v.b * v.b + v.b * v.trace_h + v.b * v.h[1][1] + v.xi_b};
        const double lhs3[4] = {0.0, -0.5 * s.ric[0][0], -0.5 * s.ric[0][1], -0.5 * s.ric[0][2]};
        const double rhs3[4] = {v.b * (v.h[0][1] - v.h[1][0]), 2 * v.xi_b + v.b * v.trace_h, v.b * v.kappa[0],
                                v.b * v.kappa[1]};
        return std::vector<double>{compare(lhs1, rhs1), compare(lhs2, rhs2), compare(lhs3, rhs3),
                                   std::abs(s.scal - scal_formula(v))};
      });
  try {
    const Sample s = sample(chart.center());
    CheckResult& sc = out.back();
    sc.values["Scal (curvature) at center"] = s.scal;
    sc.values["Scal (formula) at center"] = scal_formula(s.v);
    sc.values["b at center"] = s.v.b;
    sc.values["Tr h at center"] = s.v.trace_h;
  } catch (const std::exception&) {
  }
  return out;
}

std::vector<CheckResult> tau_zeta_diagnostics(const FrameChart& chart, const SpinorSection& psi, const EndoField& a,
                                              const GridOptions& g, double tol) {
  const CliffordRep rep = CliffordRep::dim3();
  return sweep_multi(
      {{"tau = b xi is closed", "tau is a closed 1-form", tol},
       {"nabla_X zeta = 2g(zeta,tau)X - 2g(X,zeta)tau", "a straightforward computation for zeta", tol},
       {"|zeta| constant", "the norm of zeta is constant", tol},
       {"d zeta = -2 zeta wedge tau", "the couple (zeta, -2 tau) is a Pfaff form", tol}},
      chart, g, [&](const Point& p) {
        const ConnectionData conn = christoffel(chart, p, 1, g.eval);
        const JetVec tau = axial(a.jets(p, 1, g.eval));
        const SpinorJet sj = psi.jet(p, 1, g.eval);
        norm_of(sj.value(), p, 3);
        const Jet inv = recip(norm2(sj));
        JetVec zeta;
        for (int k = 0; k < 3; ++k) zeta[k] = herm(sj, rep.gamma(k) * sj).im * inv;
        const double zt = dot(zeta, tau, 3).value();
        double dz_res = 0.0, norm_res = 0.0, wedge_res = 0.0;
        for (int i = 0; i < 3; ++i) {
          const JetVec d = conn.covariant(zeta, i);
          for (int k = 0; k < 3; ++k) {
            const double rhs = 2 * zt * (i == k ? 1.0 : 0.0) - 2 * zeta[i].value() * tau[k].value();
            dz_res = std::max(dz_res, std::abs(d[k].value() - rhs));
          }
        }
        const Jet z2 = dot(zeta, zeta, 3);
        for (int i = 0; i < 3; ++i) norm_res = std::max(norm_res, std::abs(conn.frame_derivative(z2, i).value()));
        const JetMat dz = d_oneform(conn, zeta);
        for (int i = 0; i < 3; ++i)
          for (int j = i + 1; j < 3; ++j) {
            const double wedge = zeta[i].value() * tau[j].value() - zeta[j].value() * tau[i].value();
            wedge_res = std::max(wedge_res, std::abs(dz[i][j].value() + 2 * wedge));
          }
        return std::vector<double>{two_form_norm(d_oneform(conn, tau), 3), dz_res, norm_res, wedge_res};
      });
}

CheckResult dirac_skew_3d(const FrameChart& chart, const SpinorSection& psi, const EndoField& a,
                          const GridOptions& g, double tol) {
  const CliffordRep rep = CliffordRep::dim3();
  return sweep("Dirac operator D psi = 2b xi.psi", "the Dirac operator associated with psi", tol, chart, g,
               [&](const Point& p) {
                 const ConnectionData conn = christoffel(chart, p, 1, g.eval);
                 const SpinorJet s = psi.jet(p, 1, g.eval);
                 const Spinor s0 = s.value();
                 const double n = norm_of(s0, p, 3);
                 const JetVec w = axial(a.jets(p, 0, g.eval));  // b xi
                 const std::vector<double> tau{w[0].value(), w[1].value(), w[2].value()};
                 const Spinor rhs = Complex(2.0) * clifford_mul(tau, s0, rep);
                 return spinor_distance(dirac(conn, rep, s).value(), rhs) / n;
               });
}

CheckResult ricci_identity(const FrameChart& chart, const SpinorSection& psi, const GridOptions& g, double tol) {
  const CliffordRep rep = CliffordRep::of_dimension(chart.dim());
  return sweep("spinorial Ricci identity", "sum_j e_j.R(e_i,e_j)psi = -1/2 Ric(e_i).psi", tol, chart, g,
               [&](const Point& p) {
                 const ConnectionData conn = christoffel(chart, p, 2, g.eval);
                 const CurvatureData curv = riemann(conn);
                 const SpinorJet s = psi.jet(p, 2, g.eval);
                 double worst = 0.0;
                 for (int i = 0; i < chart.dim(); ++i)
                   worst = std::max(worst, ricci_identity_residual(conn, curv, rep, s, i));
                 return worst;
               });
}

CheckResult skew_structure_3d(const FrameChart& chart, const EndoField& a, const GridOptions& g, double tol) {
  return sweep("kernel line of A: A skew, |xi| = 1, A xi = 0, kappa perpendicular to xi",
               "orthogonal decomposition TM = Ker A + its complement", tol, chart, g, [&](const Point& p) {
                 const ConnectionData conn = christoffel(chart, p, 1, g.eval);
                 const JetMat am = a.jets(p, 1, g.eval);
                 const JetMat sm = symmetric_part(am, 3);
                 double worst = 0.0;
                 for (int i = 0; i < 3; ++i)
                   for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(sm[i][j].value()));
                 const SkewFrame f = skew_frame(am, -1, false, a.kernel_axis());
                 worst = std::max(worst, std::abs(dot(f.xi, f.xi, 3).value() - 1.0));
                 for (int i = 0; i < 3; ++i) {
                   double axi = 0.0;
                   for (int j = 0; j < 3; ++j) axi += am[i][j].value() * f.xi[j].value();
                   worst = std::max(worst, std::abs(axi));
                 }
                 const JetVec kappa = conn.covariant_along(f.xi, f.xi);
                 return std::max(worst, std::abs(dot(kappa, f.xi, 3).value()));
               });
}

CheckResult tau_closed(const FrameChart& chart, const EndoField& a, const GridOptions& g, double tol) {
  return sweep("tau = b xi is closed", "tau is a closed 1-form", tol, chart, g, [&](const Point& p) {
    const ConnectionData conn = christoffel(chart, p, 1, g.eval);
    return two_form_norm(d_oneform(conn, axial(a.jets(p, 1, g.eval))), 3);
  });
}

// ------------------------------------------------------------------ conformal maps

JetVec tau_coordinates(const FrameChart& chart, const EndoField& a, const Point& p, int order,
                       const EvalOptions& opts) {
  const JetMat frame = chart.frame_jets(p, order, opts);
  const JetMat theta = inverse(frame, chart.dim(), p);
  const JetVec w = axial(a.jets(p, order, opts));
  JetVec out;
  for (int mu = 0; mu < 3; ++mu) {
    Jet v = w[0] * theta[mu][0];
    for (int k = 1; k < 3; ++k) v += w[k] * theta[mu][k];
    out[mu] = v;
  }
  return out;
}

ScalarField conformal_potential(const FrameChart& chart, const EndoField& a, bool reversed) {
  if (chart.dim() != 3) throw std::invalid_argument("the conformal potential is built in dimension 3");
  const Point base = chart.center();
  auto value = [chart, a, base, reversed](const Point& p, const EvalOptions& opts) {
    if (!chart.contains(p)) throw GeometryError("line-integration path leaves the chart at " + format_point(p, 3));
    const int legs[3] = {reversed ? 2 : 0, 1, reversed ? 0 : 2};
    Point q = base;
    double u = 0.0;
    for (int mu : legs) {
      const double from = q[mu], to = p[mu];
      if (from != to) {
        auto integrand = [&](double s) {
          Point r = q;
          r[mu] = s;
          return -2.0 * tau_coordinates(chart, a, r, 0, opts)[mu].value();
        };
        u += boost::math::quadrature::gauss<double, 30>::integrate(integrand, from, to);
      }
      q[mu] = to;
    }
    return u;
  };
  return ScalarField::from_function(
      [chart, a, value](const Point& p, int order, const EvalOptions& opts) {
        const double u0 = value(p, opts);
        if (order == 0) return Jet::constant(u0, 0);
        const JetVec tau = tau_coordinates(chart, a, p, order - 1, opts);
        const std::array<Jet, kMaxVars> grad{tau[0] * -2.0, tau[1] * -2.0, tau[2] * -2.0};
        return Jet::antiderivative(u0, grad, 3);
      },
      3, reversed ? "u (reversed path)" : "u");
}

ConformalResult conformal_to_parallel(const FrameChart& chart, const SpinorSection& psi, const EndoField& a,
                                      const GridOptions& g, double tol) {
  ConformalResult out{chart, psi, conformal_potential(chart, a, false), {}};
  out.checks.push_back(sweep("conformal: tau closed (precondition)", "tau is a closed 1-form", tol, chart, g,
                             [&](const Point& p) {
                               const ConnectionData conn = christoffel(chart, p, 1, g.eval);
                               return two_form_norm(d_oneform(conn, axial(a.jets(p, 1, g.eval))), 3);
                             }));
  const ScalarField rev = conformal_potential(chart, a, true);
  out.checks.push_back(sweep("conformal: path independence of u", "du = -2 tau", tol, chart, g, [&](const Point& p) {
    return std::abs(out.u.value(p, g.eval) - rev.value(p, g.eval));
  }));
  out.chart = chart.rescaled(out.u);
  const CliffordRep rep = CliffordRep::dim3();
  const FrameChart& bar = out.chart;
  out.checks.push_back(sweep("conformal: rescaled spinor is parallel", "carries a parallel spinor", tol, bar, g,
                             [&](const Point& p) {
                               const ConnectionData conn = christoffel(bar, p, 1, g.eval);
                               const SpinorJet s = psi.jet(p, 1, g.eval);
                               const double n = norm_of(s.value(), p, 3);
                               double worst = 0.0;
                               for (int i = 0; i < 3; ++i)
                                 worst = std::max(worst,
                                                  std::sqrt(norm2(spin_covariant_derivative(conn, rep, s, i).value())) / n);
                               return worst;
                             }));
  return out;
}

EndoField conformal_endomorphism(const FrameChart& rescaled, const ScalarField& u) {
  return EndoField::from_function(3, [rescaled, u](const Point& p, int order, const EvalOptions& opts) {
    const JetMat frame = rescaled.frame_jets(p, order, opts);
    const Jet uj = u.jet(p, order + 1, opts);
    JetVec du;
    for (int k = 0; k < 3; ++k) {
      Jet v = frame[k][0] * uj.diff(0);
      for (int mu = 1; mu < 3; ++mu) v += frame[k][mu] * uj.diff(mu);
      du[k] = v;
    }
    JetMat a;
    for (int j = 0; j < 3; ++j) {
      JetVec ej;
      for (int k = 0; k < 3; ++k) ej[k] = Jet::constant(k == j ? 1.0 : 0.0, du[0].order());
      const JetVec col = hodge_star3(du, ej, Orientation::clifford);
      for (int i = 0; i < 3; ++i) a[i][j] = col[i] * -0.5;
    }
    return a;
  });
}

SkewFromParallel parallel_to_skew(const FrameChart& flat, const SpinorSection& psi0, const ScalarField& u,
                                  const GridOptions& g, double tol) {
  if (flat.dim() != 3) throw std::invalid_argument("parallel_to_skew is three-dimensional");
  SkewFromParallel out{flat.rescaled(u), psi0, EndoField::zero(3), u, {}};
  out.a = conformal_endomorphism(out.chart, u);
  const CliffordRep rep = CliffordRep::dim3();
  out.checks.push_back(sweep("input spinor parallel on the flat chart", "a parallel spinor", tol, flat, g,
                             [&](const Point& p) {
                               const ConnectionData conn = christoffel(flat, p, 1, g.eval);
                               const SpinorJet s = psi0.jet(p, 1, g.eval);
                               const double n = norm_of(s.value(), p, 3);
                               double worst = 0.0;
                               for (int i = 0; i < 3; ++i)
                                 worst = std::max(
                                     worst, std::sqrt(norm2(spin_covariant_derivative(conn, rep, s, i).value())) / n);
                               return worst;
                             }));
  CheckResult sk = skew_killing_residual(out.chart, psi0, out.a, KillingMode::real, g, tol);
  sk.name = "conformal change of a parallel spinor: " + sk.name;
  sk.citation = "carries a skew Killing spinor";
  out.checks.push_back(sk);
  const FrameChart& bar = out.chart;
  const EndoField& a = out.a;
  // Barred frame derivatives of u.
  auto dubar = [&](const Point& p) {
    const JetMat frame = bar.frame_jets(p, 0, g.eval);
    const Jet uj = u.jet(p, 1, g.eval);
    std::array<double, 3> du{};
    for (int k = 0; k < 3; ++k)
      for (int mu = 0; mu < 3; ++mu) du[k] += frame[k][mu].value() * uj.partial(mu);
    return du;
  };
  out.checks.push_back(sweep("A matches the displayed formulas A(e1) = -1/2 e2(u) e3 + 1/2 e3(u) e2 (cyclic)",
                             "the same computations can be done for e2, e3", 1e-8, bar, g, [&](const Point& p) {
                               const auto du = dubar(p);
                               const JetMat am = a.jets(p, 0, g.eval);
                               double worst = 0.0;
                               for (int j = 0; j < 3; ++j) {
                                 const int j1 = (j + 1) % 3, j2 = (j + 2) % 3;
                                 double expect[3] = {0, 0, 0};
                                 expect[j2] = -0.5 * du[j1];
                                 expect[j1] = 0.5 * du[j2];
                                 for (int i = 0; i < 3; ++i)
                                   worst = std::max(worst, std::abs(am[i][j].value() - expect[i]));
                               }
                               return worst;
                             }));
  out.checks.push_back(sweep("A recovered from the spinor matches -1/2 *(du wedge X)",
                             "which is skew-symmetric, since", 1e-8, bar, g, [&](const Point& p) {
                               const ConnectionData conn = christoffel(bar, p, 1, g.eval);
                               const SpinorJet s = psi0.jet(p, 1, g.eval);
                               const Spinor s0 = s.value();
                               const double n2 = norm2(s0);
                               const JetMat am = a.jets(p, 0, g.eval);
                               double worst = 0.0;
                               for (int i = 0; i < 3; ++i) {
                                 const Spinor d = spin_covariant_derivative(conn, rep, s, i).value();
                                 for (int k = 0; k < 3; ++k) {
                                   const double rec = herm(rep.gamma(k) * s0, d).real() / n2;
                                   worst = std::max(worst, std::abs(rec - am[k][i].value()));
                                 }
                               }
                               return worst;
                             }));
  out.checks.push_back(sweep("A skew-symmetric", "which is skew-symmetric, since", 1e-12, bar, g, [&](const Point& p) {
    const JetMat am = a.jets(p, 0, g.eval);
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(am[i][j].value() + am[j][i].value()));
    return worst;
  }));
  return out;
}

}  // namespace skewspin
