#include "skewspin/spinfield.hpp"

#include <cmath>

namespace skewspin {

SpinorSection SpinorSection::constant(const Spinor& s) {
  return SpinorSection({ScalarField::constant(s[0].real()), ScalarField::constant(s[0].imag()),
                        ScalarField::constant(s[1].real()), ScalarField::constant(s[1].imag())});
}

SpinorSection SpinorSection::from_function(std::function<SpinorJet(const Point&, int, const EvalOptions&)> fn,
                                           int nvars, const std::string& label) {
  auto shared = std::make_shared<decltype(fn)>(std::move(fn));
  auto component = [shared](int c) {
    return [shared, c](const Point& p, int order, const EvalOptions& opts) {
      const SpinorJet s = (*shared)(p, order, opts);
      const CJet& z = s.c[c / 2];
      return c % 2 == 0 ? z.re : z.im;
    };
  };
  return SpinorSection({ScalarField::from_function(component(0), nvars, label + ".re1"),
                        ScalarField::from_function(component(1), nvars, label + ".im1"),
                        ScalarField::from_function(component(2), nvars, label + ".re2"),
                        ScalarField::from_function(component(3), nvars, label + ".im2")});
}

SpinorJet SpinorSection::jet(const Point& p, int order, const EvalOptions& opts) const {
  SpinorJet s;
  for (int c = 0; c < 2; ++c) {
    s.c[c].re = comps_[2 * c].jet(p, order, opts);
    s.c[c].im = comps_[2 * c + 1].jet(p, order, opts);
  }
  return s;
}

Spinor SpinorSection::value(const Point& p, const EvalOptions& opts) const { return jet(p, 0, opts).value(); }

SpinorJet clifford_vec(const CliffordRep& rep, const JetVec& v, const SpinorJet& phi) {
  return clifford_mul(VecJet(v.begin(), v.begin() + rep.dim()), phi, rep);
}

SpinorJet spin_covariant_derivative(const ConnectionData& conn, const CliffordRep& rep, const SpinorJet& phi, int i) {
  SpinorJet out{{CJet{conn.frame_derivative(phi.c[0].re, i), conn.frame_derivative(phi.c[0].im, i)},
                 CJet{conn.frame_derivative(phi.c[1].re, i), conn.frame_derivative(phi.c[1].im, i)}}};
  for (int j = 0; j < conn.dim; ++j)
    for (int k = j + 1; k < conn.dim; ++k)
      out += (conn.gamma[i][j][k] * 0.5) * ((rep.gamma(j) * rep.gamma(k)) * phi);
  return out;
}

SpinorJet dirac(const ConnectionData& conn, const CliffordRep& rep, const SpinorJet& phi) {
  SpinorJet out;
  for (int i = 0; i < conn.dim; ++i) {
    const SpinorJet d{{CJet{conn.frame_derivative(phi.c[0].re, i), conn.frame_derivative(phi.c[0].im, i)},
                       CJet{conn.frame_derivative(phi.c[1].re, i), conn.frame_derivative(phi.c[1].im, i)}}};
    SpinorJet term = rep.gamma(i) * d;
    for (int j = 0; j < conn.dim; ++j)
      for (int k = j + 1; k < conn.dim; ++k)
        term += (conn.gamma[i][j][k] * 0.5) * ((rep.gamma(i) * rep.gamma(j) * rep.gamma(k)) * phi);
    if (i == 0)
      out = term;
    else
      out += term;
  }
  return out;
}

SpinorJet spinorial_curvature(const ConnectionData& conn, const CliffordRep& rep, const SpinorJet& phi, int i, int j) {
  if (phi.order() < 2 || conn.order < 2) throw std::invalid_argument("spinorial curvature needs second-order jets");
  std::array<SpinorJet, 3> first;
  for (int k = 0; k < conn.dim; ++k) first[k] = spin_covariant_derivative(conn, rep, phi, k);
  SpinorJet out = spin_covariant_derivative(conn, rep, first[j], i) - spin_covariant_derivative(conn, rep, first[i], j);
  for (int k = 0; k < conn.dim; ++k) out -= conn.c[i][j][k] * first[k];
  return out;
}

double ricci_identity_residual(const ConnectionData& conn, const CurvatureData& curv, const CliffordRep& rep,
                               const SpinorJet& phi, int i) {
  const Spinor psi = phi.value();
  const double n = std::sqrt(norm2(psi));
  if (n < 1e-12) throw GeometryError("spinor vanishes at " + format_point(conn.point, conn.dim));
  Spinor lhs{};
  for (int j = 0; j < conn.dim; ++j) {
    if (j == i) continue;
    lhs = lhs + rep.gamma(j) * spinorial_curvature(conn, rep, phi, i, j).value();
  }
  std::vector<double> ric(conn.dim);
  for (int k = 0; k < conn.dim; ++k) ric[k] = -0.5 * curv.ricci[i][k].value();
  const Spinor rhs = clifford_mul(ric, psi, rep);
  return spinor_distance(lhs, rhs) / n;
}

double spinor_distance(const Spinor& a, const Spinor& b) { return std::sqrt(norm2(a - b)); }

}  // namespace skewspin
