#include "skewspin/field.hpp"

#include <cmath>

namespace skewspin {
namespace {

struct Stencil {
  int offsets[4];
  double weights[4];
  int size;
};

// Central stencils for d^k/dx^k, unscaled by the step.
const Stencil& stencil(int k) {
  static const Stencil table[] = {
      {{0, 0, 0, 0}, {1.0, 0, 0, 0}, 1},
      {{-1, 1, 0, 0}, {-0.5, 0.5, 0, 0}, 2},
      {{-1, 0, 1, 0}, {1.0, -2.0, 1.0, 0}, 3},
      {{-2, -1, 1, 2}, {-0.5, 1.0, -1.0, 0.5}, 4},
  };
  return table[k];
}

}  // namespace

ScalarField::ScalarField()
    : fn_([](const Point&, int order, const EvalOptions&) { return Jet::constant(0.0, order); }),
      expr_(Expr::number(0.0)),
      label_("0") {}

ScalarField ScalarField::constant(double v) {
  ScalarField f;
  f.fn_ = [v](const Point&, int order, const EvalOptions&) { return Jet::constant(v, order); };
  f.constant_ = true;
  f.expr_ = Expr::number(v);
  f.label_ = format_number(v);
  return f;
}

ScalarField ScalarField::from_expr(const Expr& e, const std::vector<std::string>& coordinates,
                                   const std::map<std::string, double>& params) {
  auto bound = std::make_shared<BoundExpr>(e, coordinates, params);
  ScalarField f;
  f.nvars_ = static_cast<int>(coordinates.size());
  f.constant_ = !bound->depends_on_coordinates();
  f.expr_ = e;
  f.label_ = e.str();
  f.fn_ = [bound](const Point& p, int order, const EvalOptions&) {
    if (order == 0) return Jet::constant(bound->eval(p.data()), 0);
    return bound->eval_jet(p.data(), order);
  };
  return f;
}

ScalarField ScalarField::from_function(Fn fn, int nvars, std::string label) {
  ScalarField f;
  f.fn_ = std::move(fn);
  f.nvars_ = nvars;
  f.constant_ = false;
  f.label_ = std::move(label);
  return f;
}

double ScalarField::value(const Point& p, const EvalOptions& opts) const { return fn_(p, 0, opts).value(); }

Jet ScalarField::jet(const Point& p, int order, const EvalOptions& opts) const {
  if (opts.engine == Engine::ad || order == 0) return fn_(p, order, opts);
  if (constant_) return Jet::constant(fn_(p, 0, opts).value(), std::min(order, kMaxFdOrder));
  auto values = [&](const Point& q) { return fn_(q, 0, opts).value(); };
  return finite_difference_jet(values, p, order, nvars_, opts.fd_step);
}

Jet finite_difference_jet(const std::function<double(const Point&)>& f, const Point& p, int order, int nvars,
                          double h) {
  order = std::min(order, kMaxFdOrder);
  std::map<std::array<int, 4>, double> cache;  // (offsets, coarse flag)
  auto sample = [&](const std::array<int, 3>& off, bool coarse) {
    const std::array<int, 4> key{off[0], off[1], off[2], coarse ? 1 : 0};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const double step = coarse ? 10.0 * h : h;
    Point q = p;
    for (int v = 0; v < kMaxVars; ++v) q[v] += off[v] * step;
    const double val = f(q);
    cache.emplace(key, val);
    return val;
  };
  const int terms = jet_terms(order);
  std::vector<double> derivs(terms, 0.0);
  for (int idx = 0; idx < terms; ++idx) {
    const MultiIndex& alpha = jet_monomial(idx);
    bool active = true;
    for (int v = nvars; v < kMaxVars; ++v)
      if (alpha[v] != 0) active = false;
    if (!active) continue;
    const int degree = alpha[0] + alpha[1] + alpha[2];
    const bool coarse = degree > 2;
    const double step = coarse ? 10.0 * h : h;
    const Stencil& s0 = stencil(alpha[0]);
    const Stencil& s1 = stencil(alpha[1]);
    const Stencil& s2 = stencil(alpha[2]);
    double acc = 0.0;
    for (int a = 0; a < s0.size; ++a)
      for (int b = 0; b < s1.size; ++b)
        for (int c = 0; c < s2.size; ++c)
          acc += s0.weights[a] * s1.weights[b] * s2.weights[c] *
                 sample({s0.offsets[a], s1.offsets[b], s2.offsets[c]}, coarse && degree > 0);
    derivs[idx] = acc / std::pow(step, degree);
  }
  return Jet::from_derivatives(derivs, order);
}

}  // namespace skewspin
