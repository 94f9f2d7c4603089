#pragma once

// Scalar fields on a chart. A field hands out jets at a point; under the
// finite-difference engine the jet is assembled from value evaluations only,
// which gives an independent route to every derivative.

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "skewspin/expr.hpp"
#include "skewspin/jet.hpp"

namespace skewspin {

using Point = std::array<double, kMaxVars>;

enum class Engine { ad, fd };

struct EvalOptions {
  Engine engine = Engine::ad;
  double fd_step = 1e-4;
};

/// Highest derivative order the finite-difference engine provides.
inline constexpr int kMaxFdOrder = 3;

class ScalarField {
 public:
  using Fn = std::function<Jet(const Point&, int order, const EvalOptions&)>;

  ScalarField();
  static ScalarField constant(double v);
  static ScalarField from_expr(const Expr& e, const std::vector<std::string>& coordinates,
                               const std::map<std::string, double>& params);
  /// `fn` must honour `order` exactly when the engine is AD.
  static ScalarField from_function(Fn fn, int nvars, std::string label = "<closure>");

  double value(const Point& p, const EvalOptions& opts = {}) const;
  Jet jet(const Point& p, int order, const EvalOptions& opts = {}) const;

  bool is_constant() const { return constant_; }
  const std::optional<Expr>& expr() const { return expr_; }
  const std::string& label() const { return label_; }

 private:
  Fn fn_;
  int nvars_ = kMaxVars;
  bool constant_ = true;
  std::optional<Expr> expr_;
  std::string label_;
};

/// Central-difference jet of `f` (values only) at `p`; derivatives of order
/// <= 2 use step h, third derivatives use 10h.
Jet finite_difference_jet(const std::function<double(const Point&)>& f, const Point& p, int order, int nvars, double h);

}  // namespace skewspin
