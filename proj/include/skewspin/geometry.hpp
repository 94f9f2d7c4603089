#pragma once

// Charts carrying orthonormal frames, and the frame-based tensor calculus on
// them: Koszul connection coefficients, curvature, Schouten tensor, exterior
// derivative of 1-forms and the 3D Hodge star.
//
// Conventions:
//   E_i = sum_mu a_i^mu d_mu                     (frame vector fields)
//   [E_i, E_j] = sum_k c_ij^k E_k
//   Gamma_ij^k = g(nabla_{E_i} E_j, E_k)
//   R(X,Y) = nabla_X nabla_Y - nabla_Y nabla_X - nabla_[X,Y]
//   R_ijkl = g(R(E_i,E_j)E_k, E_l),  Ric(Y,Z) = sum_i R(E_i,Y,Z,E_i)
// The sectional curvature of a surface is R_1221 = g(R(e1,e2)e2, e1).

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "skewspin/field.hpp"

namespace skewspin {

using JetVec = std::array<Jet, 3>;
using JetMat = std::array<JetVec, 3>;
using JetCube = std::array<JetMat, 3>;

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Interval {
  double lo = -1.0;
  double hi = 1.0;
};

std::string format_point(const Point& p, int dim);

class FrameChart {
 public:
  /// frame[i][mu] = a_i^mu.
  static FrameChart coordinate(std::vector<std::string> coordinates, std::vector<Interval> bounds,
                               std::vector<std::vector<ScalarField>> frame);
  /// Frame given abstractly by constant structure constants c[i][j][k].
  /// Every field on such a chart must be constant.
  static FrameChart structural(std::vector<std::string> coordinates, std::vector<Interval> bounds,
                               std::vector<std::vector<std::vector<ScalarField>>> c);
  /// E_i = g_ii^{-1/2} d_i for a diagonal coordinate metric.
  static FrameChart diagonal_metric(std::vector<std::string> coordinates, std::vector<Interval> bounds,
                                    const std::vector<Expr>& g, const std::map<std::string, double>& params);

  int dim() const { return dim_; }
  const std::vector<std::string>& coordinates() const { return coords_; }
  const std::vector<Interval>& bounds() const { return bounds_; }
  bool is_structural() const { return structural_; }
  bool has_metric() const { return metric_.has_value(); }
  const std::vector<std::vector<ScalarField>>& frame() const { return frame_; }
  const std::optional<ScalarField>& log_scale() const { return log_scale_; }

  /// The chart of e^{2u} g: E_i -> e^{-u} E_i.
  FrameChart rescaled(const ScalarField& u) const;
  FrameChart with_bounds(std::vector<Interval> bounds) const;

  Point center() const;
  bool contains(const Point& p) const;
  /// n points per axis, inside the bounds shrunk by 5% on each side.
  std::vector<Point> grid(int n) const;

  /// a[i][mu] as jets of the given order.
  JetMat frame_jets(const Point& p, int order, const EvalOptions& opts) const;
  /// Structure constants supplied with a structural chart.
  JetCube declared_structure(int order) const;

  /// max |g(E_i,E_j) - delta_ij| against the declared coordinate metric.
  double orthonormality_residual(const Point& p, const EvalOptions& opts = {}) const;

 private:
  int dim_ = 0;
  std::vector<std::string> coords_;
  std::vector<Interval> bounds_;
  bool structural_ = false;
  std::vector<std::vector<ScalarField>> frame_;
  std::vector<std::vector<std::vector<ScalarField>>> structure_;
  std::optional<std::vector<ScalarField>> metric_;
  std::optional<ScalarField> log_scale_;
};

struct ConnectionData {
  int dim = 0;
  int order = 0;  // order of the frame jets; Gamma has order - 1
  bool structural = false;
  Point point{};
  JetMat a;      // a[i][mu]
  JetMat theta;  // theta[mu][k], the coframe
  JetCube c;     // c[i][j][k]
  JetCube gamma;  // gamma[i][j][k]

  /// E_i(f).
  Jet frame_derivative(const Jet& f, int i) const;
  /// X(f) for frame components X.
  Jet derivative_along(const JetVec& x, const Jet& f) const;
  /// (nabla_{E_i} Y) in frame components.
  JetVec covariant(const JetVec& y, int i) const;
  /// nabla_X Y.
  JetVec covariant_along(const JetVec& x, const JetVec& y) const;
  /// Coordinate components sum_k w_k theta^k_mu of a frame covector.
  JetVec to_coordinate_covector(const JetVec& w) const;
};

ConnectionData christoffel(const FrameChart& chart, const Point& p, int order, const EvalOptions& opts = {});

struct CurvatureData {
  int dim = 0;
  std::array<std::array<JetMat, 3>, 3> R;  // R[i][j][k][l]
  JetMat ricci;
  Jet scal;
  JetMat schouten;  // dim 3 only

  double r1212() const { return R[0][1][1][0].value(); }
};

CurvatureData riemann(const ConnectionData& conn);

/// max over index pairs of |(nabla_i P)E_j - (nabla_j P)E_i|; needs conn.order >= 3.
double schouten_symmetry_residual(const ConnectionData& conn, const CurvatureData& curv);
double schouten_symmetry_residual(const FrameChart& chart, int grid_n, const EvalOptions& opts = {});

/// Curvature symmetry and first Bianchi defects at a point.
double curvature_symmetry_residual(const CurvatureData& curv);
double bianchi_residual(const CurvatureData& curv);
/// max_m |sum_cyc (sum_l c_ij^l c_lk^m - E_k(c_ij^m))|.
double jacobi_residual(const ConnectionData& conn);
double koszul_antisymmetry_residual(const ConnectionData& conn);

/// Frame components of d(alpha) computed as sum_i E^i wedge nabla_{E_i} alpha.
JetMat d_oneform(const ConnectionData& conn, const JetVec& alpha);
/// The same 2-form from d alpha(E_i,E_j) = E_i a_j - E_j a_i - alpha([E_i,E_j]).
JetMat d_oneform_brackets(const ConnectionData& conn, const JetVec& alpha);
double two_form_norm(const JetMat& w, int dim);

enum class Orientation { frame, clifford };

/// *(alpha wedge beta) in an orthonormal 3-frame. Orientation::frame takes
/// (E_1,E_2,E_3) as direct; Orientation::clifford takes the opposite
/// orientation, the one under which X -> -1/2 *(du wedge X) is the endomorphism
/// produced by the spinorial conformal change.
template <class T>
std::array<T, 3> hodge_star3(const std::array<T, 3>& alpha, const std::array<T, 3>& beta, Orientation o) {
  const double s = o == Orientation::frame ? 1.0 : -1.0;
  return {(alpha[1] * beta[2] - alpha[2] * beta[1]) * s, (alpha[2] * beta[0] - alpha[0] * beta[2]) * s,
          (alpha[0] * beta[1] - alpha[1] * beta[0]) * s};
}

JetMat inverse(const JetMat& m, int dim, const Point& where);

}  // namespace skewspin
