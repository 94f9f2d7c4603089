#pragma once

// Residual checks for skew Killing spinors nabla_X psi = A(X).psi (and the
// imaginary variant nabla_X psi = i A(X).psi) in dimensions 2 and 3.
// Every residual is a sup over the sample grid; spinor residuals are divided
// by |psi|.

#include <optional>
#include <vector>

#include "skewspin/report.hpp"
#include "skewspin/spinfield.hpp"

namespace skewspin {

struct GridOptions {
  int n = 11;
  EvalOptions eval;
};

/// Endomorphism field in the frame: entry(i, j) = g(A E_j, E_i).
class EndoField {
 public:
  EndoField() = default;
  explicit EndoField(std::vector<std::vector<ScalarField>> entries);
  static EndoField zero(int dim);
  static EndoField scalar(int dim, const ScalarField& a);
  /// a Id + b J with J e1 = e2 (dim 2).
  static EndoField twistor2(const ScalarField& a, const ScalarField& b);
  /// Skew endomorphism with kernel E_axis and A(e1) = b e2, A(e2) = -b e1
  /// where (E_axis, e1, e2) is the cyclic order starting at E_axis (dim 3).
  static EndoField skew3(int axis, const ScalarField& b);
  using MatrixFn = std::function<JetMat(const Point&, int order, const EvalOptions&)>;
  /// All entries from one closure evaluated once per point.
  static EndoField from_function(int dim, MatrixFn fn, int kernel_axis = -1);

  int dim() const { return static_cast<int>(entries_.size()); }
  const ScalarField& entry(int i, int j) const { return entries_.at(i).at(j); }
  JetMat jets(const Point& p, int order, const EvalOptions& opts) const;
  /// Frame axis spanning the kernel when it is known by construction, else -1.
  int kernel_axis() const { return kernel_axis_; }

 private:
  std::vector<std::vector<ScalarField>> entries_;
  MatrixFn matrix_;
  int kernel_axis_ = -1;
};

/// Symmetric and skew parts of a matrix of jets.
JetMat symmetric_part(const JetMat& a, int dim);
JetMat skew_part(const JetMat& a, int dim);

enum class KillingMode { real, imaginary };
enum class GaussSign { spherical, lorentzian };

struct CheckSpec {
  std::string name;
  std::string citation;
  double tolerance;
};

/// sup |d tau| for tau = b xi, the axial 1-form of the skew part of A (dim 3).
CheckResult tau_closed(const FrameChart& chart, const EndoField& a, const GridOptions& g, double tol = 1e-7);

/// Several sup-norm checks sharing one evaluation per grid point.
std::vector<CheckResult> sweep_multi(const std::vector<CheckSpec>& specs, const FrameChart& chart,
                                     const GridOptions& g, const std::function<std::vector<double>(const Point&)>& fn);

/// Runs fn at every grid point and returns the largest value; evaluation
/// faults become a failed check carrying the message.
CheckResult sweep(const std::string& name, const std::string& citation, double tol, const FrameChart& chart,
                  const GridOptions& g, const std::function<double(const Point&)>& fn);

// ------------------------------------------------------------------ both dims

CheckResult skew_killing_residual(const FrameChart& chart, const SpinorSection& psi, const EndoField& a,
                                  KillingMode mode, const GridOptions& g, double tol = 1e-7);

/// Re herm(nabla_X psi, psi) = 1/2 X|psi|^2 for every frame vector.
CheckResult metric_compatibility(const FrameChart& chart, const SpinorSection& psi, const GridOptions& g,
                                 double tol = 1e-7);

/// Direct Dirac expansion versus the sum of Clifford products with covariant derivatives.
CheckResult dirac_consistency(const FrameChart& chart, const SpinorSection& psi, const GridOptions& g,
                              double tol = 1e-10);

// ------------------------------------------------------------------ dim 2

/// Gauss scalar R_1212 -/+ 4 det S -/+ 4 det T and the Codazzi vector
/// C = nabla_{e1}(A e2) - nabla_{e2}(A e1) - A([e1,e2]).
std::vector<CheckResult> gauss_codazzi_2d(const FrameChart& chart, const EndoField& a, GaussSign sign,
                                          const GridOptions& g, double tol = 1e-6);

struct SkewPart {
  ScalarField b;
  CheckResult db;  // sup |grad b|
};
SkewPart skew_part_analysis(const FrameChart& chart, const EndoField& a, const GridOptions& g, double tol = 1e-8);

/// |D psi + Tr(S) psi - 2b omega.psi| / |psi| and the spread of |psi|.
std::vector<CheckResult> dirac_remark_2d(const FrameChart& chart, const SpinorSection& psi, const EndoField& a,
                                         const GridOptions& g, double tol = 1e-6);

struct TwistorDecomposition {
  ScalarField a;
  ScalarField b;
  EndoField endo;
  std::vector<CheckResult> checks;
};
/// Real case: a = -1/2 Re herm(D psi, psi), b = Re herm(nabla_{e1} psi, e2.psi)
/// for a unit-norm twistor spinor, then reconstruction of nabla psi = (a Id + b J)(X).psi.
TwistorDecomposition twistor_decompose(const FrameChart& chart, const SpinorSection& psi, const GridOptions& g,
                                       double tol = 1e-6);
/// Imaginary case: nabla_X psi = i a X.psi + i b J(X).psi, with components
/// taken in the real-orthonormal frame {i psi, i e1.psi, i e2.psi, i e1.e2.psi}/|psi|.
TwistorDecomposition twistor_decompose_imaginary(const FrameChart& chart, const SpinorSection& psi,
                                                 const GridOptions& g, double tol = 1e-6);

/// |nabla_X psi + 1/2 X.D psi| / |psi|.
CheckResult twistor_residual(const FrameChart& chart, const SpinorSection& psi, const GridOptions& g,
                             double tol = 1e-6);

std::vector<CheckResult> imaginary_pair_check(const FrameChart& chart, const SpinorSection& phi,
                                              const SpinorSection& psi, const EndoField& a, const GridOptions& g,
                                              double tol = 1e-6);

// ------------------------------------------------------------------ dim 3

struct SkewFrame {
  Jet b;
  JetVec xi, e1, e2;
};

struct SkewOptions {
  int e1_axis = -1;   // frame axis projected to build e1; -1 picks automatically
  bool flip = false;  // use (-xi, e2, e1, -b)
  int kernel_axis = -1;  // xi = +-E_axis with signed b, smooth through b = 0
};

/// b, xi, e1, e2 from the skew part of A: A(X) = w x X, b = |w|, xi = w/b.
SkewFrame skew_frame(const JetMat& a, int e1_axis, bool flip, int kernel_axis = -1);
/// Fills in the kernel axis and e1 axis of `so` from A, and flips so that b >= 0 at the chart center.
SkewOptions resolve_skew_options(const FrameChart& chart, const EndoField& a, SkewOptions so, const EvalOptions& opts);
int choose_e1_axis(const FrameChart& chart, const EndoField& a, const EvalOptions& opts);

/// Pointwise quantities of the skew data at one point.
struct SkewValues {
  double b = 0, xi_b = 0, trace_h = 0;
  double h[2][2] = {{0, 0}, {0, 0}};
  double kappa[2] = {0, 0};  // g(nabla_xi xi, e_a)
  double e_b[2] = {0, 0};    // e_a(b)
  double bracket_xi = 0;     // g([e1,e2], xi)
  double kappa_xi = 0;       // g(nabla_xi xi, xi)
};
SkewValues skew_values(const ConnectionData& conn, const JetMat& a, const SkewOptions& so);

std::vector<CheckResult> integrability_3d(const FrameChart& chart, const EndoField& a, const GridOptions& g,
                                          const SkewOptions& so = {}, double tol = 1e-6);
std::vector<CheckResult> ricci_system_3d(const FrameChart& chart, const EndoField& a, const GridOptions& g,
                                         const SkewOptions& so = {}, double tol = 1e-6);
std::vector<CheckResult> tau_zeta_diagnostics(const FrameChart& chart, const SpinorSection& psi, const EndoField& a,
                                              const GridOptions& g, double tol = 1e-7);
/// |D psi - 2b xi.psi| / |psi|.
CheckResult dirac_skew_3d(const FrameChart& chart, const SpinorSection& psi, const EndoField& a,
                          const GridOptions& g, double tol = 1e-7);
/// sup_i |sum_j E_j.R(E_i,E_j)psi + 1/2 Ric(E_i).psi| / |psi|.
CheckResult ricci_identity(const FrameChart& chart, const SpinorSection& psi, const GridOptions& g,
                           double tol = 1e-6);
/// The kernel field of A is a unit field with A xi = 0, and A has no symmetric part.
CheckResult skew_structure_3d(const FrameChart& chart, const EndoField& a, const GridOptions& g, double tol = 1e-10);

/// Coordinate components of the closed 1-form tau = b xi (jets of given order).
JetVec tau_coordinates(const FrameChart& chart, const EndoField& a, const Point& p, int order,
                       const EvalOptions& opts);
/// u with du = -2 tau, u(base) = 0, by quadrature along axis-parallel legs
/// (coordinate order 0,1,2, or reversed).
ScalarField conformal_potential(const FrameChart& chart, const EndoField& a, bool reversed = false);

struct ConformalResult {
  FrameChart chart;
  SpinorSection psi;
  ScalarField u;
  std::vector<CheckResult> checks;
};
ConformalResult conformal_to_parallel(const FrameChart& chart, const SpinorSection& psi, const EndoField& a,
                                      const GridOptions& g, double tol = 1e-6);

struct SkewFromParallel {
  FrameChart chart;
  SpinorSection psi;
  EndoField a;
  ScalarField u;
  std::vector<CheckResult> checks;
};
/// The data of e^{2u} g carried by a parallel spinor psi0 of a flat chart:
/// A(X) = -1/2 *(du wedge X) in the barred frame.
SkewFromParallel parallel_to_skew(const FrameChart& flat, const SpinorSection& psi0, const ScalarField& u,
                                  const GridOptions& g, double tol = 1e-7);
/// The skew endomorphism -1/2 *(du wedge X) of the rescaled chart, as a field.
EndoField conformal_endomorphism(const FrameChart& rescaled, const ScalarField& u);

}  // namespace skewspin
