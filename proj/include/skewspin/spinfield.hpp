#pragma once

// Spinor sections in the frame-adapted trivialisation, the spin connection
//   nabla_{E_i} psi = E_i(psi) + 1/2 sum_{j<k} Gamma_ij^k E_j.E_k.psi,
// the Dirac operator D = sum_i E_i.nabla_{E_i} and spinorial curvature.

#include <array>

#include "skewspin/clifford.hpp"
#include "skewspin/geometry.hpp"

namespace skewspin {

class SpinorSection {
 public:
  SpinorSection() = default;
  /// Components (Re psi_1, Im psi_1, Re psi_2, Im psi_2).
  explicit SpinorSection(std::array<ScalarField, 4> components) : comps_(std::move(components)) {}
  static SpinorSection constant(const Spinor& s);
  /// A section given by a jet-valued closure.
  static SpinorSection from_function(std::function<SpinorJet(const Point&, int, const EvalOptions&)> fn, int nvars,
                                     const std::string& label);

  SpinorJet jet(const Point& p, int order, const EvalOptions& opts = {}) const;
  Spinor value(const Point& p, const EvalOptions& opts = {}) const;
  const std::array<ScalarField, 4>& components() const { return comps_; }

 private:
  std::array<ScalarField, 4> comps_;
};

/// nabla_{E_i} phi for a spinor jet phi at conn.point.
SpinorJet spin_covariant_derivative(const ConnectionData& conn, const CliffordRep& rep, const SpinorJet& phi, int i);
/// D phi, expanded directly as sum_i E_i.E_i(phi) + 1/2 sum_i sum_{j<k} Gamma_ij^k E_i.E_j.E_k.phi.
SpinorJet dirac(const ConnectionData& conn, const CliffordRep& rep, const SpinorJet& phi);
/// R(E_i,E_j)phi = nabla_i nabla_j phi - nabla_j nabla_i phi - sum_k c_ij^k nabla_k phi.
SpinorJet spinorial_curvature(const ConnectionData& conn, const CliffordRep& rep, const SpinorJet& phi, int i, int j);
/// |sum_j E_j.R(E_i,E_j)phi + 1/2 Ric(E_i).phi| / |phi| at the base point.
double ricci_identity_residual(const ConnectionData& conn, const CurvatureData& curv, const CliffordRep& rep,
                               const SpinorJet& phi, int i);

/// Clifford action of a frame vector with jet components.
SpinorJet clifford_vec(const CliffordRep& rep, const JetVec& v, const SpinorJet& phi);
/// Pointwise Euclidean norm |phi - psi|.
double spinor_distance(const Spinor& a, const Spinor& b);

}  // namespace skewspin
