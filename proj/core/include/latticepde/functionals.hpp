#pragma once

#include "latticepde/coefficients.hpp"
#include "latticepde/lattice.hpp"

namespace latticepde {

/// Data of -Delta u + a|u|^{p-2}u - b|u|^{q-2}u = 0 on Z^N together with
/// the constraint weight beta of J2(u) = beta ||u||_q^q.
struct ProblemParams {
  int dim = 2;
  double p = 2.0;
  double q = 4.0;
  CoefficientField a = CoefficientField::constant(1.0);
  CoefficientField b = CoefficientField::constant(1.0);
  double beta = 1.0;

  /// Throws std::invalid_argument unless N >= 2, 2 <= p < q < inf and beta > 0.
  void validate() const;

  /// Same problem with a and b replaced by their limits at infinity.
  ProblemParams limit_problem() const;
};

/// |t|^{s-2} t, with the value 0 at t = 0 for every s >= 2.
double signed_power(double t, double s);

/// J1(u) = 1/2 ||grad u||^2 + (a/p) ||u||_p^p; requires a constant a.
double j1(const LatticeFunction& u, const ProblemParams& params);
/// J2(u) = beta ||u||_q^q.
double j2(const LatticeFunction& u, const ProblemParams& params);

/// Phi(u) = 1/2 ||grad u||^2 + 1/p sum a|u|^p - 1/q sum b|u|^q.
double phi(const LatticeFunction& u, const ProblemParams& params);
/// Phi with the coefficient fields replaced by their limits.
double phi_bar(const LatticeFunction& u, const ProblemParams& params);

/// g = -Delta u + a|u|^{p-2}u - b|u|^{q-2}u on the box, so that
/// <Phi'(u), phi> = sum_x g(x) phi(x) for box-supported phi.
LatticeFunction gateaux_gradient(const LatticeFunction& u, const ProblemParams& params);

/// l2 norm of gateaux_gradient over the box.
double residual_norm(const LatticeFunction& u, const ProblemParams& params);

}  // namespace latticepde
