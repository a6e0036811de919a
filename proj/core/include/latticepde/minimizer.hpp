#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "latticepde/functionals.hpp"
#include "latticepde/lattice.hpp"

namespace latticepde {

/// Outcome of inf{ J1(u) : J2(u) = 1 } on a truncated box.
struct MinimizeResult {
  explicit MinimizeResult(LatticeFunction u) : u0(std::move(u)) {}

  LatticeFunction u0;
  double lambda0 = 0.0;   // J1(u0)
  double lambda = 0.0;    // Lagrange multiplier
  double b_tilde = 0.0;   // lambda * q * beta
  double residual = 0.0;  // Euler-Lagrange residual with b = b_tilde
  int iterations = 0;
  bool converged = false;
  std::string diagnostics;

  /// J1 after every accepted step, starting with the initial iterate.
  std::vector<double> j1_history;
  /// max |J2(u) - 1| over all iterates.
  double max_constraint_violation = 0.0;
};

struct MinimizeOptions {
  double tol = 1e-8;
  int max_iter = 20000;
  int recenter_period = 25;
  double backtrack_factor = 0.5;
  double sufficient_decrease = 1e-4;
  double constraint_tol = 1e-12;
};

/// u / (beta^{1/q} ||u||_q), so that J2 = 1.
LatticeFunction normalize_to_constraint(const LatticeFunction& u, const ProblemParams& params);

/// Moves the lexicographically first site of maximal |u| to the origin.
/// Returns the translated function and that site.
std::pair<LatticeFunction, Site> recenter(const LatticeFunction& u);

/// lambda = (||grad u||^2 + a ||u||_p^p) / q for u on the constraint J2 = 1.
double lagrange_multiplier(const LatticeFunction& u0, const ProblemParams& params, double constraint_tol = 1e-10);

struct LambdaBounds {
  double lower = 0.0;  // (a/q) beta^{-p/q}
  double upper = 0.0;  // J1 of the unit-J2 spike: N beta^{-2/q} + (a/p) beta^{-p/q}
};

LambdaBounds lambda_bounds(const ProblemParams& params);

/// The unit-J2 spike v0 = beta^{-1/q} delta_0.
LatticeFunction unit_spike(const LatticeBox& box, const ProblemParams& params);

/// Projected gradient descent on the constraint manifold J2 = 1 with
/// Barzilai-Borwein trial steps and Armijo backtracking on J1.
/// Iterates stay nonnegative (J1(|u|) <= J1(u)) and are recentered every
/// recenter_period iterations. Stops once the Euler-Lagrange residual
/// || -Delta u + a u^{p-1} - lambda q beta u^{q-1} ||_2 <= tol.
MinimizeResult minimize_constrained(const ProblemParams& params, const LatticeBox& box,
                                    const std::optional<LatticeFunction>& init = std::nullopt,
                                    const MinimizeOptions& options = {});

struct SweepRow {
  double beta = 0.0;
  std::optional<MinimizeResult> result;
  LambdaBounds bounds;
  /// [q beta lower, q beta upper]
  double b_tilde_lower = 0.0;
  double b_tilde_upper = 0.0;
  bool lambda_in_bounds = false;
  std::string error;
};

/// One constrained minimization per beta, merged in input order.
std::vector<SweepRow> beta_sweep(const ProblemParams& base, const std::vector<double>& betas,
                                 const LatticeBox& box, const MinimizeOptions& options = {});

/// True iff u > 0 at every box site.
bool positivity_check(const LatticeFunction& u);

}  // namespace latticepde
