#include "latticepde/minimizer.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace latticepde {

namespace {

struct ConstrainedGradients {
  LatticeFunction j1_grad;
  LatticeFunction j2_grad;
};

// grad J1 = -Delta u + a |u|^{p-2} u,  grad J2 = q beta |u|^{q-2} u.
ConstrainedGradients constrained_gradients(const LatticeFunction& u, const ProblemParams& params) {
  ConstrainedGradients g{laplacian(u), LatticeFunction(u.box())};
  const double a = params.a.limit();
  for (std::size_t i = 0; i < u.size(); ++i) {
    g.j1_grad[i] = -g.j1_grad[i] + a * signed_power(u[i], params.p);
    g.j2_grad[i] = params.q * params.beta * signed_power(u[i], params.q);
  }
  return g;
}

// Component of grad J1 tangent to the level set J2 = 1 at u.
LatticeFunction tangent_gradient(const ConstrainedGradients& g) {
  const double gg = dot(g.j2_grad, g.j2_grad);
  LatticeFunction pg = g.j1_grad;
  if (gg > 0.0) {
    const double coeff = dot(g.j1_grad, g.j2_grad) / gg;
    for (std::size_t i = 0; i < pg.size(); ++i) pg[i] -= coeff * g.j2_grad[i];
  }
  return pg;
}

LatticeFunction abs_values(LatticeFunction u) {
  for (double& v : u.values()) v = std::abs(v);
  return u;
}

void require_constant_a(const ProblemParams& params) {
  if (!params.a.is_constant()) throw std::invalid_argument("the constrained problem requires a constant coefficient a");
}

}  // namespace

LatticeFunction normalize_to_constraint(const LatticeFunction& u, const ProblemParams& params) {
  const double norm_q = lp_norm(u, params.q);
  if (!(norm_q > 0.0)) throw std::invalid_argument("cannot normalize the zero function");
  LatticeFunction out = u;
  out *= 1.0 / (std::pow(params.beta, 1.0 / params.q) * norm_q);
  return out;
}

std::pair<LatticeFunction, Site> recenter(const LatticeFunction& u) {
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double m = std::abs(u[i]);
    if (m > best_value) {
      best_value = m;
      best = i;
    }
  }
  if (!(best_value > 0.0)) throw std::invalid_argument("cannot recenter the zero function");
  const Site center = u.box().site(best);
  if (center.is_origin()) return {u, center};
  return {translate(u, center), center};
}

double lagrange_multiplier(const LatticeFunction& u0, const ProblemParams& params, double constraint_tol) {
  require_constant_a(params);
  const double constraint = j2(u0, params);
  if (!(std::abs(constraint - 1.0) <= constraint_tol)) {
    std::ostringstream os;
    os << "lagrange_multiplier: J2(u) = " << constraint << " violates the constraint J2 = 1";
    throw std::invalid_argument(os.str());
  }
  return (gradient_norm_sq(u0) + params.a.limit() * lp_power_sum(u0, params.p)) / params.q;
}

LambdaBounds lambda_bounds(const ProblemParams& params) {
  params.validate();
  require_constant_a(params);
  const double a = params.a.limit();
  const double bp = std::pow(params.beta, -params.p / params.q);
  return {a / params.q * bp, params.dim * std::pow(params.beta, -2.0 / params.q) + a / params.p * bp};
}

LatticeFunction unit_spike(const LatticeBox& box, const ProblemParams& params) {
  return LatticeFunction::spike(box, Site::origin(box.dim()), std::pow(params.beta, -1.0 / params.q));
}

MinimizeResult minimize_constrained(const ProblemParams& params, const LatticeBox& box,
                                    const std::optional<LatticeFunction>& init, const MinimizeOptions& options) {
  params.validate();
  require_constant_a(params);
  if (box.dim() != params.dim) throw std::invalid_argument("box dimension does not match N");
  if (!(options.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (init && !(init->box() == box)) throw std::invalid_argument("initial guess lives on a different box");

  LatticeFunction u = normalize_to_constraint(abs_values(init ? *init : unit_spike(box, params)), params);
  MinimizeResult result{u};
  double j1_u = j1(u, params);
  result.j1_history.push_back(j1_u);
  result.max_constraint_violation = std::abs(j2(u, params) - 1.0);

  auto grads = constrained_gradients(u, params);
  LatticeFunction pg = tangent_gradient(grads);
  double step = 1.0 / (4.0 * params.dim + params.a.limit());
  std::string stop_reason = "iteration budget exhausted";

  int it = 0;
  for (;; ++it) {
    const double lambda = dot(grads.j1_grad, u) / dot(grads.j2_grad, u);
    LatticeFunction el = grads.j1_grad;
    for (std::size_t i = 0; i < el.size(); ++i) el[i] -= lambda * grads.j2_grad[i];
    if (lp_norm(el, 2.0) <= options.tol) {
      result.converged = true;
      stop_reason = "converged";
      break;
    }
    if (it >= options.max_iter) break;

    const double pg_sq = dot(pg, pg);
    // Roundoff floor for J1 comparisons once the predicted decrease is below eps.
    const double slack = 16.0 * std::numeric_limits<double>::epsilon() * std::abs(j1_u);
    bool accepted = false;
    LatticeFunction trial(box);
    double j1_trial = 0.0;
    for (double t = step; t > 1e-30; t *= options.backtrack_factor) {
      trial = u;
      for (std::size_t i = 0; i < trial.size(); ++i) trial[i] = std::abs(u[i] - t * pg[i]);
      if (trial.is_zero()) continue;
      trial = normalize_to_constraint(trial, params);
      j1_trial = j1(trial, params);
      if (j1_trial <= j1_u - options.sufficient_decrease * t * pg_sq + slack) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      stop_reason = "line search failed";
      break;
    }

    if (options.recenter_period > 0 && (it + 1) % options.recenter_period == 0) {
      auto [centered, shift] = recenter(trial);
      if (!shift.is_origin()) {
        trial = normalize_to_constraint(centered, params);
        j1_trial = j1(trial, params);
      }
    }

    auto next_grads = constrained_gradients(trial, params);
    LatticeFunction next_pg = tangent_gradient(next_grads);
    // Barzilai-Borwein step from the secant pair (s, y).
    double ss = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < trial.size(); ++i) {
      const double s = trial[i] - u[i];
      const double y = next_pg[i] - pg[i];
      ss += s * s;
      sy += s * y;
    }
    step = (sy > 0.0 && ss > 0.0) ? std::min(ss / sy, 1e6) : 2.0 * step;

    u = std::move(trial);
    j1_u = j1_trial;
    grads = std::move(next_grads);
    pg = std::move(next_pg);
    result.j1_history.push_back(j1_u);
    result.max_constraint_violation = std::max(result.max_constraint_violation, std::abs(j2(u, params) - 1.0));
  }

  result.u0 = u;
  result.iterations = it;
  result.lambda0 = j1_u;
  result.lambda = lagrange_multiplier(u, params, 1e-9);
  result.b_tilde = result.lambda * params.q * params.beta;
  ProblemParams el_params = params;
  el_params.b = CoefficientField::constant(result.b_tilde > 0.0 ? result.b_tilde : std::numeric_limits<double>::min());
  result.residual = residual_norm(u, el_params);

  std::ostringstream diag;
  diag << stop_reason << " after " << it << " iterations; residual " << result.residual;
  if (result.max_constraint_violation > options.constraint_tol) {
    diag << "; constraint drift " << result.max_constraint_violation;
  }
  result.diagnostics = diag.str();
  return result;
}

std::vector<SweepRow> beta_sweep(const ProblemParams& base, const std::vector<double>& betas, const LatticeBox& box,
                                 const MinimizeOptions& options) {
  if (betas.empty()) throw std::invalid_argument("beta_sweep needs at least one beta");
  for (double beta : betas) {
    if (!std::isfinite(beta) || !(beta > 0.0)) throw std::invalid_argument("every beta must be positive");
  }
  std::vector<SweepRow> rows;
  rows.reserve(betas.size());
  for (double beta : betas) {
    SweepRow row;
    row.beta = beta;
    ProblemParams params = base;
    params.beta = beta;
    try {
      row.bounds = lambda_bounds(params);
      row.b_tilde_lower = params.q * beta * row.bounds.lower;
      row.b_tilde_upper = params.q * beta * row.bounds.upper;
      row.result = minimize_constrained(params, box, std::nullopt, options);
      row.lambda_in_bounds = row.result->lambda >= row.bounds.lower && row.result->lambda <= row.bounds.upper;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

bool positivity_check(const LatticeFunction& u) {
  for (double v : u.values()) {
    if (!(v > 0.0)) return false;
  }
  return true;
}

}  // namespace latticepde
