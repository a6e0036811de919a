#include "latticepde/functionals.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace latticepde {

void ProblemParams::validate() const {
  if (dim < 2) throw std::invalid_argument("dimension N must be >= 2");
  if (!std::isfinite(p) || !std::isfinite(q) || !(p >= 2.0) || !(p < q)) {
    throw std::invalid_argument("exponents must satisfy 2 <= p < q < inf");
  }
  if (!std::isfinite(beta) || !(beta > 0.0)) throw std::invalid_argument("beta must be a finite positive value");
  for (const CoefficientField* f : {&a, &b}) {
    for (const auto& [site, delta] : f->profile()) {
      if (site.dim() != dim) throw std::invalid_argument("coefficient profile dimension does not match N");
    }
  }
}

ProblemParams ProblemParams::limit_problem() const {
  ProblemParams out = *this;
  out.a = CoefficientField::constant(a.limit());
  out.b = CoefficientField::constant(b.limit());
  return out;
}

double signed_power(double t, double s) {
  if (s == 2.0) return t;
  if (t == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(t), s - 1.0), t);
}

double j1(const LatticeFunction& u, const ProblemParams& params) {
  if (!params.a.is_constant()) throw std::invalid_argument("J1 requires a constant coefficient a");
  return 0.5 * gradient_norm_sq(u) + params.a.limit() / params.p * lp_power_sum(u, params.p);
}

double j2(const LatticeFunction& u, const ProblemParams& params) {
  return params.beta * lp_power_sum(u, params.q);
}

double phi(const LatticeFunction& u, const ProblemParams& params) {
  const LatticeBox& box = u.box();
  std::vector<double> terms(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) {
    const Site& x = box.site(i);
    const double m = std::abs(u[i]);
    terms[i] = params.a.eval(x) / params.p * std::pow(m, params.p) - params.b.eval(x) / params.q * std::pow(m, params.q);
  }
  return 0.5 * gradient_norm_sq(u) + pairwise_sum(terms);
}

double phi_bar(const LatticeFunction& u, const ProblemParams& params) {
  return phi(u, params.limit_problem());
}

LatticeFunction gateaux_gradient(const LatticeFunction& u, const ProblemParams& params) {
  LatticeFunction g = laplacian(u);
  const LatticeBox& box = u.box();
  for (std::size_t i = 0; i < box.size(); ++i) {
    const Site& x = box.site(i);
    g[i] = -g[i] + params.a.eval(x) * signed_power(u[i], params.p) - params.b.eval(x) * signed_power(u[i], params.q);
  }
  return g;
}

double residual_norm(const LatticeFunction& u, const ProblemParams& params) {
  return lp_norm(gateaux_gradient(u, params), 2.0);
}

}  // namespace latticepde
