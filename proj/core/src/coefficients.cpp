#include "latticepde/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace latticepde {

CoefficientField CoefficientField::constant(double value) {
  if (!std::isfinite(value) || !(value > 0.0)) {
    throw std::invalid_argument("constant coefficient must be a finite positive value");
  }
  return CoefficientField(Kind::constant, value);
}

CoefficientField CoefficientField::radial_limit(double limit, const std::vector<ProfileEntry>& profile) {
  if (!std::isfinite(limit) || !(limit > 0.0)) {
    throw std::invalid_argument("coefficient limit at infinity must be a finite positive value");
  }
  CoefficientField f(Kind::radial_limit, limit);
  int dim = -1;
  for (const auto& entry : profile) {
    if (dim < 0) dim = entry.site.dim();
    if (entry.site.dim() != dim || dim < 2) {
      throw std::invalid_argument("profile sites must share one lattice dimension >= 2");
    }
    if (!std::isfinite(entry.delta) || limit + entry.delta < 0.0) {
      throw std::invalid_argument("profile entry at " + entry.site.to_string() + " makes the coefficient negative");
    }
    if (!f.profile_.emplace(entry.site, entry.delta).second) {
      throw std::invalid_argument("duplicate profile site " + entry.site.to_string());
    }
  }
  return f;
}

double CoefficientField::eval(const Site& x) const {
  if (kind_ == Kind::constant) return limit_;
  const auto it = profile_.find(x);
  return it == profile_.end() ? limit_ : limit_ + it->second;
}

double CoefficientField::tail_deviation(int radius) const {
  if (radius < 1) throw std::invalid_argument("tail_deviation requires R >= 1");
  double dev = 0.0;
  for (const auto& [site, delta] : profile_) {
    if (site.l1_norm() > radius) dev = std::max(dev, std::abs(delta));
  }
  return dev;
}

double CoefficientField::min_over(const LatticeBox& box) const {
  double m = std::numeric_limits<double>::infinity();
  for (const Site& x : box.sites()) m = std::min(m, eval(x));
  return m;
}

double CoefficientField::max_over(const LatticeBox& box) const {
  double m = 0.0;
  for (const Site& x : box.sites()) m = std::max(m, eval(x));
  return m;
}

}  // namespace latticepde
