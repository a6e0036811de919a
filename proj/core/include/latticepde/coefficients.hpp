#pragma once

#include <map>
#include <vector>

#include "latticepde/lattice.hpp"

namespace latticepde {

struct ProfileEntry {
  Site site;
  double delta = 0.0;
};

/// Coefficient a(x) or b(x) on Z^N with a positive limit at infinity.
///
/// A constant field is c everywhere. A radial-limit field is c_bar plus a
/// finite perturbation table, so the limit c_bar is reached exactly outside
/// the table. Perturbations may be negative as long as c_bar + delta >= 0.
class CoefficientField {
public:
  enum class Kind { constant, radial_limit };

  static CoefficientField constant(double value);
  static CoefficientField radial_limit(double limit, const std::vector<ProfileEntry>& profile);

  Kind kind() const { return kind_; }
  bool is_constant() const { return kind_ == Kind::constant; }
  /// c for a constant field, c_bar for a radial-limit field.
  double limit() const { return limit_; }
  const std::map<Site, double>& profile() const { return profile_; }

  double eval(const Site& x) const;

  /// sup over |x|_1 > R of |eval(x) - limit()|.
  double tail_deviation(int radius) const;

  /// min / max of eval over the sites of a box.
  double min_over(const LatticeBox& box) const;
  double max_over(const LatticeBox& box) const;

private:
  CoefficientField(Kind kind, double limit) : kind_(kind), limit_(limit) {}

  Kind kind_;
  double limit_;
  std::map<Site, double> profile_;
};

}  // namespace latticepde
