#include "latticepde/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "latticepde/coefficients.hpp"

namespace latticepde {

namespace {

void require_same_dim(const Site& x, const Site& y) {
  if (x.dim() != y.dim()) {
    throw std::invalid_argument("site dimension mismatch: " + x.to_string() + " vs " + y.to_string());
  }
}

// Lexicographic enumeration of B_R: walk the bounding cube with the last
// coordinate fastest and keep the sites with |x|_1 <= R.
std::vector<Site> enumerate_ball(int dim, int radius) {
  std::vector<Site> sites;
  std::vector<int> x(static_cast<std::size_t>(dim), -radius);
  while (true) {
    int l1 = 0;
    for (int c : x) l1 += std::abs(c);
    if (l1 <= radius) sites.emplace_back(x);
    int k = dim - 1;
    while (k >= 0 && x[static_cast<std::size_t>(k)] == radius) {
      x[static_cast<std::size_t>(k)] = -radius;
      --k;
    }
    if (k < 0) break;
    ++x[static_cast<std::size_t>(k)];
  }
  return sites;
}

}  // namespace

int Site::l1_norm() const {
  int s = 0;
  for (int c : coords_) s += std::abs(c);
  return s;
}

bool Site::is_origin() const {
  return std::all_of(coords_.begin(), coords_.end(), [](int c) { return c == 0; });
}

Site Site::operator+(const Site& other) const {
  require_same_dim(*this, other);
  Site r = *this;
  for (std::size_t i = 0; i < coords_.size(); ++i) r.coords_[i] += other.coords_[i];
  return r;
}

Site Site::operator-(const Site& other) const {
  require_same_dim(*this, other);
  Site r = *this;
  for (std::size_t i = 0; i < coords_.size(); ++i) r.coords_[i] -= other.coords_[i];
  return r;
}

Site Site::operator-() const {
  Site r = *this;
  for (int& c : r.coords_) c = -c;
  return r;
}

std::string Site::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) os << ',';
    os << coords_[i];
  }
  os << ')';
  return os.str();
}

int graph_distance(const Site& x, const Site& y) {
  require_same_dim(x, y);
  return (x - y).l1_norm();
}

LatticeBox::LatticeBox(int dim, int radius) : dim_(dim), radius_(radius) {
  if (dim < 2) throw std::invalid_argument("lattice dimension must be >= 2");
  if (radius < 1) throw std::invalid_argument("box radius must be >= 1");
  // Cube lookup is dense over [-R-1, R+1]^N so exterior-layer queries stay cheap.
  const auto side = static_cast<std::size_t>(2 * radius + 3);
  std::size_t cube = 1;
  for (int i = 0; i < dim; ++i) {
    if (cube > (std::size_t{1} << 28) / side) throw std::invalid_argument("box too large");
    cube *= side;
  }

  auto sites = std::make_shared<std::vector<Site>>(enumerate_ball(dim, radius));
  sites_ = sites;
  auto lookup = std::make_shared<std::vector<std::size_t>>(cube, npos);
  for (std::size_t i = 0; i < sites->size(); ++i) (*lookup)[cube_offset((*sites)[i])] = i;
  cube_lookup_ = lookup;

  auto nbrs = std::make_shared<std::vector<std::size_t>>(sites->size() * 2 * static_cast<std::size_t>(dim));
  for (std::size_t i = 0; i < sites->size(); ++i) {
    Site y = (*sites)[i];
    for (int k = 0; k < dim; ++k) {
      for (int sign : {1, -1}) {
        y[static_cast<std::size_t>(k)] += sign;
        const std::size_t slot = i * 2 * static_cast<std::size_t>(dim) + 2 * static_cast<std::size_t>(k) + (sign > 0 ? 0 : 1);
        (*nbrs)[slot] = (*lookup)[cube_offset(y)];
        y[static_cast<std::size_t>(k)] -= sign;
      }
    }
  }
  neighbors_ = nbrs;
}

std::size_t LatticeBox::cube_offset(const Site& x) const {
  const auto side = static_cast<std::size_t>(2 * radius_ + 3);
  std::size_t off = 0;
  for (int k = 0; k < dim_; ++k) off = off * side + static_cast<std::size_t>(x[static_cast<std::size_t>(k)] + radius_ + 1);
  return off;
}

bool LatticeBox::contains(const Site& x) const {
  if (x.dim() != dim_) throw std::invalid_argument("site " + x.to_string() + " does not match box dimension");
  return x.l1_norm() <= radius_;
}

std::optional<std::size_t> LatticeBox::index_of(const Site& x) const {
  if (!contains(x)) return std::nullopt;
  return (*cube_lookup_)[cube_offset(x)];
}

std::span<const std::size_t> LatticeBox::neighbor_indices(std::size_t index) const {
  const auto deg = 2 * static_cast<std::size_t>(dim_);
  return std::span<const std::size_t>(neighbors_->data() + index * deg, deg);
}

std::size_t ball_site_count(int dim, int radius) {
  if (radius < 0) return 0;
  if (dim == 0) return 1;
  std::size_t total = 0;
  for (int c = -radius; c <= radius; ++c) total += ball_site_count(dim - 1, radius - std::abs(c));
  return total;
}

std::vector<Site> neighbors(const LatticeBox& box, const Site& x) {
  if (x.dim() != box.dim()) throw std::invalid_argument("site " + x.to_string() + " does not match box dimension");
  std::vector<Site> out;
  out.reserve(2 * static_cast<std::size_t>(box.dim()));
  for (int k = 0; k < box.dim(); ++k) {
    for (int sign : {1, -1}) {
      Site y = x;
      y[static_cast<std::size_t>(k)] += sign;
      out.push_back(std::move(y));
    }
  }
  return out;
}

LatticeFunction::LatticeFunction(LatticeBox box) : box_(std::move(box)), values_(box_.size(), 0.0) {}

LatticeFunction::LatticeFunction(LatticeBox box, std::vector<double> values)
    : box_(std::move(box)), values_(std::move(values)) {
  if (values_.size() != box_.size()) throw std::invalid_argument("value count does not match box size");
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("lattice function values must be finite");
  }
}

LatticeFunction LatticeFunction::spike(const LatticeBox& box, const Site& x, double height) {
  LatticeFunction u(box);
  u.set(x, height);
  return u;
}

double LatticeFunction::at(const Site& x) const {
  const auto idx = box_.index_of(x);
  return idx ? values_[*idx] : 0.0;
}

void LatticeFunction::set(const Site& x, double value) {
  const auto idx = box_.index_of(x);
  if (!idx) throw std::out_of_range("site " + x.to_string() + " lies outside the box");
  values_[*idx] = value;
}

bool LatticeFunction::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

void LatticeFunction::require_same_box(const LatticeFunction& other) const {
  if (!(box_ == other.box_)) throw std::invalid_argument("lattice functions live on different boxes");
}

LatticeFunction& LatticeFunction::operator+=(const LatticeFunction& other) {
  require_same_box(other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

LatticeFunction& LatticeFunction::operator-=(const LatticeFunction& other) {
  require_same_box(other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

LatticeFunction& LatticeFunction::operator*=(double factor) {
  for (double& v : values_) v *= factor;
  return *this;
}

double pairwise_sum(std::span<const double> terms) {
  constexpr std::size_t kBlock = 8;
  if (terms.size() <= kBlock) {
    double s = 0.0;
    for (double t : terms) s += t;
    return s;
  }
  const std::size_t half = terms.size() / 2;
  return pairwise_sum(terms.first(half)) + pairwise_sum(terms.subspan(half));
}

LatticeFunction translate(const LatticeFunction& u, const Site& shift) {
  return translate(u, shift, u.box());
}

LatticeFunction translate(const LatticeFunction& u, const Site& shift, const LatticeBox& target) {
  if (shift.dim() != u.dim() || target.dim() != u.dim()) {
    throw std::invalid_argument("translate: dimension mismatch");
  }
  LatticeFunction out(target);
  for (std::size_t i = 0; i < target.size(); ++i) out[i] = u.at(target.site(i) + shift);
  return out;
}

LatticeFunction embed(const LatticeFunction& u, const LatticeBox& target) {
  if (u.box() == target) return u;
  return translate(u, Site::origin(u.dim()), target);
}

double lp_power_sum(const LatticeFunction& u, double p) {
  if (!(p >= 1.0) || std::isinf(p)) throw std::invalid_argument("lp_power_sum requires finite p >= 1");
  std::vector<double> terms(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) terms[i] = std::pow(std::abs(u[i]), p);
  return pairwise_sum(terms);
}

double sup_norm(const LatticeFunction& u) {
  double m = 0.0;
  for (double v : u.values()) m = std::max(m, std::abs(v));
  return m;
}

double lp_norm(const LatticeFunction& u, double p) {
  if (std::isinf(p) && p > 0) return sup_norm(u);
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm requires p >= 1");
  return std::pow(lp_power_sum(u, p), 1.0 / p);
}

double gradient_form(const LatticeFunction& u, const LatticeFunction& v, const Site& x) {
  if (!(u.box() == v.box())) throw std::invalid_argument("gradient_form: functions live on different boxes");
  const double ux = u.at(x);
  const double vx = v.at(x);
  std::vector<double> terms;
  for (const Site& y : neighbors(u.box(), x)) terms.push_back((u.at(y) - ux) * (v.at(y) - vx));
  return 0.5 * pairwise_sum(terms);
}

double gradient_inner(const LatticeFunction& u, const LatticeFunction& v) {
  if (!(u.box() == v.box())) throw std::invalid_argument("gradient_inner: functions live on different boxes");
  const LatticeBox& box = u.box();
  const std::size_t dim = static_cast<std::size_t>(box.dim());
  std::vector<double> per_site(box.size());
  std::vector<double> terms(2 * dim);
  for (std::size_t i = 0; i < box.size(); ++i) {
    const auto nb = box.neighbor_indices(i);
    std::size_t t = 0;
    for (std::size_t k = 0; k < dim; ++k) {
      // +e_k edge: owned by x whether y is inside or in the exterior layer.
      const std::size_t up = nb[2 * k];
      terms[t++] = up == LatticeBox::npos ? u[i] * v[i] : (u[up] - u[i]) * (v[up] - v[i]);
      // -e_k edge: owned by x only when y is exterior, else by y's +e_k edge.
      const std::size_t down = nb[2 * k + 1];
      terms[t++] = down == LatticeBox::npos ? u[i] * v[i] : 0.0;
    }
    per_site[i] = pairwise_sum(terms);
  }
  return pairwise_sum(per_site);
}

double gradient_norm_sq(const LatticeFunction& u) { return gradient_inner(u, u); }

double laplacian_at(const LatticeFunction& u, const Site& x) {
  const double ux = u.at(x);
  double s = 0.0;
  for (const Site& y : neighbors(u.box(), x)) s += u.at(y) - ux;
  return s;
}

LatticeFunction laplacian(const LatticeFunction& u) {
  const LatticeBox& box = u.box();
  LatticeFunction out(box);
  for (std::size_t i = 0; i < box.size(); ++i) {
    double s = 0.0;
    for (std::size_t j : box.neighbor_indices(i)) s += (j == LatticeBox::npos ? 0.0 : u[j]) - u[i];
    out[i] = s;
  }
  return out;
}

double dot(const LatticeFunction& u, const LatticeFunction& v) {
  if (!(u.box() == v.box())) throw std::invalid_argument("dot: functions live on different boxes");
  std::vector<double> terms(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) terms[i] = u[i] * v[i];
  return pairwise_sum(terms);
}

double epq_norm(const LatticeFunction& u, double p, double q, const CoefficientField* a,
                const CoefficientField* b) {
  if (!(p >= 1.0) || std::isinf(q) || p > q) throw std::invalid_argument("epq_norm requires 1 <= p <= q < inf");
  const double grad = std::sqrt(gradient_norm_sq(u));
  const LatticeBox& box = u.box();
  std::vector<double> pterms(box.size());
  std::vector<double> qterms(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) {
    const double wa = a ? a->eval(box.site(i)) : 1.0;
    const double wb = b ? b->eval(box.site(i)) : 1.0;
    pterms[i] = wa * std::pow(std::abs(u[i]), p);
    qterms[i] = wb * std::pow(std::abs(u[i]), q);
  }
  return grad + std::pow(pairwise_sum(pterms), 1.0 / p) + std::pow(pairwise_sum(qterms), 1.0 / q);
}

}  // namespace latticepde
