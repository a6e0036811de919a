#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace latticepde {

class CoefficientField;

/// A vertex of the integer lattice Z^N.
class Site {
public:
  Site() = default;
  explicit Site(std::vector<int> coords) : coords_(std::move(coords)) {}
  Site(std::initializer_list<int> coords) : coords_(coords) {}

  static Site origin(int dim) { return Site(std::vector<int>(static_cast<std::size_t>(dim), 0)); }

  int dim() const { return static_cast<int>(coords_.size()); }
  int operator[](std::size_t i) const { return coords_[i]; }
  int& operator[](std::size_t i) { return coords_[i]; }
  const std::vector<int>& coords() const { return coords_; }

  /// l1 norm, i.e. the graph distance to the origin.
  int l1_norm() const;
  bool is_origin() const;

  Site operator+(const Site& other) const;
  Site operator-(const Site& other) const;
  Site operator-() const;

  auto operator<=>(const Site&) const = default;
  bool operator==(const Site&) const = default;

  std::string to_string() const;

private:
  std::vector<int> coords_;
};

/// Graph distance on Z^N, which is the l1 distance. Throws on dimension mismatch.
int graph_distance(const Site& x, const Site& y);

/// The ball B_R = {x in Z^N : |x|_1 <= R} with a fixed lexicographic site
/// enumeration and a precomputed neighbor table. Copies share the topology.
class LatticeBox {
public:
  LatticeBox(int dim, int radius);

  int dim() const { return dim_; }
  int radius() const { return radius_; }
  std::size_t size() const { return sites_->size(); }

  const Site& site(std::size_t index) const { return (*sites_)[index]; }
  const std::vector<Site>& sites() const { return *sites_; }

  bool contains(const Site& x) const;
  /// Enumeration index of x, or nullopt when x lies outside the box.
  std::optional<std::size_t> index_of(const Site& x) const;

  /// Neighbor indices of the site with the given index, ordered
  /// (+e_1, -e_1, +e_2, -e_2, ...). Entries equal to npos lie outside.
  std::span<const std::size_t> neighbor_indices(std::size_t index) const;

  bool operator==(const LatticeBox& other) const {
    return dim_ == other.dim_ && radius_ == other.radius_;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
  std::size_t cube_offset(const Site& x) const;

  int dim_;
  int radius_;
  std::shared_ptr<const std::vector<Site>> sites_;
  std::shared_ptr<const std::vector<std::size_t>> cube_lookup_;
  std::shared_ptr<const std::vector<std::size_t>> neighbors_;
};

/// Number of lattice points with |x|_1 <= R in Z^N, by direct recursion.
std::size_t ball_site_count(int dim, int radius);

/// All 2N neighbors of x in Z^N, ordered (+e_1, -e_1, +e_2, -e_2, ...),
/// including those outside the box.
std::vector<Site> neighbors(const LatticeBox& box, const Site& x);

/// A real function on a LatticeBox, extended by zero outside it.
class LatticeFunction {
public:
  explicit LatticeFunction(LatticeBox box);
  LatticeFunction(LatticeBox box, std::vector<double> values);

  /// Unit spike of the given height at site x (which must lie in the box).
  static LatticeFunction spike(const LatticeBox& box, const Site& x, double height = 1.0);

  const LatticeBox& box() const { return box_; }
  int dim() const { return box_.dim(); }
  std::size_t size() const { return values_.size(); }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  /// Value at any site of Z^N; zero outside the box.
  double at(const Site& x) const;
  void set(const Site& x, double value);

  bool is_zero() const;

  LatticeFunction& operator+=(const LatticeFunction& other);
  LatticeFunction& operator-=(const LatticeFunction& other);
  LatticeFunction& operator*=(double factor);

  friend LatticeFunction operator+(LatticeFunction lhs, const LatticeFunction& rhs) { return lhs += rhs; }
  friend LatticeFunction operator-(LatticeFunction lhs, const LatticeFunction& rhs) { return lhs -= rhs; }
  friend LatticeFunction operator*(double factor, LatticeFunction u) { return u *= factor; }

private:
  void require_same_box(const LatticeFunction& other) const;

  LatticeBox box_;
  std::vector<double> values_;
};

/// Deterministic pairwise (tree) summation.
double pairwise_sum(std::span<const double> terms);

/// result(x) = u(x + shift) on u's box.
LatticeFunction translate(const LatticeFunction& u, const Site& shift);
/// result(x) = u(x + shift) for every x of target.
LatticeFunction translate(const LatticeFunction& u, const Site& shift, const LatticeBox& target);
/// Restriction / zero extension of u onto another box of the same dimension.
LatticeFunction embed(const LatticeFunction& u, const LatticeBox& target);

/// sum_x |u(x)|^p for finite p >= 1.
double lp_power_sum(const LatticeFunction& u, double p);
/// Counting-measure l^p norm; p may be +infinity.
double lp_norm(const LatticeFunction& u, double p);
double sup_norm(const LatticeFunction& u);

/// Carre du champ: 1/2 sum_{y~x} (u(y)-u(x))(v(y)-v(x)) at any site x of Z^N.
double gradient_form(const LatticeFunction& u, const LatticeFunction& v, const Site& x);
/// sum_x Gamma(u,v)(x) over Z^N, i.e. the sum over undirected edges touching the box.
double gradient_inner(const LatticeFunction& u, const LatticeFunction& v);
/// ||grad u||_2^2; every undirected edge with an endpoint in the box counted once.
double gradient_norm_sq(const LatticeFunction& u);

/// (Delta u)(x) = sum_{y~x} (u(y) - u(x)) at any site of Z^N.
double laplacian_at(const LatticeFunction& u, const Site& x);
LatticeFunction laplacian(const LatticeFunction& u);

/// Euclidean inner product of the value vectors (same box).
double dot(const LatticeFunction& u, const LatticeFunction& v);

/// ||grad u||_2 + ||a^{1/p} u||_p + ||b^{1/q} u||_q; absent fields mean weight 1.
double epq_norm(const LatticeFunction& u, double p, double q,
                const CoefficientField* a = nullptr, const CoefficientField* b = nullptr);

}  // namespace latticepde
