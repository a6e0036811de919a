#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "latticepde/coefficients.hpp"
#include "latticepde/lattice.hpp"
#include "latticepde/oracles.hpp"

using namespace latticepde;

namespace {

LatticeFunction two_spikes(const LatticeBox& box) {
  LatticeFunction u(box);
  u.set({0, 0}, 1.0);
  u.set({3, 0}, 1.0);
  return u;
}

}  // namespace

TEST_CASE("box enumeration") {
  for (int dim : {2, 3, 4}) {
    for (int r : {1, 2, 5}) {
      const LatticeBox box(dim, r);
      CHECK(box.size() == ball_site_count(dim, r));
      std::set<Site> seen(box.sites().begin(), box.sites().end());
      CHECK(seen.size() == box.size());
      for (std::size_t i = 0; i < box.size(); ++i) {
        CHECK(box.site(i).l1_norm() <= r);
        CHECK(box.index_of(box.site(i)) == i);
        if (i > 0) CHECK(box.site(i - 1) < box.site(i));
      }
    }
  }
  CHECK(ball_site_count(2, 1) == 5);
  CHECK(ball_site_count(2, 8) == 145);
  CHECK(ball_site_count(3, 1) == 7);
  CHECK_THROWS_AS(LatticeBox(1, 3), std::invalid_argument);
  CHECK_THROWS_AS(LatticeBox(2, 0), std::invalid_argument);
}

TEST_CASE("neighbors") {
  const LatticeBox b2(2, 3);
  const std::vector<Site> expect{{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  CHECK(neighbors(b2, Site{0, 0}) == expect);

  const LatticeBox b3(3, 3);
  const auto n3 = neighbors(b3, Site{1, 0, 0});
  CHECK(n3.size() == 6);
  for (const auto& y : n3) CHECK(graph_distance(y, Site{1, 0, 0}) == 1);

  const LatticeBox b1(2, 1);
  const auto n1 = neighbors(b1, Site{1, 0});
  CHECK(std::find(n1.begin(), n1.end(), Site{2, 0}) != n1.end());
  const LatticeFunction u = LatticeFunction::spike(b1, Site{1, 0}, 3.0);
  CHECK(u.at(Site{2, 0}) == 0.0);
  CHECK(!b1.contains(Site{2, 0}));
}

TEST_CASE("graph distance") {
  CHECK(graph_distance(Site{0, 0}, Site{0, 0}) == 0);
  CHECK(graph_distance(Site{0, 0}, Site{2, -1}) == 3);
  CHECK(graph_distance(Site{1, 1, 1}, Site{0, 0, 0}) == 3);
  CHECK_THROWS(graph_distance(Site{0, 0}, Site{0, 0, 0}));
}

TEST_CASE("translate") {
  const LatticeBox box(2, 4);
  const auto shifted = translate(LatticeFunction::spike(box, Site{3, 0}), Site{3, 0});
  CHECK(shifted.at(Site{0, 0}) == 1.0);
  CHECK(lp_norm(shifted, 1.0) == 1.0);

  std::mt19937_64 rng(11);
  const LatticeFunction u = random_function(box, rng);
  const LatticeFunction same = translate(u, Site{0, 0});
  for (std::size_t i = 0; i < box.size(); ++i) CHECK(same[i] == u[i]);

  CHECK(translate(LatticeFunction::spike(box, Site{0, 0}), Site{-5, 0}).is_zero());
}

TEST_CASE("translate round trip inside a larger box") {
  std::mt19937_64 rng(12);
  const LatticeBox small(2, 3);
  const LatticeBox big(2, 10);
  const LatticeFunction u = random_function(small, rng);
  const Site s{4, -2};
  const LatticeFunction moved = translate(u, -s, big);  // moved(x) = u(x - s)
  const LatticeFunction back = translate(moved, s, small);
  for (std::size_t i = 0; i < small.size(); ++i) CHECK(back[i] == u[i]);
  CHECK(lp_power_sum(moved, 3.0) == doctest::Approx(lp_power_sum(u, 3.0)).epsilon(1e-14));
}

TEST_CASE("lp norms") {
  const LatticeBox box(2, 4);
  const LatticeFunction d0 = LatticeFunction::spike(box, Site{0, 0});
  for (double p : {1.0, 1.5, 2.0, 4.0, 7.0}) CHECK(lp_norm(d0, p) == 1.0);
  CHECK(lp_norm(d0, INFINITY) == 1.0);
  const LatticeFunction two = two_spikes(box);
  CHECK(lp_norm(two, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(lp_norm(two, INFINITY) == 1.0);
  CHECK(sup_norm(-1.0 * two) == 1.0);
}

TEST_CASE("gradient form and energy") {
  const LatticeBox box(2, 3);
  const LatticeFunction d0 = LatticeFunction::spike(box, Site{0, 0});
  CHECK(gradient_form(d0, d0, Site{0, 0}) == 2.0);
  CHECK(gradient_form(d0, d0, Site{1, 0}) == 0.5);
  const LatticeFunction zero(box);
  std::mt19937_64 rng(3);
  const LatticeFunction u = random_function(box, rng);
  for (const auto& x : box.sites()) CHECK(gradient_form(u, zero, x) == 0.0);

  CHECK(gradient_norm_sq(d0) == 4.0);
  CHECK(gradient_norm_sq(LatticeFunction::spike(LatticeBox(3, 2), Site{0, 0, 0})) == 6.0);
  CHECK(gradient_norm_sq(zero) == 0.0);

  // A spike on the boundary still has 2N incident edges.
  CHECK(gradient_norm_sq(LatticeFunction::spike(box, Site{3, 0})) == 4.0);
}

TEST_CASE("laplacian") {
  const LatticeBox box(2, 3);
  const LatticeFunction d0 = LatticeFunction::spike(box, Site{0, 0});
  const LatticeFunction lap = laplacian(d0);
  CHECK(lap.at(Site{0, 0}) == -4.0);
  CHECK(lap.at(Site{1, 0}) == 1.0);
  CHECK(laplacian_at(d0, Site{-1, 0}) == 1.0);

  LatticeFunction c(box);
  for (auto& v : c.values()) v = 2.5;
  const LatticeFunction lc = laplacian(c);
  for (std::size_t i = 0; i < box.size(); ++i) {
    if (box.site(i).l1_norm() < box.radius()) CHECK(lc[i] == 0.0);
  }
}

TEST_CASE("summation by parts and linearity") {
  std::mt19937_64 rng(21);
  for (int dim : {2, 3}) {
    const LatticeBox box(dim, 4);
    for (int t = 0; t < 20; ++t) {
      const LatticeFunction u = random_function(box, rng);
      const LatticeFunction v = random_function(box, rng);
      // sum Gamma(u,v) = -sum u Delta v for finitely supported functions.
      CHECK(gradient_inner(u, v) == doctest::Approx(-dot(u, laplacian(v))).epsilon(1e-12));
      CHECK(gradient_inner(u, u) == doctest::Approx(gradient_norm_sq(u)).epsilon(1e-12));

      const LatticeFunction lin = laplacian(2.0 * u + v);
      const LatticeFunction sep = 2.0 * laplacian(u) + laplacian(v);
      for (std::size_t i = 0; i < box.size(); ++i) CHECK(lin[i] == doctest::Approx(sep[i]).epsilon(1e-12));

      // The Laplacian of a box-supported function sums to zero over B_{R+1}.
      const LatticeBox outer(dim, box.radius() + 1);
      double total = 0.0;
      for (const auto& x : outer.sites()) total += laplacian_at(u, x);
      CHECK(std::abs(total) < 1e-12);
    }
  }
}

TEST_CASE("epq norm") {
  const LatticeBox box(2, 3);
  const LatticeFunction d0 = LatticeFunction::spike(box, Site{0, 0});
  CHECK(epq_norm(d0, 2.0, 4.0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(epq_norm(LatticeFunction(box), 2.0, 4.0) == 0.0);
  const auto a = CoefficientField::constant(4.0);
  const auto b = CoefficientField::constant(16.0);
  CHECK(epq_norm(d0, 2.0, 4.0, &a, &b) == doctest::Approx(6.0).epsilon(1e-15));
}

TEST_CASE("function arithmetic and box checks") {
  const LatticeBox a(2, 2);
  const LatticeBox b(2, 3);
  LatticeFunction u(a);
  CHECK_THROWS_AS(u += LatticeFunction(b), std::invalid_argument);
  CHECK_THROWS(LatticeFunction::spike(a, Site{3, 0}));
  CHECK_THROWS(u.set(Site{0, 3}, 1.0));
  const LatticeFunction e = embed(LatticeFunction::spike(a, Site{1, 1}, 2.0), b);
  CHECK(e.at(Site{1, 1}) == 2.0);
  CHECK(lp_norm(e, 1.0) == 2.0);
  const LatticeFunction back = embed(LatticeFunction::spike(b, Site{3, 0}), a);
  CHECK(back.is_zero());
}

TEST_CASE("pairwise sum is exact on dyadic data and order fixed") {
  std::vector<double> terms(1000);
  for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = static_cast<double>(i % 17) / 16.0;
  double naive = 0.0;
  for (double t : terms) naive += t;
  CHECK(pairwise_sum(terms) == naive);
  CHECK(pairwise_sum({}) == 0.0);
}
