#include "five_site_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace {

using Point = std::array<double, 5>;

// Star graph: center x[0] joined to the four arms x[1..4]; every arm has
// three further neighbors outside the box, which carry the value 0.
double numerator(const Point& x) {
  double grad = 0.0, mass = x[0] * x[0];
  for (int i = 1; i < 5; ++i) {
    grad += (x[0] - x[i]) * (x[0] - x[i]) + 3.0 * x[i] * x[i];
    mass += x[i] * x[i];
  }
  return 0.5 * grad + 0.5 * mass;
}

double quartic(const Point& x) {
  double s = 0.0;
  for (double v : x) s += v * v * v * v;
  return s;
}

// J1(x / |x|_4): the scale-invariant objective.
double objective(const Point& x) { return numerator(x) / std::sqrt(quartic(x)); }

double partial(const Point& x, int k) {
  double arms = 0.0;
  for (int i = 1; i < 5; ++i) arms += x[i];
  const double dn = k == 0 ? 5.0 * x[0] - arms : 5.0 * x[k] - x[0];
  const double s4 = quartic(x);
  return dn / std::sqrt(s4) - numerator(x) * 2.0 * x[k] * x[k] * x[k] / (s4 * std::sqrt(s4));
}

// Exact coordinate minimization. Along coordinate k the objective is
// (alpha t^2 + beta t + gamma) / sqrt(t^4 + delta) with alpha = 5/2, so its
// critical points are the nonnegative roots of
// -beta t^4 - 2 gamma t^3 + 2 alpha delta t + beta delta.
void minimize_coordinate(Point& x, int k) {
  Point y = x;
  y[k] = 0.0;
  const double alpha = 2.5;
  const double gamma = numerator(y);
  double beta = 0.0;
  if (k == 0) {
    for (int i = 1; i < 5; ++i) beta -= y[i];
  } else {
    beta = -y[0];
  }
  const double delta = quartic(y);
  auto poly = [&](double t) { return ((-beta * t - 2.0 * gamma) * t * t + 2.0 * alpha * delta) * t + beta * delta; };
  auto along = [&](double t) {
    Point z = y;
    z[k] = t;
    return objective(z);
  };

  double top = 1.0;
  for (double v : x) top = std::max(top, v);
  top *= 1e3;
  // f' has the sign of the polynomial, so local minima are its - to + crossings
  // (or t = 0 when f increases from there).
  std::vector<double> minima;
  if (poly(0.0) >= 0.0) minima.push_back(0.0);
  constexpr int kSamples = 4000;
  double t_prev = 0.0, p_prev = poly(0.0);
  for (int j = 1; j <= kSamples; ++j) {
    const double r = static_cast<double>(j) / kSamples;
    const double t = top * r * r;
    const double pt = poly(t);
    if (p_prev < 0.0 && pt >= 0.0) {
      double lo = t_prev, hi = t;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (poly(mid) < 0.0 ? lo : hi) = mid;
      }
      minima.push_back(0.5 * (lo + hi));
    }
    t_prev = t;
    p_prev = pt;
  }
  if (minima.empty()) return;
  // Values within a few ulps are ties; keep the minimum nearest the current iterate.
  double best_f = std::numeric_limits<double>::infinity();
  for (double t : minima) best_f = std::min(best_f, along(t));
  const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::abs(best_f);
  double best_t = minima.front();
  double best_gap = std::numeric_limits<double>::infinity();
  for (double t : minima) {
    if (along(t) <= best_f + slack && std::abs(t - x[k]) < best_gap) {
      best_gap = std::abs(t - x[k]);
      best_t = t;
    }
  }
  x[k] = best_t;
}

double gradient_norm(const Point& x) {
  double s = 0.0;
  for (int k = 0; k < 5; ++k) s += partial(x, k) * partial(x, k);
  return std::sqrt(s);
}

Point normalized(Point x) {
  const double n = std::pow(quartic(x), 0.25);
  for (double& v : x) v /= n;
  return x;
}

}  // namespace

FiveSiteOracle five_site_oracle(int starts, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  FiveSiteOracle out;
  out.starts = starts;
  double best = std::numeric_limits<double>::infinity();
  double worst = -best;
  for (int s = 0; s < starts; ++s) {
    Point x;
    for (double& v : x) v = static_cast<double>(rng() >> 11) * 0x1.0p-53 + 1e-3;
    for (int sweep = 0; sweep < 10000; ++sweep) {
      for (int k = 0; k < 5; ++k) minimize_coordinate(x, k);
      x = normalized(x);
      if (gradient_norm(x) <= 1e-12) break;
    }
    const double value = objective(x);
    worst = std::max(worst, value);
    if (value < best) {
      best = value;
      out.u = x;
    }
  }
  const Point& u = out.u;
  double grad = 0.0, mass = 0.0;
  for (int i = 1; i < 5; ++i) grad += (u[0] - u[i]) * (u[0] - u[i]) + 3.0 * u[i] * u[i];
  for (double v : u) mass += v * v;
  out.lambda0 = best;
  out.lambda = (grad + mass) / 4.0;
  double r = 0.0, arms = 0.0;
  for (int i = 1; i < 5; ++i) arms += u[i];
  for (int k = 0; k < 5; ++k) {
    const double lap = k == 0 ? 5.0 * u[0] - arms : 5.0 * u[k] - u[0];
    const double e = lap - 4.0 * out.lambda * u[k] * u[k] * u[k];
    r += e * e;
  }
  out.residual = std::sqrt(r);
  out.spread = worst - best;
  return out;
}
