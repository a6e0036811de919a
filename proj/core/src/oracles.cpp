#include "latticepde/oracles.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <sstream>

namespace latticepde {

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

// Dyadic values k/16 keep every power sum below exact in double precision.
LatticeFunction random_dyadic_function(const LatticeBox& box, std::mt19937_64& rng) {
  LatticeFunction u(box);
  for (std::size_t i = 0; i < box.size(); ++i) u[i] = static_cast<double>(static_cast<int>(rng() % 33) - 16) / 16.0;
  return u;
}

std::string seed_witness(std::uint64_t seed, int trial, const std::string& extra = {}) {
  std::ostringstream os;
  os << "seed=" << seed << " trial=" << trial;
  if (!extra.empty()) os << ' ' << extra;
  return os.str();
}

double tail_dev_from(const CoefficientField& f, int radius) {
  double dev = 0.0;
  for (const auto& [site, delta] : f.profile()) {
    if (site.l1_norm() > radius) dev = std::max(dev, std::abs(delta));
  }
  return dev;
}

// Phi evaluated in long double, directly from the edge and site sums.
// Phi(w+) - Phi(w-) in extended precision, differenced term by term so the
// large partial sums of Phi never enter the cancellation.
long double phi_difference(const LatticeBox& box, const std::vector<long double>& wp,
                           const std::vector<long double>& wm, const ProblemParams& params) {
  const std::size_t dim = static_cast<std::size_t>(box.dim());
  long double grad = 0.0L;
  long double sites = 0.0L;
  const long double p = params.p;
  const long double q = params.q;
  for (std::size_t i = 0; i < box.size(); ++i) {
    const auto nb = box.neighbor_indices(i);
    for (std::size_t k = 0; k < dim; ++k) {
      const std::size_t up = nb[2 * k];
      const long double dp = (up == LatticeBox::npos ? 0.0L : wp[up]) - wp[i];
      const long double dm = (up == LatticeBox::npos ? 0.0L : wm[up]) - wm[i];
      grad += (dp - dm) * (dp + dm);
      if (nb[2 * k + 1] == LatticeBox::npos) grad += (wp[i] - wm[i]) * (wp[i] + wm[i]);
    }
    const Site& x = box.site(i);
    const long double mp = std::fabs(wp[i]);
    const long double mm = std::fabs(wm[i]);
    sites += static_cast<long double>(params.a.eval(x)) / p * (std::pow(mp, p) - std::pow(mm, p)) -
             static_cast<long double>(params.b.eval(x)) / q * (std::pow(mp, q) - std::pow(mm, q));
  }
  return 0.5L * grad + sites;
}

// <Phi'(w), phi> from the same edge and site sums as phi_difference.
long double directional_extended(const LatticeBox& box, const std::vector<long double>& w,
                                 const LatticeFunction& direction, const ProblemParams& params) {
  const std::size_t dim = static_cast<std::size_t>(box.dim());
  long double grad = 0.0L;
  long double sites = 0.0L;
  const long double p = params.p;
  const long double q = params.q;
  for (std::size_t i = 0; i < box.size(); ++i) {
    const auto nb = box.neighbor_indices(i);
    const long double e = direction[i];
    for (std::size_t k = 0; k < dim; ++k) {
      const std::size_t up = nb[2 * k];
      const long double d = (up == LatticeBox::npos ? 0.0L : w[up]) - w[i];
      const long double de = (up == LatticeBox::npos ? 0.0L : static_cast<long double>(direction[up])) - e;
      grad += d * de;
      if (nb[2 * k + 1] == LatticeBox::npos) grad += w[i] * e;
    }
    const Site& x = box.site(i);
    const long double m = std::fabs(w[i]);
    if (m == 0.0L) continue;
    sites += (static_cast<long double>(params.a.eval(x)) * std::pow(m, p - 2.0L) -
              static_cast<long double>(params.b.eval(x)) * std::pow(m, q - 2.0L)) *
             w[i] * e;
  }
  return grad + sites;
}

long double phi_abs_scale(const LatticeBox& box, const std::vector<long double>& w, const ProblemParams& params) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < box.size(); ++i) {
    const long double m = std::fabs(w[i]);
    s += 2.0L * static_cast<long double>(box.dim()) * m * m + params.a.eval(box.site(i)) * std::pow(m, (long double)params.p) +
         params.b.eval(box.site(i)) * std::pow(m, (long double)params.q);
  }
  return s;
}

CoefficientField random_field(int dim, int profile_radius, double limit, std::mt19937_64& rng) {
  const LatticeBox box(dim, profile_radius);
  std::vector<ProfileEntry> profile;
  for (const Site& x : box.sites()) {
    if (rng() % 3 == 0) continue;
    // Tail stays inside (limit/2, 3 limit/2); near the origin the field may dip to 0.
    const double spread = x.l1_norm() <= 1 ? 1.0 : 0.45;
    profile.push_back({x, limit * uniform(rng, -spread, spread)});
  }
  return CoefficientField::radial_limit(limit, profile);
}

}  // namespace

CheckReport make_report(std::string name, double defect, double tolerance, std::string witness, int trials) {
  CheckReport r;
  r.name = std::move(name);
  r.defect = defect;
  r.tolerance = tolerance;
  r.passed = defect <= tolerance;
  r.witness = std::move(witness);
  r.trials = trials;
  return r;
}

LatticeFunction random_function(const LatticeBox& box, std::mt19937_64& rng) {
  LatticeFunction u(box);
  for (std::size_t i = 0; i < box.size(); ++i) u[i] = uniform(rng, -1.0, 1.0);
  return u;
}

double brezis_lieb_defect(const FunctionSequence& seq, const LatticeFunction& u, double p) {
  seq.validate();
  const LatticeFunction& last = seq.terms.back();
  const LatticeFunction u_on = embed(u, last.box());
  return std::abs((lp_power_sum(last, p) - lp_power_sum(last - u_on, p)) - lp_power_sum(u, p));
}

double brezis_lieb_gradient_defect(const FunctionSequence& seq, const LatticeFunction& u) {
  seq.validate();
  const LatticeFunction& last = seq.terms.back();
  const LatticeFunction u_on = embed(u, last.box());
  return std::abs((gradient_norm_sq(last) - gradient_norm_sq(last - u_on)) - gradient_norm_sq(u_on));
}

NormEquivalence norm_equivalence_ratio(const LatticeFunction& u, double p, double q, const CoefficientField& a,
                                       const CoefficientField& b) {
  if (u.is_zero()) throw std::invalid_argument("norm_equivalence_ratio needs a nonzero function");
  NormEquivalence out;
  out.ratio = epq_norm(u, p, q, &a, &b) / epq_norm(u, p, q);
  const double min_a = std::pow(a.min_over(u.box()), 1.0 / p);
  const double max_a = std::pow(a.max_over(u.box()), 1.0 / p);
  const double min_b = std::pow(b.min_over(u.box()), 1.0 / q);
  const double max_b = std::pow(b.max_over(u.box()), 1.0 / q);
  out.lower = std::min({1.0, min_a, min_b});
  out.upper = std::max({1.0, max_a, max_b});
  return out;
}

CheckReport lions_decay_check(const FunctionSequence& seq, double p, double q) {
  seq.validate();
  if (!(p < q)) throw std::invalid_argument("lions_decay_check requires p < q");
  double sup_p = 0.0;
  for (const auto& t : seq.terms) sup_p = std::max(sup_p, lp_power_sum(t, p));
  double worst = 0.0;
  int worst_term = -1;
  for (std::size_t n = 0; n < seq.terms.size(); ++n) {
    const auto& t = seq.terms[n];
    const double lhs = lp_power_sum(t, q);
    const double tail = std::pow(sup_norm(t), q - p);
    const double violation = std::max(lhs - lp_power_sum(t, p) * tail, lhs - sup_p * tail);
    if (violation > worst) {
      worst = violation;
      worst_term = static_cast<int>(n);
    }
  }
  std::string witness = worst_term >= 0 ? "term=" + std::to_string(worst_term) : "";
  return make_report("lions_decay", worst, 0.0, witness, static_cast<int>(seq.terms.size()));
}

FdTrial fd_directional_trial(const LatticeFunction& u, const LatticeFunction& direction, const ProblemParams& params) {
  if (!(u.box() == direction.box())) throw std::invalid_argument("direction lives on a different box");
  const LatticeBox& box = u.box();
  FdTrial trial;
  trial.analytic = dot(gateaux_gradient(u, params), direction);

  auto central = [&](long double h) {
    std::vector<long double> plus(box.size()), minus(box.size());
    for (std::size_t i = 0; i < box.size(); ++i) {
      plus[i] = static_cast<long double>(u[i]) + h * direction[i];
      minus[i] = static_cast<long double>(u[i]) - h * direction[i];
    }
    return phi_difference(box, plus, minus, params) / (2.0L * h);
  };
  // The step-size study runs against an extended-precision reference so that
  // double rounding in the analytic value does not mask the h^2 behaviour.
  const std::vector<long double> wide(u.values().begin(), u.values().end());
  const long double reference = directional_extended(box, wide, direction, params);
  const long double fine = central(1e-5L);
  trial.error_coarse = static_cast<double>(std::fabs(central(1e-4L) - reference));
  trial.error_fine = static_cast<double>(std::fabs(fine - reference));
  trial.relative_error =
      static_cast<double>(std::fabs(fine - static_cast<long double>(trial.analytic))) / std::max(std::abs(trial.analytic), 1.0);
  auto even_integer = [](double s) { return std::fmod(s, 2.0) == 0.0; };
  if (!even_integer(params.p) || !even_integer(params.q)) {
    for (std::size_t i = 0; i < box.size(); ++i) {
      if (direction[i] != 0.0 && std::abs(u[i]) <= 1e-4 * std::abs(direction[i])) trial.smooth = false;
    }
  }
  trial.observed_order = trial.error_fine > 0.0 ? std::log10(trial.error_coarse / trial.error_fine)
                                                : std::numeric_limits<double>::infinity();
  return trial;
}

CheckReport fd_gradient_check(const LatticeFunction& u, const ProblemParams& params, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("fd_gradient_check needs at least one trial");
  std::mt19937_64 rng(seed);
  std::vector<long double> wide(u.values().begin(), u.values().end());
  const long double scale = phi_abs_scale(u.box(), wide, params);
  // Below this the h = 1e-4 error is within 100x of the h = 1e-5 rounding noise.
  const double floor = static_cast<double>(100.0L * LDBL_EPSILON * (scale + 1.0L) / 1e-5L);

  double worst_rel = 0.0;
  std::string witness;
  bool order_ok = true;
  for (int t = 0; t < trials; ++t) {
    const LatticeFunction direction = random_function(u.box(), rng);
    const FdTrial r = fd_directional_trial(u, direction, params);
    if (r.relative_error > worst_rel) {
      worst_rel = r.relative_error;
      if (order_ok) witness = seed_witness(seed, t);
    }
    const bool resolvable = r.smooth && r.error_coarse > floor;
    if (order_ok && resolvable && !(r.observed_order >= 1.5 && r.observed_order <= 2.5)) {
      order_ok = false;
      std::ostringstream os;
      os << "order=" << r.observed_order << " errors=" << r.error_coarse << ',' << r.error_fine;
      witness = seed_witness(seed, t, os.str());
    }
  }
  return make_report("fd_gradient", order_ok ? worst_rel : std::numeric_limits<double>::infinity(), 1e-6, witness,
                     trials);
}

PhiGap phi_phibar_gap(const LatticeFunction& u, const ProblemParams& params) {
  PhiGap out;
  int inner = std::numeric_limits<int>::max();
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] != 0.0) inner = std::min(inner, u.box().site(i).l1_norm() - 1);
  }
  if (inner == std::numeric_limits<int>::max()) return out;
  out.inner_radius = inner;
  out.gap = std::abs(phi(u, params) - phi_bar(u, params));
  out.bound = tail_dev_from(params.a, inner) * lp_power_sum(u, params.p) / params.p +
              tail_dev_from(params.b, inner) * lp_power_sum(u, params.q) / params.q;
  return out;
}

std::vector<CheckReport> run_verification_suite(const SuiteOptions& options) {
  std::vector<CheckReport> reports;
  std::mt19937_64 rng(options.seed);
  const std::vector<std::pair<double, double>> exponent_pairs{{1.0, 2.0}, {2.0, 3.0}, {2.0, 4.0}, {3.0, 5.0}, {1.5, 7.0}};
  const LatticeBox b4_2(2, 4), b4_3(3, 4);
  auto b4 = [&](int n) -> const LatticeBox& { return n % 2 == 0 ? b4_2 : b4_3; };

  {
    double emb = 0.0, interp = 0.0;
    std::string emb_w, interp_w;
    for (int n = 0; n < options.random_functions; ++n) {
      const LatticeFunction u = random_function(b4(n), rng);
      for (const auto& [p, q] : exponent_pairs) {
        const double e = lp_norm(u, q) - lp_norm(u, p);
        if (e > emb) {
          emb = e;
          emb_w = seed_witness(options.seed, n);
        }
        const double i = lp_power_sum(u, q) - lp_power_sum(u, p) * std::pow(sup_norm(u), q - p);
        if (i > interp) {
          interp = i;
          interp_w = seed_witness(options.seed, n);
        }
      }
    }
    reports.push_back(make_report("embedding", emb, 0.0, emb_w, options.random_functions));
    reports.push_back(make_report("interpolation", interp, 0.0, interp_w, options.random_functions));
  }

  {
    // Disjoint supports: u on B_4, escaping copies of w centered at distance >= 12.
    double lp_defect = 0.0, grad_defect = 0.0;
    const int cases = 50;
    for (int n = 0; n < cases; ++n) {
      const int dim = 2 + n % 2;
      const LatticeBox big(dim, 24);
      const LatticeFunction u = embed(random_dyadic_function(LatticeBox(dim, 4), rng), big);
      const LatticeFunction w = random_dyadic_function(LatticeBox(dim, 4), rng);
      FunctionSequence seq;
      for (int m = 1; m <= 4; ++m) {
        Site y = Site::origin(dim);
        y[0] = 8 + 3 * m;
        seq.terms.push_back(u + translate(w, -y, big));
      }
      for (double p : {2.0, 3.0, 4.0}) lp_defect = std::max(lp_defect, brezis_lieb_defect(seq, u, p));
      grad_defect = std::max(grad_defect, brezis_lieb_gradient_defect(seq, u));
    }
    reports.push_back(make_report("brezis_lieb_disjoint", lp_defect, 0.0, seed_witness(options.seed, 0), cases));
    reports.push_back(make_report("brezis_lieb_gradient_disjoint", grad_defect, 0.0, seed_witness(options.seed, 0), cases));
  }

  {
    // u_n = u + delta_s / n with p = 2: defect equals 2|u(s)|/n exactly.
    double worst = 0.0;
    const int cases = 50;
    for (int n = 0; n < cases; ++n) {
      const LatticeBox& box = b4(n);
      const LatticeFunction u = random_function(box, rng);
      const std::size_t s = static_cast<std::size_t>(rng() % box.size());
      FunctionSequence seq;
      for (int m = 1; m <= 20; ++m) {
        LatticeFunction term = u;
        term[s] += 1.0 / m;
        seq.terms.push_back(std::move(term));
        const double predicted = 2.0 * std::abs(u[s]) / m;
        worst = std::max(worst, std::abs(brezis_lieb_defect(seq, u, 2.0) - predicted));
      }
    }
    reports.push_back(make_report("brezis_lieb_perturbation", worst, 1e-10, seed_witness(options.seed, 0), cases));
  }

  {
    double worst = 0.0;
    std::string witness;
    const int cases = 200;
    for (int n = 0; n < cases; ++n) {
      const int dim = 2 + n % 2;
      const auto& [p, q] = exponent_pairs[static_cast<std::size_t>(n) % exponent_pairs.size()];
      const CoefficientField a = random_field(dim, 3, uniform(rng, 0.5, 4.0), rng);
      const CoefficientField b = random_field(dim, 3, uniform(rng, 0.5, 4.0), rng);
      LatticeFunction u = random_function(LatticeBox(dim, 5), rng);
      const NormEquivalence ne = norm_equivalence_ratio(u, p, q, a, b);
      const double v = std::max({0.0, ne.lower - ne.ratio, ne.ratio - ne.upper});
      if (v > worst) {
        worst = v;
        witness = seed_witness(options.seed, n);
      }
    }
    reports.push_back(make_report("norm_equivalence", worst, 0.0, witness, cases));
  }

  {
    double worst = 0.0;
    std::string witness;
    const int cases = 200;
    for (int n = 0; n < cases; ++n) {
      const int dim = 2 + n % 2;
      ProblemParams params;
      params.dim = dim;
      params.p = 2.0 + static_cast<double>(n % 3);
      params.q = params.p + 1.0 + static_cast<double>(n % 2);
      params.a = random_field(dim, 6, uniform(rng, 0.5, 3.0), rng);
      params.b = random_field(dim, 6, uniform(rng, 0.5, 3.0), rng);
      // Supported on an annulus drifting outward through the profile region.
      const LatticeBox box(dim, 10);
      LatticeFunction u = random_function(box, rng);
      const int inner = n % 9;
      for (std::size_t i = 0; i < box.size(); ++i) {
        if (box.site(i).l1_norm() <= inner) u[i] = 0.0;
      }
      const PhiGap g = phi_phibar_gap(u, params);
      const double v = std::max(0.0, g.gap - g.bound);
      if (v > worst) {
        worst = v;
        witness = seed_witness(options.seed, n);
      }
    }
    reports.push_back(make_report("phi_phibar_gap", worst, 0.0, witness, cases));
  }

  {
    double worst = 0.0;
    std::string witness;
    int total = 0;
    bool all_passed = true;
    const std::vector<std::pair<double, double>> fd_pairs{{2.0, 3.0}, {2.0, 4.0}, {3.0, 5.0}};
    const int per_function = 10;
    const int functions = std::max(1, (options.fd_trials + per_function - 1) / per_function);
    for (int dim : {2, 3}) {
      for (const auto& [p, q] : fd_pairs) {
        ProblemParams params;
        params.dim = dim;
        params.p = p;
        params.q = q;
        params.a = random_field(dim, 2, 1.0, rng);
        params.b = random_field(dim, 2, 1.0, rng);
        for (int f = 0; f < functions; ++f) {
          // |t|^s with odd s is only C^2 at t = 0; keep base points off the kink
          // so the h^2 error model holds at both step sizes.
          LatticeFunction u = random_function(LatticeBox(dim, 4), rng);
          for (auto& v : u.values()) v = std::copysign(0.05 + 0.95 * std::abs(v), v);
          const std::uint64_t sub_seed = rng();
          const CheckReport r = fd_gradient_check(u, params, per_function, sub_seed);
          total += per_function;
          all_passed = all_passed && r.passed;
          if (r.defect > worst || (!r.passed && witness.empty())) {
            worst = r.defect;
            std::ostringstream os;
            os << "N=" << dim << " p=" << p << " q=" << q << ' ' << r.witness;
            witness = os.str();
          }
        }
      }
    }
    CheckReport r = make_report("fd_gradient", worst, 1e-6, witness, total);
    r.passed = r.passed && all_passed;
    reports.push_back(r);
  }

  {
    double worst = 0.0;
    const int cases = 50;
    for (int n = 0; n < cases; ++n) {
      const LatticeFunction v = random_function(b4(n), rng);
      FunctionSequence seq;
      for (int m = 1; m <= 10; ++m) seq.terms.push_back((1.0 / m) * v);
      for (const auto& [p, q] : exponent_pairs) worst = std::max(worst, lions_decay_check(seq, p, q).defect);
    }
    reports.push_back(make_report("lions_decay", worst, 0.0, seed_witness(options.seed, 0), cases));
  }

  return reports;
}

}  // namespace latticepde
