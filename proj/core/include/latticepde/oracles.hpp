#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "latticepde/coefficients.hpp"
#include "latticepde/decomposer.hpp"
#include "latticepde/functionals.hpp"
#include "latticepde/lattice.hpp"

namespace latticepde {

struct CheckReport {
  std::string name;
  bool passed = false;
  double defect = 0.0;
  double tolerance = 0.0;
  std::string witness;
  int trials = 0;
};

/// passed := defect <= tolerance.
CheckReport make_report(std::string name, double defect, double tolerance, std::string witness = {}, int trials = 1);

/// Values i.i.d. uniform on [-1, 1] over the box. The uniform draw uses the
/// top 53 bits of the engine output so the stream is portable.
LatticeFunction random_function(const LatticeBox& box, std::mt19937_64& rng);

/// |(||u_last||_p^p - ||u_last - u||_p^p) - ||u||_p^p|.
double brezis_lieb_defect(const FunctionSequence& seq, const LatticeFunction& u, double p);
/// Edge version: the same defect for ||grad .||_2^2.
double brezis_lieb_gradient_defect(const FunctionSequence& seq, const LatticeFunction& u);

struct NormEquivalence {
  double ratio = 0.0;  // ||u||_{E_{p(a),q(b)}} / ||u||_{E_{p,q}}
  double lower = 0.0;  // certified c1
  double upper = 0.0;  // certified c2
  bool inside() const { return lower <= ratio && ratio <= upper; }
};

/// Ratio of weighted to unweighted E_{p,q} norms and the interval
/// [min(1, min a^{1/p}, min b^{1/q}), max(1, max a^{1/p}, max b^{1/q})]
/// over the sites of u's box.
NormEquivalence norm_equivalence_ratio(const LatticeFunction& u, double p, double q, const CoefficientField& a,
                                       const CoefficientField& b);

/// Per term ||u_n||_q^q <= ||u_n||_p^p ||u_n||_inf^{q-p}, and the sequence
/// bound ||u_n||_q^q <= sup_m ||u_m||_p^p ||u_n||_inf^{q-p}. Defect is the
/// largest violation (0 when both hold).
CheckReport lions_decay_check(const FunctionSequence& seq, double p, double q);

struct FdTrial {
  double analytic = 0.0;
  double error_coarse = 0.0;  // h = 1e-4
  double error_fine = 0.0;    // h = 1e-5
  double relative_error = 0.0;
  double observed_order = 0.0;
  /// False when some |u(x) +- h phi(x)| with h = 1e-4 straddles 0 at a site
  /// where |t|^p or |t|^q is not a polynomial; the h^2 model does not apply there.
  bool smooth = true;
};

/// Central differences of Phi (evaluated in extended precision) against
/// sum_x gateaux_gradient(u)(x) phi(x) along direction.
FdTrial fd_directional_trial(const LatticeFunction& u, const LatticeFunction& direction, const ProblemParams& params);

/// Random box-supported directions; passes when every trial has relative
/// error <= 1e-6 and observed order in [1.5, 2.5] (or error at h = 1e-4
/// already below the resolvable floor, or a non-smooth segment).
CheckReport fd_gradient_check(const LatticeFunction& u, const ProblemParams& params, int trials, std::uint64_t seed);

struct PhiGap {
  double gap = 0.0;    // |Phi(u) - PhiBar(u)|
  double bound = 0.0;  // tail_dev(a,R) ||u||_p^p / p + tail_dev(b,R) ||u||_q^q / q
  int inner_radius = 0;
};

/// R is the inner radius of supp(u): every support site has |x|_1 > R.
PhiGap phi_phibar_gap(const LatticeFunction& u, const ProblemParams& params);

struct SuiteOptions {
  std::uint64_t seed = 7;
  int random_functions = 1000;
  int fd_trials = 100;
};

/// Every property check, one report each.
std::vector<CheckReport> run_verification_suite(const SuiteOptions& options = {});

}  // namespace latticepde
