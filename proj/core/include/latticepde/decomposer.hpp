#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "latticepde/functionals.hpp"
#include "latticepde/lattice.hpp"

namespace latticepde {

/// Finite stand-in for a sequence {u_n}; boxes may grow along the sequence.
struct FunctionSequence {
  std::vector<LatticeFunction> terms;
  std::optional<double> level;

  void validate() const;
  int dim() const { return terms.front().dim(); }
};

/// Per bubble i, the center y_n^i for every sequence index n.
using CenterTracks = std::vector<std::vector<Site>>;

/// True iff every |y_n^i|_1 and every pairwise |y_n^j - y_n^i|_1 is strictly
/// increasing in n.
bool tracks_diverge(const CenterTracks& tracks);

/// u_n = u0 + sum_i u_(i)(x - y_n^i) on boxes[n]. Throws unless the tracks
/// diverge and each has one center per box.
FunctionSequence synthesize_sequence(const LatticeFunction& u0, const std::vector<LatticeFunction>& bubbles,
                                     const CenterTracks& tracks, const std::vector<LatticeBox>& boxes);

struct PointwiseLimit {
  LatticeFunction limit;             // final-term values on B_window
  std::vector<Site> unstable_sites;  // last two terms differ by more than the tolerance
};

/// Final-term values on B_window, with sites flagged where the last two terms
/// have not stabilized.
PointwiseLimit pointwise_limit(const FunctionSequence& seq, int window, double stabilization_tol = 1e-12);

struct ExtractOptions {
  double sigma = 0.0;  // vanishing threshold; <= 0 means sup|u_last| / 1000
  int window = 8;
  int max_bubbles = 8;
  /// Bubbles whose limit energy falls below this floor are refused.
  std::optional<double> energy_floor;
  double stabilization_tol = 1e-12;
};

struct Decomposition {
  explicit Decomposition(LatticeFunction limit) : u0(std::move(limit)) {}

  LatticeFunction u0;
  std::vector<LatticeFunction> bubbles;
  CenterTracks center_tracks;

  double phi_u0 = 0.0;
  std::vector<double> phi_bar_bubbles;
  std::vector<double> bubble_masses;       // J2(u_(i)) = beta ||u_(i)||_q^q
  std::vector<double> bubble_heights;      // ||u_(i)||_inf
  std::vector<double> bubble_residuals;    // residual of the limit equation
  double sigma = 0.0;
  double remainder_sup = 0.0;              // sup of the final-term remainder
  std::size_t unstable_sites = 0;
  bool stopped_at_energy_floor = false;

  int k() const { return static_cast<int>(bubbles.size()); }
};

class DecompositionError : public std::runtime_error {
public:
  DecompositionError(const std::string& what, Decomposition partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const Decomposition& partial() const { return partial_; }

private:
  Decomposition partial_;
};

/// Vanishing / non-vanishing iteration on the remainders u_n - u_(0) - ...:
/// stop once the final remainder has sup-norm below sigma, otherwise locate
/// its maximum in every term, recenter, take the pointwise limit as the next
/// bubble and subtract it. Throws DecompositionError (with the partial result)
/// when more than max_bubbles bubbles would be needed.
Decomposition extract_bubbles(const FunctionSequence& seq, const ProblemParams& params,
                              const ExtractOptions& options = {});

/// |level - Phi(u0) - sum_i PhiBar(u_(i))|.
double energy_identity_check(const Decomposition& dec, const ProblemParams& params, double level);

/// tracks_diverge on the decomposition's center tracks; requires k >= 1.
bool separation_check(const Decomposition& dec);

}  // namespace latticepde
