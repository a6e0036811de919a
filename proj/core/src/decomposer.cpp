#include "latticepde/decomposer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace latticepde {

namespace {

std::size_t argmax_abs(const LatticeFunction& v) {
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > best_value) {
      best_value = std::abs(v[i]);
      best = i;
    }
  }
  return best;
}

void finalize_energies(Decomposition& dec, const ProblemParams& params) {
  const ProblemParams limit = params.limit_problem();
  dec.phi_u0 = phi(dec.u0, params);
  dec.phi_bar_bubbles.clear();
  dec.bubble_masses.clear();
  dec.bubble_heights.clear();
  dec.bubble_residuals.clear();
  for (const auto& bubble : dec.bubbles) {
    dec.phi_bar_bubbles.push_back(phi(bubble, limit));
    dec.bubble_masses.push_back(j2(bubble, params));
    dec.bubble_heights.push_back(sup_norm(bubble));
    dec.bubble_residuals.push_back(residual_norm(bubble, limit));
  }
}

}  // namespace

void FunctionSequence::validate() const {
  if (terms.empty()) throw std::invalid_argument("function sequence is empty");
  for (const auto& t : terms) {
    if (t.dim() != terms.front().dim()) throw std::invalid_argument("sequence terms must share one dimension");
  }
}

bool tracks_diverge(const CenterTracks& tracks) {
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    for (std::size_t n = 1; n < tracks[i].size(); ++n) {
      if (!(tracks[i][n].l1_norm() > tracks[i][n - 1].l1_norm())) return false;
    }
    for (std::size_t j = i + 1; j < tracks.size(); ++j) {
      const std::size_t len = std::min(tracks[i].size(), tracks[j].size());
      for (std::size_t n = 1; n < len; ++n) {
        if (!(graph_distance(tracks[j][n], tracks[i][n]) > graph_distance(tracks[j][n - 1], tracks[i][n - 1]))) {
          return false;
        }
      }
    }
  }
  return true;
}

FunctionSequence synthesize_sequence(const LatticeFunction& u0, const std::vector<LatticeFunction>& bubbles,
                                     const CenterTracks& tracks, const std::vector<LatticeBox>& boxes) {
  if (boxes.empty()) throw std::invalid_argument("synthesize_sequence needs at least one box");
  if (tracks.size() != bubbles.size()) throw std::invalid_argument("one center track per bubble is required");
  for (const auto& track : tracks) {
    if (track.size() != boxes.size()) throw std::invalid_argument("every center track needs one center per box");
  }
  if (!tracks_diverge(tracks)) throw std::invalid_argument("center tracks are not strictly diverging");

  FunctionSequence seq;
  for (std::size_t n = 0; n < boxes.size(); ++n) {
    LatticeFunction term = embed(u0, boxes[n]);
    for (std::size_t i = 0; i < bubbles.size(); ++i) term += translate(bubbles[i], -tracks[i][n], boxes[n]);
    seq.terms.push_back(std::move(term));
  }
  return seq;
}

PointwiseLimit pointwise_limit(const FunctionSequence& seq, int window, double stabilization_tol) {
  seq.validate();
  for (const auto& t : seq.terms) {
    if (window > t.box().radius()) throw std::invalid_argument("window exceeds the smallest box radius");
  }
  const LatticeBox window_box(seq.dim(), window);
  PointwiseLimit out{embed(seq.terms.back(), window_box), {}};
  if (seq.terms.size() >= 2) {
    const LatticeFunction& prev = seq.terms[seq.terms.size() - 2];
    for (std::size_t i = 0; i < window_box.size(); ++i) {
      const Site& x = window_box.site(i);
      if (std::abs(out.limit[i] - prev.at(x)) > stabilization_tol) out.unstable_sites.push_back(x);
    }
  }
  return out;
}

Decomposition extract_bubbles(const FunctionSequence& seq, const ProblemParams& params, const ExtractOptions& options) {
  seq.validate();
  params.validate();
  if (seq.dim() != params.dim) throw std::invalid_argument("sequence dimension does not match N");
  if (options.max_bubbles < 0) throw std::invalid_argument("max_bubbles must be nonnegative");

  const double sigma = options.sigma > 0.0 ? options.sigma : sup_norm(seq.terms.back()) / 1000.0;

  auto u0_limit = pointwise_limit(seq, options.window, options.stabilization_tol);
  Decomposition dec{u0_limit.limit};
  dec.sigma = sigma;
  dec.unstable_sites = u0_limit.unstable_sites.size();

  FunctionSequence remainder;
  for (const auto& term : seq.terms) remainder.terms.push_back(term - embed(dec.u0, term.box()));

  while (true) {
    dec.remainder_sup = sup_norm(remainder.terms.back());
    if (dec.remainder_sup < sigma) break;  // vanishing
    if (dec.k() >= options.max_bubbles) {
      finalize_energies(dec, params);
      std::ostringstream os;
      os << "bubble budget of " << options.max_bubbles << " exhausted with remainder sup-norm " << dec.remainder_sup
         << " >= sigma " << sigma;
      throw DecompositionError(os.str(), dec);
    }

    // Non-vanishing: recenter every term at its remainder maximum.
    std::vector<Site> centers;
    FunctionSequence recentered;
    for (const auto& v : remainder.terms) {
      const Site y = v.box().site(argmax_abs(v));
      recentered.terms.push_back(translate(v, y));
      centers.push_back(y);
    }
    auto bubble_limit = pointwise_limit(recentered, options.window, options.stabilization_tol);
    LatticeFunction bubble = std::move(bubble_limit.limit);

    if (options.energy_floor && phi_bar(bubble, params) < *options.energy_floor) {
      dec.stopped_at_energy_floor = true;
      break;
    }

    for (std::size_t n = 0; n < remainder.terms.size(); ++n) {
      auto& v = remainder.terms[n];
      v -= translate(bubble, -centers[n], v.box());
    }
    dec.unstable_sites += bubble_limit.unstable_sites.size();
    dec.bubbles.push_back(std::move(bubble));
    dec.center_tracks.push_back(std::move(centers));
  }

  finalize_energies(dec, params);
  return dec;
}

double energy_identity_check(const Decomposition& dec, const ProblemParams& params, double level) {
  const ProblemParams limit = params.limit_problem();
  std::vector<double> parts{phi(dec.u0, params)};
  for (const auto& bubble : dec.bubbles) parts.push_back(phi(bubble, limit));
  return std::abs(level - pairwise_sum(parts));
}

bool separation_check(const Decomposition& dec) {
  if (dec.k() < 1) throw std::invalid_argument("separation_check requires at least one bubble");
  return tracks_diverge(dec.center_tracks);
}

}  // namespace latticepde
