#include <benchmark/benchmark.h>

#include <random>

#include "latticepde/decomposer.hpp"
#include "latticepde/minimizer.hpp"
#include "latticepde/oracles.hpp"

using namespace latticepde;

namespace {

LatticeFunction random_on(int dim, int radius) {
  std::mt19937_64 rng(1);
  return random_function(LatticeBox(dim, radius), rng);
}

void BM_Laplacian(benchmark::State& state) {
  const auto u = random_on(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(laplacian(u));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(u.size()));
}
BENCHMARK(BM_Laplacian)->Args({2, 8})->Args({2, 16})->Args({3, 8})->Args({3, 12});

void BM_GradientNormSq(benchmark::State& state) {
  const auto u = random_on(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(gradient_norm_sq(u));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(u.size()));
}
BENCHMARK(BM_GradientNormSq)->Args({2, 8})->Args({2, 16})->Args({3, 8})->Args({3, 12});

void BM_MinimizeConstrained(benchmark::State& state) {
  ProblemParams params;
  params.dim = static_cast<int>(state.range(0));
  const LatticeBox box(params.dim, static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(minimize_constrained(params, box).lambda0);
}
BENCHMARK(BM_MinimizeConstrained)->Args({2, 4})->Args({2, 8})->Args({3, 8})->Unit(benchmark::kMillisecond);

void BM_ExtractBubbles(benchmark::State& state) {
  ProblemParams params;
  const auto profile = minimize_constrained(params, LatticeBox(2, 8)).u0;
  const int k = static_cast<int>(state.range(0));
  std::vector<LatticeFunction> bubbles(static_cast<std::size_t>(k), profile);
  CenterTracks tracks(static_cast<std::size_t>(k));
  std::vector<LatticeBox> boxes;
  for (int n = 1; n <= 5; ++n) {
    const int r = 20 + 4 * n;
    boxes.emplace_back(2, r + 8);
    tracks[0].push_back(Site{r, 0});
    if (k > 1) tracks[1].push_back(Site{-r, 0});
  }
  const auto seq = synthesize_sequence(LatticeFunction(LatticeBox(2, 8)), bubbles, tracks, boxes);
  for (auto _ : state) benchmark::DoNotOptimize(extract_bubbles(seq, params).k());
}
BENCHMARK(BM_ExtractBubbles)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
