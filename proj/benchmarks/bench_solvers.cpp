#include <array>

#include <benchmark/benchmark.h>

#include <incompat/convex_bounds.hpp>
#include <incompat/distance.hpp>
#include <incompat/eur.hpp>
#include <incompat/fidelity.hpp>

namespace {

using namespace incompat;

SearchConfig searched(int restarts) {
  SearchConfig cfg;
  cfg.restarts = restarts;
  cfg.tol = 1e-6;
  cfg.allow_closed_form = false;
  return cfg;
}

void BM_SdpMub(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Ensemble s = eigenstate_ensemble(mub_bases(d, 2));
  for (auto _ : state) benchmark::DoNotOptimize(sdp_q_lower(s).bound);
}
BENCHMARK(BM_SdpMub)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_FmaxAscent(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Ensemble s = eigenstate_ensemble(mub_bases(d, 2));
  const SearchConfig cfg = searched(8);
  for (auto _ : state) benchmark::DoNotOptimize(fmax_ascent(s, cfg).fmax_lower);
}
BENCHMARK(BM_FmaxAscent)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_QfSearch(benchmark::State& state) {
  const auto [a, b] = subspace_pair(static_cast<int>(state.range(0)), 1);
  const SearchConfig cfg = searched(8);
  for (auto _ : state) benchmark::DoNotOptimize(q_alpha_directional(a, b, Alpha::fidelity, cfg).value);
}
BENCHMARK(BM_QfSearch)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_T2Search(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const std::array<Observable, 2> obs{random_observable(static_cast<int>(state.range(0)), rng),
                                      random_observable(static_cast<int>(state.range(0)), rng)};
  const SearchConfig cfg = searched(16);
  for (auto _ : state) benchmark::DoNotOptimize(t2_standard(obs, cfg).value);
}
BENCHMARK(BM_T2Search)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
