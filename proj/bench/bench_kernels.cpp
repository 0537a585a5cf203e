#include <benchmark/benchmark.h>

#include "kpii/kernels.hpp"
#include "kpii/verify.hpp"

using namespace kpii;

namespace {

const ResonantSolution& solution() {
  static const ResonantSolution sol = [] {
    const CaseSpec spec{CaseId::C2_1, Branch::First};
    return build_solution(resolve_constraints({-1, -2, -4.0 / 3}, 1, {0, 0, 0}, spec), spec);
  }();
  return sol;
}

void BM_GridSerial(benchmark::State& state) {
  const GridSpec g{-60, 60, static_cast<int>(state.range(0)), -60, 60, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(sample_grid_serial(solution().tau, g, -2.0));
  state.SetItemsProcessed(state.iterations() * g.nx * g.ny);
}

void BM_GridParallel(benchmark::State& state) {
  const GridSpec g{-60, 60, static_cast<int>(state.range(0)), -60, 60, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(sample_grid(solution().tau, g, -2.0));
  state.SetItemsProcessed(state.iterations() * g.nx * g.ny);
}

void BM_ResidualSerial(benchmark::State& state) {
  const auto pts = random_points(state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(residual_sweep_serial(solution().tau, pts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ResidualParallel(benchmark::State& state) {
  const auto pts = random_points(state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(residual_sweep(solution().tau, pts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_GridSerial)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridParallel)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ResidualSerial)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ResidualParallel)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
