#include <benchmark/benchmark.h>

#include "calrisk/calrisk.hpp"

namespace {

calrisk::Dataset sample(calrisk::Index n, std::uint64_t seed) {
  calrisk::SimConfig cfg;
  cfg.n = n;
  cfg.seed = seed;
  return calrisk::simulate(cfg).dataset;
}

void BM_KernelBasis(benchmark::State& state) {
  const auto train = sample(state.range(0), 1);
  for (auto _ : state) {
    auto basis = calrisk::KernelBasis::build(train, 0.5);
    benchmark::DoNotOptimize(basis);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KernelBasis)->RangeMultiplier(2)->Range(128, 1024)->Complexity(benchmark::oNCubed);

// Ridge refits on a cached basis, the inner loop of the lambda grid.
void BM_KkrRefit(benchmark::State& state) {
  const auto train = sample(state.range(0), 2);
  const auto basis = calrisk::KernelBasis::build(train, 0.5);
  for (auto _ : state) {
    auto model = calrisk::KkrModel::fit(basis, 1e-3);
    benchmark::DoNotOptimize(model.core().data());
  }
}
BENCHMARK(BM_KkrRefit)->RangeMultiplier(2)->Range(128, 1024);

void BM_KkrRisk(benchmark::State& state) {
  const auto train = sample(state.range(0), 3);
  const auto eval = sample(state.range(0) / 4, 4);
  const auto model = calrisk::KkrModel::fit(train, 1e-3, 0.5);
  for (auto _ : state) {
    auto r = calrisk::empirical_risk_kkr(model, eval);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(BM_KkrRisk)->RangeMultiplier(2)->Range(128, 1024);

void BM_UkkrFitDirect(benchmark::State& state) {
  const auto train = sample(state.range(0), 5);
  for (auto _ : state) {
    auto model = calrisk::UkkrModel::fit(train, 1e-3, 0.5);
    benchmark::DoNotOptimize(model.core().data());
  }
}
BENCHMARK(BM_UkkrFitDirect)->RangeMultiplier(2)->Range(128, 1024);

void BM_KdePairMatrix(benchmark::State& state) {
  const auto train = sample(state.range(0), 6);
  const auto eval = sample(state.range(0) / 4, 7);
  const auto model = calrisk::KdeModel::fit(train, 0.05);
  for (auto _ : state) {
    auto h = model.pair_matrix(eval.points());
    benchmark::DoNotOptimize(h.data());
  }
}
BENCHMARK(BM_KdePairMatrix)->RangeMultiplier(2)->Range(128, 1024);

}  // namespace

BENCHMARK_MAIN();
