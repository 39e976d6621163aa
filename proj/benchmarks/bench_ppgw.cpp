#include <benchmark/benchmark.h>

#include "ppgw/branching.hpp"
#include "ppgw/offspring.hpp"

using namespace ppgw;

static void BM_PmfTable(benchmark::State& state) {
  const double lambda = static_cast<double>(state.range(0));
  const auto model = OffspringModel::janardan(lambda, 0.5 * lambda);
  for (auto _ : state) benchmark::DoNotOptimize(pmf_table(model));
}
BENCHMARK(BM_PmfTable)->Arg(1)->Arg(8)->Arg(64);

static void BM_Pgf(benchmark::State& state) {
  const auto model = OffspringModel::janardan(2, 1.9);
  double s = 0.3;
  for (auto _ : state) benchmark::DoNotOptimize(pgf(model, s));
}
BENCHMARK(BM_Pgf);

static void BM_ExtinctionProbability(benchmark::State& state) {
  const auto model = OffspringModel::janardan(2, 1);
  for (auto _ : state) benchmark::DoNotOptimize(extinction_probability(model));
}
BENCHMARK(BM_ExtinctionProbability);

static void BM_ExtinctionGridBrent(benchmark::State& state) {
  const auto model = OffspringModel::janardan(2, 1.9999);
  for (auto _ : state) benchmark::DoNotOptimize(extinction_probability_grid_brent(model));
}
BENCHMARK(BM_ExtinctionGridBrent);

static void BM_ExtinctionCurve(benchmark::State& state) {
  const auto model = OffspringModel::janardan(2, 1);
  for (auto _ : state) benchmark::DoNotOptimize(extinction_curve(model, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_ExtinctionCurve)->Arg(20)->Arg(2000);

static void BM_Sample(benchmark::State& state) {
  const auto model = OffspringModel::janardan(2, 1);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample(model, static_cast<std::size_t>(state.range(0)), seed++));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sample)->Arg(1000)->Arg(100000);

static void BM_SimulateMany(benchmark::State& state) {
  const auto model = OffspringModel::poisson(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_many(model, 1, 10000, 20, kDefaultPopulationCap, static_cast<unsigned>(state.range(0))));
  }
}
BENCHMARK(BM_SimulateMany)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
