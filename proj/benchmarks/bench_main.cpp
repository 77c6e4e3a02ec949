#include <benchmark/benchmark.h>

#include <cmath>

#include "chronoscale/chronoscale.hpp"

using namespace chronoscale;

namespace {

void BM_NablaExp(benchmark::State& state) {
  const TimeScale ts = state.range(0) == 0 ? TimeScale::integers() : TimeScale::reals(0.01);
  const RealFn p = [](double t) { return 0.3 + 0.1 * std::sin(t); };
  for (auto _ : state) benchmark::DoNotOptimize(nabla_exp(p, ts, 20.0, 0.0));
}
BENCHMARK(BM_NablaExp)->Arg(0)->Arg(1);

void BM_CheckH3(benchmark::State& state) {
  const BoundSet b = compute_bounds(reference::network(), TimeScale::integers());
  for (auto _ : state) benchmark::DoNotOptimize(check_H3(b, reference::kRadius));
}
BENCHMARK(BM_CheckH3);

void BM_FindLambda(benchmark::State& state) {
  const BoundSet b = compute_bounds(reference::network(), TimeScale::integers());
  for (auto _ : state) benchmark::DoNotOptimize(find_lambda(b));
}
BENCHMARK(BM_FindLambda);

// Arg: horizon on the lattice (0) or on the reals with h = 0.01 (1).
void BM_Simulate(benchmark::State& state) {
  const RunConfig cfg = reference::config(state.range(0) == 0 ? "Z" : "R");
  const TimeScale ts = cfg.time_scale();
  const double t_end = state.range(0) == 0 ? 200.0 : 20.0;
  for (auto _ : state)
    benchmark::DoNotOptimize(simulate(cfg.network, *cfg.history, ts, t_end, SimOptions{cfg.run.h, 4}));
}
BENCHMARK(BM_Simulate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
