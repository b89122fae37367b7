#include <benchmark/benchmark.h>

#include "wassci/harness.hpp"
#include "wassci/inference.hpp"
#include "wassci/normal.hpp"

namespace {

wassci::ProblemInstance instance_of(int n, int d) {
  wassci::ExperimentConfig cfg;
  cfg.n = cfg.m = n;
  cfg.d = d;
  cfg.delta = 2.0;
  cfg.seed = 1;
  return wassci::generate_instance(cfg, 0);
}

void BM_CostDecomposition(benchmark::State& state) {
  const auto inst = instance_of(static_cast<int>(state.range(0)), 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(wassci::build_cost_decomposition(inst));
}
BENCHMARK(BM_CostDecomposition)->Arg(20)->Arg(50)->Arg(80);

void BM_SolveTransport(benchmark::State& state) {
  const auto inst = instance_of(static_cast<int>(state.range(0)), 1);
  const auto costs = wassci::build_cost_decomposition(inst);
  const auto tp = wassci::build_transport_problem(inst, costs);
  for (auto _ : state) benchmark::DoNotOptimize(wassci::solve_transport(tp));
}
BENCHMARK(BM_SolveTransport)->Arg(10)->Arg(20)->Arg(40)->Arg(80);

void BM_Algorithm1(benchmark::State& state) {
  const auto inst = instance_of(static_cast<int>(state.range(0)), 1);
  wassci::InferenceOptions opts;
  opts.allow_degenerate = true;
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(wassci::run_algorithm_1(inst, opts));
    } catch (const wassci::Error&) {
    }
  }
}
BENCHMARK(BM_Algorithm1)->Arg(5)->Arg(10)->Arg(20)->Arg(50);

void BM_TruncatedNormalCdf(benchmark::State& state) {
  const auto region = wassci::ExtendedInterval::bounded(-0.5, 9.0);
  double x = 1.2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(wassci::truncated_normal_cdf(x, 25.0, 2.0, region));
  }
}
BENCHMARK(BM_TruncatedNormalCdf);

}  // namespace

BENCHMARK_MAIN();
