#include <benchmark/benchmark.h>

#include <random>

#include "reachguard/kernels.hpp"
#include "reachguard/scenario.hpp"
#include "reachguard/sim.hpp"

using namespace reachguard;

namespace {

const std::array<std::size_t, 2> kAxes{0, 2};

struct EnsembleCase {
  ModelSpec model = quadcopter4d_model();
  std::array<double, 2> u{0.1, -0.05};
  HyperRectangle init{{-1, 1}, {-0.5, 0.5}, {-1, 1}, {-0.5, 0.5}};
  ReachResult reach = reach_anytime(init, point_input(u), 0.0, 1.0, 0.05, RuntimeBudget::passes(3), {}, model);
  std::vector<double> points;

  explicit EnsembleCase(std::size_t n) {
    std::mt19937_64 gen(11);
    for (std::size_t i = 0; i < n; ++i) {
      for (const Interval& iv : init.intervals()) {
        points.push_back(std::uniform_real_distribution<double>(iv.lo, iv.hi)(gen));
      }
    }
  }
};

const EnsembleCase& ensemble() {
  static const EnsembleCase c(256);
  return c;
}

const SimRun& nominal_run() {
  static const SimRun run = run_scenario(load_scenario(REACHGUARD_CONFIG_DIR "/nominal8.json"));
  return run;
}

template <bool Parallel>
void BM_EnsembleContainment(benchmark::State& state) {
  const auto& c = ensemble();
  for (auto _ : state) {
    const auto s = Parallel ? kernels::parallel::ensemble_containment(c.reach, c.model, c.points, c.u, 1e-3)
                            : kernels::serial::ensemble_containment(c.reach, c.model, c.points, c.u, 1e-3);
    benchmark::DoNotOptimize(s);
  }
}

template <bool Parallel>
void BM_ReachContainment(benchmark::State& state) {
  const auto& run = nominal_run();
  for (auto _ : state) {
    const auto s = Parallel ? kernels::parallel::reach_containment(run.truth, run.reach_records)
                            : kernels::serial::reach_containment(run.truth, run.reach_records);
    benchmark::DoNotOptimize(s);
  }
}

template <bool Parallel>
void BM_MinPairwiseDistance(benchmark::State& state) {
  const auto& run = nominal_run();
  for (auto _ : state) {
    const double d = Parallel ? kernels::parallel::min_pairwise_distance(run.truth, kAxes)
                              : kernels::serial::min_pairwise_distance(run.truth, kAxes);
    benchmark::DoNotOptimize(d);
  }
}

}  // namespace

BENCHMARK(BM_EnsembleContainment<false>)->Name("ensemble_containment/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnsembleContainment<true>)->Name("ensemble_containment/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReachContainment<false>)->Name("reach_containment/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReachContainment<true>)->Name("reach_containment/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MinPairwiseDistance<false>)->Name("min_pairwise_distance/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MinPairwiseDistance<true>)->Name("min_pairwise_distance/omp")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
