#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "anchorplan/deployment.hpp"
#include "anchorplan/ins_drift.hpp"
#include "anchorplan/localization_geometry.hpp"
#include "anchorplan/planner.hpp"
#include "anchorplan/simulator.hpp"

using namespace anchorplan;

namespace {

void BM_CrlbField(benchmark::State& state) {
  const ClusterDesign design;
  const auto cluster = design.cluster(static_cast<int>(state.range(0)));
  const auto setup = design.acoustic_setup(SoundSpeedProfile::default_munk_like(), {});
  const auto region = reachable_region(cluster, design.comm_range_m);
  for (auto _ : state) {
    benchmark::DoNotOptimize(expected_crlb_field(cluster, setup, region, 100.0, 1).q);
  }
}
BENCHMARK(BM_CrlbField)->Arg(3)->Arg(5)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_CoverageRadius(benchmark::State& state) {
  const ClusterDesign design;
  const auto cluster = design.cluster(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(coverage_radius(cluster, design.comm_range_m, design.rule));
  }
}
BENCHMARK(BM_CoverageRadius)->Arg(3)->Arg(5)->Arg(8)->Unit(benchmark::kMicrosecond);

void BM_FitDivergence(benchmark::State& state) {
  const InsDivergenceModel truth;
  std::vector<SeriesPoint> series;
  for (int i = 0; i < state.range(0); ++i) {
    const double dp = 2000.0 * i;
    series.push_back({dp, position_variance(truth, dp) * (1.0 + 0.01 * std::sin(7.0 * i))});
  }
  for (auto _ : state) benchmark::DoNotOptimize(fit_divergence(series).model.beta2);
}
BENCHMARK(BM_FitDivergence)->Arg(50)->Arg(500)->Unit(benchmark::kMicrosecond);

void BM_MonteCarlo(benchmark::State& state) {
  ClusterSetup setup;
  setup.profile = SoundSpeedProfile::default_munk_like();
  const double d_com = coverage_radius(setup.design.cluster(4), setup.design.comm_range_m, setup.design.rule);
  const auto plan = layout_clusters(20.0, 48, 4, d_com);
  for (auto _ : state) {
    const auto mc = monte_carlo(plan, setup, SimPathKind::Random, 100, {}, {}, 42, {}, 500.0,
                                static_cast<unsigned>(state.range(0)));
    benchmark::DoNotOptimize(mc.summary.mean);
  }
}
BENCHMARK(BM_MonteCarlo)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
