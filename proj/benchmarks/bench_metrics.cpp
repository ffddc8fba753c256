#include <benchmark/benchmark.h>

#include "pinw/classic.hpp"
#include "pinw/metrics.hpp"

namespace {

void BM_ShortestPaths(benchmark::State& state) {
  const auto g = pinw::build_skeleton(pinw::grid_mesh(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(pinw::shortest_paths(g, 0).dist.back());
  state.SetComplexityN(static_cast<benchmark::IterationCount>(g.vertex_count()));
}
BENCHMARK(BM_ShortestPaths)->RangeMultiplier(2)->Range(16, 128)->Complexity(benchmark::oNLogN);

void BM_DeviationGrid(benchmark::State& state) {
  const auto g = pinw::build_skeleton(pinw::grid_mesh(static_cast<int>(state.range(0))));
  const pinw::GeodesicMetric square(pinw::Polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
  for (auto _ : state) benchmark::DoNotOptimize(pinw::deviation_ratio(g, 1.0, square).ratio);
}
BENCHMARK(BM_DeviationGrid)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_DeviationClassic(benchmark::State& state) {
  const auto m = pinw::classic_rect12_mesh(static_cast<int>(state.range(0)));
  const auto g = pinw::build_skeleton(m.mesh);
  const pinw::GeodesicMetric rect(pinw::rect12_domain());
  for (auto _ : state) benchmark::DoNotOptimize(pinw::deviation_ratio(g, 1.0, rect).ratio);
}
BENCHMARK(BM_DeviationClassic)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_ForestSkeleton(benchmark::State& state) {
  pinw::Forest f = pinw::rect12_forest();
  f.refine_uniform(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pinw::build_skeleton(f).edge_count());
}
BENCHMARK(BM_ForestSkeleton)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

}  // namespace
