#include <benchmark/benchmark.h>

#include "pinw/classic.hpp"
#include "pinw/meshgen.hpp"

namespace {

pinw::TriangleMesh fan() {
  return {{{0, 0}, {4, 0}, {4.33, 2.59}, {1.33, 3.24}, {-0.68, 1.96}}, {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}}, {}};
}

void BM_Refine(benchmark::State& state) {
  const auto coarse = fan();
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    pinw::Forest f = pinw::Forest::build(coarse);
    f.refine_to_leaf_count(n);
    benchmark::DoNotOptimize(f.leaf_count());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Refine)->RangeMultiplier(5)->Range(400, 50000)->Complexity(benchmark::oNLogN)->Unit(benchmark::kMillisecond);

void BM_Pipeline(benchmark::State& state) {
  const auto coarse = fan();
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    pinw::Forest f = pinw::Forest::build(coarse);
    f.refine_to_leaf_count(n);
    const auto m = pinw::mesh_from_forest(std::move(f));
    benchmark::DoNotOptimize(m.mesh.triangles.size());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Pipeline)->RangeMultiplier(5)->Range(400, 50000)->Complexity(benchmark::oNLogN)->Unit(benchmark::kMillisecond);

void BM_Collapse(benchmark::State& state) {
  pinw::Forest f = pinw::Forest::build(fan());
  f.refine_to_leaf_count(static_cast<std::size_t>(state.range(0)));
  const auto table = pinw::compute_big_edges(f);
  for (auto _ : state) {
    state.PauseTiming();
    pinw::Forest copy = f;
    auto sided = table;
    pinw::assign_sides(copy, sided);
    state.ResumeTiming();
    const auto r = pinw::collapse_pass(copy, sided, pinw::DeltaPolicy::theoretical());
    benchmark::DoNotOptimize(r.displacements());
  }
}
BENCHMARK(BM_Collapse)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_ClassicMesh(benchmark::State& state) {
  const int levels = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const auto m = pinw::classic_rect12_mesh(levels);
    benchmark::DoNotOptimize(m.mesh.nodes.size());
  }
}
BENCHMARK(BM_ClassicMesh)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

}  // namespace
