#include "pinw/classic.hpp"

#include <chrono>

#include "pinw/error.hpp"

namespace pinw {

Polygon rect12_domain() { return Polygon({{0.0, 0.0}, {2.0, 0.0}, {2.0, 1.0}, {0.0, 1.0}}); }

Forest rect12_forest() {
  return Forest::from_roles({{0.0, 0.0}, {2.0, 0.0}, {2.0, 1.0}, {0.0, 1.0}}, {{0, 2, 1}, {2, 0, 3}});
}

MeshResult classic_rect12_mesh(int levels, int threads) {
  if (levels < 0) throw Error(ErrorCode::InvalidArgument, "levels must be non-negative");
  const auto t0 = std::chrono::steady_clock::now();
  Forest forest = rect12_forest();
  forest.refine_uniform(levels);
  const double refine = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  MeshOptions opts;
  opts.finishing = Finishing::MediumVertex;
  opts.threads = threads;
  MeshResult res = mesh_from_forest(std::move(forest), opts);
  res.stats.seconds_refine = refine;
  return res;
}

}  // namespace pinw
