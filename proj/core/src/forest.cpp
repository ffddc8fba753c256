#include "pinw/forest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pinw/error.hpp"

namespace pinw {

namespace {

bool any_flagged(const std::array<Triangle, 3>& parts, const RationalGuard& g) {
  for (const auto& t : parts) {
    if (rational_angle_guard(min_angle(t), g.max_denominator, g.tol)) return true;
  }
  return false;
}

}  // namespace

VertexId Forest::add_vertex(Point p, TileId creator) {
  vertices_.push_back(p);
  creator_.push_back(creator);
  return static_cast<VertexId>(vertices_.size() - 1);
}

TileId Forest::add_tile(const std::array<VertexId, 3>& corners, const AngleClass& cls, TileId parent,
                        TileRole role) {
  Tile t;
  t.id = static_cast<TileId>(tiles_.size());
  t.corners = corners;
  t.cls = cls;
  t.parent = parent;
  t.role = role;
  t.depth = parent == kNoTile ? 0 : tiles_[static_cast<std::size_t>(parent)].depth + 1;
  t.min_altitude = pinw::min_altitude(Triangle(vertex(corners[0]), vertex(corners[1]), vertex(corners[2])));
  tiles_.push_back(std::move(t));
  ++leaf_count_;
  return tiles_.back().id;
}

void Forest::add_root(const std::array<VertexId, 3>& ids, TileRole role) {
  const Triangle tri(vertex(ids[0]), vertex(ids[1]), vertex(ids[2]));
  auto angles = triangle_angles(tri);
  // Triangle may have swapped b and c to make itself CCW; map back to ids.
  std::array<VertexId, 3> by_vertex{};
  for (int i = 0; i < 3; ++i) {
    for (VertexId id : ids) {
      if (vertex(id) == tri[i]) by_vertex[static_cast<std::size_t>(i)] = id;
    }
  }
  std::stable_sort(angles.begin(), angles.end(),
                   [](const VertexAngle& x, const VertexAngle& y) { return x.angle < y.angle; });
  const std::array<VertexId, 3> corners{by_vertex[static_cast<std::size_t>(angles[0].vertex)],
                                        by_vertex[static_cast<std::size_t>(angles[1].vertex)],
                                        by_vertex[static_cast<std::size_t>(angles[2].vertex)]};
  const AngleClass cls{AngleKind::RootSimilar, angles[0].angle, angles[1].angle, angles[2].angle};
  const TileId id = add_tile(corners, cls, kNoTile, role);
  roots_.push_back(id);
  push_heap(id);
}

void Forest::push_heap(TileId id) { heap_.push({tiles_[static_cast<std::size_t>(id)].min_altitude, id}); }

Forest Forest::build(TriangleMesh coarse, const ForestOptions& opts) {
  validate_coarse_mesh(coarse);
  Forest f;
  f.vertices_ = coarse.nodes;
  f.creator_.assign(coarse.nodes.size(), kNoTile);
  f.diameter_ = coarse.diameter();
  f.build_stats_.coarse_triangles = coarse.triangles.size();

  for (std::size_t ti = 0; ti < coarse.triangles.size(); ++ti) {
    const auto& ids = coarse.triangles[ti];
    const Triangle tri = coarse.triangle(ti);
    auto angles = triangle_angles(tri);
    std::sort(angles.begin(), angles.end(),
              [](const VertexAngle& x, const VertexAngle& y) { return x.angle < y.angle; });
    const bool near_equilateral = needs_tripartition(angles[0].angle, angles[2].angle, opts.tripartition_cutoff);
    const bool flagged =
        opts.rational_guard &&
        rational_angle_guard(angles[0].angle, opts.rational_guard->max_denominator, opts.rational_guard->tol);
    if (flagged) ++f.build_stats_.guard_flags;
    if (!near_equilateral && !flagged) {
      f.add_root(ids, TileRole::Root);
      continue;
    }

    Point center = in_center(tri);
    bool found = !opts.rational_guard || (!flagged && !any_flagged(tripartition(tri, center), *opts.rational_guard));
    for (int draw = 0; !found && draw < opts.guard_max_draws; ++draw) {
      // Start at 5% of the in-radius and widen so later draws can clear the flag windows.
      const double fraction = std::min(0.5, 0.05 * (1.0 + draw / 4.0));
      center = perturbed_in_center(tri, opts.seed + ti, static_cast<std::uint64_t>(draw), fraction);
      ++f.build_stats_.guard_redraws;
      found = !any_flagged(tripartition(tri, center), *opts.rational_guard);
    }
    if (!found) {
      throw Error(ErrorCode::InvalidArgument,
                  "rational-angle guard could not place a tripartition center in coarse triangle " +
                      std::to_string(ti));
    }
    ++f.build_stats_.tripartitions;
    const VertexId c = f.add_vertex(center, kNoTile);
    f.add_root({ids[0], ids[1], c}, TileRole::Tripart);
    f.add_root({ids[1], ids[2], c}, TileRole::Tripart);
    f.add_root({ids[2], ids[0], c}, TileRole::Tripart);
  }
  return f;
}

Forest Forest::from_roles(std::vector<Point> vertices, const std::vector<std::array<VertexId, 3>>& roots) {
  Forest f;
  f.vertices_ = std::move(vertices);
  f.creator_.assign(f.vertices_.size(), kNoTile);
  TriangleMesh tmp{f.vertices_, {}, {}};
  f.diameter_ = tmp.diameter();
  for (const auto& r : roots) {
    const Point a = f.vertex(r[0]), b = f.vertex(r[1]), c = f.vertex(r[2]);
    const AngleClass cls{AngleKind::RootSimilar, angle_at(a, b, c), angle_at(b, c, a), angle_at(c, a, b)};
    const TileId id = f.add_tile(r, cls, kNoTile, TileRole::Root);
    f.roots_.push_back(id);
    f.push_heap(id);
  }
  return f;
}

Triangle Forest::triangle(TileId id) const {
  const auto& c = tile(id).corners;
  return Triangle(vertex(c[0]), vertex(c[1]), vertex(c[2]));
}

Corners Forest::corners(TileId id) const {
  const auto& c = tile(id).corners;
  return {vertex(c[0]), vertex(c[1]), vertex(c[2])};
}

void Forest::split(TileId id) {
  const Tile parent = tile(id);
  if (!parent.is_leaf()) throw Error(ErrorCode::InvalidArgument, "tile " + std::to_string(id) + " is already split");
  const SubdivisionResult r = pinwheel_split(corners(id), parent.cls);

  std::array<VertexId, 7> slot{};
  slot[kA] = parent.corners[0];
  slot[kB] = parent.corners[1];
  slot[kC] = parent.corners[2];
  slot[kD] = add_vertex(r.points[kD], id);
  slot[kE] = add_vertex(r.points[kE], id);
  slot[kF] = add_vertex(r.points[kF], id);
  slot[kG] = add_vertex(r.points[kG], id);

  std::vector<TileId> kids;
  kids.reserve(5);
  for (std::size_t i = 0; i < 5; ++i) {
    const auto& s = kChildSlots[i];
    const auto role = static_cast<TileRole>(static_cast<int>(TileRole::I) + static_cast<int>(i));
    kids.push_back(add_tile({slot[s[0]], slot[s[1]], slot[s[2]]}, r.children[i].cls, id, role));
  }
  --leaf_count_;
  auto& t = tiles_[static_cast<std::size_t>(id)];
  t.children = std::move(kids);
  t.split_vertices = {slot[kD], slot[kE], slot[kF], slot[kG]};
  split_log_.push_back(t.min_altitude);
}

void Forest::refine(double h_target) {
  if (!(h_target > 0.0)) throw Error(ErrorCode::InvalidArgument, "target size must be positive");
  if (h_target < 1e-9 * diameter_) {
    std::ostringstream os;
    os << "target " << h_target << " is below 1e-9 x domain diameter " << diameter_;
    throw Error(ErrorCode::RefinementTooDeep, os.str());
  }
  while (!heap_.empty() && heap_.top().key >= h_target) {
    const TileId id = heap_.top().id;
    heap_.pop();
    split(id);
    for (TileId c : tile(id).children) push_heap(c);
  }
  refined_ = true;
}

void Forest::refine_to_leaf_count(std::size_t n) {
  while (leaf_count_ < n && !heap_.empty()) {
    const TileId id = heap_.top().id;
    heap_.pop();
    split(id);
    for (TileId c : tile(id).children) push_heap(c);
  }
  refined_ = true;
}

void Forest::refine_uniform(int levels) {
  for (int l = 0; l < levels; ++l) {
    for (TileId id : leaves()) split(id);
  }
  heap_ = {};
  for (TileId id : leaves()) push_heap(id);
  refined_ = true;
}

std::vector<TileId> Forest::leaves() const {
  std::vector<TileId> out;
  out.reserve(leaf_count_);
  for (const auto& t : tiles_) {
    if (t.is_leaf()) out.push_back(t.id);
  }
  return out;
}

DepthStats Forest::depth_stats() const {
  DepthStats s;
  s.tile_count = tiles_.size();
  s.min_leaf_depth = std::numeric_limits<int>::max();
  for (const auto& t : tiles_) {
    if (!t.is_leaf()) continue;
    s.min_leaf_depth = std::min(s.min_leaf_depth, t.depth);
    s.max_leaf_depth = std::max(s.max_leaf_depth, t.depth);
  }
  if (tiles_.empty()) s.min_leaf_depth = 0;
  return s;
}

}  // namespace pinw
