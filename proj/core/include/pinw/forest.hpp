#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <queue>
#include <vector>

#include "pinw/mesh.hpp"
#include "pinw/pinwheel.hpp"

namespace pinw {

enum class TileRole : std::uint8_t { Root, I, II, III, IV, V, Tripart };

inline constexpr TileId kNoTile = -1;

struct Tile {
  TileId id = kNoTile;
  /// Vertex ids in angle-role order (A, B, C). Not necessarily CCW.
  std::array<VertexId, 3> corners{};
  AngleClass cls;
  TileId parent = kNoTile;
  /// Empty for leaves, otherwise children in role order I..V.
  std::vector<TileId> children;
  int depth = 0;
  TileRole role = TileRole::Root;
  /// D, E, F, G of this tile's split (-1 while a leaf).
  std::array<VertexId, 4> split_vertices{-1, -1, -1, -1};
  /// Minimum altitude at creation time, i.e. before any collapse.
  double min_altitude = 0.0;

  bool is_leaf() const { return children.empty(); }
};

struct RationalGuard {
  int max_denominator = 20;
  double tol = 5e-3;
};

struct ForestOptions {
  double tripartition_cutoff = kDefaultTripartitionCutoff;
  std::optional<RationalGuard> rational_guard = RationalGuard{};
  std::uint64_t seed = 1;
  /// Redraws of the displaced tripartition center before giving up.
  int guard_max_draws = 64;
};

struct DepthStats {
  int min_leaf_depth = 0;
  int max_leaf_depth = 0;
  std::size_t tile_count = 0;
};

struct BuildStats {
  std::size_t coarse_triangles = 0;
  std::size_t tripartitions = 0;
  std::size_t guard_flags = 0;
  std::size_t guard_redraws = 0;
};

/// Tile hierarchy over a shared vertex table.
///
/// Roots are built once from a coarse mesh; refinement pinwheel-splits the
/// leaf with the largest minimum altitude (smaller id on ties) until every
/// leaf is below the target. Vertices are referenced by id so moving one
/// position updates every tile that uses it.
class Forest {
 public:
  Forest() = default;

  /// Throws NonConforming / Degenerate / InvalidArgument for a bad coarse mesh.
  static Forest build(TriangleMesh coarse, const ForestOptions& opts = {});
  /// Roots given directly in role order, with no validation, tripartition
  /// or guard. Used for fixed families such as the classic 1:2 rectangle.
  static Forest from_roles(std::vector<Point> vertices, const std::vector<std::array<VertexId, 3>>& roots);

  void refine(double h_target);
  void refine_to_leaf_count(std::size_t n);
  /// Splits every leaf `levels` times.
  void refine_uniform(int levels);
  /// Marks the forest as refined with no splits (target above every root).
  void mark_refined() { refined_ = true; }

  bool refined() const { return refined_; }
  const std::vector<Tile>& tiles() const { return tiles_; }
  const Tile& tile(TileId id) const { return tiles_[static_cast<std::size_t>(id)]; }
  const std::vector<TileId>& roots() const { return roots_; }
  std::vector<TileId> leaves() const;
  std::size_t leaf_count() const { return leaf_count_; }
  DepthStats depth_stats() const;
  const BuildStats& build_stats() const { return build_stats_; }

  const std::vector<Point>& vertices() const { return vertices_; }
  std::vector<Point>& mutable_vertices() { return vertices_; }
  Point vertex(VertexId v) const { return vertices_[static_cast<std::size_t>(v)]; }
  /// Tile whose split created v, or kNoTile for root vertices.
  TileId vertex_creator(VertexId v) const { return creator_[static_cast<std::size_t>(v)]; }

  Triangle triangle(TileId id) const;
  Corners corners(TileId id) const;
  double diameter() const { return diameter_; }

  /// Minimum altitudes of split tiles, in split order.
  const std::vector<double>& split_log() const { return split_log_; }
  std::size_t split_count() const { return split_log_.size(); }

  /// Splits one leaf (any leaf, ignoring heap order).
  void split(TileId id);

 private:
  VertexId add_vertex(Point p, TileId creator);
  TileId add_tile(const std::array<VertexId, 3>& corners, const AngleClass& cls, TileId parent, TileRole role);
  void add_root(const std::array<VertexId, 3>& ids, TileRole role);
  void push_heap(TileId id);

  std::vector<Point> vertices_;
  std::vector<TileId> creator_;
  std::vector<Tile> tiles_;
  std::vector<TileId> roots_;
  std::size_t leaf_count_ = 0;
  double diameter_ = 0.0;
  bool refined_ = false;
  BuildStats build_stats_;
  std::vector<double> split_log_;

  struct HeapEntry {
    double key;
    TileId id;
    bool operator<(const HeapEntry& o) const { return key < o.key || (key == o.key && id > o.id); }
  };
  std::priority_queue<HeapEntry> heap_;
};

}  // namespace pinw
