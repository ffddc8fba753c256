#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "pinw/forest.hpp"
#include "pinw/mesh.hpp"

namespace pinw {

enum class BigEdgeKind : std::uint8_t { Root, CF, FD, DE, DG };

/// Maximal segment of the tiling. Side 0 is the half-plane left of
/// v0 -> v1 (as positioned before any collapse), side 1 the right one.
struct BigEdge {
  VertexId v0 = -1;
  VertexId v1 = -1;
  /// Tile whose split introduced the edge; kNoTile for root edges.
  TileId creator = kNoTile;
  BigEdgeKind kind = BigEdgeKind::Root;
  bool boundary = false;
  int staying_side = 0;
  /// Tile-edge endpoints on each side, sorted by parameter along v0 -> v1.
  std::array<std::vector<VertexId>, 2> nodes;

  int moving_side() const { return 1 - staying_side; }
  const std::vector<VertexId>& staying_nodes() const { return nodes[static_cast<std::size_t>(staying_side)]; }
};

struct BigEdgeTable {
  std::vector<BigEdge> edges;
  /// Per tile, big edge of tile edge k (corners[k] -> corners[k+1]).
  std::vector<std::array<std::int32_t, 3>> edge_of;
  /// Per tile and edge, the side of that big edge the tile lies on.
  std::vector<std::array<std::int8_t, 3>> side_of;

  bool is_staying(TileId t, int k) const {
    const auto tt = static_cast<std::size_t>(t);
    const auto kk = static_cast<std::size_t>(k);
    return side_of[tt][kk] == edges[static_cast<std::size_t>(edge_of[tt][kk])].staying_side;
  }
};

/// Root edges are their own big edges (shared between the two roots that
/// meet there); each split adds CF, FD, DE and DG, and the remaining child
/// edges inherit the parent's. Node lists are filled but unsorted and sides
/// are unassigned until assign_sides. Throws NotRefined on an unrefined forest.
BigEdgeTable compute_big_edges(const Forest& forest);

/// Boundary edges keep their interior staying, CF keeps the side facing B
/// moving, DE / FD / DG keep the side of child I / II / III staying, and
/// interior root edges keep the smaller root id's side staying. Sorts the
/// node lists.
void assign_sides(const Forest& forest, BigEdgeTable& table);

enum class DeltaMode : std::uint8_t { Theoretical, Dynamic };

struct DeltaPolicy {
  DeltaMode mode = DeltaMode::Theoretical;
  double divisor = 1460.0;
  /// Distortion cap for Dynamic mode.
  double eta = 0.05;

  static DeltaPolicy theoretical(double divisor = 1460.0) { return {DeltaMode::Theoretical, divisor, 0.05}; }
  static DeltaPolicy dynamic(double eta = 0.05) { return {DeltaMode::Dynamic, 1460.0, eta}; }
};

/// min over all tiles of the creation-time minimum altitude, over `divisor`.
double theoretical_delta(const Forest& forest, double divisor = 1460.0);

struct CollapseRecord {
  VertexId moved;
  VertexId target;
  TileId tile;
  Slot slot;
  double distance;
};

struct CollapseResult {
  double delta = 0.0;
  std::size_t candidates = 0;
  std::size_t rejected = 0;
  std::vector<CollapseRecord> records;
  /// alias[v] == v unless v was collapsed onto alias[v].
  std::vector<VertexId> alias;

  std::size_t displacements() const { return records.size(); }
  VertexId resolve(VertexId v) const;
};

/// Collapse-node pass over the non-leaf tiles, coarsest first. Moves the
/// forest's vertex positions in place.
///
/// Theoretical mode collapses every moving D, E, F within delta of a staying
/// node and throws DeltaProperty1Violation / DeltaProperty2Violation when the
/// target is ambiguous or already taken. Dynamic mode tries the nearest
/// staying node and accepts it only if the accumulated singular values of
/// every affected child stay strictly inside (1 - eta, 1 + eta).
CollapseResult collapse_pass(Forest& forest, const BigEdgeTable& table, const DeltaPolicy& policy);

/// A leaf triangle with extra nodes on its edges. hanging[k] lies on the
/// edge corners[k] -> corners[(k + 1) % 3] in any order; `ids` optionally
/// gives global ids in input order (corner 0, hanging[0]..., corner 1, ...),
/// carried into the output and used for tie breaking.
struct LeafInput {
  std::array<Point, 3> corners;
  std::array<std::vector<Point>, 3> hanging;
  std::vector<int> ids;
};

struct LeafTriangulation {
  /// Corner 0, hanging[0] sorted along the edge, corner 1, ...
  std::vector<Point> chain;
  /// Ids of the chain entries (from LeafInput::ids, else input positions).
  std::vector<int> chain_ids;
  /// Counterclockwise triples indexing `chain`.
  std::vector<std::array<int, 3>> triangles;
};

/// Delaunay triangulation of the corners and hanging nodes (no Steiner
/// points). Cocircular ties go to the candidate apex with the smallest id.
/// Throws HangingNodeOffEdge when a node is farther than 1e-9 x edge length
/// from its edge.
LeafTriangulation triangulate_leaf(const LeafInput& leaf);

enum class Finishing : std::uint8_t {
  Delaunay,
  /// Fan from the medium vertex B when the only extra nodes sit on the
  /// medium edge CA; Delaunay otherwise. Used for the classic 1:2 family.
  MediumVertex,
};

struct MeshOptions {
  ForestOptions forest;
  DeltaPolicy delta;
  Finishing finishing = Finishing::Delaunay;
  bool collapse = true;
  bool audit = true;
  int threads = 1;
};

/// Before/after comparison of every leaf across the collapse pass.
struct CollapseAudit {
  double max_aspect_growth = 1.0;
  double min_minalt_ratio = 1.0;
  double max_minalt_ratio = 1.0;
  /// Extreme singular values of the pre -> post affine map of any leaf.
  double min_sigma = 1.0;
  double max_sigma = 1.0;
  /// Tightest per-leaf envelope 1 - 3s/(1-t), exp(3s/(1-t)), s = delta/(0.75 minalt).
  double sigma_lower_bound = 0.0;
  double sigma_upper_bound = 0.0;
  std::size_t sigma_violations = 0;
  /// Smallest gap between consecutive nodes along any leaf edge.
  double min_node_separation = 0.0;
  /// Largest distance of a hanging node from its edge over the edge length.
  double max_collinearity_error = 0.0;
  std::size_t hanging_nodes = 0;
};

struct MeshStats {
  std::size_t roots = 0;
  std::size_t tiles = 0;
  std::size_t leaves = 0;
  std::size_t splits = 0;
  std::size_t nodes = 0;
  std::size_t triangles = 0;
  std::size_t welded = 0;
  DepthStats depth;
  double max_root_aspect = 0.0;
  double min_leaf_minalt = 0.0;
  double max_leaf_minalt = 0.0;
  double seconds_refine = 0.0;
  double seconds_collapse = 0.0;
  double seconds_triangulate = 0.0;
};

struct MeshResult {
  SimplicialMesh mesh;
  Forest forest;
  BigEdgeTable big_edges;
  CollapseResult collapse;
  CollapseAudit audit;
  MeshStats stats;
  /// Mesh node -> representative forest vertex.
  std::vector<VertexId> node_vertex;
};

/// Steps after refinement: big edges, sides, collapse pass, leaf
/// triangulation and assembly.
MeshResult mesh_from_forest(Forest forest, const MeshOptions& opts = {});

/// Full pipeline from a coarse triangulation to a conforming mesh whose leaf
/// tiles all have minimum altitude below h_target.
MeshResult generate_mesh(const TriangleMesh& coarse, double h_target, const MeshOptions& opts = {});

}  // namespace pinw
