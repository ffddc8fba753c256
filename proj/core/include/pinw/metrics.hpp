#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "pinw/forest.hpp"
#include "pinw/mesh.hpp"
#include "pinw/polygon.hpp"

namespace pinw {

struct SkeletonEdge {
  int u;
  int v;
  double length;
};

/// Weighted undirected graph of a tiling or mesh 1-skeleton, stored as CSR.
class SkeletonGraph {
 public:
  struct Arc {
    int to;
    double length;
  };

  SkeletonGraph() = default;
  /// Duplicate and reversed edges are merged; self loops are dropped.
  SkeletonGraph(std::vector<Point> vertices, std::vector<std::pair<int, int>> edges);

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<SkeletonEdge>& edges() const { return edges_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const Arc> neighbors(int v) const {
    return {arcs_.data() + offsets_[static_cast<std::size_t>(v)],
            arcs_.data() + offsets_[static_cast<std::size_t>(v) + 1]};
  }

 private:
  std::vector<Point> vertices_;
  std::vector<SkeletonEdge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Arc> arcs_;
};

/// Edges of all mesh triangles.
SkeletonGraph build_skeleton(const TriangleMesh& mesh);
/// Leaf tiles of a forest. Coincident vertices (within 1e-12 x diameter) are
/// merged and a tile edge passing through other vertices contributes its
/// pieces.
SkeletonGraph build_skeleton(const Forest& forest);

struct ShortestPathTree {
  std::vector<double> dist;
  std::vector<int> pred;
};

ShortestPathTree shortest_paths(const SkeletonGraph& g, int source);
/// Vertex sequence source ... target, empty when unreachable.
std::vector<int> extract_path(const ShortestPathTree& tree, int source, int target);

struct DeviationOptions {
  /// Restrict both endpoints to these vertices (all vertices when empty).
  std::vector<int> subset;
  int threads = 1;
};

struct DeviationReport {
  double ratio = 0.0;
  int p = -1;
  int q = -1;
  std::vector<int> path;
  double path_length = 0.0;
  double geodesic = 0.0;
  double l = 0.0;
  std::size_t pairs = 0;
  double elapsed = 0.0;
};

/// max over vertex pairs with |p - q| >= l of skeleton distance over
/// geodesic distance. Ties go to the lexicographically smallest (p, q).
/// Throws LTooLarge when no pair qualifies.
DeviationReport deviation_ratio(const SkeletonGraph& g, double l, const GeodesicMetric& domain,
                                const DeviationOptions& opts = {});

/// Unit square, n x n cells, each cut by its (0,0)-(1,1) diagonal.
TriangleMesh grid_mesh(int n);
/// Unit square, n x n cells, each cut into four by both diagonals.
TriangleMesh cross_triangle_mesh(int n);

struct QualityReport {
  std::size_t triangles = 0;
  double min_angle = 0.0;
  double max_aspect = 0.0;
  double min_min_altitude = 0.0;
  double max_min_altitude = 0.0;
  /// Counts of triangles by smallest angle, 5-degree bins from 0 to 60.
  std::array<std::size_t, 12> min_angle_histogram{};
};

QualityReport quality_report(const TriangleMesh& mesh);

/// (1 - k s / (1 - t), exp(k s / (1 - t))), the envelope of the products
/// prod_i (1 - s t^i)^k and prod_i (1 + s t^i)^k. Requires 0 < s < 1,
/// 0 < t < 1, k >= 1.
std::pair<double, double> product_bound(double s, double t, int k);
/// The two products above truncated to `factors` terms.
std::pair<double, double> truncated_products(double s, double t, int k, int factors = 200);

}  // namespace pinw
