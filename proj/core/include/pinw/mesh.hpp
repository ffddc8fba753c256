#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pinw/geom.hpp"
#include "pinw/polygon.hpp"

namespace pinw {

using TileId = std::int32_t;
using VertexId = std::int32_t;

/// Nodes plus counterclockwise index triples. Serves as the coarse input mesh
/// and as the simplicial output mesh; `provenance` (triangle -> leaf tile) is
/// filled only by the mesh generator.
struct TriangleMesh {
  std::vector<Point> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::vector<TileId> provenance;

  Triangle triangle(std::size_t i) const {
    const auto& t = triangles[i];
    return Triangle(nodes[static_cast<std::size_t>(t[0])], nodes[static_cast<std::size_t>(t[1])],
                    nodes[static_cast<std::size_t>(t[2])]);
  }
  double diameter() const;
};

using SimplicialMesh = TriangleMesh;

struct ConformityReport {
  bool ok = true;
  std::string message;
  std::size_t interior_edges = 0;
  std::size_t boundary_edges = 0;
  std::size_t negatively_oriented = 0;
};

/// Every interior edge shared by exactly two triangles with opposite
/// orientation, boundary edges by one, no hanging nodes (no node strictly
/// inside a boundary edge), all triangles positively oriented.
ConformityReport check_conformity(const TriangleMesh& mesh);

/// Validates a coarse mesh (indices, degeneracy, conformity) and reorders
/// clockwise triangles in place. Throws NonConforming / Degenerate /
/// InvalidArgument naming the failing element.
void validate_coarse_mesh(TriangleMesh& mesh);

/// Boundary loop of a conforming mesh of a simple polygon. Throws
/// InvalidArgument when the boundary is not a single loop.
Polygon boundary_polygon(const TriangleMesh& mesh);

/// Built-in coarse triangulation of a simple polygon: ear clipping followed
/// by Lawson edge flips to the Delaunay triangulation of the polygon. No
/// Steiner points, so aspect ratios are not bounded.
TriangleMesh triangulate_polygon(const Polygon& polygon);

}  // namespace pinw
