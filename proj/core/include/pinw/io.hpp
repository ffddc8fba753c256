#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pinw/mesh.hpp"
#include "pinw/polygon.hpp"

namespace pinw {

/// "N M", then N lines "x y", then M lines "i j k" (0-based). Throws Parse
/// naming the line that failed.
TriangleMesh read_node_mesh(std::istream& in);
TriangleMesh read_node_mesh_file(const std::string& path);
/// Same format, coordinates with 17 significant digits.
void write_node_mesh(std::ostream& out, const TriangleMesh& mesh);

/// "N", then N lines "x y" listing the ring in either orientation.
Polygon read_polygon(std::istream& in);
Polygon read_polygon_file(const std::string& path);

void write_off(std::ostream& out, const TriangleMesh& mesh);

struct SvgOptions {
  double width = 800.0;
  double stroke_width = 1.0;
  /// Mesh node indices drawn as a highlighted polyline.
  std::vector<int> highlight;
  double highlight_width = 3.0;
};

/// Deterministic rendering: triangles in index order, then the highlight.
void write_svg(std::ostream& out, const TriangleMesh& mesh, const SvgOptions& opts = {});

}  // namespace pinw
