#include "pinw/mesh.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

#include "pinw/error.hpp"
#include "pinw/predicates.hpp"
#include "spatial_grid.hpp"

namespace pinw {

namespace {

struct EdgeUse {
  int count = 0;
  int forward = 0;  // uses as (min -> max)
  int triangle = -1;
};

std::uint64_t edge_key(int u, int v) {
  const auto lo = static_cast<std::uint32_t>(std::min(u, v));
  const auto hi = static_cast<std::uint32_t>(std::max(u, v));
  return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

std::string edge_name(const TriangleMesh& m, std::uint64_t key) {
  const int u = static_cast<int>(key >> 32);
  const int v = static_cast<int>(key & 0xffffffffu);
  std::ostringstream os;
  os.precision(17);
  const Point a = m.nodes[static_cast<std::size_t>(u)];
  const Point b = m.nodes[static_cast<std::size_t>(v)];
  os << "edge " << u << "-" << v << " (" << a.x << "," << a.y << ")-(" << b.x << "," << b.y << ")";
  return os.str();
}

std::unordered_map<std::uint64_t, EdgeUse> edge_uses(const TriangleMesh& mesh) {
  std::unordered_map<std::uint64_t, EdgeUse> uses;
  uses.reserve(mesh.triangles.size() * 2);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      const int u = tri[static_cast<std::size_t>(k)];
      const int v = tri[static_cast<std::size_t>((k + 1) % 3)];
      auto& use = uses[edge_key(u, v)];
      ++use.count;
      if (u < v) ++use.forward;
      use.triangle = static_cast<int>(t);
    }
  }
  return uses;
}

}  // namespace

double TriangleMesh::diameter() const {
  if (nodes.empty()) return 0.0;
  Point lo = nodes.front(), hi = nodes.front();
  for (const Point& p : nodes) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
  return distance(lo, hi);
}

ConformityReport check_conformity(const TriangleMesh& mesh) {
  ConformityReport report;
  const auto fail = [&](std::string msg) {
    if (report.ok) report.message = std::move(msg);
    report.ok = false;
  };
  const int n = static_cast<int>(mesh.nodes.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int v : tri) {
      if (v < 0 || v >= n) {
        fail("triangle " + std::to_string(t) + " references node " + std::to_string(v));
        return report;
      }
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
      fail("triangle " + std::to_string(t) + " repeats a node");
      return report;
    }
    const auto& p = mesh.nodes;
    if (orient2d(p[static_cast<std::size_t>(tri[0])], p[static_cast<std::size_t>(tri[1])],
                 p[static_cast<std::size_t>(tri[2])]) <= 0) {
      ++report.negatively_oriented;
      fail("triangle " + std::to_string(t) + " is not positively oriented");
    }
  }

  const auto uses = edge_uses(mesh);
  std::vector<std::uint64_t> boundary;
  for (const auto& [key, use] : uses) {
    if (use.count == 1) {
      ++report.boundary_edges;
      boundary.push_back(key);
    } else if (use.count == 2 && use.forward == 1) {
      ++report.interior_edges;
    } else {
      fail(edge_name(mesh, key) + " has " + std::to_string(use.count) + " incident triangles" +
           (use.count == 2 ? " with equal orientation" : ""));
    }
  }

  // A node strictly inside a boundary edge is a hanging node.
  std::sort(boundary.begin(), boundary.end());
  const double diam = mesh.diameter();
  if (!boundary.empty() && diam > 0.0) {
    double mean_len = 0.0;
    for (auto key : boundary) {
      mean_len += distance(mesh.nodes[key >> 32], mesh.nodes[key & 0xffffffffu]);
    }
    mean_len /= static_cast<double>(boundary.size());
    const detail::SpatialGrid grid(mesh.nodes, std::max(mean_len, 1e-9 * diam));
    const double tol = 1e-10 * diam;
    for (auto key : boundary) {
      const auto u = static_cast<int>(key >> 32);
      const auto v = static_cast<int>(key & 0xffffffffu);
      const Point a = mesh.nodes[static_cast<std::size_t>(u)];
      const Point b = mesh.nodes[static_cast<std::size_t>(v)];
      const Point lo{std::min(a.x, b.x) - tol, std::min(a.y, b.y) - tol};
      const Point hi{std::max(a.x, b.x) + tol, std::max(a.y, b.y) + tol};
      bool hanging = false;
      grid.for_each_in_box(lo, hi, [&](int w) {
        if (hanging || w == u || w == v) return;
        const Point p = mesh.nodes[static_cast<std::size_t>(w)];
        if (point_segment_distance(p, a, b) <= tol && distance(p, a) > tol && distance(p, b) > tol) {
          hanging = true;
        }
      });
      if (hanging) fail("hanging node on " + edge_name(mesh, key));
    }
  }
  return report;
}

void validate_coarse_mesh(TriangleMesh& mesh) {
  if (mesh.triangles.empty()) throw Error(ErrorCode::InvalidArgument, "coarse mesh has no triangles");
  const int n = static_cast<int>(mesh.nodes.size());
  for (const Point& p : mesh.nodes) {
    if (!is_finite(p)) throw Error(ErrorCode::InvalidArgument, "coarse mesh has a non-finite coordinate");
  }
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    auto& tri = mesh.triangles[t];
    for (int v : tri) {
      if (v < 0 || v >= n) {
        throw Error(ErrorCode::InvalidArgument,
                    "triangle " + std::to_string(t) + " references missing node " + std::to_string(v));
      }
    }
    const Point a = mesh.nodes[static_cast<std::size_t>(tri[0])];
    const Point b = mesh.nodes[static_cast<std::size_t>(tri[1])];
    const Point c = mesh.nodes[static_cast<std::size_t>(tri[2])];
    if (Triangle::is_degenerate(a, b, c)) {
      throw Error(ErrorCode::Degenerate, "coarse triangle " + std::to_string(t));
    }
    if (orient2d(a, b, c) < 0) std::swap(tri[1], tri[2]);
  }
  const auto report = check_conformity(mesh);
  if (!report.ok) throw Error(ErrorCode::NonConforming, report.message);
}

Polygon boundary_polygon(const TriangleMesh& mesh) {
  const auto uses = edge_uses(mesh);
  std::map<int, int> next;
  std::size_t boundary_count = 0;
  for (const auto& tri : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      const int u = tri[static_cast<std::size_t>(k)];
      const int v = tri[static_cast<std::size_t>((k + 1) % 3)];
      if (uses.at(edge_key(u, v)).count != 1) continue;
      ++boundary_count;
      if (!next.emplace(u, v).second) {
        throw Error(ErrorCode::InvalidArgument, "boundary is not a simple loop at node " + std::to_string(u));
      }
    }
  }
  if (next.empty()) throw Error(ErrorCode::InvalidArgument, "mesh has no boundary");
  std::vector<Point> ring;
  const int start = next.begin()->first;
  int cur = start;
  do {
    ring.push_back(mesh.nodes[static_cast<std::size_t>(cur)]);
    const auto it = next.find(cur);
    if (it == next.end()) throw Error(ErrorCode::InvalidArgument, "open boundary chain");
    cur = it->second;
  } while (cur != start && ring.size() <= boundary_count);
  if (ring.size() != boundary_count) {
    throw Error(ErrorCode::InvalidArgument, "domain boundary has more than one loop (holes are not supported)");
  }
  // Drop collinear ring vertices so reflex tests see true corners only.
  std::vector<Point> corners;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Point prev = ring[(i + ring.size() - 1) % ring.size()];
    const Point next_p = ring[(i + 1) % ring.size()];
    if (orient2d(prev, ring[i], next_p) != 0) corners.push_back(ring[i]);
  }
  return Polygon(std::move(corners));
}

TriangleMesh triangulate_polygon(const Polygon& polygon) {
  TriangleMesh mesh;
  mesh.nodes = polygon.ring();
  const auto& p = mesh.nodes;
  std::vector<int> ring(p.size());
  for (std::size_t i = 0; i < ring.size(); ++i) ring[i] = static_cast<int>(i);

  const auto pt = [&](int i) { return p[static_cast<std::size_t>(i)]; };
  while (ring.size() > 3) {
    bool clipped = false;
    for (std::size_t i = 0; i < ring.size() && !clipped; ++i) {
      const int a = ring[(i + ring.size() - 1) % ring.size()];
      const int b = ring[i];
      const int c = ring[(i + 1) % ring.size()];
      if (orient2d(pt(a), pt(b), pt(c)) <= 0) continue;
      bool blocked = false;
      for (int w : ring) {
        if (w == a || w == b || w == c) continue;
        if (orient2d(pt(a), pt(b), pt(w)) >= 0 && orient2d(pt(b), pt(c), pt(w)) >= 0 &&
            orient2d(pt(c), pt(a), pt(w)) >= 0) {
          blocked = true;
          break;
        }
      }
      if (blocked) continue;
      mesh.triangles.push_back({a, b, c});
      ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(i));
      clipped = true;
    }
    if (!clipped) throw Error(ErrorCode::InvalidArgument, "polygon is not simple (no ear found)");
  }
  mesh.triangles.push_back({ring[0], ring[1], ring[2]});

  // Lawson flips towards the constrained Delaunay triangulation.
  for (bool flipped = true; flipped;) {
    flipped = false;
    std::unordered_map<std::uint64_t, std::vector<std::pair<int, int>>> owners;  // edge -> (tri, k)
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
      for (int k = 0; k < 3; ++k) {
        const auto& tri = mesh.triangles[t];
        owners[edge_key(tri[static_cast<std::size_t>(k)], tri[static_cast<std::size_t>((k + 1) % 3)])]
            .emplace_back(static_cast<int>(t), k);
      }
    }
    std::vector<std::uint64_t> keys;
    for (const auto& [key, list] : owners) {
      if (list.size() == 2) keys.push_back(key);
    }
    std::sort(keys.begin(), keys.end());
    for (auto key : keys) {
      const auto& list = owners[key];
      auto& t1 = mesh.triangles[static_cast<std::size_t>(list[0].first)];
      auto& t2 = mesh.triangles[static_cast<std::size_t>(list[1].first)];
      const int k1 = list[0].second;
      const int k2 = list[1].second;
      const int u = t1[static_cast<std::size_t>(k1)];
      const int v = t1[static_cast<std::size_t>((k1 + 1) % 3)];
      const int w = t1[static_cast<std::size_t>((k1 + 2) % 3)];
      const int x = t2[static_cast<std::size_t>((k2 + 2) % 3)];
      if (t2[static_cast<std::size_t>(k2)] != v || t2[static_cast<std::size_t>((k2 + 1) % 3)] != u) continue;
      if (in_circle(pt(u), pt(v), pt(w), pt(x)) <= 0) continue;
      if (orient2d(pt(u), pt(x), pt(w)) <= 0 || orient2d(pt(x), pt(v), pt(w)) <= 0) continue;
      t1 = {u, x, w};
      t2 = {x, v, w};
      flipped = true;
      break;  // edge table is stale after a flip
    }
  }
  return mesh;
}

}  // namespace pinw
