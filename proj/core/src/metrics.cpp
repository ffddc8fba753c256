#include "pinw/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>
#include <thread>

#include "pinw/error.hpp"
#include "spatial_grid.hpp"

namespace pinw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Best {
  double ratio = -1.0;
  int p = -1;
  int q = -1;
  std::size_t pairs = 0;

  void offer(double r, int a, int b) {
    if (r > ratio || (r == ratio && std::make_pair(a, b) < std::make_pair(p, q))) {
      ratio = r;
      p = a;
      q = b;
    }
  }
};

}  // namespace

SkeletonGraph::SkeletonGraph(std::vector<Point> vertices, std::vector<std::pair<int, int>> edges)
    : vertices_(std::move(vertices)) {
  for (auto& e : edges) {
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  std::vector<std::size_t> degree(vertices_.size() + 1, 0);
  for (const auto& [u, v] : edges) {
    if (u == v) continue;
    const double len = distance(vertices_[static_cast<std::size_t>(u)], vertices_[static_cast<std::size_t>(v)]);
    edges_.push_back({u, v, len});
    ++degree[static_cast<std::size_t>(u)];
    ++degree[static_cast<std::size_t>(v)];
  }
  offsets_.assign(vertices_.size() + 1, 0);
  for (std::size_t i = 0; i < vertices_.size(); ++i) offsets_[i + 1] = offsets_[i] + degree[i];
  arcs_.resize(offsets_.back());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : edges_) {
    arcs_[fill[static_cast<std::size_t>(e.u)]++] = {e.v, e.length};
    arcs_[fill[static_cast<std::size_t>(e.v)]++] = {e.u, e.length};
  }
}

SkeletonGraph build_skeleton(const TriangleMesh& mesh) {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(mesh.triangles.size() * 3);
  for (const auto& t : mesh.triangles) {
    for (std::size_t k = 0; k < 3; ++k) edges.emplace_back(t[k], t[(k + 1) % 3]);
  }
  return SkeletonGraph(mesh.nodes, std::move(edges));
}

SkeletonGraph build_skeleton(const Forest& forest) {
  const auto& pos = forest.vertices();
  const double diam = std::max(forest.diameter(), 1e-300);
  const double tol = 1e-12 * diam;

  // Merge coincident vertices, first id wins.
  std::vector<int> node_of(pos.size(), -1);
  std::vector<Point> nodes;
  {
    const detail::SpatialGrid grid(pos, std::max(tol, 1e-9 * diam));
    for (std::size_t i = 0; i < pos.size(); ++i) {
      int node = -1;
      const Point p = pos[i];
      grid.for_each_in_box({p.x - tol, p.y - tol}, {p.x + tol, p.y + tol}, [&](int j) {
        if (static_cast<std::size_t>(j) >= i) return;
        const int other = node_of[static_cast<std::size_t>(j)];
        if (node < 0 || other < node) node = other;
      });
      if (node < 0) {
        node = static_cast<int>(nodes.size());
        nodes.push_back(p);
      }
      node_of[i] = node;
    }
  }

  const auto leaves = forest.leaves();
  double mean_len = 0.0;
  for (TileId id : leaves) mean_len += forest.triangle(id).longest_side();
  mean_len /= static_cast<double>(std::max<std::size_t>(1, leaves.size()));
  const detail::SpatialGrid grid(nodes, std::max(mean_len, 1e-9 * diam));

  std::vector<std::pair<int, int>> edges;
  std::vector<std::pair<double, int>> on_edge;
  for (TileId id : leaves) {
    const Tile& t = forest.tile(id);
    for (std::size_t k = 0; k < 3; ++k) {
      const int u = node_of[static_cast<std::size_t>(t.corners[k])];
      const int v = node_of[static_cast<std::size_t>(t.corners[(k + 1) % 3])];
      const Point a = nodes[static_cast<std::size_t>(u)];
      const Point b = nodes[static_cast<std::size_t>(v)];
      const Point d = b - a;
      const double len2 = dot(d, d);
      const double line_tol = 1e-9 * std::sqrt(len2);
      on_edge.clear();
      on_edge.emplace_back(0.0, u);
      on_edge.emplace_back(1.0, v);
      grid.for_each_in_box({std::min(a.x, b.x) - line_tol, std::min(a.y, b.y) - line_tol},
                           {std::max(a.x, b.x) + line_tol, std::max(a.y, b.y) + line_tol}, [&](int w) {
                             if (w == u || w == v) return;
                             const Point p = nodes[static_cast<std::size_t>(w)];
                             const double s = dot(p - a, d) / len2;
                             if (s <= 0.0 || s >= 1.0) return;
                             if (std::abs(cross(d, p - a)) / std::sqrt(len2) > line_tol) return;
                             on_edge.emplace_back(s, w);
                           });
      std::sort(on_edge.begin(), on_edge.end());
      for (std::size_t i = 0; i + 1 < on_edge.size(); ++i) edges.emplace_back(on_edge[i].second, on_edge[i + 1].second);
    }
  }
  return SkeletonGraph(std::move(nodes), std::move(edges));
}

ShortestPathTree shortest_paths(const SkeletonGraph& g, int source) {
  ShortestPathTree tree;
  tree.dist.assign(g.vertex_count(), kInf);
  tree.pred.assign(g.vertex_count(), -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  tree.dist[static_cast<std::size_t>(source)] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > tree.dist[static_cast<std::size_t>(u)]) continue;
    for (const auto& arc : g.neighbors(u)) {
      const double nd = d + arc.length;
      auto& cur = tree.dist[static_cast<std::size_t>(arc.to)];
      if (nd < cur) {
        cur = nd;
        tree.pred[static_cast<std::size_t>(arc.to)] = u;
        heap.emplace(nd, arc.to);
      }
    }
  }
  return tree;
}

std::vector<int> extract_path(const ShortestPathTree& tree, int source, int target) {
  std::vector<int> path;
  if (tree.dist[static_cast<std::size_t>(target)] == kInf) return path;
  for (int v = target; v != -1; v = tree.pred[static_cast<std::size_t>(v)]) {
    path.push_back(v);
    if (v == source) break;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

DeviationReport deviation_ratio(const SkeletonGraph& g, double l, const GeodesicMetric& domain,
                                const DeviationOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<int> set = opts.subset;
  if (set.empty()) {
    set.resize(g.vertex_count());
    for (std::size_t i = 0; i < set.size(); ++i) set[i] = static_cast<int>(i);
  } else {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
  }
  const auto& pts = g.vertices();
  const double cutoff = l * (1.0 - 1e-12);
  const bool convex = domain.domain().is_convex();

  std::vector<std::vector<int>> visible;
  if (!convex) {
    visible.reserve(set.size());
    for (int v : set) visible.push_back(domain.visible_vertices(pts[static_cast<std::size_t>(v)]));
  }

  const auto scan = [&](std::size_t begin, std::size_t end, std::size_t stride, Best& best) {
    for (std::size_t i = begin; i < end; i += stride) {
      const int p = set[i];
      const Point pp = pts[static_cast<std::size_t>(p)];
      const auto tree = shortest_paths(g, p);
      std::vector<double> to_vertices;
      if (!convex) to_vertices = domain.distances_to_vertices(pp);
      for (std::size_t j = i + 1; j < set.size(); ++j) {
        const int q = set[j];
        const Point qq = pts[static_cast<std::size_t>(q)];
        if (distance(pp, qq) < cutoff) continue;
        const double geo = convex ? distance(pp, qq) : domain.distance(pp, to_vertices, qq, visible[j]);
        ++best.pairs;
        best.offer(tree.dist[static_cast<std::size_t>(q)] / geo, p, q);
      }
    }
  };

  const std::size_t nthreads = static_cast<std::size_t>(std::max(1, opts.threads));
  Best best;
  if (nthreads == 1) {
    scan(0, set.size(), 1, best);
  } else {
    std::vector<Best> partial(nthreads);
    std::vector<std::exception_ptr> errors(nthreads);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nthreads; ++t) {
      pool.emplace_back([&, t] {
        try {
          scan(t, set.size(), nthreads, partial[t]);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    for (const auto& b : partial) {
      best.pairs += b.pairs;
      if (b.p >= 0) best.offer(b.ratio, b.p, b.q);
    }
  }
  if (best.p < 0) {
    std::ostringstream os;
    os << "no vertex pair is at least l = " << l << " apart";
    throw Error(ErrorCode::LTooLarge, os.str());
  }

  DeviationReport rep;
  rep.ratio = best.ratio;
  rep.p = best.p;
  rep.q = best.q;
  rep.l = l;
  rep.pairs = best.pairs;
  const auto tree = shortest_paths(g, best.p);
  rep.path = extract_path(tree, best.p, best.q);
  rep.path_length = tree.dist[static_cast<std::size_t>(best.q)];
  rep.geodesic = rep.path_length / rep.ratio;
  rep.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

TriangleMesh grid_mesh(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "grid size must be at least 1");
  TriangleMesh m;
  const double h = 1.0 / n;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) m.nodes.push_back({i * h, j * h});
  }
  const auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return m;
}

TriangleMesh cross_triangle_mesh(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "grid size must be at least 1");
  TriangleMesh m;
  const double h = 1.0 / n;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) m.nodes.push_back({i * h, j * h});
  }
  const auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int c = static_cast<int>(m.nodes.size());
      m.nodes.push_back({(i + 0.5) * h, (j + 0.5) * h});
      m.triangles.push_back({id(i, j), id(i + 1, j), c});
      m.triangles.push_back({id(i + 1, j), id(i + 1, j + 1), c});
      m.triangles.push_back({id(i + 1, j + 1), id(i, j + 1), c});
      m.triangles.push_back({id(i, j + 1), id(i, j), c});
    }
  }
  return m;
}

QualityReport quality_report(const TriangleMesh& mesh) {
  QualityReport r;
  r.triangles = mesh.triangles.size();
  if (mesh.triangles.empty()) return r;
  r.min_angle = kInf;
  r.min_min_altitude = kInf;
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    const Triangle t = mesh.triangle(i);
    const double a = min_angle(t);
    r.min_angle = std::min(r.min_angle, a);
    r.max_aspect = std::max(r.max_aspect, aspect_ratio(t));
    const double h = min_altitude(t);
    r.min_min_altitude = std::min(r.min_min_altitude, h);
    r.max_min_altitude = std::max(r.max_min_altitude, h);
    const double deg = a * 180.0 / std::numbers::pi;
    const auto bin = std::min<std::size_t>(11, static_cast<std::size_t>(deg / 5.0));
    ++r.min_angle_histogram[bin];
  }
  return r;
}

std::pair<double, double> product_bound(double s, double t, int k) {
  if (!(s > 0.0 && s < 1.0) || !(t > 0.0 && t < 1.0) || k < 1) {
    throw Error(ErrorCode::InvalidArgument, "product bound needs 0 < s < 1, 0 < t < 1, k >= 1");
  }
  const double x = k * s / (1.0 - t);
  return {1.0 - x, std::exp(x)};
}

std::pair<double, double> truncated_products(double s, double t, int k, int factors) {
  double lo = 1.0, hi = 1.0, ti = 1.0;
  for (int i = 0; i < factors; ++i) {
    lo *= std::pow(1.0 - s * ti, k);
    hi *= std::pow(1.0 + s * ti, k);
    ti *= t;
  }
  return {lo, hi};
}

}  // namespace pinw
