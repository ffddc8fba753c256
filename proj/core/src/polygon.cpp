#include "pinw/polygon.hpp"

#include <algorithm>
#include <limits>

#include "pinw/error.hpp"

namespace pinw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Sign of the turn a->b->x, treating |distance of x from line ab| <= tol as 0.
int side_with_tol(Point a, Point b, Point x, double tol) {
  const Point d = b - a;
  const double len = norm(d);
  if (len == 0.0) return 0;
  const double dist = cross(d, x - a) / len;
  if (dist > tol) return 1;
  if (dist < -tol) return -1;
  return 0;
}

}  // namespace

Polygon::Polygon(std::vector<Point> ring) : ring_(std::move(ring)) {
  if (ring_.size() < 3) throw Error(ErrorCode::InvalidArgument, "polygon needs at least 3 vertices");
  double a2 = 0.0;
  for (std::size_t i = 0; i < ring_.size(); ++i) {
    a2 += cross(ring_[i], ring_[(i + 1) % ring_.size()]);
  }
  if (!(std::abs(a2) > 0.0)) throw Error(ErrorCode::InvalidArgument, "polygon has zero area");
  if (a2 < 0.0) std::reverse(ring_.begin(), ring_.end());

  for (std::size_t i = 0; i < ring_.size(); ++i) {
    for (std::size_t j = i + 1; j < ring_.size(); ++j) {
      diameter_ = std::max(diameter_, distance(ring_[i], ring_[j]));
    }
  }
  convex_ = true;
  const std::size_t n = ring_.size();
  for (std::size_t i = 0; i < n && convex_; ++i) {
    if (signed_area2(ring_[i], ring_[(i + 1) % n], ring_[(i + 2) % n]) < 0.0) convex_ = false;
  }
}

double Polygon::area() const {
  double a2 = 0.0;
  for (std::size_t i = 0; i < ring_.size(); ++i) a2 += cross(ring_[i], ring_[(i + 1) % ring_.size()]);
  return 0.5 * a2;
}

bool Polygon::contains(Point p, double tol) const {
  const std::size_t n = ring_.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point a = ring_[j];
    const Point b = ring_[i];
    if (point_segment_distance(p, a, b) <= tol) return true;
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

bool Polygon::segment_inside(Point p, Point q) const {
  const double tol = 1e-9 * diameter_;
  if (!contains(p, tol) || !contains(q, tol)) return false;
  if (convex_) return true;
  const std::size_t n = ring_.size();
  std::vector<double> cuts{0.0, 1.0};
  const Point d = q - p;
  const double len2 = dot(d, d);
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = ring_[i];
    const Point b = ring_[(i + 1) % n];
    const int s1 = side_with_tol(a, b, p, tol);
    const int s2 = side_with_tol(a, b, q, tol);
    const int s3 = side_with_tol(p, q, a, tol);
    const int s4 = side_with_tol(p, q, b, tol);
    if (s1 * s2 < 0 && s3 * s4 < 0) return false;  // proper crossing
    if (len2 > 0.0 && s3 == 0) {
      const double t = dot(a - p, d) / len2;
      if (t > 0.0 && t < 1.0) cuts.push_back(t);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    if (!contains(p + mid * d, tol)) return false;
  }
  return true;
}

GeodesicMetric::GeodesicMetric(Polygon domain) : domain_(std::move(domain)) {
  boundary_tol_ = 1e-9 * domain_.diameter();
  if (domain_.is_convex()) return;
  const auto& ring = domain_.ring();
  const std::size_t n = ring.size();
  vertex_dist_.assign(n * n, kInf);
  for (std::size_t i = 0; i < n; ++i) {
    vertex_dist_[i * n + i] = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (domain_.segment_inside(ring[i], ring[j])) {
        vertex_dist_[i * n + j] = vertex_dist_[j * n + i] = pinw::distance(ring[i], ring[j]);
      }
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double via = vertex_dist_[i * n + k] + vertex_dist_[k * n + j];
        if (via < vertex_dist_[i * n + j]) vertex_dist_[i * n + j] = via;
      }
    }
  }
}

std::vector<int> GeodesicMetric::visible_vertices(Point p) const {
  std::vector<int> out;
  if (domain_.is_convex()) return out;
  const auto& ring = domain_.ring();
  for (std::size_t i = 0; i < ring.size(); ++i) {
    if (domain_.segment_inside(p, ring[i])) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<double> GeodesicMetric::distances_to_vertices(Point p) const {
  if (domain_.is_convex()) return {};
  const auto& ring = domain_.ring();
  const std::size_t n = ring.size();
  std::vector<double> out(n, kInf);
  for (int u : visible_vertices(p)) {
    const double pu = pinw::distance(p, ring[static_cast<std::size_t>(u)]);
    for (std::size_t w = 0; w < n; ++w) {
      out[w] = std::min(out[w], pu + vertex_dist_[static_cast<std::size_t>(u) * n + w]);
    }
  }
  return out;
}

double GeodesicMetric::distance(Point p, std::span<const double> p_to_vertices, Point q,
                                std::span<const int> q_visible) const {
  if (domain_.is_convex() || domain_.segment_inside(p, q)) return pinw::distance(p, q);
  const auto& ring = domain_.ring();
  double best = kInf;
  for (int w : q_visible) {
    best = std::min(best, p_to_vertices[static_cast<std::size_t>(w)] +
                              pinw::distance(ring[static_cast<std::size_t>(w)], q));
  }
  return best;
}

double GeodesicMetric::distance(Point p, Point q) const {
  if (!domain_.contains(p, boundary_tol_) || !domain_.contains(q, boundary_tol_)) {
    throw Error(ErrorCode::OutsideDomain, "geodesic endpoint outside the domain");
  }
  if (p == q) return 0.0;
  if (domain_.is_convex()) return pinw::distance(p, q);
  const auto to_vertices = distances_to_vertices(p);
  const auto visible = visible_vertices(q);
  return distance(p, to_vertices, q, visible);
}

}  // namespace pinw
