#pragma once

#include <span>
#include <vector>

#include "pinw/geom.hpp"

namespace pinw {

/// Simple polygon stored as a counterclockwise ring (no repeated endpoint).
class Polygon {
 public:
  Polygon() = default;
  /// Accepts either orientation; throws InvalidArgument for fewer than three
  /// vertices or zero area.
  explicit Polygon(std::vector<Point> ring);

  const std::vector<Point>& ring() const { return ring_; }
  std::size_t size() const { return ring_.size(); }
  bool is_convex() const { return convex_; }
  double area() const;
  double diameter() const { return diameter_; }

  /// Inside or on the boundary, with boundary slack `tol` (absolute).
  bool contains(Point p, double tol = 0.0) const;
  /// True when the closed segment [p, q] lies in the closed polygon.
  bool segment_inside(Point p, Point q) const;

 private:
  std::vector<Point> ring_;
  bool convex_ = false;
  double diameter_ = 0.0;
};

/// Geodesic (shortest in-domain path) distances in a simple polygon.
///
/// Convex domains short-circuit to Euclidean distance. Otherwise shortest
/// paths bend only at polygon vertices, so the metric precomputes all-pairs
/// distances on the visibility graph of the ring.
class GeodesicMetric {
 public:
  explicit GeodesicMetric(Polygon domain);

  const Polygon& domain() const { return domain_; }

  /// Throws OutsideDomain when p or q is not in the polygon.
  double distance(Point p, Point q) const;

  /// Ring vertices visible from p (empty for convex domains).
  std::vector<int> visible_vertices(Point p) const;
  /// Geodesic distance from p to every ring vertex (empty for convex domains).
  std::vector<double> distances_to_vertices(Point p) const;
  /// distance(p, q) given the two precomputed helpers above; lets callers
  /// evaluating many pairs amortize the visibility work.
  double distance(Point p, std::span<const double> p_to_vertices, Point q,
                  std::span<const int> q_visible) const;

 private:
  Polygon domain_;
  std::vector<double> vertex_dist_;  // row-major n x n
  double boundary_tol_ = 0.0;
};

}  // namespace pinw
