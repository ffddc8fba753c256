#pragma once

#include <array>
#include <cmath>

namespace pinw {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend constexpr Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Point a, Point b) = default;
};

constexpr double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }
inline bool is_finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// Rotates `v` counterclockwise by `angle` radians.
Point rotate(Point v, double angle);

/// Twice the signed area of (a, b, c); positive when counterclockwise.
inline double signed_area2(Point a, Point b, Point c) { return cross(b - a, c - a); }

/// A nondegenerate triangle, stored counterclockwise.
///
/// Construction reorders clockwise input and throws Error(Degenerate) when
/// area < 1e-14 * (longest side)^2 or a coordinate is not finite.
class Triangle {
 public:
  Triangle(Point a, Point b, Point c);

  const Point& operator[](int i) const { return v_[static_cast<std::size_t>(i)]; }
  const std::array<Point, 3>& vertices() const { return v_; }

  double area() const;
  /// Length of the edge opposite vertex i.
  double side(int i) const;
  double longest_side() const;

  /// Relative degeneracy threshold used by the constructor.
  static constexpr double kDegenerateRatio = 1e-14;
  static bool is_degenerate(Point a, Point b, Point c);

 private:
  std::array<Point, 3> v_;
};

struct VertexAngle {
  double angle;  // radians
  int vertex;    // index into the triangle
};

/// Interior angles, one per vertex in vertex order.
std::array<VertexAngle, 3> triangle_angles(const Triangle& t);
/// Interior angle at `apex` of the (not necessarily stored) triangle apex,p,q.
double angle_at(Point apex, Point p, Point q);
double min_angle(const Triangle& t);

/// 2 * area / longest side.
double min_altitude(const Triangle& t);
/// (longest side)^2 / area.
double aspect_ratio(const Triangle& t);
/// Distance from vertex i to the line through the other two.
double altitude(const Triangle& t, int i);
Point in_center(const Triangle& t);
double in_radius(const Triangle& t);

/// x -> linear * x + translation, with linear stored row-major.
struct AffineMap2 {
  std::array<double, 4> linear{1.0, 0.0, 0.0, 1.0};
  Point translation{};

  static AffineMap2 identity() { return {}; }
  Point operator()(Point p) const {
    return {linear[0] * p.x + linear[1] * p.y + translation.x,
            linear[2] * p.x + linear[3] * p.y + translation.y};
  }
  double determinant() const { return linear[0] * linear[3] - linear[1] * linear[2]; }
};

/// Unique affine map with from[i] -> to[i]. Throws Degenerate when `from` is
/// degenerate and CollapseToSegment when `to` is.
AffineMap2 affine_from_correspondence(const std::array<Point, 3>& from,
                                      const std::array<Point, 3>& to);

/// Map fixing the two other vertices of t and sending vertex `moving_vertex`
/// to `target`.
AffineMap2 vertex_move_affine(const Triangle& t, int moving_vertex, Point target);

struct SingularValues {
  double min;
  double max;
};

/// Singular values of the linear part; they bound the length ratio of any
/// segment under the map.
SingularValues distortion_bounds(const AffineMap2& m);

/// Distance from p to segment [a, b].
double point_segment_distance(Point p, Point a, Point b);

}  // namespace pinw
