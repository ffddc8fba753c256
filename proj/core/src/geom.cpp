#include "pinw/geom.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>

#include "pinw/error.hpp"

namespace pinw {

namespace {

double longest_of(Point a, Point b, Point c) {
  return std::max({distance(b, c), distance(c, a), distance(a, b)});
}

std::string describe(Point a, Point b, Point c) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << a.x << "," << a.y << ") (" << b.x << "," << b.y << ") (" << c.x << "," << c.y << ")";
  return os.str();
}

}  // namespace

Point rotate(Point v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

bool Triangle::is_degenerate(Point a, Point b, Point c) {
  if (!is_finite(a) || !is_finite(b) || !is_finite(c)) return true;
  const double longest = longest_of(a, b, c);
  const double area = 0.5 * std::abs(signed_area2(a, b, c));
  return !(area >= kDegenerateRatio * longest * longest) || longest == 0.0;
}

Triangle::Triangle(Point a, Point b, Point c) {
  if (is_degenerate(a, b, c)) {
    throw Error(ErrorCode::Degenerate, "triangle " + describe(a, b, c));
  }
  if (signed_area2(a, b, c) > 0.0) {
    v_ = {a, b, c};
  } else {
    v_ = {a, c, b};
  }
}

double Triangle::area() const { return 0.5 * signed_area2(v_[0], v_[1], v_[2]); }

double Triangle::side(int i) const {
  return distance(v_[static_cast<std::size_t>((i + 1) % 3)], v_[static_cast<std::size_t>((i + 2) % 3)]);
}

double Triangle::longest_side() const { return longest_of(v_[0], v_[1], v_[2]); }

double angle_at(Point apex, Point p, Point q) {
  const Point u = p - apex;
  const Point w = q - apex;
  return std::atan2(std::abs(cross(u, w)), dot(u, w));
}

std::array<VertexAngle, 3> triangle_angles(const Triangle& t) {
  std::array<VertexAngle, 3> out{};
  for (int i = 0; i < 3; ++i) {
    out[static_cast<std::size_t>(i)] = {angle_at(t[i], t[(i + 1) % 3], t[(i + 2) % 3]), i};
  }
  return out;
}

double min_angle(const Triangle& t) {
  const auto angles = triangle_angles(t);
  return std::min({angles[0].angle, angles[1].angle, angles[2].angle});
}

double min_altitude(const Triangle& t) { return 2.0 * t.area() / t.longest_side(); }

double aspect_ratio(const Triangle& t) {
  const double l = t.longest_side();
  return l * l / t.area();
}

double altitude(const Triangle& t, int i) { return 2.0 * t.area() / t.side(i); }

Point in_center(const Triangle& t) {
  const double a = t.side(0);
  const double b = t.side(1);
  const double c = t.side(2);
  const double s = a + b + c;
  return {(a * t[0].x + b * t[1].x + c * t[2].x) / s, (a * t[0].y + b * t[1].y + c * t[2].y) / s};
}

double in_radius(const Triangle& t) {
  return 2.0 * t.area() / (t.side(0) + t.side(1) + t.side(2));
}

AffineMap2 affine_from_correspondence(const std::array<Point, 3>& from,
                                      const std::array<Point, 3>& to) {
  if (Triangle::is_degenerate(from[0], from[1], from[2])) {
    throw Error(ErrorCode::Degenerate, "affine source " + describe(from[0], from[1], from[2]));
  }
  if (Triangle::is_degenerate(to[0], to[1], to[2])) {
    throw Error(ErrorCode::CollapseToSegment, "affine image " + describe(to[0], to[1], to[2]));
  }
  // Solve L * [e1 e2] = [f1 f2] with e = from edges, f = to edges.
  const Point e1 = from[1] - from[0];
  const Point e2 = from[2] - from[0];
  const Point f1 = to[1] - to[0];
  const Point f2 = to[2] - to[0];
  const double det = cross(e1, e2);
  // inverse of [e1 e2] = 1/det * [ e2.y -e2.x ; -e1.y e1.x ]
  const double i00 = e2.y / det, i01 = -e2.x / det;
  const double i10 = -e1.y / det, i11 = e1.x / det;
  AffineMap2 m;
  m.linear = {f1.x * i00 + f2.x * i10, f1.x * i01 + f2.x * i11,
              f1.y * i00 + f2.y * i10, f1.y * i01 + f2.y * i11};
  const Point image = {m.linear[0] * from[0].x + m.linear[1] * from[0].y,
                       m.linear[2] * from[0].x + m.linear[3] * from[0].y};
  m.translation = to[0] - image;
  return m;
}

AffineMap2 vertex_move_affine(const Triangle& t, int moving_vertex, Point target) {
  if (moving_vertex < 0 || moving_vertex > 2) {
    throw Error(ErrorCode::InvalidArgument, "vertex index out of range");
  }
  std::array<Point, 3> to = t.vertices();
  to[static_cast<std::size_t>(moving_vertex)] = target;
  return affine_from_correspondence(t.vertices(), to);
}

SingularValues distortion_bounds(const AffineMap2& m) {
  // Closed form for 2x2: sigma = sqrt((s +- sqrt(s^2 - 4 det^2)) / 2), s = ||M||_F^2.
  const auto& l = m.linear;
  const double s = l[0] * l[0] + l[1] * l[1] + l[2] * l[2] + l[3] * l[3];
  const double det = std::abs(m.determinant());
  // (a+d)^2 + (c-b)^2 and (a-d)^2 + (b+c)^2 give sigma_max +- sigma_min exactly.
  const double sum = std::hypot(l[0] + l[3], l[2] - l[1]);
  const double diff = std::hypot(l[0] - l[3], l[1] + l[2]);
  const double smax = 0.5 * (sum + diff);
  double smin = 0.5 * std::abs(sum - diff);
  if (smax > 0.0 && s > 0.0) {
    // det = smin * smax is better conditioned for the small value.
    smin = det / smax;
  }
  return {smin, smax};
}

double point_segment_distance(Point p, Point a, Point b) {
  const Point d = b - a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
  return distance(p, a + t * d);
}

}  // namespace pinw
