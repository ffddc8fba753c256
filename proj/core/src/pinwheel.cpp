#include "pinw/pinwheel.hpp"

#include <algorithm>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "pinw/error.hpp"

namespace pinw {

namespace {

constexpr double kPi = std::numbers::pi;

// Ray from p leaving along pq turned by `angle` towards r, intersected with
// the line through l0 and l1. The hit is returned in the line's parameter
// form so it lies on that line up to one rounding.
Point ray_hit(Point p, Point q, Point r, double angle, Point l0, Point l1) {
  const Point pq = q - p;
  const double turn = cross(pq, r - p) > 0.0 ? angle : -angle;
  const Point dir = rotate((1.0 / norm(pq)) * pq, turn);
  const Point e = l1 - l0;
  const double denom = cross(e, dir);
  if (denom == 0.0) throw Error(ErrorCode::Degenerate, "pinwheel construction ray is parallel to its target edge");
  const double u = cross(p - l0, dir) / denom;
  return l0 + u * e;
}

void check_angles(const Corners& t, const AngleClass& cls) {
  const double measured[3] = {angle_at(t.a, t.b, t.c), angle_at(t.b, t.c, t.a), angle_at(t.c, t.a, t.b)};
  const double expected[3] = {cls.a, cls.b, cls.c};
  for (int i = 0; i < 3; ++i) {
    if (std::abs(measured[i] - expected[i]) > kAngleTolerance) {
      std::ostringstream os;
      os.precision(17);
      os << "tile angle " << "abc"[i] << " measures " << measured[i] << " but class says " << expected[i];
      throw Error(ErrorCode::InvalidArgument, os.str());
    }
  }
}

}  // namespace

std::array<double, 3> conjugate_angles(double a, double b, double c) {
  (void)b;
  if (!(a < c)) throw Error(ErrorCode::NeedsReorder, "conjugate requires a < c");
  return {a, c - a, kPi - c};
}

AngleClass AngleClass::conjugate() const {
  const auto t = conjugate_angles(a, b, c);
  return {kind == AngleKind::RootSimilar ? AngleKind::Conjugate : AngleKind::RootSimilar, t[0], t[1], t[2]};
}

SubdivisionResult pinwheel_split(const Corners& t, const AngleClass& cls) {
  if (!(cls.a < cls.c)) throw Error(ErrorCode::NeedsReorder, "pinwheel split requires a < c");
  check_angles(t, cls);

  SubdivisionResult out{};
  auto& p = out.points;
  p[kA] = t.a;
  p[kB] = t.b;
  p[kC] = t.c;
  p[kF] = ray_hit(t.c, t.b, t.a, cls.a, t.a, t.b);
  p[kD] = ray_hit(p[kF], t.c, t.a, cls.b, t.a, t.c);
  p[kE] = ray_hit(p[kD], t.a, p[kF], cls.b, t.a, t.b);
  p[kG] = ray_hit(p[kD], t.c, p[kF], cls.a, t.c, p[kF]);

  const AngleClass conj = cls.conjugate();
  for (std::size_t i = 0; i < 5; ++i) {
    const auto& s = kChildSlots[i];
    const auto role = static_cast<ChildRole>(i);
    const Corners corners{p[s[0]], p[s[1]], p[s[2]]};
    if (Triangle::is_degenerate(corners.a, corners.b, corners.c)) {
      throw Error(ErrorCode::Degenerate, "pinwheel child " + std::to_string(i + 1) + " is degenerate");
    }
    out.children[i] = {role, corners, child_is_conjugate(role) ? conj : cls};
  }
  return out;
}

std::array<Triangle, 3> tripartition(const Triangle& t) { return tripartition(t, in_center(t)); }

std::array<Triangle, 3> tripartition(const Triangle& t, Point center) {
  return {Triangle(t[0], t[1], center), Triangle(t[1], t[2], center), Triangle(t[2], t[0], center)};
}

std::optional<RationalMultiple> rational_angle_guard(double angle, int max_denominator, double tol) {
  std::optional<RationalMultiple> best;
  double best_gap = tol;
  for (int n = 2; n <= max_denominator; ++n) {
    for (int m = 1; m < n; ++m) {
      if (std::gcd(m, n) != 1) continue;
      const double gap = std::abs(angle - kPi * m / n);
      if (gap < best_gap) {
        best_gap = gap;
        best = RationalMultiple{m, n};
      }
    }
  }
  return best;
}

Point perturbed_in_center(const Triangle& t, std::uint64_t seed, std::uint64_t draw, double fraction) {
  std::mt19937_64 gen(seed);
  gen.discard(draw);
  // Explicit 53-bit conversion keeps the direction identical across standard libraries.
  const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
  const double theta = 2.0 * kPi * u;
  const double r = fraction * in_radius(t);
  const Point c = in_center(t);
  return {c.x + r * std::cos(theta), c.y + r * std::sin(theta)};
}

std::pair<Corners, AngleClass> sorted_root_roles(const Triangle& t) {
  auto angles = triangle_angles(t);
  std::stable_sort(angles.begin(), angles.end(),
                   [](const VertexAngle& x, const VertexAngle& y) { return x.angle < y.angle; });
  Corners corners{t[angles[0].vertex], t[angles[1].vertex], t[angles[2].vertex]};
  AngleClass cls{AngleKind::RootSimilar, angles[0].angle, angles[1].angle, angles[2].angle};
  return {corners, cls};
}

}  // namespace pinw
