#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "pinw/geom.hpp"
#include "pinw/pinwheel.hpp"

namespace pinw::test {

inline constexpr double kPi = std::numbers::pi;

/// A at the origin, B at (1, 0), angle a at A and b at B.
inline Corners corners_from_angles(double a, double b) {
  const double c = kPi - a - b;
  const double ac = std::sin(b) / std::sin(c);
  return {{0.0, 0.0}, {1.0, 0.0}, {ac * std::cos(a), ac * std::sin(a)}};
}

inline AngleClass class_of(double a, double b) { return {AngleKind::RootSimilar, a, b, kPi - a - b}; }

/// Random triangle whose smallest angle is at least `floor_angle`.
inline Triangle random_triangle(std::mt19937_64& rng, double floor_angle = 0.15) {
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (;;) {
    const Point a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)};
    if (Triangle::is_degenerate(a, b, c)) continue;
    const Triangle t(a, b, c);
    if (min_angle(t) >= floor_angle) return t;
  }
}

/// Random admissible root angle triple (a <= b <= c, c - a >= 0.4), returned as (a, b).
inline std::pair<double, double> random_root_angles(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, kPi);
  for (;;) {
    double x[3] = {u(rng), u(rng), u(rng)};
    const double s = x[0] + x[1] + x[2];
    for (double& v : x) v *= kPi / s;
    std::sort(x, x + 3);
    if (x[0] < 0.1 || x[2] - x[0] < 0.4 || x[2] > kPi - 0.1) continue;
    return {x[0], x[1]};
  }
}

}  // namespace pinw::test
