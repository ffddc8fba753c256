#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "pinw/geom.hpp"

namespace pinw {

enum class AngleKind : std::uint8_t { RootSimilar, Conjugate };

/// Angle-role assignment (a, b, c) of a tile: a is the angle at role vertex A,
/// and so on. Conjugate classes store (a', c'-a', pi-c') of their root.
struct AngleClass {
  AngleKind kind = AngleKind::RootSimilar;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  AngleClass conjugate() const;
};

/// (a, b, c) -> (a, c - a, pi - c). An involution on triples with a < c.
/// Throws NeedsReorder when a >= c.
std::array<double, 3> conjugate_angles(double a, double b, double c);

/// Triangle corners labelled by angle role.
struct Corners {
  Point a;
  Point b;
  Point c;

  Point operator[](int i) const { return i == 0 ? a : (i == 1 ? b : c); }
};

/// Points of one generalized pinwheel split: the parent's corners followed by
/// the four new vertices. F lies on AB with angle FCB = a, D on AC with angle
/// DFC = b, E on AB with angle ADE = b, and G on CF with angle GDC = a.
enum Slot : std::uint8_t { kA, kB, kC, kD, kE, kF, kG };

enum class ChildRole : std::uint8_t { I, II, III, IV, V };

/// Role-ordered corner slots of each child: I = ADE, II = FDE, III = DFG,
/// IV = DCG, V = CBF. I, III and V have the parent's class; II and IV the
/// conjugate class.
inline constexpr std::array<std::array<Slot, 3>, 5> kChildSlots{{
    {kA, kD, kE},
    {kF, kD, kE},
    {kD, kF, kG},
    {kD, kC, kG},
    {kC, kB, kF},
}};

constexpr bool child_is_conjugate(ChildRole r) { return r == ChildRole::II || r == ChildRole::IV; }

struct SplitChild {
  ChildRole role;
  Corners corners;
  AngleClass cls;
};

struct SubdivisionResult {
  /// All seven points indexed by Slot.
  std::array<Point, 7> points;
  std::array<SplitChild, 5> children;

  Point d() const { return points[kD]; }
  Point e() const { return points[kE]; }
  Point f() const { return points[kF]; }
  Point g() const { return points[kG]; }
};

/// Measured-angle tolerance accepted by pinwheel_split.
inline constexpr double kAngleTolerance = 1e-9;

/// Five-way generalized pinwheel split. Throws NeedsReorder when cls.a >= cls.c,
/// InvalidArgument when the measured angles of `t` do not match `cls`, and
/// Degenerate when a child degenerates.
SubdivisionResult pinwheel_split(const Corners& t, const AngleClass& cls);

/// Splits t into three about `center` (the in-center by default).
std::array<Triangle, 3> tripartition(const Triangle& t);
std::array<Triangle, 3> tripartition(const Triangle& t, Point center);

inline constexpr double kDefaultTripartitionCutoff = 0.4;

/// c - a < cutoff (strict).
constexpr bool needs_tripartition(double a, double c, double cutoff = kDefaultTripartitionCutoff) {
  return c - a < cutoff;
}

struct RationalMultiple {
  int m;
  int n;
};

/// Nearest m*pi/n (gcd(m, n) = 1, 1 <= m < n <= max_denominator) within `tol`
/// of `angle`, if any.
std::optional<RationalMultiple> rational_angle_guard(double angle, int max_denominator = 20,
                                                     double tol = 5e-3);

/// In-center displaced by `fraction` of the in-radius in a direction drawn from
/// a generator seeded with `seed`. `draw` selects successive directions.
Point perturbed_in_center(const Triangle& t, std::uint64_t seed, std::uint64_t draw,
                          double fraction = 0.05);

/// Role-ordered corners of a triangle with a <= b <= c (A at the smallest
/// angle, C at the largest). Ties keep vertex order.
std::pair<Corners, AngleClass> sorted_root_roles(const Triangle& t);

}  // namespace pinw
