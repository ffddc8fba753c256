#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>

#include "pinw/error.hpp"
#include "pinw/pinwheel.hpp"
#include "support.hpp"

using namespace pinw;
using pinw::test::kPi;

namespace {

std::array<double, 3> measured_sorted(const Corners& t) {
  auto ang = [](Point apex, Point p, Point q) {
    const double x = distance(apex, p), y = distance(apex, q), z = distance(p, q);
    return std::acos(std::clamp((x * x + y * y - z * z) / (2 * x * y), -1.0, 1.0));
  };
  std::array<double, 3> v{ang(t.a, t.b, t.c), ang(t.b, t.c, t.a), ang(t.c, t.a, t.b)};
  std::sort(v.begin(), v.end());
  return v;
}

std::array<double, 3> sorted(std::array<double, 3> v) {
  std::sort(v.begin(), v.end());
  return v;
}

bool same_set(const std::array<double, 3>& x, const std::array<double, 3>& y, double tol) {
  for (int i = 0; i < 3; ++i)
    if (std::abs(x[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(i)]) > tol) return false;
  return true;
}

double area(const Corners& t) { return std::abs(signed_area2(t.a, t.b, t.c)) / 2; }

bool strictly_inside(Point p, const Corners& t) {
  const double s1 = signed_area2(t.a, t.b, p), s2 = signed_area2(t.b, t.c, p), s3 = signed_area2(t.c, t.a, p);
  return (s1 > 0 && s2 > 0 && s3 > 0) || (s1 < 0 && s2 < 0 && s3 < 0);
}

double minalt(const Corners& t) { return min_altitude(Triangle(t.a, t.b, t.c)); }

}  // namespace

TEST_CASE("1:2 right triangle splits into five congruent children") {
  // Smallest angle at A, right angle at C.
  const Corners t{{0, 0}, {2, 1}, {2, 0}};
  const AngleClass cls{AngleKind::RootSimilar, std::atan(0.5), std::atan(2.0), kPi / 2};
  const auto r = pinwheel_split(t, cls);
  const double parent_sides[3] = {1.0, 2.0, std::sqrt(5.0)};
  for (const auto& ch : r.children) {
    std::array<double, 3> s{distance(ch.corners.a, ch.corners.b), distance(ch.corners.b, ch.corners.c),
                            distance(ch.corners.c, ch.corners.a)};
    std::sort(s.begin(), s.end());
    for (int i = 0; i < 3; ++i) CHECK(s[static_cast<std::size_t>(i)] == doctest::Approx(parent_sides[i] / std::sqrt(5.0)).epsilon(1e-12));
  }
}

TEST_CASE("right triangle children are all similar to the parent") {
  const double a = 0.6;
  const Corners t = test::corners_from_angles(a, kPi / 2 - a);
  const auto r = pinwheel_split(t, test::class_of(a, kPi / 2 - a));
  const auto parent = measured_sorted(t);
  for (const auto& ch : r.children) CHECK(same_set(measured_sorted(ch.corners), parent, 1e-9));
}

TEST_CASE("children of (0.5, 1.0, pi - 1.5) carry A1 or A2") {
  const Corners t = test::corners_from_angles(0.5, 1.0);
  const auto r = pinwheel_split(t, test::class_of(0.5, 1.0));
  const std::array<double, 3> a1 = sorted({0.5, 1.0, kPi - 1.5});
  const std::array<double, 3> a2 = sorted({0.5, kPi - 1.5 - 0.5, 1.5});
  CHECK(a2[1] == doctest::Approx(1.1416).epsilon(1e-4));
  int n1 = 0, n2 = 0;
  for (const auto& ch : r.children) {
    const auto m = measured_sorted(ch.corners);
    const bool in1 = same_set(m, a1, 1e-9), in2 = same_set(m, a2, 1e-9);
    CHECK((in1 || in2));
    n1 += in1;
    n2 += in2;
    CHECK(same_set(m, child_is_conjugate(ch.role) ? a2 : a1, 1e-9));
  }
  CHECK(n1 == 3);
  CHECK(n2 == 2);
}

TEST_CASE("conjugate angles") {
  const auto c = conjugate_angles(0.3, kPi - 2.1, 1.8);
  CHECK(c[0] == doctest::Approx(0.3));
  CHECK(c[1] == doctest::Approx(1.5));
  CHECK(c[2] == doctest::Approx(kPi - 1.8));
  const auto back = conjugate_angles(c[0], c[1], c[2]);
  CHECK(back[1] == doctest::Approx(kPi - 2.1));
  CHECK(back[2] == doctest::Approx(1.8));

  const auto r = conjugate_angles(0.4, kPi / 2 - 0.4, kPi / 2);
  CHECK(sorted(r)[0] == doctest::Approx(0.4));
  CHECK(sorted(r)[1] == doctest::Approx(kPi / 2 - 0.4));
  CHECK(sorted(r)[2] == doctest::Approx(kPi / 2));

  CHECK_THROWS_AS(conjugate_angles(1.0, 1.2, 0.94), Error);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const auto [a, b] = test::random_root_angles(rng);
    const double cc = kPi - a - b;
    const auto x = conjugate_angles(a, b, cc);
    CHECK(x[0] + x[1] + x[2] == doctest::Approx(kPi).epsilon(1e-14));
    const auto y = conjugate_angles(x[0], x[1], x[2]);
    CHECK(y[0] == doctest::Approx(a).epsilon(1e-13));
    CHECK(y[1] == doctest::Approx(b).epsilon(1e-13));
    CHECK(y[2] == doctest::Approx(cc).epsilon(1e-13));
  }
}

TEST_CASE("split rejects bad roles and mismatched angles") {
  const Corners t = test::corners_from_angles(0.5, 1.0);
  AngleClass bad = test::class_of(0.5, 1.0);
  std::swap(bad.a, bad.c);
  CHECK_THROWS_AS(pinwheel_split(t, bad), Error);
  AngleClass off = test::class_of(0.5, 1.0);
  off.a += 1e-3;
  off.b -= 1e-3;
  CHECK_THROWS_AS(pinwheel_split(t, off), Error);
}

TEST_CASE("random splits: partition, isosceles ADF and child angle laws") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> w(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto [a, b] = test::random_root_angles(rng);
    const Corners t = test::corners_from_angles(a, b);
    const auto r = pinwheel_split(t, test::class_of(a, b));

    CHECK(distance(r.points[kA], r.points[kD]) ==
          doctest::Approx(distance(r.points[kD], r.points[kF])).epsilon(1e-10));

    double sum = 0;
    for (const auto& ch : r.children) sum += area(ch.corners);
    CHECK(sum == doctest::Approx(area(t)).epsilon(1e-12));

    for (int s = 0; s < 200; ++s) {
      double x = w(rng), y = w(rng);
      if (x + y > 1) x = 1 - x, y = 1 - y;
      const Point p = t.a + x * (t.b - t.a) + y * (t.c - t.a);
      int hits = 0;
      for (const auto& ch : r.children) hits += strictly_inside(p, ch.corners);
      CHECK(hits <= 1);
    }

    // Stored classes match the measured role angles.
    for (const auto& ch : r.children) {
      const Corners& k = ch.corners;
      CHECK(angle_at(k.a, k.b, k.c) == doctest::Approx(ch.cls.a).epsilon(1e-9));
      CHECK(angle_at(k.b, k.c, k.a) == doctest::Approx(ch.cls.b).epsilon(1e-9));
      CHECK(angle_at(k.c, k.a, k.b) == doctest::Approx(ch.cls.c).epsilon(1e-9));
    }
  }
}

TEST_CASE("nested splits stay in A1 or A2 of the root") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const auto [a, b] = test::random_root_angles(rng);
    const double c = kPi - a - b;
    const std::array<double, 3> a1 = sorted({a, b, c});
    const std::array<double, 3> a2 = sorted({a, c - a, kPi - c});
    std::function<void(const Corners&, const AngleClass&, int)> rec = [&](const Corners& t, const AngleClass& cls,
                                                                         int depth) {
      const auto m = measured_sorted(t);
      CHECK((same_set(m, a1, 1e-9) || same_set(m, a2, 1e-9)));
      if (depth == 0) return;
      const auto r = pinwheel_split(t, cls);
      for (const auto& ch : r.children) rec(ch.corners, ch.cls, depth - 1);
    };
    rec(test::corners_from_angles(a, b), test::class_of(a, b), 3);
  }
}

TEST_CASE("min altitude contraction under the split hypotheses") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto [a, b] = test::random_root_angles(rng);
    const Corners t = test::corners_from_angles(a, b);
    const auto r = pinwheel_split(t, test::class_of(a, b));
    const double parent = minalt(t);
    for (const auto& ch : r.children) {
      const double ratio = minalt(ch.corners) / parent;
      CHECK(ratio <= 0.9725);
      CHECK(ratio >= (ch.role == ChildRole::V ? std::sin(a) : 0.0044) * (1 - 1e-12));
    }
  }
}

TEST_CASE("tripartition") {
  SUBCASE("equilateral gives congruent children") {
    const Triangle t({0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2});
    const auto parts = tripartition(t);
    for (const auto& p : parts) {
      CHECK(p.area() == doctest::Approx(t.area() / 3).epsilon(1e-12));
      CHECK(min_angle(p) == doctest::Approx(kPi / 6).epsilon(1e-12));
    }
  }
  SUBCASE("3-4-5 children meet at (1, 1)") {
    const Triangle t({0, 0}, {3, 0}, {0, 4});
    for (const auto& p : tripartition(t)) {
      bool has = false;
      for (int i = 0; i < 3; ++i) has = has || distance(p[i], {1, 1}) < 1e-12;
      CHECK(has);
    }
  }
  SUBCASE("near-equilateral triangles gain in smallest set angle") {
    // Smallest angle over A1 and A2 of a sorted triple is min(a, c - a).
    auto set_min = [](const Triangle& t) {
      auto ang = triangle_angles(t);
      std::array<double, 3> v{ang[0].angle, ang[1].angle, ang[2].angle};
      std::sort(v.begin(), v.end());
      return std::min(v[0], v[2] - v[0]);
    };
    std::mt19937_64 rng(31);
    int tested = 0;
    while (tested < 500) {
      const Triangle t = test::random_triangle(rng, 0.9);
      auto ang = triangle_angles(t);
      std::array<double, 3> v{ang[0].angle, ang[1].angle, ang[2].angle};
      std::sort(v.begin(), v.end());
      if (!needs_tripartition(v[0], v[2])) continue;
      ++tested;
      for (const auto& p : tripartition(t)) CHECK(set_min(p) >= set_min(t));
    }
  }
}

TEST_CASE("tripartition cutoff") {
  CHECK(needs_tripartition(kPi / 3, kPi / 3));
  CHECK_FALSE(needs_tripartition(std::atan(0.5), kPi / 2));
  CHECK_FALSE(needs_tripartition(0.5, 0.9));
  CHECK(needs_tripartition(0.5, 0.8999));
}

TEST_CASE("rational angle guard") {
  const auto q = rational_angle_guard(kPi / 4, 20, 1e-3);
  REQUIRE(q);
  CHECK(q->m == 1);
  CHECK(q->n == 4);
  CHECK_FALSE(rational_angle_guard(std::atan(0.5), 20, 1e-3));
  const auto r = rational_angle_guard(0.4712, 20, 1e-3);
  REQUIRE(r);
  CHECK(r->m == 3);
  CHECK(r->n == 20);
  // Brute-force scan of m pi / n as oracle.
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(0.01, kPi - 0.01);
  for (int i = 0; i < 2000; ++i) {
    const double x = u(rng);
    bool near = false;
    for (int n = 2; n <= 20; ++n)
      for (int m = 1; m < n; ++m) near = near || std::abs(x - m * kPi / n) <= 5e-3;
    CHECK(rational_angle_guard(x).has_value() == near);
  }
}

TEST_CASE("perturbed in-center is deterministic and close") {
  const Triangle t({0, 0}, {1, 0}, {0.5, 0.8});
  const Point p = perturbed_in_center(t, 1, 0);
  CHECK(p == perturbed_in_center(t, 1, 0));
  CHECK_FALSE(p == perturbed_in_center(t, 1, 1));
  CHECK(distance(p, in_center(t)) == doctest::Approx(0.05 * in_radius(t)).epsilon(1e-9));
}

TEST_CASE("sorted root roles") {
  const Triangle t({0, 0}, {2, 0}, {2, 1});
  const auto [c, cls] = sorted_root_roles(t);
  CHECK(cls.a <= cls.b);
  CHECK(cls.b <= cls.c);
  CHECK(c.a == Point{0, 0});
  CHECK(c.c == Point{2, 0});
}
