#include "pinw/predicates.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace pinw {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon() / 2.0;  // 2^-53
constexpr double kCcwErrBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kIccErrBound = (10.0 + 96.0 * kEps) * kEps;

// Nonoverlapping floating-point expansion, components in increasing magnitude.
class Expansion {
 public:
  Expansion() = default;
  explicit Expansion(double v) {
    if (v != 0.0) terms_.push_back(v);
  }

  static Expansion difference(double a, double b) {
    Expansion e(a);
    return e.grow(-b);
  }

  Expansion grow(double b) const {
    Expansion out;
    out.terms_.reserve(terms_.size() + 1);
    double q = b;
    for (double e : terms_) {
      double sum, err;
      two_sum(q, e, sum, err);
      if (err != 0.0) out.terms_.push_back(err);
      q = sum;
    }
    if (q != 0.0) out.terms_.push_back(q);
    return out;
  }

  friend Expansion operator+(const Expansion& a, const Expansion& b) {
    Expansion out = a;
    for (double t : b.terms_) out = out.grow(t);
    return out;
  }

  Expansion operator-() const {
    Expansion out = *this;
    for (double& t : out.terms_) t = -t;
    return out;
  }

  friend Expansion operator-(const Expansion& a, const Expansion& b) { return a + (-b); }

  Expansion scale(double b) const {
    Expansion out;
    for (double e : terms_) {
      const double hi = e * b;
      const double lo = std::fma(e, b, -hi);
      if (lo != 0.0) out = out.grow(lo);
      if (hi != 0.0) out = out.grow(hi);
    }
    return out;
  }

  friend Expansion operator*(const Expansion& a, const Expansion& b) {
    Expansion out;
    for (double t : b.terms_) out = out + a.scale(t);
    return out;
  }

  int sign() const {
    if (terms_.empty()) return 0;
    return terms_.back() > 0.0 ? 1 : -1;
  }

 private:
  static void two_sum(double a, double b, double& x, double& y) {
    x = a + b;
    const double bv = x - a;
    const double av = x - bv;
    y = (a - av) + (b - bv);
  }

  std::vector<double> terms_;
};

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

int orient2d(Point p, Point q, Point r) {
  const double detleft = (p.x - r.x) * (q.y - r.y);
  const double detright = (p.y - r.y) * (q.x - r.x);
  const double det = detleft - detright;
  const double bound = kCcwErrBound * (std::abs(detleft) + std::abs(detright));
  if (std::abs(det) > bound) return sign_of(det);

  const Expansion acx = Expansion::difference(p.x, r.x);
  const Expansion bcy = Expansion::difference(q.y, r.y);
  const Expansion acy = Expansion::difference(p.y, r.y);
  const Expansion bcx = Expansion::difference(q.x, r.x);
  return (acx * bcy - acy * bcx).sign();
}

int in_circle(Point p, Point q, Point r, Point s) {
  const double adx = p.x - s.x, ady = p.y - s.y;
  const double bdx = q.x - s.x, bdy = q.y - s.y;
  const double cdx = r.x - s.x, cdy = r.y - s.y;

  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double alift = adx * adx + ady * ady;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double blift = bdx * bdx + bdy * bdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;
  const double clift = cdx * cdx + cdy * cdy;

  const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);
  const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
                           (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                           (std::abs(adxbdy) + std::abs(bdxady)) * clift;
  if (std::abs(det) > kIccErrBound * permanent) return sign_of(det);

  const Expansion ax = Expansion::difference(p.x, s.x), ay = Expansion::difference(p.y, s.y);
  const Expansion bx = Expansion::difference(q.x, s.x), by = Expansion::difference(q.y, s.y);
  const Expansion cx = Expansion::difference(r.x, s.x), cy = Expansion::difference(r.y, s.y);
  const Expansion al = ax * ax + ay * ay;
  const Expansion bl = bx * bx + by * by;
  const Expansion cl = cx * cx + cy * cy;
  const Expansion exact = al * (bx * cy - cx * by) + bl * (cx * ay - ax * cy) + cl * (ax * by - bx * ay);
  return exact.sign();
}

}  // namespace pinw
