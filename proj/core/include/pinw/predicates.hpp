#pragma once

#include "pinw/geom.hpp"

namespace pinw {

/// Exact sign of det[q-p, r-p]: +1 when p,q,r turn counterclockwise, -1 when
/// clockwise, 0 when collinear. A floating-point filter answers the easy
/// cases; the rest are evaluated exactly with floating-point expansions.
int orient2d(Point p, Point q, Point r);

/// Exact sign of the in-circle determinant: +1 when s lies strictly inside the
/// circle through p,q,r (given counterclockwise), -1 outside, 0 cocircular.
/// The sign flips when p,q,r are clockwise.
int in_circle(Point p, Point q, Point r, Point s);

}  // namespace pinw
