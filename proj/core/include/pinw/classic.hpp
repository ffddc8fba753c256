#pragma once

#include "pinw/forest.hpp"
#include "pinw/meshgen.hpp"
#include "pinw/polygon.hpp"

namespace pinw {

/// The 2 x 1 rectangle [0,2] x [0,1].
Polygon rect12_domain();

/// Two 1:2 right-triangle roots split along the (0,0)-(2,1) diagonal, in
/// role order (smallest angle, middle angle, right angle).
Forest rect12_forest();

/// Classic 1:2 pinwheel mesh of the rectangle: `levels` uniform splits,
/// coincident vertices merged and hanging nodes fixed by joining the medium
/// vertex of their host tile.
MeshResult classic_rect12_mesh(int levels, int threads = 1);

}  // namespace pinw
