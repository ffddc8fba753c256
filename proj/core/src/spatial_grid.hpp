#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pinw/geom.hpp"

namespace pinw::detail {

// Uniform bucket grid over point indices for box queries.
class SpatialGrid {
 public:
  SpatialGrid(const std::vector<Point>& points, double cell) : points_(points), cell_(cell) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      cells_[key(cell_of(points[i].x), cell_of(points[i].y))].push_back(static_cast<int>(i));
    }
  }

  template <typename Fn>
  void for_each_in_box(Point lo, Point hi, Fn&& fn) const {
    const std::int64_t x0 = cell_of(lo.x), x1 = cell_of(hi.x);
    const std::int64_t y0 = cell_of(lo.y), y1 = cell_of(hi.y);
    for (std::int64_t cx = x0; cx <= x1; ++cx) {
      for (std::int64_t cy = y0; cy <= y1; ++cy) {
        const auto it = cells_.find(key(cx, cy));
        if (it == cells_.end()) continue;
        for (int i : it->second) {
          const Point& p = points_[static_cast<std::size_t>(i)];
          if (p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y) fn(i);
        }
      }
    }
  }

 private:
  std::int64_t cell_of(double v) const { return static_cast<std::int64_t>(std::floor(v / cell_)); }
  using Key = std::pair<std::int64_t, std::int64_t>;
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return static_cast<std::size_t>(static_cast<std::uint64_t>(k.first) * 0x9E3779B97F4A7C15ULL ^
                                      static_cast<std::uint64_t>(k.second));
    }
  };
  static Key key(std::int64_t x, std::int64_t y) { return {x, y}; }

  const std::vector<Point>& points_;
  double cell_;
  std::unordered_map<Key, std::vector<int>, KeyHash> cells_;
};

}  // namespace pinw::detail
