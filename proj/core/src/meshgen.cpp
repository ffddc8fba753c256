#include "pinw/meshgen.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

#include "pinw/error.hpp"
#include "pinw/predicates.hpp"
#include "spatial_grid.hpp"

namespace pinw {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Lines through the points of one split: AB, BC, CA, CF, FD, DE, DG.
enum Line : std::uint8_t { kAB, kBC, kCA, kCF, kFD, kDE, kDG };

constexpr std::array<std::uint8_t, 7> kSlotLines{
    (1u << kAB) | (1u << kCA),
    (1u << kAB) | (1u << kBC),
    (1u << kBC) | (1u << kCA) | (1u << kCF),
    (1u << kCA) | (1u << kFD) | (1u << kDE) | (1u << kDG),
    (1u << kAB) | (1u << kDE),
    (1u << kAB) | (1u << kCF) | (1u << kFD),
    (1u << kCF) | (1u << kDG),
};

constexpr int line_of(Slot p, Slot q) {
  const unsigned both = kSlotLines[p] & kSlotLines[q];
  for (int l = 0; l < 7; ++l) {
    if (both == (1u << l)) return l;
  }
  return -1;
}

// Per child (I..V) and child edge k, the line it lies on.
constexpr std::array<std::array<int, 3>, 5> child_edge_lines() {
  std::array<std::array<int, 3>, 5> out{};
  for (std::size_t c = 0; c < 5; ++c) {
    for (std::size_t k = 0; k < 3; ++k) {
      out[c][k] = line_of(kChildSlots[c][k], kChildSlots[c][(k + 1) % 3]);
    }
  }
  return out;
}
constexpr auto kChildEdgeLines = child_edge_lines();
static_assert(kChildEdgeLines[0][0] == kCA && kChildEdgeLines[0][1] == kDE && kChildEdgeLines[0][2] == kAB);
static_assert(kChildEdgeLines[4][0] == kBC && kChildEdgeLines[4][1] == kAB && kChildEdgeLines[4][2] == kCF);

double param_along(Point p, Point a, Point b) {
  const Point d = b - a;
  return dot(p - a, d) / dot(d, d);
}

int side_of_line(Point a, Point b, Point c) { return orient2d(a, b, c) > 0 ? 0 : 1; }

// Sign-corrected in-circle: positive when d is inside the circle through a, b, c.
int oriented_in_circle(Point a, Point b, Point c, Point d) {
  const int o = orient2d(a, b, c);
  return o * in_circle(a, b, c, d);
}

}  // namespace

BigEdgeTable compute_big_edges(const Forest& forest) {
  if (!forest.refined()) throw Error(ErrorCode::NotRefined, "big edges need a refined forest");
  BigEdgeTable table;
  const auto& tiles = forest.tiles();
  table.edge_of.assign(tiles.size(), {-1, -1, -1});
  table.side_of.assign(tiles.size(), {0, 0, 0});

  const auto set_edge = [&](const Tile& t, int k, std::int32_t e) {
    const auto tt = static_cast<std::size_t>(t.id);
    const auto kk = static_cast<std::size_t>(k);
    const BigEdge& be = table.edges[static_cast<std::size_t>(e)];
    table.edge_of[tt][kk] = e;
    table.side_of[tt][kk] = static_cast<std::int8_t>(
        side_of_line(forest.vertex(be.v0), forest.vertex(be.v1), forest.vertex(t.corners[(kk + 2) % 3])));
  };

  std::map<std::pair<VertexId, VertexId>, std::int32_t> root_edges;
  for (TileId r : forest.roots()) {
    const Tile& t = forest.tile(r);
    for (int k = 0; k < 3; ++k) {
      const VertexId u = t.corners[static_cast<std::size_t>(k)];
      const VertexId v = t.corners[static_cast<std::size_t>((k + 1) % 3)];
      const auto key = std::minmax(u, v);
      auto [it, inserted] = root_edges.emplace(key, static_cast<std::int32_t>(table.edges.size()));
      if (inserted) {
        BigEdge be;
        be.v0 = key.first;
        be.v1 = key.second;
        be.boundary = true;
        table.edges.push_back(be);
      } else {
        table.edges[static_cast<std::size_t>(it->second)].boundary = false;
      }
      set_edge(t, k, it->second);
    }
  }

  for (const Tile& t : tiles) {
    if (t.is_leaf()) continue;
    const auto& sv = t.split_vertices;
    const std::array<VertexId, 7> slot{t.corners[0], t.corners[1], t.corners[2], sv[0], sv[1], sv[2], sv[3]};
    std::array<std::int32_t, 7> line_edge{};
    const auto& parent_edges = table.edge_of[static_cast<std::size_t>(t.id)];
    line_edge[kAB] = parent_edges[0];
    line_edge[kBC] = parent_edges[1];
    line_edge[kCA] = parent_edges[2];
    const auto add = [&](Line l, Slot p, Slot q, BigEdgeKind kind) {
      BigEdge be;
      be.v0 = slot[p];
      be.v1 = slot[q];
      be.creator = t.id;
      be.kind = kind;
      line_edge[l] = static_cast<std::int32_t>(table.edges.size());
      table.edges.push_back(be);
    };
    add(kCF, kC, kF, BigEdgeKind::CF);
    add(kFD, kF, kD, BigEdgeKind::FD);
    add(kDE, kD, kE, BigEdgeKind::DE);
    add(kDG, kD, kG, BigEdgeKind::DG);
    for (std::size_t c = 0; c < 5; ++c) {
      const Tile& child = forest.tile(t.children[c]);
      for (int k = 0; k < 3; ++k) set_edge(child, k, line_edge[static_cast<std::size_t>(kChildEdgeLines[c][static_cast<std::size_t>(k)])]);
    }
  }

  for (const Tile& t : tiles) {
    const auto tt = static_cast<std::size_t>(t.id);
    for (std::size_t k = 0; k < 3; ++k) {
      auto& list = table.edges[static_cast<std::size_t>(table.edge_of[tt][k])].nodes[static_cast<std::size_t>(table.side_of[tt][k])];
      list.push_back(t.corners[k]);
      list.push_back(t.corners[(k + 1) % 3]);
    }
  }
  return table;
}

void assign_sides(const Forest& forest, BigEdgeTable& table) {
  // Smallest tile id seen on each side of each edge.
  std::vector<std::array<TileId, 2>> first(table.edges.size(), {std::numeric_limits<TileId>::max(),
                                                                 std::numeric_limits<TileId>::max()});
  for (const Tile& t : forest.tiles()) {
    const auto tt = static_cast<std::size_t>(t.id);
    for (std::size_t k = 0; k < 3; ++k) {
      auto& f = first[static_cast<std::size_t>(table.edge_of[tt][k])][static_cast<std::size_t>(table.side_of[tt][k])];
      f = std::min(f, t.id);
    }
  }
  const auto side_of_child = [&](TileId child, std::size_t e) {
    const auto cc = static_cast<std::size_t>(child);
    for (std::size_t k = 0; k < 3; ++k) {
      if (static_cast<std::size_t>(table.edge_of[cc][k]) == e) return static_cast<int>(table.side_of[cc][k]);
    }
    throw Error(ErrorCode::InvalidArgument, "child does not touch its big edge");
  };

  for (std::size_t e = 0; e < table.edges.size(); ++e) {
    BigEdge& be = table.edges[e];
    switch (be.kind) {
      case BigEdgeKind::Root:
        be.staying_side = first[e][0] <= first[e][1] ? 0 : 1;
        break;
      case BigEdgeKind::CF:
        be.staying_side = 1 - side_of_child(forest.tile(be.creator).children[4], e);
        break;
      case BigEdgeKind::FD:
        be.staying_side = side_of_child(forest.tile(be.creator).children[1], e);
        break;
      case BigEdgeKind::DE:
        be.staying_side = side_of_child(forest.tile(be.creator).children[0], e);
        break;
      case BigEdgeKind::DG:
        be.staying_side = side_of_child(forest.tile(be.creator).children[2], e);
        break;
    }
    const Point a = forest.vertex(be.v0);
    const Point b = forest.vertex(be.v1);
    for (auto& list : be.nodes) {
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
      std::vector<std::pair<double, VertexId>> keyed;
      keyed.reserve(list.size());
      for (VertexId v : list) keyed.emplace_back(param_along(forest.vertex(v), a, b), v);
      std::sort(keyed.begin(), keyed.end());
      for (std::size_t i = 0; i < keyed.size(); ++i) list[i] = keyed[i].second;
    }
  }
}

double theoretical_delta(const Forest& forest, double divisor) {
  double m = std::numeric_limits<double>::infinity();
  for (const Tile& t : forest.tiles()) m = std::min(m, t.min_altitude);
  return m / divisor;
}

VertexId CollapseResult::resolve(VertexId v) const {
  while (alias[static_cast<std::size_t>(v)] != v) v = alias[static_cast<std::size_t>(v)];
  return v;
}

namespace {

struct MapOnChildren {
  std::array<Slot, 3> frame;  // triangle whose moving vertex defines the map
  std::vector<int> children;  // indices into tile.children
  std::vector<Slot> extra;    // split vertices of the tile itself that the map also carries
};

// Regions carried along when D, E or F moves.
std::vector<MapOnChildren> induced_maps(Slot moving) {
  switch (moving) {
    case kD:
      return {{{kA, kD, kF}, {0, 1}, {kE}}, {{kC, kD, kF}, {2, 3}, {kG}}};
    case kE:
      return {{{kA, kD, kE}, {0}, {}}, {{kD, kE, kF}, {1}, {}}};
    case kF:
      return {{{kD, kE, kF}, {1}, {}}, {{kC, kD, kF}, {2, 3}, {kG}}, {{kB, kC, kF}, {4}, {}}};
    default:
      return {};
  }
}

class CollapseRunner {
 public:
  CollapseRunner(Forest& forest, const BigEdgeTable& table, const DeltaPolicy& policy)
      : forest_(forest), table_(table), policy_(policy), pos_(forest.mutable_vertices()) {
    const std::size_t nv = pos_.size();
    result_.alias.resize(nv);
    std::iota(result_.alias.begin(), result_.alias.end(), 0);
    frozen_.assign(nv, false);
    used_target_.assign(nv, false);
    acc_.assign(forest.tiles().size(), {1.0, 1.0});
    result_.delta = theoretical_delta(forest, policy.divisor);
  }

  CollapseResult run() {
    std::vector<TileId> order;
    for (const Tile& t : forest_.tiles()) {
      if (!t.is_leaf()) order.push_back(t.id);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](TileId x, TileId y) { return forest_.tile(x).depth < forest_.tile(y).depth; });
    for (TileId id : order) {
      process(id, kD, 2);
      process(id, kE, 0);
      process(id, kF, 0);
    }
    return std::move(result_);
  }

 private:
  VertexId slot_vertex(const Tile& t, Slot s) const {
    return s <= kC ? t.corners[s] : t.split_vertices[static_cast<std::size_t>(s - kD)];
  }

  void process(TileId id, Slot s, int host_edge) {
    const Tile& t = forest_.tile(id);
    const VertexId v = slot_vertex(t, s);
    if (frozen_[static_cast<std::size_t>(v)]) return;
    if (table_.is_staying(id, host_edge)) return;
    const BigEdge& be = table_.edges[static_cast<std::size_t>(table_.edge_of[static_cast<std::size_t>(id)][static_cast<std::size_t>(host_edge)])];
    const auto& list = be.staying_nodes();
    if (list.empty()) return;

    const Point a = pos_[static_cast<std::size_t>(be.v0)];
    const Point b = pos_[static_cast<std::size_t>(be.v1)];
    const double len = distance(a, b);
    const Point p = pos_[static_cast<std::size_t>(v)];
    const double tv = param_along(p, a, b);
    const auto param = [&](VertexId w) { return param_along(pos_[static_cast<std::size_t>(result_.resolve(w))], a, b); };
    const auto mid = std::lower_bound(list.begin(), list.end(), tv,
                                      [&](VertexId w, double t) { return param(w) < t; });

    if (policy_.mode == DeltaMode::Theoretical) {
      const double delta = result_.delta;
      std::vector<VertexId> near;
      const auto consider = [&](VertexId w) {
        const VertexId r = result_.resolve(w);
        if (r == v) return;
        if (distance(pos_[static_cast<std::size_t>(r)], p) <= delta &&
            std::find(near.begin(), near.end(), r) == near.end()) {
          near.push_back(r);
        }
      };
      for (auto it = mid; it != list.end() && (param(*it) - tv) * len <= delta; ++it) consider(*it);
      for (auto it = mid; it != list.begin();) {
        --it;
        if ((tv - param(*it)) * len > delta) break;
        consider(*it);
      }
      if (near.empty()) return;
      ++result_.candidates;
      if (near.size() > 1) {
        std::ostringstream os;
        os << "vertex " << v << " of tile " << id << " has " << near.size() << " staying nodes within delta "
           << delta;
        throw Error(ErrorCode::DeltaProperty1Violation, os.str());
      }
      if (used_target_[static_cast<std::size_t>(near[0])]) {
        throw Error(ErrorCode::DeltaProperty2Violation,
                    "staying node " + std::to_string(near[0]) + " is the target of two collapses");
      }
      collapse(t, s, v, near[0], false);
      return;
    }

    // Dynamic: nearest staying node only.
    VertexId best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    const auto look = [&](VertexId w) {
      const VertexId r = result_.resolve(w);
      if (r == v) return;
      const double d = distance(pos_[static_cast<std::size_t>(r)], p);
      if (d < best_d || (d == best_d && r < best)) {
        best_d = d;
        best = r;
      }
    };
    if (mid != list.end()) look(*mid);
    if (mid != list.begin()) look(*(mid - 1));
    if (mid != list.end() && mid + 1 != list.end()) look(*(mid + 1));
    if (best < 0) return;
    ++result_.candidates;
    if (used_target_[static_cast<std::size_t>(best)] || !collapse(t, s, v, best, true)) ++result_.rejected;
  }

  std::pair<double, double> total(TileId id) const {
    std::pair<double, double> acc{1.0, 1.0};
    for (TileId c = id; c != kNoTile; c = forest_.tile(c).parent) {
      acc.first *= acc_[static_cast<std::size_t>(c)].first;
      acc.second *= acc_[static_cast<std::size_t>(c)].second;
    }
    return acc;
  }

  // Returns false when a dynamic move is rejected; geometry is untouched then.
  bool collapse(const Tile& t, Slot s, VertexId v, VertexId target, bool dynamic) {
    std::array<Point, 7> at{};
    for (int k = 0; k < 7; ++k) at[static_cast<std::size_t>(k)] = pos_[static_cast<std::size_t>(slot_vertex(t, static_cast<Slot>(k)))];
    const Point dest = pos_[static_cast<std::size_t>(target)];

    const auto maps_spec = induced_maps(s);
    std::vector<AffineMap2> maps;
    for (const auto& m : maps_spec) {
      std::array<Point, 3> from{at[m.frame[0]], at[m.frame[1]], at[m.frame[2]]};
      std::array<Point, 3> to = from;
      for (std::size_t k = 0; k < 3; ++k) {
        if (m.frame[k] == s) to[k] = dest;
      }
      if (!dynamic) {
        maps.push_back(affine_from_correspondence(from, to));
        continue;
      }
      try {
        maps.push_back(affine_from_correspondence(from, to));
      } catch (const Error&) {
        return false;
      }
    }

    if (dynamic) {
      const double lo = 1.0 - policy_.eta;
      const double hi = 1.0 + policy_.eta;
      for (std::size_t i = 0; i < maps.size(); ++i) {
        const auto sv = distortion_bounds(maps[i]);
        for (int c : maps_spec[i].children) {
          const auto acc = total(t.children[static_cast<std::size_t>(c)]);
          if (!(acc.first * sv.min > lo && acc.second * sv.max < hi)) return false;
        }
      }
    }

    for (std::size_t i = 0; i < maps.size(); ++i) {
      const auto sv = distortion_bounds(maps[i]);
      for (int c : maps_spec[i].children) {
        const TileId child = t.children[static_cast<std::size_t>(c)];
        auto& acc = acc_[static_cast<std::size_t>(child)];
        acc.first *= sv.min;
        acc.second *= sv.max;
        apply_to_subtree(child, maps[i]);
      }
      for (Slot x : maps_spec[i].extra) move_vertex(slot_vertex(t, x), maps[i]);
    }

    pos_[static_cast<std::size_t>(v)] = dest;
    result_.alias[static_cast<std::size_t>(v)] = target;
    frozen_[static_cast<std::size_t>(v)] = true;
    frozen_[static_cast<std::size_t>(target)] = true;
    used_target_[static_cast<std::size_t>(target)] = true;
    result_.records.push_back({v, target, t.id, s, distance(at[s], dest)});
    return true;
  }

  void move_vertex(VertexId w, const AffineMap2& m) {
    if (frozen_[static_cast<std::size_t>(w)]) return;
    pos_[static_cast<std::size_t>(w)] = m(pos_[static_cast<std::size_t>(w)]);
  }

  void apply_to_subtree(TileId root, const AffineMap2& m) {
    stack_.clear();
    stack_.push_back(root);
    while (!stack_.empty()) {
      const Tile& t = forest_.tile(stack_.back());
      stack_.pop_back();
      if (t.is_leaf()) continue;
      for (VertexId w : t.split_vertices) move_vertex(w, m);
      for (TileId c : t.children) stack_.push_back(c);
    }
  }

  Forest& forest_;
  const BigEdgeTable& table_;
  const DeltaPolicy& policy_;
  std::vector<Point>& pos_;
  CollapseResult result_;
  std::vector<bool> frozen_;
  std::vector<bool> used_target_;
  std::vector<std::pair<double, double>> acc_;
  std::vector<TileId> stack_;
};

}  // namespace

CollapseResult collapse_pass(Forest& forest, const BigEdgeTable& table, const DeltaPolicy& policy) {
  return CollapseRunner(forest, table, policy).run();
}

namespace {

// Sorted boundary chain of a leaf; mask bit k marks entries on edge k.
LeafTriangulation leaf_chain(const LeafInput& leaf, std::vector<std::uint8_t>& mask) {
  std::size_t total = 3;
  for (const auto& h : leaf.hanging) total += h.size();
  const bool have_ids = leaf.ids.size() == total;

  LeafTriangulation out;
  out.chain.reserve(total);
  out.chain_ids.reserve(total);
  mask.clear();
  mask.reserve(total);

  int input_index = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    const Point a = leaf.corners[k];
    const Point b = leaf.corners[(k + 1) % 3];
    out.chain.push_back(a);
    out.chain_ids.push_back(have_ids ? leaf.ids[static_cast<std::size_t>(input_index)] : input_index);
    mask.push_back(static_cast<std::uint8_t>((1u << k) | (1u << ((k + 2) % 3))));
    ++input_index;

    const double len = distance(a, b);
    std::vector<std::pair<double, int>> keyed;
    for (std::size_t i = 0; i < leaf.hanging[k].size(); ++i) {
      const Point h = leaf.hanging[k][i];
      const double off = point_segment_distance(h, a, b);
      if (off > 1e-9 * len) {
        std::ostringstream os;
        os.precision(17);
        os << "node (" << h.x << "," << h.y << ") is " << off << " off its edge of length " << len;
        throw Error(ErrorCode::HangingNodeOffEdge, os.str());
      }
      keyed.emplace_back(param_along(h, a, b), input_index + static_cast<int>(i));
    }
    std::sort(keyed.begin(), keyed.end());
    for (const auto& [t, idx] : keyed) {
      out.chain.push_back(leaf.hanging[k][static_cast<std::size_t>(idx - input_index)]);
      out.chain_ids.push_back(have_ids ? leaf.ids[static_cast<std::size_t>(idx)] : idx);
      mask.push_back(static_cast<std::uint8_t>(1u << k));
    }
    input_index += static_cast<int>(leaf.hanging[k].size());
  }

  return out;
}

}  // namespace

LeafTriangulation triangulate_leaf(const LeafInput& leaf) {
  std::vector<std::uint8_t> mask;
  LeafTriangulation out = leaf_chain(leaf, mask);
  const int n = static_cast<int>(out.chain.size());
  const auto& c = out.chain;
  const bool ccw = orient2d(leaf.corners[0], leaf.corners[1], leaf.corners[2]) > 0;
  const auto emit = [&](int i, int j, int k) {
    if (ccw) {
      out.triangles.push_back({i, j, k});
    } else {
      out.triangles.push_back({i, k, j});
    }
  };

  std::vector<std::pair<int, int>> work{{0, n - 1}};
  while (!work.empty()) {
    const auto [lo, hi] = work.back();
    work.pop_back();
    if (hi - lo < 2) continue;
    int best = -1;
    for (int m = lo + 1; m < hi; ++m) {
      if (mask[static_cast<std::size_t>(lo)] & mask[static_cast<std::size_t>(hi)] & mask[static_cast<std::size_t>(m)]) {
        continue;
      }
      if (best < 0) {
        best = m;
        continue;
      }
      const int r = oriented_in_circle(c[static_cast<std::size_t>(lo)], c[static_cast<std::size_t>(best)],
                                       c[static_cast<std::size_t>(hi)], c[static_cast<std::size_t>(m)]);
      if (r > 0 || (r == 0 && out.chain_ids[static_cast<std::size_t>(m)] < out.chain_ids[static_cast<std::size_t>(best)])) {
        best = m;
      }
    }
    if (best < 0) throw Error(ErrorCode::Degenerate, "leaf polygon has a flat section with no apex");
    emit(lo, best, hi);
    work.emplace_back(lo, best);
    work.emplace_back(best, hi);
  }
  return out;
}

namespace {

// Fan from corner 1 when every extra node sits on edge 2.
bool medium_vertex_fan(const LeafInput& leaf, LeafTriangulation& out) {
  if (!leaf.hanging[0].empty() || !leaf.hanging[1].empty() || leaf.hanging[2].empty()) return false;
  std::vector<std::uint8_t> mask;
  out = leaf_chain(leaf, mask);
  out.triangles.clear();
  const int n = static_cast<int>(out.chain.size());
  const bool ccw = orient2d(leaf.corners[0], leaf.corners[1], leaf.corners[2]) > 0;
  for (int i = 2; i < n; ++i) {
    const int j = (i + 1) % n;
    if (ccw) {
      out.triangles.push_back({1, i, j});
    } else {
      out.triangles.push_back({1, j, i});
    }
  }
  return true;
}

struct LeafJob {
  TileId tile;
  LeafInput input;
};

std::vector<LeafTriangulation> triangulate_all(const std::vector<LeafJob>& jobs, Finishing finishing, int threads) {
  std::vector<LeafTriangulation> out(jobs.size());
  const auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      if (finishing == Finishing::MediumVertex && medium_vertex_fan(jobs[i].input, out[i])) continue;
      out[i] = triangulate_leaf(jobs[i].input);
    }
  };
  const std::size_t nthreads = static_cast<std::size_t>(std::max(1, threads));
  if (nthreads == 1 || jobs.size() < 256) {
    work(0, jobs.size());
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(nthreads);
  const std::size_t chunk = (jobs.size() + nthreads - 1) / nthreads;
  for (std::size_t t = 0; t < nthreads; ++t) {
    const std::size_t b = std::min(jobs.size(), t * chunk);
    const std::size_t e = std::min(jobs.size(), b + chunk);
    pool.emplace_back([&, t, b, e] {
      try {
        work(b, e);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  return out;
}

}  // namespace

MeshResult mesh_from_forest(Forest forest, const MeshOptions& opts) {
  MeshResult res;
  const auto t0 = Clock::now();
  BigEdgeTable table = compute_big_edges(forest);
  assign_sides(forest, table);

  const std::vector<Point> before = forest.vertices();
  CollapseResult collapse;
  if (opts.collapse) {
    collapse = collapse_pass(forest, table, opts.delta);
  } else {
    collapse.delta = theoretical_delta(forest, opts.delta.divisor);
    collapse.alias.resize(forest.vertices().size());
    std::iota(collapse.alias.begin(), collapse.alias.end(), 0);
  }
  res.stats.seconds_collapse = seconds_since(t0);
  const auto t1 = Clock::now();

  // Weld surviving vertices that coincide.
  const auto& pos = forest.vertices();
  const double diam = std::max(forest.diameter(), 1e-300);
  const double tol = 1e-12 * diam;
  std::vector<int> node_of(pos.size(), -1);
  std::vector<Point> node_pos;
  std::vector<VertexId> node_vertex;
  {
    std::vector<Point> reps;
    std::vector<VertexId> rep_id;
    for (VertexId v = 0; v < static_cast<VertexId>(pos.size()); ++v) {
      if (collapse.alias[static_cast<std::size_t>(v)] == v) {
        reps.push_back(pos[static_cast<std::size_t>(v)]);
        rep_id.push_back(v);
      }
    }
    const detail::SpatialGrid grid(reps, std::max(tol, 1e-9 * diam));
    for (std::size_t i = 0; i < reps.size(); ++i) {
      int node = -1;
      const Point p = reps[i];
      grid.for_each_in_box({p.x - tol, p.y - tol}, {p.x + tol, p.y + tol}, [&](int j) {
        if (static_cast<std::size_t>(j) >= i) return;
        const int other = node_of[static_cast<std::size_t>(rep_id[static_cast<std::size_t>(j)])];
        if (node < 0 || other < node) node = other;
      });
      if (node < 0) {
        node = static_cast<int>(node_pos.size());
        node_pos.push_back(p);
        node_vertex.push_back(rep_id[i]);
      } else {
        ++res.stats.welded;
      }
      node_of[static_cast<std::size_t>(rep_id[i])] = node;
    }
    for (VertexId v = 0; v < static_cast<VertexId>(pos.size()); ++v) {
      node_of[static_cast<std::size_t>(v)] = node_of[static_cast<std::size_t>(collapse.resolve(v))];
    }
  }

  // Merged node lists per big edge, sorted along the edge.
  struct Entry {
    double t;
    int node;
  };
  std::vector<std::vector<Entry>> merged(table.edges.size());
  for (std::size_t e = 0; e < table.edges.size(); ++e) {
    const BigEdge& be = table.edges[e];
    const Point a = node_pos[static_cast<std::size_t>(node_of[static_cast<std::size_t>(be.v0)])];
    const Point b = node_pos[static_cast<std::size_t>(node_of[static_cast<std::size_t>(be.v1)])];
    auto& list = merged[e];
    for (const auto& side : be.nodes) {
      for (VertexId v : side) {
        const int node = node_of[static_cast<std::size_t>(v)];
        list.push_back({param_along(node_pos[static_cast<std::size_t>(node)], a, b), node});
      }
    }
    std::sort(list.begin(), list.end(), [](const Entry& x, const Entry& y) {
      return x.t < y.t || (x.t == y.t && x.node < y.node);
    });
    list.erase(std::unique(list.begin(), list.end(), [](const Entry& x, const Entry& y) { return x.node == y.node; }),
               list.end());
  }

  std::vector<LeafJob> jobs;
  jobs.reserve(forest.leaf_count());
  for (const Tile& t : forest.tiles()) {
    if (!t.is_leaf()) continue;
    LeafJob job;
    job.tile = t.id;
    std::array<int, 3> corner_node{};
    for (std::size_t k = 0; k < 3; ++k) {
      corner_node[k] = node_of[static_cast<std::size_t>(t.corners[k])];
      job.input.corners[k] = node_pos[static_cast<std::size_t>(corner_node[k])];
    }
    std::array<std::vector<int>, 3> hanging_nodes;
    for (std::size_t k = 0; k < 3; ++k) {
      const std::size_t e = static_cast<std::size_t>(table.edge_of[static_cast<std::size_t>(t.id)][k]);
      const BigEdge& be = table.edges[e];
      const Point a = node_pos[static_cast<std::size_t>(node_of[static_cast<std::size_t>(be.v0)])];
      const Point b = node_pos[static_cast<std::size_t>(node_of[static_cast<std::size_t>(be.v1)])];
      const int nu = corner_node[k];
      const int nv = corner_node[(k + 1) % 3];
      const double tu = param_along(node_pos[static_cast<std::size_t>(nu)], a, b);
      const double tv = param_along(node_pos[static_cast<std::size_t>(nv)], a, b);
      const double lo = std::min(tu, tv), hi = std::max(tu, tv);
      const auto& list = merged[e];
      auto it = std::upper_bound(list.begin(), list.end(), lo, [](double x, const Entry& y) { return x < y.t; });
      for (; it != list.end() && it->t < hi; ++it) {
        if (it->node == nu || it->node == nv) continue;
        hanging_nodes[k].push_back(it->node);
        job.input.hanging[k].push_back(node_pos[static_cast<std::size_t>(it->node)]);
      }
    }
    for (std::size_t k = 0; k < 3; ++k) {
      job.input.ids.push_back(corner_node[k]);
      for (int h : hanging_nodes[k]) job.input.ids.push_back(h);
    }
    jobs.push_back(std::move(job));
  }

  const auto leaf_tris = triangulate_all(jobs, opts.finishing, opts.threads);
  SimplicialMesh& mesh = res.mesh;
  mesh.nodes = node_pos;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& lt = leaf_tris[i];
    for (const auto& tri : lt.triangles) {
      mesh.triangles.push_back({lt.chain_ids[static_cast<std::size_t>(tri[0])], lt.chain_ids[static_cast<std::size_t>(tri[1])],
                                lt.chain_ids[static_cast<std::size_t>(tri[2])]});
      mesh.provenance.push_back(jobs[i].tile);
    }
  }
  res.stats.seconds_triangulate = seconds_since(t1);

  if (opts.audit) {
    CollapseAudit& au = res.audit;
    au.min_node_separation = std::numeric_limits<double>::infinity();
    au.sigma_lower_bound = 0.0;
    au.sigma_upper_bound = std::numeric_limits<double>::infinity();
    constexpr double kT = 0.9725;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      const Tile& t = forest.tile(jobs[i].tile);
      const std::array<Point, 3> pre{before[static_cast<std::size_t>(t.corners[0])],
                                     before[static_cast<std::size_t>(t.corners[1])],
                                     before[static_cast<std::size_t>(t.corners[2])]};
      const auto& post = jobs[i].input.corners;
      const Triangle tpre(pre[0], pre[1], pre[2]);
      const Triangle tpost(post[0], post[1], post[2]);
      au.max_aspect_growth = std::max(au.max_aspect_growth, aspect_ratio(tpost) / aspect_ratio(tpre));
      const double ratio = min_altitude(tpost) / min_altitude(tpre);
      au.min_minalt_ratio = std::min(au.min_minalt_ratio, ratio);
      au.max_minalt_ratio = std::max(au.max_minalt_ratio, ratio);
      const auto sv = distortion_bounds(affine_from_correspondence(pre, post));
      au.min_sigma = std::min(au.min_sigma, sv.min);
      au.max_sigma = std::max(au.max_sigma, sv.max);
      const double s = collapse.delta / (0.75 * t.min_altitude);
      const double lo = 1.0 - 3.0 * s / (1.0 - kT);
      const double hi = std::exp(3.0 * s / (1.0 - kT));
      au.sigma_lower_bound = std::max(au.sigma_lower_bound, lo);
      au.sigma_upper_bound = std::min(au.sigma_upper_bound, hi);
      if (sv.min < lo || sv.max > hi) ++au.sigma_violations;

      const auto& chain = leaf_tris[i].chain;
      for (std::size_t j = 0; j < chain.size(); ++j) {
        au.min_node_separation = std::min(au.min_node_separation, distance(chain[j], chain[(j + 1) % chain.size()]));
      }
      for (std::size_t k = 0; k < 3; ++k) {
        const Point a = post[k];
        const Point b = post[(k + 1) % 3];
        const double len = distance(a, b);
        for (const Point& h : jobs[i].input.hanging[k]) {
          au.max_collinearity_error = std::max(au.max_collinearity_error, point_segment_distance(h, a, b) / len);
          ++au.hanging_nodes;
        }
      }
    }
  }

  MeshStats& st = res.stats;
  st.roots = forest.roots().size();
  st.tiles = forest.tiles().size();
  st.leaves = forest.leaf_count();
  st.splits = forest.split_count();
  st.nodes = mesh.nodes.size();
  st.triangles = mesh.triangles.size();
  st.depth = forest.depth_stats();
  st.min_leaf_minalt = std::numeric_limits<double>::infinity();
  for (TileId r : forest.roots()) {
    const Tile& t = forest.tile(r);
    st.max_root_aspect = std::max(
        st.max_root_aspect, aspect_ratio(Triangle(before[static_cast<std::size_t>(t.corners[0])],
                                                  before[static_cast<std::size_t>(t.corners[1])],
                                                  before[static_cast<std::size_t>(t.corners[2])])));
  }
  for (const Tile& t : forest.tiles()) {
    if (!t.is_leaf()) continue;
    st.min_leaf_minalt = std::min(st.min_leaf_minalt, t.min_altitude);
    st.max_leaf_minalt = std::max(st.max_leaf_minalt, t.min_altitude);
  }

  res.node_vertex = std::move(node_vertex);
  res.collapse = std::move(collapse);
  res.big_edges = std::move(table);
  res.forest = std::move(forest);
  return res;
}

MeshResult generate_mesh(const TriangleMesh& coarse, double h_target, const MeshOptions& opts) {
  const auto t0 = Clock::now();
  Forest forest = Forest::build(coarse, opts.forest);
  forest.refine(h_target);
  const double refine_seconds = seconds_since(t0);
  MeshResult res = mesh_from_forest(std::move(forest), opts);
  res.stats.seconds_refine = refine_seconds;
  return res;
}

}  // namespace pinw
