#ifndef POLYCHAIN_CHAIN_HPP
#define POLYCHAIN_CHAIN_HPP

// Longest convex chains between the vertices p0 = (0,1) and p2 = (1,0) of the
// standard triangle.
//
// A chain is a set Y of sample points such that conv(Y + {p0, p2}) has
// exactly |Y| + 2 vertices.  Because every interior point lies below the
// chord p0p2, ordering Y by x gives a lower convex polyline from p0 to p2:
// x strictly increasing and edge slopes strictly increasing (all negative).

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "polychain/geometry.hpp"

namespace polychain {

inline constexpr Point kChainStart{0.0, 1.0};
inline constexpr Point kChainEnd{1.0, 0.0};

struct PointSample {
  std::vector<Point> points;
  std::uint64_t seed = 0;

  std::size_t size() const { return points.size(); }
};

struct ConvexChain {
  std::vector<std::size_t> indices;  // ordered from p0 to p2

  std::size_t length() const { return indices.size(); }
};

inline bool strictly_inside_standard(Point q) { return q.x > 0.0 && q.y > 0.0 && q.x + q.y < 1.0; }

inline void require_interior(std::span<const Point> pts) {
  for (const Point& q : pts) {
    if (!strictly_inside_standard(q)) {
      throw std::invalid_argument("sample point not strictly inside the standard triangle");
    }
  }
}

namespace detail {

/// Solver order: x ascending, ties by y descending.
inline std::vector<std::size_t> solver_order(std::span<const Point> pts) {
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (pts[a].x != pts[b].x) return pts[a].x < pts[b].x;
    if (pts[a].y != pts[b].y) return pts[a].y > pts[b].y;
    return a < b;
  });
  return order;
}

inline double slope(Point a, Point b) { return (b.y - a.y) / (b.x - a.x); }

inline std::vector<std::size_t> strict_hull(std::vector<Point> pts) {
  // Andrew's monotone chain; collinear points are not vertices.  Returns
  // indices into the sorted copy, only the count matters to callers.
  std::sort(pts.begin(), pts.end(), [](Point a, Point b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t n = pts.size();
  if (n < 3) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return all;
  }
  std::vector<std::size_t> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && orient(pts[hull[k - 2]], pts[hull[k - 1]], pts[i]) <= 0.0) --k;
    hull[k++] = i;
  }
  for (std::size_t i = n - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && orient(pts[hull[k - 2]], pts[hull[k - 1]], pts[i]) <= 0.0) --k;
    hull[k++] = i;
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace detail

/// Hull characterization: the chosen points plus p0, p2 are all hull vertices.
inline bool is_convex_chain(std::span<const Point> pts, std::span<const std::size_t> indices) {
  std::vector<bool> seen(pts.size(), false);
  std::vector<Point> chosen{kChainStart, kChainEnd};
  for (std::size_t i : indices) {
    if (i >= pts.size()) throw std::out_of_range("chain index out of range");
    if (seen[i]) throw std::invalid_argument("duplicate chain index");
    seen[i] = true;
    chosen.push_back(pts[i]);
  }
  if (indices.empty()) return true;
  // Chains live on the p1 side of the chord p0p2.
  for (std::size_t i : indices) {
    if (orient(kChainStart, kChainEnd, pts[i]) >= 0.0) return false;
  }
  return detail::strict_hull(chosen).size() == indices.size() + 2;
}

inline bool is_convex_chain(const PointSample& sample, const ConvexChain& chain) {
  return is_convex_chain(sample.points, chain.indices);
}

/// Ordering characterization: sorted by x, the polyline p0 -> ... -> p2 has
/// strictly increasing x and turns strictly counter-clockwise at every vertex.
inline bool is_convex_chain_by_order(std::span<const Point> pts, std::span<const std::size_t> indices) {
  std::vector<Point> seq;
  for (std::size_t i : indices) {
    if (i >= pts.size()) throw std::out_of_range("chain index out of range");
    seq.push_back(pts[i]);
  }
  std::sort(seq.begin(), seq.end(), [](Point a, Point b) { return a.x < b.x; });
  seq.insert(seq.begin(), kChainStart);
  seq.push_back(kChainEnd);
  for (std::size_t i = 1; i < seq.size(); ++i) {
    if (!(seq[i].x > seq[i - 1].x)) return false;
  }
  for (std::size_t i = 2; i < seq.size(); ++i) {
    if (!(orient(seq[i - 2], seq[i - 1], seq[i]) > 0.0)) return false;
  }
  return true;
}

/// Per-point DP lists in solver order.  For the point at solver position q
/// and a length k (points including q), min_slope(q)[k-1] is the least slope
/// of the last edge over all chains p0 -> ... -> q with k points, and
/// back(q)[k-1] the solver position of the predecessor on one such chain
/// (kNone for the edge from p0).  Lists are nondecreasing in k.
struct DPState {
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  std::vector<std::size_t> order;    // solver position -> sample index
  std::vector<std::size_t> offsets;  // list of position q is [offsets[q], offsets[q+1])
  std::vector<double> slopes;
  std::vector<std::size_t> backs;

  std::size_t size() const { return order.size(); }
  std::span<const double> min_slope(std::size_t q) const {
    return {slopes.data() + offsets[q], offsets[q + 1] - offsets[q]};
  }
  std::span<const std::size_t> back(std::size_t q) const {
    return {backs.data() + offsets[q], offsets[q + 1] - offsets[q]};
  }
};

namespace detail {

/// Number of entries of the nondecreasing list that are < s.
inline std::size_t count_below(const double* list, std::size_t len, double s) {
  if (len == 0) return 0;
  const double* first = list;
  while (len > 1) {
    const std::size_t half = len / 2;
    first = first[half] < s ? first + half : first;
    len -= half;
  }
  return static_cast<std::size_t>(first - list) + (*first < s ? 1 : 0);
}

inline DPState build_dp(std::span<const Point> pts) {
  DPState st;
  st.order = solver_order(pts);
  const std::size_t n = pts.size();
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = pts[st.order[i]].x;
    ys[i] = pts[st.order[i]].y;
  }
  st.offsets.assign(n + 1, 0);
  st.slopes.reserve(n * 8);
  st.backs.reserve(n * 8);
  // Per-point list ends, kept contiguous so most pairs never touch the pool.
  std::vector<double> head(n), tail(n);
  std::vector<std::size_t> sizes(n);
  std::vector<double> best;
  std::vector<std::size_t> best_from;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  for (std::size_t qi = 0; qi < n; ++qi) {
    const double qx = xs[qi];
    const double qy = ys[qi];
    best.assign(2, kInf);
    best_from.assign(2, DPState::kNone);
    best[1] = slope(kChainStart, {qx, qy});
    const double* pool = st.slopes.data();
    for (std::size_t pi = 0; pi < qi; ++pi) {
      // Edges go right and down.
      if (!(qx > xs[pi]) || !(ys[pi] > qy)) continue;
      const double s = (qy - ys[pi]) / (qx - xs[pi]);
      // Chains at p with last slope < s extend to q.
      if (!(head[pi] < s)) continue;
      const std::size_t ext = tail[pi] < s ? sizes[pi] : count_below(pool + st.offsets[pi], sizes[pi], s);
      const std::size_t len = ext + 1;
      if (len >= best.size()) {
        best.resize(len + 1, kInf);
        best_from.resize(len + 1, DPState::kNone);
      }
      if (s < best[len]) {
        best[len] = s;
        best_from[len] = pi;
      }
    }
    // A chain of length m > k >= 2 minus its first interior points keeps its
    // last edge, so the minimum for k >= 2 is a suffix minimum.  Length 1 is
    // the single edge from p0.
    std::size_t top = best.size() - 1;
    while (top > 1 && best[top] == kInf) --top;
    const std::size_t base = st.slopes.size();
    st.slopes.resize(base + top, kInf);
    st.backs.resize(base + top, DPState::kNone);
    st.slopes[base] = best[1];
    double run = kInf;
    std::size_t run_from = DPState::kNone;
    for (std::size_t len = top; len >= 2; --len) {
      if (best[len] < run) {
        run = best[len];
        run_from = best_from[len];
      }
      st.slopes[base + len - 1] = run;
      st.backs[base + len - 1] = run_from;
    }
    st.offsets[qi + 1] = st.slopes.size();
    head[qi] = st.slopes[base];
    tail[qi] = st.slopes.back();
    sizes[qi] = top;
    for (std::size_t k = base + 1; k < st.slopes.size(); ++k) {
      assert(st.slopes[k - 1] <= st.slopes[k] && "DP slope lists must be nondecreasing in length");
    }
  }
  return st;
}

/// Length of the longest chain: the largest k such that some point has a
/// k-point chain from p0 whose last slope is below the closing edge to p2.
inline std::size_t best_length(const DPState& st, std::span<const Point> pts) {
  std::size_t best = 0;
  for (std::size_t qi = 0; qi < st.size(); ++qi) {
    const auto list = st.min_slope(qi);
    const double close = slope(pts[st.order[qi]], kChainEnd);
    best = std::max(best, count_below(list.data(), list.size(), close));
  }
  return best;
}

inline std::vector<Point> reflect(std::span<const Point> pts) {
  std::vector<Point> out;
  out.reserve(pts.size());
  for (const Point& q : pts) out.push_back({q.y, q.x});
  return out;
}

inline ConvexChain backtrack(const DPState& st, std::span<const Point> pts, std::size_t length) {
  ConvexChain chain;
  if (length == 0) return chain;
  for (std::size_t qi = 0; qi < st.size(); ++qi) {
    const auto list = st.min_slope(qi);
    if (list.size() < length) continue;
    if (!(list[length - 1] < slope(pts[st.order[qi]], kChainEnd))) continue;
    std::size_t cur = qi;
    std::size_t k = length;
    std::vector<std::size_t> rev;
    while (cur != DPState::kNone && k > 0) {
      rev.push_back(st.order[cur]);
      cur = st.back(cur)[k - 1];
      --k;
    }
    chain.indices.assign(rev.rbegin(), rev.rend());
    return chain;
  }
  return chain;
}

/// Lexicographically smallest chain (in the x-coordinates of its vertices)
/// among chains of the given length.  `mirror` is the DP of the sample
/// reflected in y = x: there the minimal last slope 1/s at q corresponds to
/// the maximal slope s of the first edge leaving q towards p2, so the lists
/// tell which prefixes can still be completed.  The greedy scan picks the
/// leftmost completable vertex at every step.
inline std::optional<ConvexChain> lex_min_chain(const DPState& mirror, std::span<const Point> pts,
                                                std::size_t length) {
  ConvexChain chain;
  if (length == 0) return chain;
  const std::size_t n = pts.size();
  const std::vector<std::size_t> order = solver_order(pts);
  std::vector<std::size_t> mirror_pos(n);
  for (std::size_t i = 0; i < n; ++i) mirror_pos[mirror.order[i]] = i;
  auto can_finish = [&](std::size_t idx, std::size_t points_left, double incoming) {
    const auto list = mirror.min_slope(mirror_pos[idx]);
    if (list.size() < points_left) return false;
    const double max_out = 1.0 / list[points_left - 1];
    return max_out > incoming;
  };
  Point cur = kChainStart;
  double incoming = -std::numeric_limits<double>::infinity();
  std::size_t pos = 0;  // solver positions before pos are left of cur or used
  for (std::size_t remaining = length; remaining > 0; --remaining) {
    bool found = false;
    for (std::size_t qi = pos; qi < n; ++qi) {
      const std::size_t idx = order[qi];
      const Point q = pts[idx];
      if (!(q.x > cur.x) || !(q.y < cur.y)) continue;
      const double s = detail::slope(cur, q);
      if (!(s > incoming)) continue;
      if (!can_finish(idx, remaining, s)) continue;
      chain.indices.push_back(idx);
      cur = q;
      incoming = s;
      pos = qi + 1;
      found = true;
      break;
    }
    if (!found) return std::nullopt;
  }
  return chain;
}

}  // namespace detail

/// Exact O(n^2 log n) dynamic program.  Among longest chains returns the one
/// whose vertex x-coordinates are lexicographically smallest.
inline ConvexChain longest_chain_exact(std::span<const Point> pts) {
  require_interior(pts);
  const std::vector<Point> mirrored = detail::reflect(pts);
  const DPState mirror = detail::build_dp(mirrored);
  const std::size_t length = detail::best_length(mirror, mirrored);
  std::optional<ConvexChain> chain = detail::lex_min_chain(mirror, pts, length);
  if (!chain || !is_convex_chain_by_order(pts, chain->indices)) {
    // Rounding disagreement between slopes and reciprocal slopes; the
    // back-pointers of the mirrored pass always give a valid longest chain.
    chain = detail::backtrack(mirror, mirrored, length);
    std::reverse(chain->indices.begin(), chain->indices.end());
  }
  assert(chain->length() == length);
  return *chain;
}

inline ConvexChain longest_chain_exact(const PointSample& sample) { return longest_chain_exact(sample.points); }

/// Exposes the DP lists for inspection.
inline DPState longest_chain_dp_state(std::span<const Point> pts) {
  require_interior(pts);
  return detail::build_dp(pts);
}

/// Solves in an arbitrary triangle by mapping to standard coordinates first.
/// Chains run from the triangle's p0 to its p2.
inline ConvexChain longest_chain_exact(const Triangle& tri, std::span<const Point> pts) {
  const AffineMap fwd = to_standard(tri);
  std::vector<Point> mapped;
  mapped.reserve(pts.size());
  for (const Point& q : pts) mapped.push_back(fwd(q));
  return longest_chain_exact(mapped);
}

inline constexpr std::size_t kBruteForceLimit = 18;

/// Exhaustive search over x-ordered counter-clockwise sequences.  Uses only
/// orientation predicates, independent of the DP's slope lists.
inline ConvexChain brute_force_chain(std::span<const Point> pts) {
  if (pts.size() > kBruteForceLimit) throw std::invalid_argument("brute force limited to 18 points");
  require_interior(pts);
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pts[a].x < pts[b].x; });
  const std::size_t n = order.size();

  std::vector<std::size_t> path;
  std::vector<std::size_t> best;
  // path holds solver positions; prev/cur are the last two polyline points.
  auto dfs = [&](auto&& self, Point prev, Point cur, std::size_t next) -> void {
    if (orient(prev, cur, kChainEnd) > 0.0 && path.size() > best.size()) best = path;
    if (path.size() + (n - next) <= best.size()) return;
    for (std::size_t i = next; i < n; ++i) {
      if (path.size() + (n - i) <= best.size()) return;
      const Point q = pts[order[i]];
      if (!(q.x > cur.x)) continue;
      if (!path.empty() && !(orient(prev, cur, q) > 0.0)) continue;
      path.push_back(i);
      self(self, cur, q, i + 1);
      path.pop_back();
    }
  };
  // The first edge from p0 has no turn constraint; use a virtual point far
  // above p0 so the turn test at p0 always passes.
  dfs(dfs, Point{0.0, 2.0}, kChainStart, 0);
  ConvexChain chain;
  for (std::size_t i : best) chain.indices.push_back(order[i]);
  return chain;
}

inline ConvexChain brute_force_chain(const PointSample& sample) { return brute_force_chain(sample.points); }

struct PrunedResult {
  ConvexChain chain;
  double width = 0.0;               // final width used
  std::size_t active_points = 0;    // points within the final width
  bool empty_subsample = false;
  int widenings = 0;
};

namespace detail {

inline ConvexChain solve_within(std::span<const Point> pts, std::span<const double> dist, double width,
                                std::size_t& active) {
  std::vector<Point> sub;
  std::vector<std::size_t> map;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (dist[i] <= width) {
      sub.push_back(pts[i]);
      map.push_back(i);
    }
  }
  active = sub.size();
  ConvexChain local = longest_chain_exact(sub);
  for (std::size_t& i : local.indices) i = map[i];
  return local;
}

}  // namespace detail

/// Largest distance from a point of the closed standard triangle to the arc.
inline const double kTriangleDiameter = std::sqrt(2.0);

/// Exact DP restricted to points within `width` of the arc.  With
/// auto-widening the width doubles until the chain length is unchanged by one
/// doubling (or the whole triangle is covered).
inline PrunedResult longest_chain_pruned(std::span<const Point> pts, double width, bool auto_widen = false) {
  if (!(width > 0.0)) throw std::invalid_argument("pruning width must be positive");
  require_interior(pts);
  std::vector<double> dist(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) dist[i] = distance_to_gamma(pts[i]);

  PrunedResult res;
  res.width = width;
  res.chain = detail::solve_within(pts, dist, width, res.active_points);
  if (auto_widen) {
    while (res.width < kTriangleDiameter) {
      PrunedResult wider;
      wider.width = 2.0 * res.width;
      wider.widenings = res.widenings + 1;
      wider.chain = detail::solve_within(pts, dist, wider.width, wider.active_points);
      const bool stable = wider.chain.length() == res.chain.length();
      res = std::move(wider);
      if (stable) break;
    }
  }
  res.empty_subsample = res.active_points == 0;
  return res;
}

inline PrunedResult longest_chain_pruned(const PointSample& sample, double width, bool auto_widen = false) {
  return longest_chain_pruned(sample.points, width, auto_widen);
}

/// Polyline p0 -> chain vertices by increasing x -> p2.
inline std::vector<Point> chain_path(std::span<const Point> pts, const ConvexChain& chain) {
  if (!is_convex_chain(pts, chain.indices)) throw std::invalid_argument("not a convex chain");
  std::vector<Point> path{kChainStart};
  std::vector<Point> verts;
  for (std::size_t i : chain.indices) verts.push_back(pts[i]);
  std::sort(verts.begin(), verts.end(), [](Point a, Point b) { return a.x < b.x; });
  path.insert(path.end(), verts.begin(), verts.end());
  path.push_back(kChainEnd);
  return path;
}

inline std::vector<Point> chain_path(const PointSample& sample, const ConvexChain& chain) {
  return chain_path(sample.points, chain);
}

}  // namespace polychain

#endif  // POLYCHAIN_CHAIN_HPP
