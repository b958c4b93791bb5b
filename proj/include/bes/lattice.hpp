#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <thread>
#include <vector>

#include "bes/errors.hpp"
#include "bes/point_set.hpp"

namespace bes {

// Triangular lattice: Cayley graph on Z^2 generated by (1,0), (0,1), (1,-1).
inline constexpr std::array<Point, 6> kLatticeDirs = {
    Point{1, 0}, Point{-1, 0}, Point{0, 1},
    Point{0, -1}, Point{1, -1}, Point{-1, 1}};

inline std::int64_t internal_edge_count(const PointSet& ps) {
  std::int64_t twice = 0;
  for (const Point& p : ps)
    for (const Point& d : kLatticeDirs)
      if (ps.contains({p.x + d.x, p.y + d.y})) ++twice;
  return twice / 2;
}

// Number of lattice edges with exactly one endpoint in the set.
inline std::int64_t edge_boundary(const PointSet& ps) {
  std::int64_t out = 0;
  for (const Point& p : ps)
    for (const Point& d : kLatticeDirs)
      if (!ps.contains({p.x + d.x, p.y + d.y})) ++out;
  return out;
}

// Radius-r ball around the origin in the lattice metric: the regular hexagon
// {max(|x|, |y|, |x+y|) <= r}, of size 3r^2 + 3r + 1.
inline PointSet hexagon_ball(std::int64_t r) {
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(3 * r * r + 3 * r + 1));
  for (std::int64_t x = -r; x <= r; ++x)
    for (std::int64_t y = -r; y <= r; ++y)
      if (x + y >= -r && x + y <= r) pts.push_back({x, y});
  return PointSet(std::move(pts));
}

namespace detail {

// Ring r of the hexagon, walked in a fixed circular order starting just past
// the corner (r, 0), so each ring opens at a two-neighbor point and closes at
// a corner. This makes every prefix of the spiral boundary-minimal (certified
// against min_boundary_brute in the tests).
inline std::vector<Point> spiral_ring(std::int64_t r) {
  if (r == 0) return {Point{0, 0}};
  static constexpr std::array<Point, 6> walk = {
      Point{-1, 1}, Point{-1, 0}, Point{0, -1},
      Point{1, -1}, Point{1, 0},  Point{0, 1}};
  std::vector<Point> pts;
  Point p{r, 0};
  for (const Point& d : walk)
    for (std::int64_t i = 0; i < r; ++i) {
      pts.push_back(p);
      p = {p.x + d.x, p.y + d.y};
    }
  // rotate so the walk starts at (r-1, 1), the point after corner (r, 0)
  auto it = std::find(pts.begin(), pts.end(), Point{r - 1, 1});
  std::rotate(pts.begin(), it, pts.end());
  return pts;
}

} // namespace detail

// Nested family of vertex sets: prefixes at sizes 3r^2+3r+1 are exactly the
// hexagonal balls, and intermediate prefixes fill the next ring in circular
// order.
inline std::vector<Point> spiral_family(std::int64_t k) {
  std::vector<Point> seq;
  seq.reserve(static_cast<std::size_t>(k));
  for (std::int64_t r = 0; static_cast<std::int64_t>(seq.size()) < k; ++r) {
    for (const Point& p : detail::spiral_ring(r)) {
      seq.push_back(p);
      if (static_cast<std::int64_t>(seq.size()) == k) break;
    }
  }
  return seq;
}

enum class BoundaryMode {
  kDegreeSum,    // 6|P| - 2 * (internal edges), edges tracked incrementally
  kNeighborScan, // per-point scan of the six neighbor slots
};

struct BruteResult {
  std::int64_t minimum = 0;
  std::set<PointSet> witnesses; // canonical forms of all minimizers
};

namespace detail {

inline double binomial_estimate(int n, int k) {
  double v = 1.0;
  for (int i = 0; i < k; ++i) v = v * (n - i) / (i + 1);
  return v;
}

struct BruteWorkspace {
  std::vector<Point> cells;
  std::vector<std::uint64_t> adj; // adjacency bitmask per cell
};

inline BruteWorkspace brute_workspace(std::int64_t window_radius) {
  BruteWorkspace ws;
  ws.cells = hexagon_ball(window_radius).points();
  const std::size_t n = ws.cells.size();
  ws.adj.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const std::int64_t dx = ws.cells[i].x - ws.cells[j].x;
      const std::int64_t dy = ws.cells[i].y - ws.cells[j].y;
      for (const Point& d : kLatticeDirs)
        if (dx == d.x && dy == d.y) ws.adj[i] |= 1ull << j;
    }
  return ws;
}

// Enumerates all k-subsets whose smallest cell index is in [first_lo,
// first_hi) and records the boundary minimum plus all minimizing masks.
inline void brute_scan(const BruteWorkspace& ws, int k, BoundaryMode mode,
                       std::size_t first_lo, std::size_t first_hi,
                       std::int64_t& best, std::vector<std::uint64_t>& argmin) {
  const int n = static_cast<int>(ws.cells.size());
  std::vector<int> chosen(static_cast<std::size_t>(k));

  auto score = [&](std::uint64_t mask, std::int64_t internal) {
    if (mode == BoundaryMode::kDegreeSum) return 6 * k - 2 * internal;
    std::int64_t b = 0;
    std::uint64_t rest = mask;
    while (rest) {
      const int i = std::countr_zero(rest);
      rest &= rest - 1;
      b += 6 - std::popcount(ws.adj[static_cast<std::size_t>(i)] & mask);
    }
    return b;
  };

  std::function<void(int, int, std::uint64_t, std::int64_t)> rec =
      [&](int next, int depth, std::uint64_t mask, std::int64_t internal) {
        if (depth == k) {
          const std::int64_t b = score(mask, internal);
          if (b < best) {
            best = b;
            argmin.clear();
          }
          if (b == best) argmin.push_back(mask);
          return;
        }
        for (int i = next; i <= n - (k - depth); ++i) {
          const std::uint64_t bit = 1ull << i;
          rec(i + 1, depth + 1, mask | bit,
              internal + std::popcount(ws.adj[static_cast<std::size_t>(i)] & mask));
        }
      };

  for (std::size_t f = first_lo; f < first_hi; ++f) {
    if (static_cast<int>(f) > n - k) break;
    rec(static_cast<int>(f) + 1, 1, 1ull << f, 0);
  }
}

} // namespace detail

// Exact minimum edge boundary over all k-subsets of hexagon_ball(window_radius),
// with every minimizer reported in translation-canonical form. The reduction
// over workers is a deterministic min + set union, so results do not depend on
// the worker count.
inline BruteResult min_boundary_brute(std::int64_t k, std::int64_t window_radius,
                                      BoundaryMode mode = BoundaryMode::kDegreeSum,
                                      std::uint64_t node_budget = 2'000'000'000ull,
                                      int workers = 1) {
  if (k < 1) throw std::invalid_argument("min_boundary_brute: k must be >= 1");
  if (window_radius < 1)
    throw std::invalid_argument("min_boundary_brute: window_radius must be >= 1");
  detail::BruteWorkspace ws = detail::brute_workspace(window_radius);
  const int n = static_cast<int>(ws.cells.size());
  if (n > 64)
    throw budget_error("min_boundary_brute: window larger than 64 cells");
  if (k > n)
    throw std::invalid_argument("min_boundary_brute: k exceeds window size");
  if (detail::binomial_estimate(n, static_cast<int>(k)) >
      static_cast<double>(node_budget))
    throw budget_error("min_boundary_brute: subset count exceeds node budget");

  if (workers < 1) workers = 1;
  std::vector<std::int64_t> best(static_cast<std::size_t>(workers),
                                 std::numeric_limits<std::int64_t>::max());
  std::vector<std::vector<std::uint64_t>> argmin(
      static_cast<std::size_t>(workers));

  if (workers == 1) {
    detail::brute_scan(ws, static_cast<int>(k), mode, 0,
                       static_cast<std::size_t>(n), best[0], argmin[0]);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        // strided partition of the first-point index
        for (std::size_t f = static_cast<std::size_t>(w);
             f < static_cast<std::size_t>(n);
             f += static_cast<std::size_t>(workers))
          detail::brute_scan(ws, static_cast<int>(k), mode, f, f + 1,
                             best[static_cast<std::size_t>(w)],
                             argmin[static_cast<std::size_t>(w)]);
      });
    }
    for (auto& t : pool) t.join();
  }

  BruteResult res;
  res.minimum = *std::min_element(best.begin(), best.end());
  for (int w = 0; w < workers; ++w) {
    if (best[static_cast<std::size_t>(w)] != res.minimum) continue;
    for (std::uint64_t mask : argmin[static_cast<std::size_t>(w)]) {
      std::vector<Point> pts;
      std::uint64_t rest = mask;
      while (rest) {
        const int i = std::countr_zero(rest);
        rest &= rest - 1;
        pts.push_back(ws.cells[static_cast<std::size_t>(i)]);
      }
      res.witnesses.insert(canonicalize(PointSet(std::move(pts))));
    }
  }
  return res;
}

// All canonical k-point minimizers of the edge boundary within the window.
inline std::set<PointSet> extremal_uniqueness(
    std::int64_t k, std::int64_t window_radius,
    std::uint64_t node_budget = 2'000'000'000ull, int workers = 1) {
  return min_boundary_brute(k, window_radius, BoundaryMode::kDegreeSum,
                            node_budget, workers)
      .witnesses;
}

} // namespace bes
