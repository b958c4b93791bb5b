#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <vector>

#include "bes/errors.hpp"
#include "bes/point_set.hpp"

namespace bes {

struct HTriple {
  std::int64_t a = 1;
  std::int64_t b = 1;
  std::int64_t ell = 0;

  friend auto operator<=>(const HTriple&, const HTriple&) = default;
};

struct ExtremalRecord {
  std::int64_t m = 0;
  std::int64_t h_value = 0;
  HTriple argmax;
};

// Anti-diagonal intersection sizes of the grid [a] x [b], sorted
// non-increasingly: for a <= b this is (b-a+1) copies of a followed by two
// copies each of a-1 down to 1.
inline std::vector<std::int64_t> diag_profile_sorted(std::int64_t a,
                                                     std::int64_t b) {
  if (a < 1 || b < 1)
    throw std::invalid_argument("diag_profile_sorted: a, b must be >= 1");
  const std::int64_t lo = std::min(a, b);
  const std::int64_t hi = std::max(a, b);
  std::vector<std::int64_t> d;
  d.reserve(static_cast<std::size_t>(a + b - 1));
  for (std::int64_t i = 0; i < hi - lo + 1; ++i) d.push_back(lo);
  for (std::int64_t v = lo - 1; v >= 1; --v) {
    d.push_back(v);
    d.push_back(v);
  }
  return d;
}

// h([a], [b], ell): sum of the ell largest diagonal intersections, i.e. the
// largest number of points of [a] x [b] covered by ell anti-diagonals.
// Closed form so that million-scale arguments stay O(1).
inline std::int64_t h_interval(std::int64_t a, std::int64_t b,
                               std::int64_t ell) {
  if (a < 1 || b < 1)
    throw std::invalid_argument("h_interval: a, b must be >= 1");
  if (ell < 0) throw std::invalid_argument("h_interval: ell must be >= 0");
  const std::int64_t lo = std::min(a, b);
  const std::int64_t hi = std::max(a, b);
  const std::int64_t len = a + b - 1;
  const std::int64_t L = std::min(ell, len);
  const std::int64_t flat = hi - lo + 1;
  if (L <= flat) return L * lo;
  const std::int64_t r = L - flat;       // entries taken past the plateau
  const std::int64_t p = r / 2;          // full pairs (lo-1, lo-1), ...
  const std::int64_t rem = r % 2;
  std::int64_t sum = flat * lo;
  sum += 2 * (p * lo - p * (p + 1) / 2); // pairs lo-1 down to lo-p
  if (rem) sum += lo - p - 1;
  return sum;
}

// h(m): maximum of h([a],[b],ell) over ordered splits a+b+ell = m with
// a, b, ell >= 1. The argmax is the lexicographically smallest (a, b, ell).
inline ExtremalRecord h_max(std::int64_t m) {
  if (m < 3) throw std::invalid_argument("h_max: m must be >= 3");
  ExtremalRecord rec;
  rec.m = m;
  rec.h_value = -1;
  for (std::int64_t a = 1; a <= m - 2; ++a)
    for (std::int64_t b = 1; b <= m - a - 1; ++b) {
      const std::int64_t ell = m - a - b;
      const std::int64_t v = h_interval(a, b, ell);
      if (v > rec.h_value) {
        rec.h_value = v;
        rec.argmax = {a, b, ell};
      }
    }
  return rec;
}

namespace detail {

inline std::int64_t h_max_value_cached(std::int64_t m) {
  static std::map<std::int64_t, std::int64_t> cache;
  static std::mutex mu;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
  }
  const std::int64_t v = h_max(m).h_value;
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(m, v);
  return v;
}

} // namespace detail

// g(k): least m with h(m) >= k. Valid because h(m) is non-decreasing in m
// (raising ell by one never loses points), so the inversion is a monotone
// search: exponential bracket, then binary search.
inline std::int64_t g_exact(std::int64_t k) {
  if (k < 1) throw std::invalid_argument("g_exact: k must be >= 1");
  if (detail::h_max_value_cached(3) >= k) return 3;
  std::int64_t lo = 3, hi = 6;
  while (detail::h_max_value_cached(hi) < k) {
    lo = hi;
    hi *= 2;
  }
  while (lo + 1 < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (detail::h_max_value_cached(mid) >= k)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

inline double g_asymptotic_ratio(std::int64_t k) {
  return static_cast<double>(g_exact(k)) / std::sqrt(12.0 * static_cast<double>(k));
}

// Independent oracle for g_exact: exhaustive minimum of g over k-point
// subsets of [grid] x [grid]. Prunes on the partial line count (monotone
// under adding points) and fixes min x = 0 via the first chosen cell.
inline std::int64_t g_brute(std::int64_t k, std::int64_t grid,
                            std::uint64_t node_budget = 4'000'000'000ull) {
  if (k < 1) throw std::invalid_argument("g_brute: k must be >= 1");
  if (grid < 1) throw std::invalid_argument("g_brute: grid must be >= 1");
  if (k > grid * grid)
    throw std::invalid_argument("g_brute: k exceeds grid capacity");
  {
    double est = 1.0;
    for (std::int64_t i = 0; i < k; ++i)
      est = est * static_cast<double>(grid * grid - i) /
            static_cast<double>(i + 1);
    if (est > static_cast<double>(node_budget))
      throw budget_error("g_brute: subset count exceeds node budget");
  }

  const std::int64_t n = grid;
  std::vector<int> rows(static_cast<std::size_t>(n), 0);
  std::vector<int> cols(static_cast<std::size_t>(n), 0);
  std::vector<int> diags(static_cast<std::size_t>(2 * n - 1), 0);
  std::int64_t best = std::numeric_limits<std::int64_t>::max();

  // cells indexed x * n + y, so the first chosen cell carries min x
  std::function<void(std::int64_t, std::int64_t, std::int64_t)> rec =
      [&](std::int64_t next, std::int64_t depth, std::int64_t g_partial) {
        if (g_partial >= best) return;
        if (depth == k) {
          best = g_partial;
          return;
        }
        const std::int64_t limit = n * n - (k - depth) + 1;
        for (std::int64_t c = next; c < limit; ++c) {
          if (depth == 0 && c >= n) break; // first cell must have x = 0
          const std::int64_t x = c / n, y = c % n;
          std::int64_t add = 0;
          if (rows[static_cast<std::size_t>(y)]++ == 0) ++add;
          if (cols[static_cast<std::size_t>(x)]++ == 0) ++add;
          if (diags[static_cast<std::size_t>(x + y)]++ == 0) ++add;
          rec(c + 1, depth + 1, g_partial + add);
          --rows[static_cast<std::size_t>(y)];
          --cols[static_cast<std::size_t>(x)];
          --diags[static_cast<std::size_t>(x + y)];
        }
      };
  rec(0, 0, 0);
  return best;
}

} // namespace bes
