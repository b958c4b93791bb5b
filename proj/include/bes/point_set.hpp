#pragma once

#include <algorithm>
#include <cstdint>
#include <compare>
#include <set>
#include <unordered_set>
#include <vector>

namespace bes {

struct Point {
  std::int64_t x = 0;
  std::int64_t y = 0;

  friend auto operator<=>(const Point&, const Point&) = default;
};

struct PointHash {
  std::size_t operator()(const Point& p) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(p.x) * 0x9e3779b97f4a7c15ull;
    h ^= static_cast<std::uint64_t>(p.y) + 0x7f4a7c15u + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

// Duplicate-free set of lattice points, stored sorted.
class PointSet {
public:
  PointSet() = default;

  explicit PointSet(std::vector<Point> pts) : pts_(std::move(pts)) {
    std::sort(pts_.begin(), pts_.end());
    pts_.erase(std::unique(pts_.begin(), pts_.end()), pts_.end());
  }

  std::size_t size() const { return pts_.size(); }
  bool empty() const { return pts_.empty(); }
  const std::vector<Point>& points() const { return pts_; }

  bool contains(const Point& p) const {
    return std::binary_search(pts_.begin(), pts_.end(), p);
  }

  PointSet translated(std::int64_t dx, std::int64_t dy) const {
    std::vector<Point> out;
    out.reserve(pts_.size());
    for (const Point& p : pts_) out.push_back({p.x + dx, p.y + dy});
    return PointSet(std::move(out)); // stays sorted, but reuse the ctor
  }

  friend auto operator<=>(const PointSet&, const PointSet&) = default;

  auto begin() const { return pts_.begin(); }
  auto end() const { return pts_.end(); }

private:
  std::vector<Point> pts_;
};

// Occupied rows (y), columns (x) and anti-diagonals (x+y). The x-y=c family
// is never counted.
struct LineProfile {
  std::set<std::int64_t> rows;
  std::set<std::int64_t> cols;
  std::set<std::int64_t> diags;

  std::size_t g() const { return rows.size() + cols.size() + diags.size(); }
};

inline LineProfile line_profile(const PointSet& ps) {
  LineProfile lp;
  for (const Point& p : ps) {
    lp.rows.insert(p.y);
    lp.cols.insert(p.x);
    lp.diags.insert(p.x + p.y);
  }
  return lp;
}

inline std::int64_t g_of_set(const PointSet& ps) {
  return static_cast<std::int64_t>(line_profile(ps).g());
}

// Translate so that min x = 0 and min y = 0. Two sets are translates of each
// other iff their canonical forms are equal. Empty input stays empty.
inline PointSet canonicalize(const PointSet& ps) {
  if (ps.empty()) return ps;
  std::int64_t mx = ps.points().front().x; // sorted, so front has min x
  std::int64_t my = ps.points().front().y;
  for (const Point& p : ps) my = std::min(my, p.y);
  return ps.translated(-mx, -my);
}

} // namespace bes
