#pragma once

#include <sstream>
#include <string>

#include "bes/point_set.hpp"

namespace bes {

// Renders a point set on a unit grid with the occupied rows, columns and
// anti-diagonals drawn as guide lines. Purely presentational.
inline std::string point_set_svg(const PointSet& ps, double cell = 24.0) {
  std::ostringstream out;
  if (ps.empty()) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"32\" height=\"32\"/>\n";
    return out.str();
  }
  const LineProfile lp = line_profile(ps);
  std::int64_t min_x = *lp.cols.begin(), max_x = *lp.cols.rbegin();
  std::int64_t min_y = *lp.rows.begin(), max_y = *lp.rows.rbegin();
  const double pad = 1.5 * cell;
  const double w = static_cast<double>(max_x - min_x + 1) * cell + 2 * pad;
  const double h = static_cast<double>(max_y - min_y + 1) * cell + 2 * pad;
  auto px = [&](std::int64_t x) { return pad + static_cast<double>(x - min_x) * cell + cell / 2; };
  auto py = [&](std::int64_t y) { return h - (pad + static_cast<double>(y - min_y) * cell + cell / 2); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
      << "\" height=\"" << h << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::int64_t y : lp.rows)
    out << "<line x1=\"0\" y1=\"" << py(y) << "\" x2=\"" << w << "\" y2=\""
        << py(y) << "\" stroke=\"#c8d6e5\" stroke-width=\"1\"/>\n";
  for (std::int64_t x : lp.cols)
    out << "<line x1=\"" << px(x) << "\" y1=\"0\" x2=\"" << px(x)
        << "\" y2=\"" << h << "\" stroke=\"#c8d6e5\" stroke-width=\"1\"/>\n";
  // anti-diagonals x + y = c run at -45 degrees in plot coordinates
  for (std::int64_t c : lp.diags) {
    const double x1 = px(c - min_y), y1 = py(min_y);
    const double x2 = px(min_x), y2 = py(c - min_x);
    out << "<line x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2
        << "\" y2=\"" << y2 << "\" stroke=\"#f5b7b1\" stroke-width=\"1\"/>\n";
  }
  for (const Point& p : ps)
    out << "<circle cx=\"" << px(p.x) << "\" cy=\"" << py(p.y)
        << "\" r=\"" << cell / 4 << "\" fill=\"#2e4053\"/>\n";
  out << "</svg>\n";
  return out.str();
}

} // namespace bes
