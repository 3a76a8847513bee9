#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mer/geometry.hpp"

namespace mer {

inline constexpr int kDefaultOracleCap = 256;

struct oracle_cap_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Brute-force ground truth: the complete set of maximal P-empty rectangles.
//
// Every maximal rectangle has its bottom/top edges drawn from point
// y-coordinates or the sides of B.  For a fixed horizontal strip the left and
// right edges are consecutive "walls" (point x-coordinates inside the strip,
// or the sides of B), so it suffices to scan all strips and keep the
// candidates that pass the maximality test.
inline std::vector<Rect> enumerate_maximal_empty(const PointSet& ps,
                                                 int cap = kDefaultOracleCap) {
  const int n = ps.size();
  if (n > cap)
    throw oracle_cap_error("oracle size cap exceeded: n=" + std::to_string(n) +
                           " > cap=" + std::to_string(cap));
  const Rect& b = ps.bounds;
  std::vector<Coord> ys = {b.y_lo, b.y_hi};
  for (const Point& p : ps.points) ys.push_back(p.y);
  std::sort(ys.begin(), ys.end());

  std::vector<Rect> out;
  std::set<std::array<Coord, 4>> seen;
  std::vector<Coord> walls;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    for (std::size_t j = i + 1; j < ys.size(); ++j) {
      Coord y_lo = ys[i], y_hi = ys[j];
      walls.clear();
      walls.push_back(b.x_lo);
      for (const Point& p : ps.points)
        if (y_lo < p.y && p.y < y_hi) walls.push_back(p.x);
      walls.push_back(b.x_hi);
      std::sort(walls.begin(), walls.end());
      for (std::size_t k = 0; k + 1 < walls.size(); ++k) {
        Rect r{walls[k], y_lo, walls[k + 1], y_hi, Provenance::oracle};
        if (!is_maximal_empty(r, ps)) continue;
        if (seen.insert(rect_coords(r)).second) out.push_back(r);
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Rect& a, const Rect& c) {
    return rect_coords(a) < rect_coords(c);
  });
  return out;
}

// Largest maximal empty rectangle containing q (closed containment), ties
// broken by the global rectangle comparator.
inline Rect oracle_largest_containing(const PointSet& ps, Coord qx, Coord qy,
                                      int cap = kDefaultOracleCap) {
  if (!contains_point(ps.bounds, qx, qy))
    throw domain_error("query point lies outside the bounding box");
  if (ps.size() == 0) {
    Rect r = ps.bounds;
    r.provenance = Provenance::box;
    return r;
  }
  std::optional<Rect> best;
  for (const Rect& r : enumerate_maximal_empty(ps, cap)) {
    if (!contains_point(r, qx, qy)) continue;
    if (!best || rect_better(r, *best)) best = r;
  }
  // q is in B and B's interior is nonempty of points only in the strict
  // interior sense; a containing maximal rectangle always exists.
  return *best;
}

// Same as above but restricted to an explicit candidate list; used by tests.
inline std::optional<Rect> largest_containing(const std::vector<Rect>& rects,
                                              Coord qx, Coord qy) {
  std::optional<Rect> best;
  for (const Rect& r : rects) {
    if (!contains_point(r, qx, qy)) continue;
    if (!best || rect_better(r, *best)) best = r;
  }
  return best;
}

}  // namespace mer
