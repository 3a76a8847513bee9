#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "mer/geometry.hpp"

namespace mer {

namespace detail {

// Axis transforms (reflections and the diagonal flip) let each boundary
// class be implemented once in a canonical orientation.
struct XForm {
  bool swap = false;
  bool negx = false;
  bool negy = false;

  Point fwd(const Point& p) const {
    Coord x = p.x, y = p.y;
    if (swap) std::swap(x, y);
    if (negx) x = -x;
    if (negy) y = -y;
    return Point{x, y, p.id};
  }

  Rect fwd_bounds(const Rect& b) const {
    Point lo = fwd(Point{b.x_lo, b.y_lo});
    Point hi = fwd(Point{b.x_hi, b.y_hi});
    return Rect{std::min(lo.x, hi.x), std::min(lo.y, hi.y),
                std::max(lo.x, hi.x), std::max(lo.y, hi.y)};
  }

  Rect back(const Rect& r) const {
    Coord xl = r.x_lo, xh = r.x_hi, yl = r.y_lo, yh = r.y_hi;
    if (negx) {
      std::swap(xl, xh);
      xl = -xl;
      xh = -xh;
    }
    if (negy) {
      std::swap(yl, yh);
      yl = -yl;
      yh = -yh;
    }
    if (swap) {
      std::swap(xl, yl);
      std::swap(xh, yh);
    }
    return Rect{xl, yl, xh, yh};
  }
};

// Canonical top-right corner: rectangles whose top and right edges lie on
// the boundary, pinned on the left and bottom by consecutive points of the
// dominance staircase (maximal points under (x, y)-dominance).
inline void corner_rects(const std::vector<Point>& pts, const Rect& b,
                         const XForm& t, std::vector<Rect>& out) {
  std::vector<Point> sorted(pts);
  std::sort(sorted.begin(), sorted.end(),
            [](const Point& a, const Point& c) { return a.x < c.x; });
  std::vector<Point> chain;  // maxima, x ascending / y descending
  Coord best_y = std::numeric_limits<Coord>::min();
  for (auto it = sorted.rbegin(); it != sorted.rend(); ++it)
    if (it->y > best_y) {
      chain.push_back(*it);
      best_y = it->y;
    }
  std::reverse(chain.begin(), chain.end());
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    Rect r = t.back(Rect{chain[i].x, chain[i + 1].y, b.x_hi, b.y_hi});
    r.provenance = Provenance::anchored_ii;
    out.push_back(r);
  }
}

// Canonical right side: rectangles whose only boundary edge is the right
// one; the left edge is pinned by a point p and the top and bottom edges by
// the nearest y-neighbours among points to the right of p.
inline void side_rects(const std::vector<Point>& pts, const Rect& b,
                       const XForm& t, std::vector<Rect>& out) {
  std::vector<Point> sorted(pts);
  std::sort(sorted.begin(), sorted.end(),
            [](const Point& a, const Point& c) { return a.x > c.x; });
  std::set<Coord> ys;
  for (const Point& p : sorted) {
    auto up = ys.upper_bound(p.y);
    if (up != ys.end() && up != ys.begin()) {
      Coord y_t = *up;
      Coord y_b = *std::prev(up);
      Rect r = t.back(Rect{p.x, y_b, b.x_hi, y_t});
      r.provenance = Provenance::anchored_iv;
      out.push_back(r);
    }
    ys.insert(p.y);
  }
}

}  // namespace detail

// All maximal P-empty rectangles with at least one edge on the boundary of
// B, each tagged with the lowest applicable class.
inline std::vector<Rect> compute_anchored(const PointSet& ps) {
  const Rect& b = ps.bounds;
  if (ps.points.empty()) {
    Rect r = b;
    r.provenance = Provenance::box;
    return {r};
  }

  std::vector<Rect> raw;

  // class (i): three edges on the boundary, shrunk to the extreme point
  {
    Coord min_x = ps.points[ps.by_x.front()].x;
    Coord max_x = ps.points[ps.by_x.back()].x;
    Coord min_y = ps.points[ps.by_y.front()].y;
    Coord max_y = ps.points[ps.by_y.back()].y;
    for (Rect r : {Rect{b.x_lo, b.y_lo, min_x, b.y_hi},
                   Rect{max_x, b.y_lo, b.x_hi, b.y_hi},
                   Rect{b.x_lo, b.y_lo, b.x_hi, min_y},
                   Rect{b.x_lo, max_y, b.x_hi, b.y_hi}}) {
      r.provenance = Provenance::anchored_i;
      raw.push_back(r);
    }
  }

  // class (ii): two adjacent boundary edges, one instance per corner
  for (bool negx : {false, true})
    for (bool negy : {false, true}) {
      detail::XForm t{false, negx, negy};
      std::vector<Point> pts;
      pts.reserve(ps.points.size());
      for (const Point& p : ps.points) pts.push_back(t.fwd(p));
      detail::corner_rects(pts, t.fwd_bounds(b), t, raw);
    }

  // class (iii): two opposite boundary edges, consecutive coordinates
  {
    for (std::size_t i = 0; i + 1 < ps.by_y.size(); ++i) {
      Rect r{b.x_lo, ps.points[ps.by_y[i]].y, b.x_hi,
             ps.points[ps.by_y[i + 1]].y};
      r.provenance = Provenance::anchored_iii;
      raw.push_back(r);
    }
    for (std::size_t i = 0; i + 1 < ps.by_x.size(); ++i) {
      Rect r{ps.points[ps.by_x[i]].x, b.y_lo, ps.points[ps.by_x[i + 1]].x,
             b.y_hi};
      r.provenance = Provenance::anchored_iii;
      raw.push_back(r);
    }
  }

  // class (iv): a single boundary edge, one sweep per side
  for (bool swap : {false, true})
    for (bool negx : {false, true}) {
      detail::XForm t{swap, negx, false};
      std::vector<Point> pts;
      pts.reserve(ps.points.size());
      for (const Point& p : ps.points) pts.push_back(t.fwd(p));
      detail::side_rects(pts, t.fwd_bounds(b), t, raw);
    }

  // dedup keeping the lowest class; generation order is already i..iv
  std::map<std::array<Coord, 4>, Rect> seen;
  for (const Rect& r : raw) seen.emplace(rect_coords(r), r);
  std::vector<Rect> out;
  out.reserve(seen.size());
  for (auto& [key, r] : seen) out.push_back(r);
  return out;
}

}  // namespace mer
