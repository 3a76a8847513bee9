#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace mer {

using Coord = std::int64_t;
using Area = std::int64_t;

// Coordinates are capped so that every area product fits in a signed 64-bit
// integer with plenty of slack.
inline constexpr Coord kMaxAbsCoord = Coord{1} << 20;

struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct domain_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Point {
  Coord x = 0;
  Coord y = 0;
  int id = -1;
};

enum class Provenance : std::uint8_t {
  none,
  box,           // the bounding box itself (n = 0)
  anchored_i,    // three edges on the boundary of B
  anchored_ii,   // two adjacent edges on the boundary
  anchored_iii,  // two opposite edges on the boundary
  anchored_iv,   // one edge on the boundary
  halfplane,     // subproblem case: three defining points in a halfplane
  quadrant,      // subproblem case: one defining point per quadrant
  diagonal,      // diagonal pair, entry of a Monge matrix
  oracle,        // produced by the brute-force oracle
};

inline const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::none: return "none";
    case Provenance::box: return "box";
    case Provenance::anchored_i: return "anchored_i";
    case Provenance::anchored_ii: return "anchored_ii";
    case Provenance::anchored_iii: return "anchored_iii";
    case Provenance::anchored_iv: return "anchored_iv";
    case Provenance::halfplane: return "halfplane";
    case Provenance::quadrant: return "quadrant";
    case Provenance::diagonal: return "diagonal";
    case Provenance::oracle: return "oracle";
  }
  return "?";
}

struct Rect {
  Coord x_lo = 0;
  Coord y_lo = 0;
  Coord x_hi = 0;
  Coord y_hi = 0;
  Provenance provenance = Provenance::none;

  bool valid() const { return x_lo < x_hi && y_lo < y_hi; }

  friend bool operator==(const Rect& a, const Rect& b) {
    return a.x_lo == b.x_lo && a.y_lo == b.y_lo && a.x_hi == b.x_hi &&
           a.y_hi == b.y_hi;
  }
};

inline Area area(const Rect& r) { return (r.x_hi - r.x_lo) * (r.y_hi - r.y_lo); }

// Total order used for all "largest rectangle" comparisons.  Areas need not
// be distinct, so ties are broken lexicographically on the coordinates.
inline std::tuple<Area, Coord, Coord, Coord, Coord> rect_key(const Rect& r) {
  return {area(r), r.x_lo, r.y_lo, r.x_hi, r.y_hi};
}

inline bool rect_better(const Rect& a, const Rect& b) {
  return rect_key(a) > rect_key(b);
}

inline std::array<Coord, 4> rect_coords(const Rect& r) {
  return {r.x_lo, r.y_lo, r.x_hi, r.y_hi};
}

// Closed containment of the query point.
inline bool contains_point(const Rect& r, Coord qx, Coord qy) {
  return r.x_lo <= qx && qx <= r.x_hi && r.y_lo <= qy && qy <= r.y_hi;
}

inline bool contains_point(const Rect& r, const Point& q) {
  return contains_point(r, q.x, q.y);
}

struct PointSet {
  std::vector<Point> points;
  std::vector<int> by_x;  // indices sorted by x
  std::vector<int> by_y;  // indices sorted by y
  Rect bounds;

  int size() const { return static_cast<int>(points.size()); }
};

// Emptiness is of the open interior; points on the edges are allowed.
inline bool interior_empty(const Rect& r, const PointSet& ps) {
  for (const Point& p : ps.points) {
    if (r.x_lo < p.x && p.x < r.x_hi && r.y_lo < p.y && p.y < r.y_hi)
      return false;
  }
  return true;
}

// A side is pinned if it lies on the corresponding side of B or carries a
// point whose other coordinate is strictly interior to the side, so that any
// outward expansion would swallow that point.
inline bool is_maximal_empty(const Rect& r, const PointSet& ps) {
  const Rect& b = ps.bounds;
  if (!r.valid()) return false;
  if (r.x_lo < b.x_lo || r.x_hi > b.x_hi || r.y_lo < b.y_lo || r.y_hi > b.y_hi)
    return false;
  if (!interior_empty(r, ps)) return false;
  bool left = r.x_lo == b.x_lo;
  bool right = r.x_hi == b.x_hi;
  bool bottom = r.y_lo == b.y_lo;
  bool top = r.y_hi == b.y_hi;
  for (const Point& p : ps.points) {
    bool y_inside = r.y_lo < p.y && p.y < r.y_hi;
    bool x_inside = r.x_lo < p.x && p.x < r.x_hi;
    if (y_inside && p.x == r.x_lo) left = true;
    if (y_inside && p.x == r.x_hi) right = true;
    if (x_inside && p.y == r.y_lo) bottom = true;
    if (x_inside && p.y == r.y_hi) top = true;
  }
  return left && right && bottom && top;
}

// Validates the general-position assumption: distinct x, distinct y, all
// points strictly inside the bounds.  No silent perturbation.
inline PointSet normalize_point_set(std::vector<Point> raw, Rect bounds) {
  if (!bounds.valid())
    throw validation_error("bounds rectangle is degenerate");
  if (std::abs(bounds.x_lo) > kMaxAbsCoord || std::abs(bounds.x_hi) > kMaxAbsCoord ||
      std::abs(bounds.y_lo) > kMaxAbsCoord || std::abs(bounds.y_hi) > kMaxAbsCoord)
    throw validation_error("bounds coordinate exceeds the 2^20 budget");
  PointSet ps;
  ps.bounds = bounds;
  ps.points = std::move(raw);
  const int n = ps.size();
  for (int i = 0; i < n; ++i) {
    Point& p = ps.points[i];
    p.id = i;
    if (std::abs(p.x) > kMaxAbsCoord || std::abs(p.y) > kMaxAbsCoord)
      throw validation_error("point " + std::to_string(i) +
                             " exceeds the 2^20 coordinate budget");
    if (p.x <= bounds.x_lo || p.x >= bounds.x_hi || p.y <= bounds.y_lo ||
        p.y >= bounds.y_hi)
      throw validation_error("point " + std::to_string(i) +
                             " does not lie strictly inside the bounds");
  }
  ps.by_x.resize(n);
  ps.by_y.resize(n);
  std::iota(ps.by_x.begin(), ps.by_x.end(), 0);
  std::iota(ps.by_y.begin(), ps.by_y.end(), 0);
  std::sort(ps.by_x.begin(), ps.by_x.end(), [&](int a, int b) {
    return ps.points[a].x < ps.points[b].x;
  });
  std::sort(ps.by_y.begin(), ps.by_y.end(), [&](int a, int b) {
    return ps.points[a].y < ps.points[b].y;
  });
  for (int i = 0; i + 1 < n; ++i) {
    int a = ps.by_x[i], b = ps.by_x[i + 1];
    if (ps.points[a].x == ps.points[b].x)
      throw validation_error("duplicate x=" + std::to_string(ps.points[a].x) +
                             " between points " + std::to_string(a) + " and " +
                             std::to_string(b));
    int c = ps.by_y[i], d = ps.by_y[i + 1];
    if (ps.points[c].y == ps.points[d].y)
      throw validation_error("duplicate y=" + std::to_string(ps.points[c].y) +
                             " between points " + std::to_string(c) + " and " +
                             std::to_string(d));
  }
  return ps;
}

}  // namespace mer
