#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "mer/anchored.hpp"
#include "mer/geometry.hpp"
#include "mer/monge.hpp"
#include "mer/stab_index.hpp"

namespace mer {

// The range tree works in doubled coordinates: point coordinates are even,
// splitters sit at gap midpoints and stay exact integers.  Every emitted
// rectangle is bounded by point coordinates or the sides of B, so results
// are always in original coordinates.

namespace detail {

inline Coord dbl(Coord v) { return 2 * v; }

struct MinTable {
  std::vector<std::vector<Coord>> lv;

  void build(const std::vector<Coord>& vals) {
    lv.clear();
    if (vals.empty()) return;
    lv.push_back(vals);
    for (std::size_t len = 2; len <= vals.size(); len *= 2) {
      const auto& prev = lv.back();
      std::vector<Coord> cur(vals.size() - len + 1);
      for (std::size_t i = 0; i + len <= vals.size(); ++i)
        cur[i] = std::min(prev[i], prev[i + len / 2]);
      lv.push_back(std::move(cur));
    }
  }

  Coord min(int lo, int hi) const {  // pre: lo <= hi
    int k = std::bit_width(static_cast<unsigned>(hi - lo + 1)) - 1;
    return std::min(lv[k][lo], lv[k][hi - (1 << k) + 1]);
  }
};

// Case (i), canonical orientation: three defining points strictly left of
// the vertical splitter, the fourth to its right.  For each left point p
// the top/bottom neighbours come from the sweep set (left points right of
// p), and the right edge from the nearest right point inside the y-gap.
inline void halfplane_rects(const std::vector<Point>& pts, Coord ox2,
                            Coord oy2, const XForm& t,
                            std::vector<Rect>& out) {
  std::vector<Point> left, right;
  for (const Point& p : pts)
    (dbl(p.x) < ox2 ? left : right).push_back(p);
  if (left.size() < 3 || right.empty()) return;
  std::sort(right.begin(), right.end(),
            [](const Point& a, const Point& b) { return a.y < b.y; });
  std::vector<Coord> ry, rx;
  ry.reserve(right.size());
  rx.reserve(right.size());
  for (const Point& p : right) {
    ry.push_back(p.y);
    rx.push_back(p.x);
  }
  MinTable rmin;
  rmin.build(rx);
  std::sort(left.begin(), left.end(),
            [](const Point& a, const Point& b) { return a.x > b.x; });
  std::set<Coord> ys;
  for (const Point& p : left) {
    auto up = ys.upper_bound(p.y);
    if (up != ys.end() && up != ys.begin()) {
      Coord y_t = *up, y_b = *std::prev(up);
      if (dbl(y_b) < oy2 && oy2 < dbl(y_t)) {
        int lo = static_cast<int>(
            std::upper_bound(ry.begin(), ry.end(), y_b) - ry.begin());
        int hi = static_cast<int>(
            std::lower_bound(ry.begin(), ry.end(), y_t) - ry.begin() - 1);
        if (lo <= hi) {
          Rect r = t.back(Rect{p.x, y_b, rmin.min(lo, hi), y_t});
          r.provenance = Provenance::halfplane;
          out.push_back(r);
        }
      }
    }
    ys.insert(p.y);
  }
}

// Case (ii), canonical orientation: right point in Q1, top in Q2, left in
// Q3, bottom in Q4.  Each candidate right point is chased through the other
// three quadrants with prefix/suffix extrema; the rectangle is emitted only
// when the chase closes back on the starting point.
inline void quadrant_rects(const std::vector<Point>& pts, Coord ox2,
                           Coord oy2, const XForm& t, std::vector<Rect>& out) {
  std::vector<Point> q1, q2, q3, q4;
  for (const Point& p : pts) {
    bool r = dbl(p.x) > ox2, u = dbl(p.y) > oy2;
    (r ? (u ? q1 : q4) : (u ? q2 : q3)).push_back(p);
  }
  if (q1.empty() || q2.empty() || q3.empty() || q4.empty()) return;

  auto by_x = [](const Point& a, const Point& b) { return a.x < b.x; };
  auto by_y = [](const Point& a, const Point& b) { return a.y < b.y; };
  std::sort(q1.begin(), q1.end(), by_y);
  std::sort(q2.begin(), q2.end(), by_x);
  std::sort(q3.begin(), q3.end(), by_y);
  std::sort(q4.begin(), q4.end(), by_x);

  // Q4 by x: prefix max y          (points with x < x_r)
  std::vector<Coord> q4x, q4_pref_max_y(q4.size());
  for (const Point& p : q4) q4x.push_back(p.x);
  for (std::size_t i = 0; i < q4.size(); ++i)
    q4_pref_max_y[i] = i ? std::max(q4_pref_max_y[i - 1], q4[i].y) : q4[i].y;
  // Q3 by y: suffix max x          (points with y > y_b)
  std::vector<Coord> q3y, q3_suf_max_x(q3.size());
  for (const Point& p : q3) q3y.push_back(p.y);
  for (std::size_t i = q3.size(); i-- > 0;)
    q3_suf_max_x[i] = i + 1 < q3.size() ? std::max(q3_suf_max_x[i + 1], q3[i].x)
                                        : q3[i].x;
  // Q2 by x: suffix min y          (points with x > x_l)
  std::vector<Coord> q2x, q2_suf_min_y(q2.size());
  for (const Point& p : q2) q2x.push_back(p.x);
  for (std::size_t i = q2.size(); i-- > 0;)
    q2_suf_min_y[i] = i + 1 < q2.size() ? std::min(q2_suf_min_y[i + 1], q2[i].y)
                                        : q2[i].y;
  // Q1 by y: prefix min x          (points with y < y_t)
  std::vector<Coord> q1y, q1_pref_min_x(q1.size());
  for (const Point& p : q1) q1y.push_back(p.y);
  for (std::size_t i = 0; i < q1.size(); ++i)
    q1_pref_min_x[i] = i ? std::min(q1_pref_min_x[i - 1], q1[i].x) : q1[i].x;

  for (const Point& r : q1) {
    int k4 = static_cast<int>(
        std::lower_bound(q4x.begin(), q4x.end(), r.x) - q4x.begin());
    if (k4 == 0) continue;
    Coord y_b = q4_pref_max_y[k4 - 1];
    int k3 = static_cast<int>(
        std::upper_bound(q3y.begin(), q3y.end(), y_b) - q3y.begin());
    if (k3 == static_cast<int>(q3.size())) continue;
    Coord x_l = q3_suf_max_x[k3];
    int k2 = static_cast<int>(
        std::upper_bound(q2x.begin(), q2x.end(), x_l) - q2x.begin());
    if (k2 == static_cast<int>(q2.size())) continue;
    Coord y_t = q2_suf_min_y[k2];
    int k1 = static_cast<int>(
        std::lower_bound(q1y.begin(), q1y.end(), y_t) - q1y.begin());
    if (k1 == 0) continue;
    if (q1_pref_min_x[k1 - 1] != r.x) continue;  // chase must close on r
    if (r.y <= y_b) continue;                    // r must pin the right edge
    Rect rect = t.back(Rect{x_l, y_b, r.x, y_t});
    rect.provenance = Provenance::quadrant;
    out.push_back(rect);
  }
}

struct DiagData {
  std::vector<Coord> ex, ey;  // E: x ascending, y descending
  std::vector<Coord> fx, fy;  // F: x ascending, y descending
  std::vector<ColSpan> spans;
};

}  // namespace detail

// One orientation of the §3.3 diagonal structure: E = maximal points of the
// third quadrant, F = minimal points of the first, rows = consecutive
// E-pairs, columns = consecutive F-pairs, entries = rectangle areas.  The
// mirror orientation reuses this through an x-reflection.
class DiagonalStructure {
 public:
  DiagonalStructure() = default;

  void build(const std::vector<Point>& pts, Coord ox2, Coord oy2,
             const detail::XForm& xf,
             std::shared_ptr<std::atomic<std::uint64_t>> counter) {
    xf_ = xf;
    std::vector<Point> q1, q2, q3, q4;
    for (const Point& raw : pts) {
      Point p = xf.fwd(raw);
      bool r = detail::dbl(p.x) > ox2, u = detail::dbl(p.y) > oy2;
      (r ? (u ? q1 : q4) : (u ? q2 : q3)).push_back(p);
    }
    if (q3.size() < 2 || q1.size() < 2) return;
    auto by_x = [](const Point& a, const Point& b) { return a.x < b.x; };
    std::sort(q3.begin(), q3.end(), by_x);
    std::sort(q1.begin(), q1.end(), by_x);

    data_ = std::make_shared<detail::DiagData>();
    auto& d = *data_;
    {  // E: maximal points of Q3 (no dominator up-right), x asc / y desc
      Coord best = std::numeric_limits<Coord>::min();
      std::vector<std::size_t> keep;
      for (std::size_t i = q3.size(); i-- > 0;)
        if (q3[i].y > best) {
          keep.push_back(i);
          best = q3[i].y;
        }
      for (auto it = keep.rbegin(); it != keep.rend(); ++it) {
        d.ex.push_back(q3[*it].x);
        d.ey.push_back(q3[*it].y);
      }
    }
    {  // F: minimal points of Q1 (no dominator down-left), x asc / y desc
      Coord best = std::numeric_limits<Coord>::max();
      for (const Point& p : q1)
        if (p.y < best) {
          d.fx.push_back(p.x);
          d.fy.push_back(p.y);
          best = p.y;
        }
    }
    nrows_ = static_cast<int>(d.ex.size()) - 1;
    ncols_ = static_cast<int>(d.fx.size()) - 1;
    if (nrows_ < 1 || ncols_ < 1) {
      data_.reset();
      return;
    }

    // delimiters: c = lowest Q2 point right of a, d = leftmost Q4 point
    // above b; a missing delimiter leaves that side of I_rho unbounded
    std::sort(q2.begin(), q2.end(), by_x);
    std::sort(q4.begin(), q4.end(),
              [](const Point& a, const Point& b) { return a.y < b.y; });
    std::vector<Coord> q2x, q2_suf_min_y(q2.size());
    for (const Point& p : q2) q2x.push_back(p.x);
    for (std::size_t i = q2.size(); i-- > 0;)
      q2_suf_min_y[i] = i + 1 < q2.size()
                            ? std::min(q2_suf_min_y[i + 1], q2[i].y)
                            : q2[i].y;
    std::vector<Coord> q4y, q4_suf_min_x(q4.size());
    for (const Point& p : q4) q4y.push_back(p.y);
    for (std::size_t i = q4.size(); i-- > 0;)
      q4_suf_min_x[i] = i + 1 < q4.size()
                            ? std::min(q4_suf_min_x[i + 1], q4[i].x)
                            : q4[i].x;

    d.spans.resize(nrows_);
    bool any = false;
    for (int r = 0; r < nrows_; ++r) {
      int lo = 0, hi = static_cast<int>(d.fx.size()) - 1;
      int k2 = static_cast<int>(
          std::upper_bound(q2x.begin(), q2x.end(), d.ex[r]) - q2x.begin());
      if (k2 < static_cast<int>(q2.size())) {
        Coord y_c = q2_suf_min_y[k2];
        // first F index with y < y_c (fy is descending)
        lo = static_cast<int>(std::partition_point(
                                  d.fy.begin(), d.fy.end(),
                                  [y_c](Coord y) { return y >= y_c; }) -
                              d.fy.begin());
      }
      int k4 = static_cast<int>(
          std::upper_bound(q4y.begin(), q4y.end(), d.ey[r + 1]) - q4y.begin());
      if (k4 < static_cast<int>(q4.size())) {
        Coord x_d = q4_suf_min_x[k4];
        // last F index with x < x_d (fx is ascending)
        hi = static_cast<int>(std::partition_point(
                                  d.fx.begin(), d.fx.end(),
                                  [x_d](Coord x) { return x < x_d; }) -
                              d.fx.begin()) -
             1;
      }
      d.spans[r] = ColSpan{lo, hi - 1};
      if (lo <= hi - 1) any = true;
    }
    if (!any) {
      data_.reset();
      return;
    }

    // Entry values carry a separable tie term so that value order inside
    // this matrix matches the global rectangle comparator exactly; being
    // separable (alpha*row + beta*col) it preserves inverse Monge.  At
    // extreme coordinate scales where the composite would overflow, plain
    // areas are used instead.
    tie_scale_ = std::max<Value>(1, static_cast<Value>(nrows_) * ncols_);
    Value amax = (d.fx.back() - d.ex.front()) * (d.fy.front() - d.ey.back());
    if (amax > std::numeric_limits<Value>::max() / 4 / tie_scale_)
      tie_scale_ = 1;
    auto data = data_;
    const Value k = tie_scale_;
    const bool mirrored = xf.negx;
    const int nr = nrows_, nc = ncols_;
    MatrixOracle oracle(
        nrows_, ncols_, [data](int r) { return data->spans[r]; },
        [data, k, mirrored, nr, nc](int r, int c) {
          Value a = (data->fx[c + 1] - data->ex[r]) *
                    (data->fy[c] - data->ey[r + 1]);
          if (k == 1) return a;
          Value tie = mirrored ? k - 1 - (static_cast<Value>(c) * nr + r)
                               : static_cast<Value>(r) * nc + c;
          return a * k + tie;
        },
        std::move(counter));
    sms_ = SubmatrixMaxStructure(std::move(oracle));
    active_ = true;
  }

  bool active() const { return active_; }
  int nrows() const { return nrows_; }
  int ncols() const { return ncols_; }
  const SubmatrixMaxStructure& structure() const { return sms_; }
  // strips the tie term off a stored matrix value
  Area area_of(Value v) const { return v / tie_scale_; }

  Rect rect_at(int row, int col) const {
    const auto& d = *data_;
    Rect r = xf_.back(
        Rect{d.ex[row], d.ey[row + 1], d.fx[col + 1], d.fy[col]});
    r.provenance = Provenance::diagonal;
    return r;
  }

  bool defined(int row, int col) const {
    if (!active_ || row < 0 || row >= nrows_) return false;
    return data_->spans[row].lo <= col && col <= data_->spans[row].hi;
  }

  // Best defined entry whose rectangle contains q; the containment
  // conditions reduce to one contiguous row interval times one contiguous
  // column interval, so a single submatrix query answers it.
  std::optional<Rect> query(Coord qx_in, Coord qy_in,
                            QueryWork* w = nullptr) const {
    if (!active_) return std::nullopt;
    Point q = xf_.fwd(Point{qx_in, qy_in});
    const auto& d = *data_;
    if (w) w->steps += 4;
    // rows: x_a <= q.x and y_b <= q.y
    int rx = static_cast<int>(std::partition_point(
                                  d.ex.begin(), d.ex.end(),
                                  [&](Coord x) { return x <= q.x; }) -
                              d.ex.begin()) -
             1;
    int ey = static_cast<int>(std::partition_point(
                                  d.ey.begin(), d.ey.end(),
                                  [&](Coord y) { return y > q.y; }) -
                              d.ey.begin());
    // cols: y_w >= q.y and x_z >= q.x
    int fx = static_cast<int>(std::partition_point(
                                  d.fx.begin(), d.fx.end(),
                                  [&](Coord x) { return x < q.x; }) -
                              d.fx.begin());
    int ly = static_cast<int>(std::partition_point(
                                  d.fy.begin(), d.fy.end(),
                                  [&](Coord y) { return y >= q.y; }) -
                              d.fy.begin()) -
             1;
    int r1 = std::max(0, ey - 1), r2 = std::min(nrows_ - 1, rx);
    int c1 = std::max(0, fx - 1), c2 = std::min(ncols_ - 1, ly);
    if (r1 > r2 || c1 > c2) return std::nullopt;
    auto cell = sms_.submatrix_max(r1, r2, c1, c2, w);
    if (!cell) return std::nullopt;
    return rect_at(cell->row, cell->col);
  }

  std::size_t stored_cells() const {
    if (!active_) return 0;
    return sms_.stored_cells() + data_->ex.size() + data_->fx.size() +
           data_->spans.size();
  }

 private:
  bool active_ = false;
  detail::XForm xf_;
  int nrows_ = 0;
  int ncols_ = 0;
  Value tie_scale_ = 1;
  std::shared_ptr<detail::DiagData> data_;
  SubmatrixMaxStructure sms_;
};

// One internal-primary x internal-secondary node pair: origin, local box
// (doubled coordinates), local point set, the case (i)/(ii) rectangles and
// the two diagonal orientations.
struct Subproblem {
  Coord ox2 = 0, oy2 = 0;
  Rect box2;  // doubled coordinates
  std::vector<Point> pts;
  std::vector<Rect> case_rects;
  DiagonalStructure diag[2];

  std::optional<Rect> query_diagonals(Coord qx, Coord qy,
                                      QueryWork* w = nullptr) const {
    std::optional<Rect> best;
    for (const DiagonalStructure& ds : diag)
      if (auto r = ds.query(qx, qy, w))
        if (!best || rect_better(*r, *best)) best = *r;
    return best;
  }
};

struct BuildStats {
  std::uint64_t entry_evals = 0;
  std::size_t stored_cells = 0;
  std::size_t stab_rects = 0;
  std::size_t subproblem_count = 0;
  std::size_t tree_nodes = 0;
};

struct QueryResult {
  Rect rect;
  std::uint64_t work_units = 0;
  std::uint64_t entry_evals = 0;
  std::size_t visited_nodes = 0;
};

class Index {
 public:
  explicit Index(PointSet ps) : ps_(std::move(ps)) { build(); }

  const PointSet& point_set() const { return ps_; }
  const BuildStats& stats() const { return stats_; }
  const std::vector<Subproblem>& subproblems() const { return subs_; }
  const StabIndex& stab() const { return stab_; }

  QueryResult query(Coord qx, Coord qy) const {
    if (!contains_point(ps_.bounds, qx, qy))
      throw domain_error("query point lies outside the bounding box");
    QueryWork w;
    std::size_t visited = 0;
    std::optional<Rect> best = stab_.query(qx, qy);
    Coord qx2 = detail::dbl(qx), qy2 = detail::dbl(qy);
    int u = prim_root_;
    while (u >= 0) {
      const PrimNode& pn = prim_[u];
      int v = pn.sec_root;
      while (v >= 0) {
        const SecNode& sn = sec_[v];
        ++visited;
        if (auto r = subs_[sn.sub].query_diagonals(qx, qy, &w))
          if (!best || rect_better(*r, *best)) best = *r;
        v = qy2 < sn.ly2 ? sn.left : sn.right;
      }
      u = qx2 < pn.lx2 ? pn.left : pn.right;
    }
    // anchored full-width strips cover every q, so best always exists
    QueryResult res;
    res.rect = *best;
    res.entry_evals = w.entry_evals;
    res.visited_nodes = visited;
    res.work_units = w.entry_evals + w.steps + visited;
    return res;
  }

 private:
  struct PrimNode {
    Coord lx2 = 0;
    int left = -1, right = -1, sec_root = -1;
  };
  struct SecNode {
    Coord ly2 = 0;
    int left = -1, right = -1, sub = -1;
  };

  void build() {
    counter_ = std::make_shared<std::atomic<std::uint64_t>>(0);
    std::vector<Rect> pool = compute_anchored(ps_);
    std::set<std::array<Coord, 4>> seen;
    for (const Rect& r : pool) seen.insert(rect_coords(r));

    if (ps_.size() >= 2) {
      std::vector<Point> by_x;
      by_x.reserve(ps_.points.size());
      for (int i : ps_.by_x) by_x.push_back(ps_.points[i]);
      const Rect& b = ps_.bounds;
      prim_root_ = build_prim(by_x, detail::dbl(b.x_lo), detail::dbl(b.x_hi));
    }
    for (const Subproblem& s : subs_)
      for (const Rect& r : s.case_rects)
        if (seen.insert(rect_coords(r)).second) pool.push_back(r);

    stab_ = StabIndex(pool);
    stats_.entry_evals = counter_->load();
    stats_.stab_rects = pool.size();
    stats_.subproblem_count = subs_.size();
    stats_.tree_nodes = prim_.size() + sec_.size();
    stats_.stored_cells = stab_.node_count() + prim_.size() + sec_.size();
    for (const Subproblem& s : subs_) {
      stats_.stored_cells += s.pts.size();
      for (const DiagonalStructure& ds : s.diag)
        stats_.stored_cells += ds.stored_cells();
    }
  }

  int build_prim(const std::vector<Point>& by_x, Coord sx_lo2, Coord sx_hi2) {
    if (by_x.size() < 2) return -1;
    std::size_t h = by_x.size() / 2;
    int idx = static_cast<int>(prim_.size());
    prim_.push_back(PrimNode{});
    Coord lx2 = by_x[h - 1].x + by_x[h].x;
    prim_[idx].lx2 = lx2;

    std::vector<Point> by_y(by_x);
    std::sort(by_y.begin(), by_y.end(),
              [](const Point& a, const Point& b) { return a.y < b.y; });
    const Rect& b = ps_.bounds;
    int sec = build_sec(by_y, lx2, sx_lo2, sx_hi2, detail::dbl(b.y_lo),
                        detail::dbl(b.y_hi));
    prim_[idx].sec_root = sec;

    std::vector<Point> lo(by_x.begin(), by_x.begin() + h);
    std::vector<Point> hi(by_x.begin() + h, by_x.end());
    int l = build_prim(lo, sx_lo2, lx2);
    int r = build_prim(hi, lx2, sx_hi2);
    prim_[idx].left = l;
    prim_[idx].right = r;
    return idx;
  }

  int build_sec(const std::vector<Point>& by_y, Coord lx2, Coord sx_lo2,
                Coord sx_hi2, Coord sy_lo2, Coord sy_hi2) {
    if (by_y.size() < 2) return -1;
    std::size_t h = by_y.size() / 2;
    int idx = static_cast<int>(sec_.size());
    sec_.push_back(SecNode{});
    Coord ly2 = by_y[h - 1].y + by_y[h].y;
    sec_[idx].ly2 = ly2;
    sec_[idx].sub = static_cast<int>(subs_.size());

    Subproblem sub;
    sub.ox2 = lx2;
    sub.oy2 = ly2;
    sub.box2 = Rect{sx_lo2, sy_lo2, sx_hi2, sy_hi2};
    sub.pts = by_y;
    // case (i): one orientation per halfplane
    for (const detail::XForm& t :
         {detail::XForm{false, false, false}, detail::XForm{false, true, false},
          detail::XForm{true, false, false}, detail::XForm{true, true, false}}) {
      std::vector<Point> pts;
      pts.reserve(by_y.size());
      for (const Point& p : by_y) pts.push_back(t.fwd(p));
      Point o = t.fwd(Point{lx2, ly2});
      detail::halfplane_rects(pts, o.x, o.y, t, sub.case_rects);
    }
    // case (ii): both cyclic orientations
    for (const detail::XForm& t :
         {detail::XForm{false, false, false},
          detail::XForm{false, false, true}}) {
      std::vector<Point> pts;
      pts.reserve(by_y.size());
      for (const Point& p : by_y) pts.push_back(t.fwd(p));
      Point o = t.fwd(Point{lx2, ly2});
      detail::quadrant_rects(pts, o.x, o.y, t, sub.case_rects);
    }
    // diagonal structures, Q3/Q1 and (x-reflected) Q2/Q4
    detail::XForm id{false, false, false}, mirror{false, true, false};
    sub.diag[0].build(by_y, lx2, ly2, id, counter_);
    Point mo = mirror.fwd(Point{lx2, ly2});
    sub.diag[1].build(by_y, mo.x, mo.y, mirror, counter_);
    subs_.push_back(std::move(sub));

    std::vector<Point> lo(by_y.begin(), by_y.begin() + h);
    std::vector<Point> hi(by_y.begin() + h, by_y.end());
    int l = build_sec(lo, lx2, sx_lo2, sx_hi2, sy_lo2, ly2);
    int r = build_sec(hi, lx2, sx_lo2, sx_hi2, ly2, sy_hi2);
    sec_[idx].left = l;
    sec_[idx].right = r;
    return idx;
  }

  PointSet ps_;
  std::shared_ptr<std::atomic<std::uint64_t>> counter_;
  std::vector<PrimNode> prim_;
  std::vector<SecNode> sec_;
  std::vector<Subproblem> subs_;
  StabIndex stab_;
  BuildStats stats_;
  int prim_root_ = -1;
};

inline Index preprocess(PointSet ps) { return Index(std::move(ps)); }

}  // namespace mer
