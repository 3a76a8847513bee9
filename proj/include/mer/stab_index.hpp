#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "mer/geometry.hpp"

namespace mer {

// Static two-level segment tree answering "largest stored rectangle
// containing q" under closed containment.  Both axes use 2m-1 elementary
// slots over the m distinct projection endpoints: even slots are the
// endpoints themselves, odd slots the open gaps between them, which makes
// closed stabbing exact without half-open tricks.
class StabIndex {
 public:
  StabIndex() = default;

  explicit StabIndex(const std::vector<Rect>& rects) {
    for (const Rect& r : rects) {
      xs_.push_back(r.x_lo);
      xs_.push_back(r.x_hi);
      ys_.push_back(r.y_lo);
      ys_.push_back(r.y_hi);
    }
    auto dedup = [](std::vector<Coord>& v) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    dedup(xs_);
    dedup(ys_);
    if (xs_.empty()) return;
    x_slots_ = 2 * static_cast<int>(xs_.size()) - 1;
    y_slots_ = 2 * static_cast<int>(ys_.size()) - 1;
    primary_.push_back(PrimaryNode{});
    for (const Rect& r : rects) {
      int a = 2 * coord_index(xs_, r.x_lo);
      int b = 2 * coord_index(xs_, r.x_hi);
      int c = 2 * coord_index(ys_, r.y_lo);
      int d = 2 * coord_index(ys_, r.y_hi);
      insert_primary(0, 0, x_slots_ - 1, a, b, c, d, r);
    }
  }

  std::optional<Rect> query(Coord qx, Coord qy) const {
    if (primary_.empty()) return std::nullopt;
    int xs = slot_of(xs_, qx);
    int ys = slot_of(ys_, qy);
    if (xs < 0 || ys < 0) return std::nullopt;
    std::optional<Rect> best;
    int node = 0, lo = 0, hi = x_slots_ - 1;
    while (true) {
      const PrimaryNode& p = primary_[node];
      if (p.secondary_root >= 0) query_secondary(p, ys, best);
      if (lo == hi) break;
      int mid = lo + (hi - lo) / 2;
      if (xs <= mid) {
        if (p.left < 0) break;
        node = p.left;
        hi = mid;
      } else {
        if (p.right < 0) break;
        node = p.right;
        lo = mid + 1;
      }
    }
    return best;
  }

  std::size_t node_count() const { return primary_.size() + secondary_.size(); }

 private:
  struct PrimaryNode {
    int left = -1;
    int right = -1;
    int secondary_root = -1;
  };
  struct SecondaryNode {
    int left = -1;
    int right = -1;
    std::optional<Rect> best;
  };

  static int coord_index(const std::vector<Coord>& grid, Coord v) {
    return static_cast<int>(
        std::lower_bound(grid.begin(), grid.end(), v) - grid.begin());
  }

  // Elementary slot containing v, or -1 when v is outside the grid's hull.
  static int slot_of(const std::vector<Coord>& grid, Coord v) {
    if (grid.empty() || v < grid.front() || v > grid.back()) return -1;
    int i = static_cast<int>(
        std::upper_bound(grid.begin(), grid.end(), v) - grid.begin() - 1);
    return grid[i] == v ? 2 * i : 2 * i + 1;
  }

  void insert_primary(int node, int lo, int hi, int a, int b, int c, int d,
                      const Rect& r) {
    if (a <= lo && hi <= b) {
      insert_secondary(primary_[node].secondary_root, 0, y_slots_ - 1, c, d, r);
      return;
    }
    int mid = lo + (hi - lo) / 2;
    if (a <= mid) {
      if (primary_[node].left < 0) {
        primary_[node].left = static_cast<int>(primary_.size());
        primary_.push_back(PrimaryNode{});
      }
      insert_primary(primary_[node].left, lo, mid, a, std::min(b, mid), c, d,
                     r);
    }
    if (b > mid) {
      if (primary_[node].right < 0) {
        primary_[node].right = static_cast<int>(primary_.size());
        primary_.push_back(PrimaryNode{});
      }
      insert_primary(primary_[node].right, mid + 1, hi, std::max(a, mid + 1),
                     b, c, d, r);
    }
  }

  void insert_secondary(int& node, int lo, int hi, int c, int d,
                        const Rect& r) {
    if (node < 0) {
      node = static_cast<int>(secondary_.size());
      secondary_.push_back(SecondaryNode{});
    }
    if (c <= lo && hi <= d) {
      auto& best = secondary_[node].best;
      if (!best || rect_better(r, *best)) best = r;
      return;
    }
    int mid = lo + (hi - lo) / 2;
    if (c <= mid) {
      int idx = node;  // secondary_ may reallocate inside the recursion
      int child = secondary_[idx].left;
      insert_secondary(child, lo, mid, c, std::min(d, mid), r);
      secondary_[idx].left = child;
    }
    if (d > mid) {
      int idx = node;
      int child = secondary_[idx].right;
      insert_secondary(child, mid + 1, hi, std::max(c, mid + 1), d, r);
      secondary_[idx].right = child;
    }
  }

  void query_secondary(const PrimaryNode& p, int ys,
                       std::optional<Rect>& best) const {
    int node = p.secondary_root, lo = 0, hi = y_slots_ - 1;
    while (node >= 0) {
      const SecondaryNode& s = secondary_[node];
      if (s.best && (!best || rect_better(*s.best, *best))) best = *s.best;
      if (lo == hi) break;
      int mid = lo + (hi - lo) / 2;
      if (ys <= mid) {
        node = s.left;
        hi = mid;
      } else {
        node = s.right;
        lo = mid + 1;
      }
    }
  }

  std::vector<Coord> xs_, ys_;
  int x_slots_ = 0;
  int y_slots_ = 0;
  std::vector<PrimaryNode> primary_;
  std::vector<SecondaryNode> secondary_;
};

inline StabIndex build_stab_index(const std::vector<Rect>& rects) {
  return StabIndex(rects);
}

inline std::optional<Rect> stab_max_area(const StabIndex& idx, Coord qx,
                                         Coord qy) {
  return idx.query(qx, qy);
}

}  // namespace mer
