#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mer/geometry.hpp"  // for domain_error

namespace mer {

using Value = std::int64_t;

// Per-query work accounting; kept query-local so that concurrent readers of
// an immutable structure do not contend.
struct QueryWork {
  std::uint64_t entry_evals = 0;
  std::uint64_t steps = 0;
  std::uint64_t total() const { return entry_evals + steps; }
};

// Contiguous interval of defined columns of one row.  lo > hi means the row
// has no defined entry.
struct ColSpan {
  int lo = 0;
  int hi = -1;
  bool empty() const { return lo > hi; }
  int width() const { return empty() ? 0 : hi - lo + 1; }
};

// Lazily evaluated partial matrix.  Rows have contiguous defined column
// spans (staircase rows); "undefined" is expressed through the spans, never
// through sentinel values.  Every evaluation bumps a shared counter.
class MatrixOracle {
 public:
  using EntryFn = std::function<Value(int, int)>;
  using SpanFn = std::function<ColSpan(int)>;

  MatrixOracle() = default;
  MatrixOracle(int nrows, int ncols, SpanFn span, EntryFn entry,
               std::shared_ptr<std::atomic<std::uint64_t>> counter = nullptr)
      : nrows_(nrows),
        ncols_(ncols),
        span_(std::move(span)),
        entry_(std::move(entry)),
        counter_(counter ? std::move(counter)
                         : std::make_shared<std::atomic<std::uint64_t>>(0)) {}

  static MatrixOracle full(int nrows, int ncols, EntryFn entry,
                           std::shared_ptr<std::atomic<std::uint64_t>> counter =
                               nullptr) {
    int hi = ncols - 1;
    return MatrixOracle(
        nrows, ncols, [hi](int) { return ColSpan{0, hi}; }, std::move(entry),
        std::move(counter));
  }

  int nrows() const { return nrows_; }
  int ncols() const { return ncols_; }
  ColSpan row_span(int r) const { return span_(r); }
  bool defined(int r, int c) const {
    if (r < 0 || r >= nrows_ || c < 0 || c >= ncols_) return false;
    ColSpan s = span_(r);
    return s.lo <= c && c <= s.hi;
  }

  // Caller guarantees definedness; counts one evaluation.
  Value at(int r, int c, QueryWork* w = nullptr) const {
    counter_->fetch_add(1, std::memory_order_relaxed);
    if (w) ++w->entry_evals;
    return entry_(r, c);
  }

  std::optional<Value> entry(int r, int c, QueryWork* w = nullptr) const {
    if (!defined(r, c)) return std::nullopt;
    return at(r, c, w);
  }

  std::uint64_t eval_count() const {
    return counter_->load(std::memory_order_relaxed);
  }
  std::shared_ptr<std::atomic<std::uint64_t>> counter() const {
    return counter_;
  }

  // Transposed view (shares the evaluation counter).  Requires the defined
  // region of each column to be contiguous (double staircase).  Column spans
  // are derived from the row spans with a first/last-touch paint sweep.
  MatrixOracle transposed() const {
    auto lo = std::make_shared<std::vector<int>>(ncols_, 0);
    auto hi = std::make_shared<std::vector<int>>(ncols_, -1);
    paint_col_spans(*lo, *hi);
    EntryFn e = entry_;
    return MatrixOracle(
        ncols_, nrows_,
        [lo, hi](int c) { return ColSpan{(*lo)[c], (*hi)[c]}; },
        [e](int c, int r) { return e(r, c); }, counter_);
  }

 private:
  void paint_col_spans(std::vector<int>& lo, std::vector<int>& hi) const {
    // next[c]: first column >= c not yet painted
    std::vector<int> next(ncols_ + 1);
    auto reset = [&] {
      for (int c = 0; c <= ncols_; ++c) next[c] = c;
    };
    auto find = [&](auto&& self, int c) -> int {
      return next[c] == c ? c : next[c] = self(self, next[c]);
    };
    reset();
    for (int r = 0; r < nrows_; ++r) {
      ColSpan s = span_(r);
      int a = std::max(s.lo, 0), b = std::min(s.hi, ncols_ - 1);
      for (int c = a > b ? b + 1 : find(find, a); c <= b; c = find(find, c)) {
        lo[c] = r;
        next[c] = c + 1;
      }
    }
    reset();
    for (int r = nrows_ - 1; r >= 0; --r) {
      ColSpan s = span_(r);
      int a = std::max(s.lo, 0), b = std::min(s.hi, ncols_ - 1);
      for (int c = a > b ? b + 1 : find(find, a); c <= b; c = find(find, c)) {
        hi[c] = r;
        next[c] = c + 1;
      }
    }
  }

  int nrows_ = 0;
  int ncols_ = 0;
  SpanFn span_;
  EntryFn entry_;
  std::shared_ptr<std::atomic<std::uint64_t>> counter_;
};

// Total order across rows: larger value wins, ties go to the smaller row id.
inline bool value_beats(Value va, int ra, Value vb, int rb) {
  return va > vb || (va == vb && ra < rb);
}

struct RowMax {
  int col = -1;
  Value value = 0;
};

// ---------------------------------------------------------------------------
// SMAWK row maxima for fully defined totally monotone matrices.

namespace detail {

inline void smawk_rec(const MatrixOracle& m, const std::vector<int>& rows,
                      const std::vector<int>& cols, std::vector<RowMax>& out) {
  if (rows.empty()) return;
  // reduce: keep at most |rows| candidate columns
  std::vector<int> surv;
  surv.reserve(rows.size());
  for (int c : cols) {
    while (!surv.empty()) {
      int r = rows[surv.size() - 1];
      if (m.at(r, c) > m.at(r, surv.back()))
        surv.pop_back();
      else
        break;
    }
    if (surv.size() < rows.size()) surv.push_back(c);
  }
  if (rows.size() > 1) {
    std::vector<int> odd;
    for (std::size_t i = 1; i < rows.size(); i += 2) odd.push_back(rows[i]);
    smawk_rec(m, odd, surv, out);
  }
  // interpolate even rows between their neighbours' argmax columns
  std::size_t lo_idx = 0;
  for (std::size_t i = 0; i < rows.size(); i += 2) {
    int r = rows[i];
    int hi_col = (i + 1 < rows.size()) ? out[rows[i + 1]].col : surv.back();
    RowMax best{surv[lo_idx], m.at(r, surv[lo_idx])};
    std::size_t j = lo_idx;
    while (surv[j] != hi_col) {
      ++j;
      Value v = m.at(r, surv[j]);
      if (v > best.value) best = RowMax{surv[j], v};
    }
    out[r] = best;
    lo_idx = j;
  }
}

}  // namespace detail

// Leftmost row maxima of a fully defined totally monotone matrix in
// O(m + n) evaluations.  Violated preconditions give an unspecified argmax
// but never crash.
inline std::vector<RowMax> smawk_row_maxima(const MatrixOracle& m) {
  if (m.nrows() == 0 || m.ncols() == 0)
    throw domain_error("smawk_row_maxima: empty matrix");
  std::vector<int> rows(m.nrows()), cols(m.ncols());
  for (int i = 0; i < m.nrows(); ++i) rows[i] = i;
  for (int j = 0; j < m.ncols(); ++j) cols[j] = j;
  std::vector<RowMax> out(m.nrows());
  detail::smawk_rec(m, rows, cols, out);
  return out;
}

// ---------------------------------------------------------------------------
// Upper envelopes of the rows of a partial inverse Monge matrix.

enum class CrossKind { crossing, no_crossing, disjoint };

struct CrossResult {
  CrossKind kind = CrossKind::no_crossing;
  int col = -1;  // first column at which row_b wins, when kind == crossing
};

// First column in [lo, hi] where the later row beats the earlier row under
// the value-then-row-id order.  Both rows must be defined throughout the
// overlap; the single-crossing property makes the predicate monotone, so a
// binary search suffices.
inline CrossResult cross_column(const MatrixOracle& m, int row_a, int row_b,
                                int lo, int hi, QueryWork* w = nullptr) {
  if (lo > hi) return CrossResult{CrossKind::disjoint, -1};
  auto b_wins = [&](int c) { return m.at(row_b, c, w) > m.at(row_a, c, w); };
  if (!b_wins(hi)) return CrossResult{CrossKind::no_crossing, -1};
  int a = lo, b = hi;  // invariant: b_wins(b), !b_wins(a-1)
  while (a < b) {
    int mid = a + (b - a) / 2;
    if (b_wins(mid))
      b = mid;
    else
      a = mid + 1;
  }
  return CrossResult{CrossKind::crossing, a};
}

struct EnvelopeBlock {
  int col_lo = 0;
  int col_hi = -1;
  int row = -1;
};

// Compact upper envelope: only breakpoints are stored, never per-column
// values.
struct Envelope {
  std::vector<EnvelopeBlock> blocks;

  bool empty() const { return blocks.empty(); }

  // Index of the block containing col, or -1.
  int find_block(int col, QueryWork* w = nullptr) const {
    if (w) ++w->steps;
    auto it = std::partition_point(
        blocks.begin(), blocks.end(),
        [col](const EnvelopeBlock& b) { return b.col_hi < col; });
    if (it == blocks.end() || it->col_lo > col) return -1;
    return static_cast<int>(it - blocks.begin());
  }

  int row_at(int col, QueryWork* w = nullptr) const {
    int i = find_block(col, w);
    return i < 0 ? -1 : blocks[i].row;
  }
};

inline Envelope single_row_envelope(const MatrixOracle& m, int r) {
  Envelope e;
  ColSpan s = m.row_span(r);
  if (!s.empty()) e.blocks.push_back(EnvelopeBlock{s.lo, s.hi, r});
  return e;
}

// Upper envelope of the union of two envelopes whose row sets are disjoint
// (one set entirely preceding the other).  Works segment by segment between
// block boundaries; inside a segment both candidates are defined throughout,
// so one cross_column binary search resolves it.
inline Envelope merge_envelopes(const MatrixOracle& m, const Envelope& a,
                                const Envelope& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  std::vector<int> cuts;
  cuts.reserve(2 * (a.blocks.size() + b.blocks.size()));
  for (const Envelope* e : {&a, &b})
    for (const EnvelopeBlock& blk : e->blocks) {
      cuts.push_back(blk.col_lo);
      cuts.push_back(blk.col_hi + 1);
    }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  Envelope out;
  auto append = [&out](int lo, int hi, int row) {
    if (lo > hi) return;
    if (!out.blocks.empty() && out.blocks.back().row == row &&
        out.blocks.back().col_hi + 1 == lo) {
      out.blocks.back().col_hi = hi;
      return;
    }
    out.blocks.push_back(EnvelopeBlock{lo, hi, row});
  };

  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    int lo = cuts[i], hi = cuts[i + 1] - 1;
    int ra = a.row_at(lo), rb = b.row_at(lo);
    if (ra < 0 && rb < 0) continue;
    if (rb < 0) {
      append(lo, hi, ra);
      continue;
    }
    if (ra < 0) {
      append(lo, hi, rb);
      continue;
    }
    int r_early = std::min(ra, rb), r_late = std::max(ra, rb);
    CrossResult cr = cross_column(m, r_early, r_late, lo, hi);
    if (cr.kind == CrossKind::crossing) {
      append(lo, cr.col - 1, r_early);
      append(cr.col, hi, r_late);
    } else {
      append(lo, hi, r_early);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Balanced tree of envelopes over a contiguous range of rows.

struct EnvelopeTreeNode {
  int row_lo = 0;
  int row_hi = -1;
  int left = -1;
  int right = -1;
  Envelope env;
};

class EnvelopeTree {
 public:
  EnvelopeTree() = default;

  explicit EnvelopeTree(const MatrixOracle& m) {
    if (m.nrows() > 0) {
      nodes_.reserve(2 * static_cast<std::size_t>(m.nrows()));
      root_ = build(m, 0, m.nrows() - 1);
    }
  }

  bool empty() const { return root_ < 0; }
  const std::vector<EnvelopeTreeNode>& nodes() const { return nodes_; }
  const Envelope& root_envelope() const {
    static const Envelope kEmpty;
    return root_ < 0 ? kEmpty : nodes_[root_].env;
  }

  // Canonical decomposition of the row interval [lo, hi].
  template <typename F>
  void canonical(int lo, int hi, F&& f, QueryWork* w = nullptr) const {
    if (root_ >= 0 && lo <= hi) canonical_rec(root_, lo, hi, f, w);
  }

  std::size_t total_blocks() const {
    std::size_t s = 0;
    for (const auto& n : nodes_) s += n.env.blocks.size();
    return s;
  }

 private:
  int build(const MatrixOracle& m, int lo, int hi) {
    int idx = static_cast<int>(nodes_.size());
    nodes_.push_back(EnvelopeTreeNode{lo, hi, -1, -1, {}});
    if (lo == hi) {
      nodes_[idx].env = single_row_envelope(m, lo);
      return idx;
    }
    int mid = lo + (hi - lo) / 2;
    int l = build(m, lo, mid);
    int r = build(m, mid + 1, hi);
    nodes_[idx].left = l;
    nodes_[idx].right = r;
    nodes_[idx].env = merge_envelopes(m, nodes_[l].env, nodes_[r].env);
    return idx;
  }

  template <typename F>
  void canonical_rec(int idx, int lo, int hi, F&& f, QueryWork* w) const {
    const EnvelopeTreeNode& n = nodes_[idx];
    if (w) ++w->steps;
    if (hi < n.row_lo || n.row_hi < lo) return;
    if (lo <= n.row_lo && n.row_hi <= hi) {
      f(idx);
      return;
    }
    canonical_rec(n.left, lo, hi, f, w);
    canonical_rec(n.right, lo, hi, f, w);
  }

  std::vector<EnvelopeTreeNode> nodes_;
  int root_ = -1;
};

// Root envelope of the tree; the per-column maxima in compact block form.
inline const Envelope& column_maxima(const EnvelopeTree& t) {
  return t.root_envelope();
}

inline std::optional<RowMax> column_max_at(const MatrixOracle& m,
                                           const Envelope& env, int col,
                                           QueryWork* w = nullptr) {
  int r = env.row_at(col, w);
  if (r < 0) return std::nullopt;
  return RowMax{col, m.at(r, col, w)};
}

// ---------------------------------------------------------------------------
// Row-interval / prefix / contiguous-submatrix maxima over a double
// staircase inverse Monge matrix.

struct CellRef {
  Value value = 0;
  int row = -1;
  int col = -1;
};

inline bool cell_better(const CellRef& a, const CellRef& b) {
  if (a.value != b.value) return a.value > b.value;
  if (a.row != b.row) return a.row < b.row;
  return a.col < b.col;
}

inline void cell_merge(std::optional<CellRef>& best, const CellRef& cand) {
  if (!best || cell_better(cand, *best)) best = cand;
}

class SubmatrixMaxStructure {
 public:
  SubmatrixMaxStructure() = default;

  explicit SubmatrixMaxStructure(MatrixOracle m)
      : m_(std::move(m)), mt_(m_.transposed()), col_tree_(mt_), row_tree_(m_) {
    // fill block maxima, prefix maxima and the block range-max tables for
    // every row-tree node, using the transposed envelope tree as the
    // black-box row-interval routine
    aux_.resize(row_tree_.nodes().size());
    for (std::size_t i = 0; i < row_tree_.nodes().size(); ++i) {
      const Envelope& env = row_tree_.nodes()[i].env;
      NodeAux& aux = aux_[i];
      aux.block_max.reserve(env.blocks.size());
      for (const EnvelopeBlock& blk : env.blocks) {
        auto bm = row_range_max(blk.row, blk.col_lo, blk.col_hi);
        aux.block_max.push_back(*bm);  // blocks are inside the row's span
      }
      aux.prefix = aux.block_max;
      for (std::size_t j = 1; j < aux.prefix.size(); ++j)
        if (cell_better(aux.prefix[j - 1], aux.prefix[j]))
          aux.prefix[j] = aux.prefix[j - 1];
      build_sparse(aux);
    }
  }

  const MatrixOracle& oracle() const { return m_; }
  const EnvelopeTree& row_tree() const { return row_tree_; }
  const EnvelopeTree& col_tree() const { return col_tree_; }

  // max over the defined entries of row `row` within columns [c1, c2];
  // nullopt when the interval misses the row's span entirely.
  std::optional<CellRef> row_range_max(int row, int c1, int c2,
                                       QueryWork* w = nullptr) const {
    ColSpan s = m_.row_span(row);
    c1 = std::max(c1, s.lo);
    c2 = std::min(c2, s.hi);
    if (s.empty() || c1 > c2) return std::nullopt;
    std::optional<CellRef> best;
    col_tree_.canonical(
        c1, c2,
        [&](int idx) {
          const Envelope& env = col_tree_.nodes()[idx].env;
          int b = env.find_block(row, w);
          if (b < 0) return;
          int col = env.blocks[b].row;  // a row of A^t is a column of A
          cell_merge(best, CellRef{m_.at(row, col, w), row, col});
        },
        w);
    return best;
  }

  // max over defined entries with row <= row_max and column <= col_max.
  std::optional<CellRef> prefix_max(int row_max, int col_max,
                                    QueryWork* w = nullptr) const {
    return submatrix_max(0, row_max, 0, col_max, w);
  }

  // max over the defined entries of the contiguous submatrix
  // [r1, r2] x [c1, c2].
  std::optional<CellRef> submatrix_max(int r1, int r2, int c1, int c2,
                                       QueryWork* w = nullptr) const {
    r1 = std::max(r1, 0);
    r2 = std::min(r2, m_.nrows() - 1);
    c1 = std::max(c1, 0);
    c2 = std::min(c2, m_.ncols() - 1);
    if (r1 > r2 || c1 > c2) return std::nullopt;
    std::optional<CellRef> best;
    row_tree_.canonical(
        r1, r2, [&](int idx) { node_range_max(idx, c1, c2, best, w); }, w);
    return best;
  }

  std::size_t stored_cells() const {
    std::size_t s = row_tree_.total_blocks() + col_tree_.total_blocks();
    for (const NodeAux& a : aux_) {
      s += a.block_max.size() + a.prefix.size();
      for (const auto& lvl : a.sparse) s += lvl.size();
    }
    return s;
  }

 private:
  struct NodeAux {
    std::vector<CellRef> block_max;
    std::vector<CellRef> prefix;  // cumulative maxima over block prefixes
    std::vector<std::vector<int>> sparse;  // range max over block indices
  };

  void build_sparse(NodeAux& aux) {
    std::size_t n = aux.block_max.size();
    if (n == 0) return;
    aux.sparse.emplace_back(n);
    for (std::size_t i = 0; i < n; ++i) aux.sparse[0][i] = static_cast<int>(i);
    for (std::size_t len = 2; len <= n; len *= 2) {
      const auto& prev = aux.sparse.back();
      std::vector<int> cur(n - len + 1);
      for (std::size_t i = 0; i + len <= n; ++i) {
        int x = prev[i], y = prev[i + len / 2];
        cur[i] = cell_better(aux.block_max[y], aux.block_max[x]) ? y : x;
      }
      aux.sparse.push_back(std::move(cur));
    }
  }

  // best full block in the block index interval [i, j]
  const CellRef& block_rmq(const NodeAux& aux, int i, int j) const {
    int k = std::bit_width(static_cast<unsigned>(j - i + 1)) - 1;
    int x = aux.sparse[k][i], y = aux.sparse[k][j - (1 << k) + 1];
    return cell_better(aux.block_max[y], aux.block_max[x]) ? aux.block_max[y]
                                                           : aux.block_max[x];
  }

  void node_range_max(int idx, int c1, int c2, std::optional<CellRef>& best,
                      QueryWork* w) const {
    const Envelope& env = row_tree_.nodes()[idx].env;
    const NodeAux& aux = aux_[idx];
    const auto& blocks = env.blocks;
    if (blocks.empty()) return;
    if (w) ++w->steps;
    auto first = std::partition_point(
        blocks.begin(), blocks.end(),
        [c1](const EnvelopeBlock& b) { return b.col_hi < c1; });
    auto last = std::partition_point(
        blocks.begin(), blocks.end(),
        [c2](const EnvelopeBlock& b) { return b.col_lo <= c2; });
    int i = static_cast<int>(first - blocks.begin());
    int j = static_cast<int>(last - blocks.begin()) - 1;
    if (i > j) return;
    auto resolve = [&](int k) {
      const EnvelopeBlock& blk = blocks[k];
      if (c1 <= blk.col_lo && blk.col_hi <= c2) {
        cell_merge(best, aux.block_max[k]);
      } else if (auto part =
                     row_range_max(blk.row, std::max(blk.col_lo, c1),
                                   std::min(blk.col_hi, c2), w)) {
        cell_merge(best, *part);
      }
    };
    resolve(i);
    if (j > i) resolve(j);
    if (j - i >= 2) cell_merge(best, block_rmq(aux, i + 1, j - 1));
  }

  MatrixOracle m_;
  MatrixOracle mt_;
  EnvelopeTree col_tree_;  // over columns (rows of the transpose)
  EnvelopeTree row_tree_;
  std::vector<NodeAux> aux_;
};

inline SubmatrixMaxStructure build_submatrix_structure(MatrixOracle m) {
  return SubmatrixMaxStructure(std::move(m));
}

// ---------------------------------------------------------------------------
// Row maxima of a staircase matrix (rows share a common first column and
// their spans only grow).  The matrix is cut into column strips on which the
// defined rows form a full rectangular suffix, and SMAWK handles each strip.

inline std::vector<std::optional<RowMax>> staircase_row_maxima(
    const MatrixOracle& m) {
  const int nr = m.nrows();
  std::vector<std::optional<RowMax>> out(nr);
  if (nr == 0) return out;
  std::vector<ColSpan> spans(nr);
  for (int r = 0; r < nr; ++r) spans[r] = m.row_span(r);
  std::vector<int> his;
  for (int r = 0; r < nr; ++r)
    if (!spans[r].empty()) his.push_back(spans[r].hi);
  if (his.empty()) return out;
  std::sort(his.begin(), his.end());
  his.erase(std::unique(his.begin(), his.end()), his.end());
  int strip_lo = spans[nr - 1].lo;  // common left column
  for (int hi : his) {
    // rows whose span reaches this strip form a suffix
    int first_row = 0;
    while (first_row < nr && (spans[first_row].empty() || spans[first_row].hi < hi))
      ++first_row;
    int rows = nr - first_row;
    int cols = hi - strip_lo + 1;
    MatrixOracle sub = MatrixOracle::full(
        rows, cols,
        [&m, first_row, strip_lo](int r, int c) {
          return m.at(first_row + r, strip_lo + c);
        },
        m.counter());
    auto maxima = smawk_row_maxima(sub);
    for (int r = 0; r < rows; ++r) {
      RowMax cand{strip_lo + maxima[r].col, maxima[r].value};
      auto& cur = out[first_row + r];
      if (!cur || cand.value > cur->value) cur = cand;
    }
    strip_lo = hi + 1;
  }
  return out;
}

}  // namespace mer
