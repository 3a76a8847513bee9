#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <vector>

#include "mer/generators.hpp"
#include "mer/monge.hpp"

namespace mer {

// Dense reference copy of a partial matrix, for brute-force checks and
// fuzzing.  The oracle() view shares no state with other oracles.
struct TestMatrix {
  int nrows = 0;
  int ncols = 0;
  std::vector<ColSpan> spans;
  std::vector<std::vector<Value>> dense;  // meaningful inside spans only

  bool defined(int r, int c) const {
    return r >= 0 && r < nrows && c >= spans[r].lo && c <= spans[r].hi;
  }

  MatrixOracle oracle(
      std::shared_ptr<std::atomic<std::uint64_t>> counter = nullptr) const {
    return MatrixOracle(
        nrows, ncols, [this](int r) { return spans[r]; },
        [this](int r, int c) { return dense[r][c]; }, std::move(counter));
  }
};

// Supermodular values: a sum of rank-1 terms u⊗v with u and v sorted in the
// same direction, which makes (u_i − u_j)(v_k − v_l) ≥ 0 for i<j, k<l.
inline void fill_inverse_monge_values(std::mt19937_64& rng, TestMatrix& t,
                                      int terms) {
  t.dense.assign(t.nrows, std::vector<Value>(t.ncols, 0));
  for (int k = 0; k < terms; ++k) {
    std::vector<Value> u(t.nrows), v(t.ncols);
    for (auto& x : u) x = static_cast<Value>(rng_below(rng, 1000));
    for (auto& x : v) x = static_cast<Value>(rng_below(rng, 1000));
    bool ascending = rng_below(rng, 2) == 0;
    auto order = [ascending](auto& vec) {
      std::sort(vec.begin(), vec.end());
      if (!ascending) std::reverse(vec.begin(), vec.end());
    };
    order(u);
    order(v);
    for (int r = 0; r < t.nrows; ++r)
      for (int c = 0; c < t.ncols; ++c) t.dense[r][c] += u[r] * v[c];
  }
}

// Random double-staircase mask: both span endpoints monotone in the same
// direction, so columns are contiguous too.  Every row stays nonempty by
// pinning a shared column.
inline TestMatrix random_double_staircase(std::mt19937_64& rng, int m, int n,
                                          int terms = 3) {
  TestMatrix t;
  t.nrows = m;
  t.ncols = n;
  t.spans.resize(m);
  int pin = static_cast<int>(rng_below(rng, static_cast<std::uint64_t>(n)));
  std::vector<int> lo(m), hi(m);
  for (int r = 0; r < m; ++r) {
    lo[r] = static_cast<int>(rng_below(rng, static_cast<std::uint64_t>(pin + 1)));
    hi[r] = pin + static_cast<int>(
                      rng_below(rng, static_cast<std::uint64_t>(n - pin)));
  }
  std::sort(lo.begin(), lo.end());
  std::sort(hi.begin(), hi.end());
  if (rng_below(rng, 2) == 0) {
    std::reverse(lo.begin(), lo.end());
    std::reverse(hi.begin(), hi.end());
  }
  for (int r = 0; r < m; ++r) t.spans[r] = ColSpan{lo[r], hi[r]};
  fill_inverse_monge_values(rng, t, terms);
  return t;
}

// Fully defined supermodular matrix.
inline TestMatrix random_full_monge(std::mt19937_64& rng, int m, int n,
                                    int terms = 3) {
  TestMatrix t;
  t.nrows = m;
  t.ncols = n;
  t.spans.assign(m, ColSpan{0, n - 1});
  fill_inverse_monge_values(rng, t, terms);
  return t;
}

// Staircase mask: common first column, spans only grow with the row index.
inline TestMatrix random_staircase(std::mt19937_64& rng, int m, int n,
                                   int terms = 3) {
  TestMatrix t;
  t.nrows = m;
  t.ncols = n;
  t.spans.resize(m);
  std::vector<int> hi(m);
  for (int r = 0; r < m; ++r)
    hi[r] = static_cast<int>(rng_below(rng, static_cast<std::uint64_t>(n)));
  std::sort(hi.begin(), hi.end());
  for (int r = 0; r < m; ++r) t.spans[r] = ColSpan{0, hi[r]};
  fill_inverse_monge_values(rng, t, terms);
  return t;
}

inline std::optional<RowMax> brute_row_max(const TestMatrix& t, int r, int c1,
                                           int c2) {
  std::optional<RowMax> best;
  for (int c = std::max(c1, t.spans[r].lo); c <= std::min(c2, t.spans[r].hi);
       ++c)
    if (!best || t.dense[r][c] > best->value) best = RowMax{c, t.dense[r][c]};
  return best;
}

inline std::optional<RowMax> brute_column_max(const TestMatrix& t, int c) {
  std::optional<RowMax> best;  // col field reused for the attaining row
  for (int r = 0; r < t.nrows; ++r)
    if (t.defined(r, c) && (!best || t.dense[r][c] > best->value))
      best = RowMax{r, t.dense[r][c]};
  return best;
}

inline std::optional<CellRef> brute_submatrix_max(const TestMatrix& t, int r1,
                                                  int r2, int c1, int c2) {
  std::optional<CellRef> best;
  for (int r = std::max(r1, 0); r <= std::min(r2, t.nrows - 1); ++r)
    for (int c = std::max(c1, t.spans[r].lo); c <= std::min(c2, t.spans[r].hi);
         ++c)
      cell_merge(best, CellRef{t.dense[r][c], r, c});
  return best;
}

}  // namespace mer
