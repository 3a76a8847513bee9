#include "catch_amalgamated.hpp"

#include <cmath>
#include <random>

#include "mer/monge.hpp"
#include "mer/monge_testing.hpp"

using namespace mer;

namespace {

// 0-based view of M_{rc} = r*c with r,c counted from 1
MatrixOracle product_matrix(int m, int n) {
  return MatrixOracle::full(m, n, [](int r, int c) {
    return static_cast<Value>(r + 1) * (c + 1);
  });
}

MatrixOracle dense_rows(std::vector<std::vector<Value>> rows) {
  auto data = std::make_shared<std::vector<std::vector<Value>>>(std::move(rows));
  return MatrixOracle::full(
      static_cast<int>(data->size()),
      static_cast<int>((*data)[0].size()),
      [data](int r, int c) { return (*data)[r][c]; });
}

std::optional<RowMax> brute_leftmost_row_max(const TestMatrix& t, int r) {
  return brute_row_max(t, r, 0, t.ncols - 1);
}

}  // namespace

TEST_CASE("smawk on product matrix") {
  auto m = product_matrix(3, 3);
  auto res = smawk_row_maxima(m);
  REQUIRE(res.size() == 3);
  for (int r = 0; r < 3; ++r) {
    CHECK(res[r].col == 2);
    CHECK(res[r].value == (r + 1) * 3);
  }
}

TEST_CASE("smawk 2x2 hand check") {
  auto m = dense_rows({{2, 1}, {1, 2}});
  auto res = smawk_row_maxima(m);
  CHECK(res[0].col == 0);
  CHECK(res[0].value == 2);
  CHECK(res[1].col == 1);
  CHECK(res[1].value == 2);
}

TEST_CASE("smawk equals brute force on random supermodular matrices") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 40; ++trial) {
    int m = 1 + static_cast<int>(rng_below(rng, 50));
    int n = 1 + static_cast<int>(rng_below(rng, 80));
    TestMatrix t = random_full_monge(rng, m, n);
    auto res = smawk_row_maxima(t.oracle());
    for (int r = 0; r < m; ++r) {
      auto ref = brute_leftmost_row_max(t, r);
      REQUIRE(ref);
      CHECK(res[r].value == ref->value);
      CHECK(res[r].col == ref->col);
    }
  }
}

TEST_CASE("smawk rejects the empty matrix") {
  CHECK_THROWS_AS(smawk_row_maxima(MatrixOracle()), domain_error);
}

TEST_CASE("cross_column hand examples") {
  auto m = dense_rows({{5, 4, 3}, {1, 5, 9}});
  auto cr = cross_column(m, 0, 1, 0, 2);
  CHECK(cr.kind == CrossKind::crossing);
  CHECK(cr.col == 1);

  auto m2 = dense_rows({{9, 8, 7}, {1, 2, 3}});
  CHECK(cross_column(m2, 0, 1, 0, 2).kind == CrossKind::no_crossing);
  CHECK(cross_column(m2, 0, 1, 2, 1).kind == CrossKind::disjoint);

  // equal values keep the earlier row
  auto m3 = dense_rows({{4, 4}, {4, 4}});
  CHECK(cross_column(m3, 0, 1, 0, 1).kind == CrossKind::no_crossing);
}

TEST_CASE("cross_column matches a linear scan on random pairs") {
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 200; ++trial) {
    int m = 2 + static_cast<int>(rng_below(rng, 20));
    int n = 1 + static_cast<int>(rng_below(rng, 40));
    TestMatrix t = random_full_monge(rng, m, n);
    int a = static_cast<int>(rng_below(rng, m - 1));
    int b = a + 1 + static_cast<int>(rng_below(rng, m - a - 1));
    auto m_or = t.oracle();
    auto cr = cross_column(m_or, a, b, 0, n - 1);
    int first = -1;
    for (int c = 0; c < n; ++c)
      if (t.dense[b][c] > t.dense[a][c]) {
        first = c;
        break;
      }
    if (first < 0) {
      CHECK(cr.kind == CrossKind::no_crossing);
    } else {
      REQUIRE(cr.kind == CrossKind::crossing);
      CHECK(cr.col == first);
    }
  }
}

TEST_CASE("merge_envelopes hand examples") {
  auto m = dense_rows({{5, 4, 3}, {1, 5, 9}});
  Envelope merged = merge_envelopes(m, single_row_envelope(m, 0),
                                    single_row_envelope(m, 1));
  REQUIRE(merged.blocks.size() == 2);
  CHECK(merged.blocks[0].col_lo == 0);
  CHECK(merged.blocks[0].col_hi == 0);
  CHECK(merged.blocks[0].row == 0);
  CHECK(merged.blocks[1].col_lo == 1);
  CHECK(merged.blocks[1].col_hi == 2);
  CHECK(merged.blocks[1].row == 1);
}

TEST_CASE("merge_envelopes concatenates disjoint domains") {
  std::vector<ColSpan> spans{{0, 1}, {3, 5}};
  MatrixOracle m(
      2, 6, [spans](int r) { return spans[r]; },
      [](int r, int c) { return static_cast<Value>(10 * r + c); });
  Envelope merged = merge_envelopes(m, single_row_envelope(m, 0),
                                    single_row_envelope(m, 1));
  REQUIRE(merged.blocks.size() == 2);
  CHECK(merged.blocks[0].row == 0);
  CHECK(merged.blocks[1].row == 1);
  CHECK(merged.blocks[1].col_lo == 3);
  CHECK(merged.blocks[1].col_hi == 5);
}

TEST_CASE("pairwise merge of 16 rows equals brute-force column maxima") {
  std::mt19937_64 rng(303);
  TestMatrix t = random_double_staircase(rng, 16, 40);
  auto m = t.oracle();
  std::vector<Envelope> level;
  for (int r = 0; r < 16; ++r) level.push_back(single_row_envelope(m, r));
  while (level.size() > 1) {
    std::vector<Envelope> next;
    for (std::size_t i = 0; i + 1 < level.size(); i += 2)
      next.push_back(merge_envelopes(m, level[i], level[i + 1]));
    if (level.size() % 2) next.push_back(level.back());
    level = std::move(next);
  }
  for (int c = 0; c < t.ncols; ++c) {
    auto ref = brute_column_max(t, c);
    int row = level[0].row_at(c);
    if (!ref) {
      CHECK(row == -1);
    } else {
      REQUIRE(row >= 0);
      CHECK(t.dense[row][c] == ref->value);
    }
  }
}

TEST_CASE("envelope tree basics") {
  auto one = dense_rows({{7, 3}});
  EnvelopeTree t1(one);
  REQUIRE(t1.root_envelope().blocks.size() == 1);
  CHECK(t1.root_envelope().blocks[0].row == 0);

  auto m = product_matrix(4, 4);
  EnvelopeTree t4(m);
  REQUIRE(t4.root_envelope().blocks.size() == 1);
  CHECK(t4.root_envelope().blocks[0].row == 3);
  CHECK(t4.root_envelope().blocks[0].col_lo == 0);
  CHECK(t4.root_envelope().blocks[0].col_hi == 3);
}

TEST_CASE("envelope tree matches brute-force column maxima") {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 10; ++trial) {
    TestMatrix t = random_double_staircase(rng, 64, 64);
    auto m = t.oracle();
    EnvelopeTree tree(m);
    const Envelope& env = column_maxima(tree);
    for (int c = 0; c < t.ncols; ++c) {
      auto ref = brute_column_max(t, c);
      int row = env.row_at(c);
      if (!ref) {
        CHECK(row == -1);
      } else {
        REQUIRE(row >= 0);
        CHECK(t.dense[row][c] == ref->value);
        // ties resolve to the smallest row id
        CHECK(row <= ref->col);
      }
    }
  }
}

TEST_CASE("envelope tree tolerates empty rows") {
  std::vector<ColSpan> spans{{0, 3}, {1, 0}, {2, 3}};
  MatrixOracle m(
      3, 4, [spans](int r) { return spans[r]; },
      [](int r, int c) { return static_cast<Value>(r + c); });
  EnvelopeTree tree(m);
  const Envelope& env = column_maxima(tree);
  CHECK(env.row_at(0) == 0);
  CHECK(env.row_at(2) == 2);
  CHECK(env.row_at(3) == 2);
}

TEST_CASE("column_maxima of the one-row diagonal example") {
  auto m = dense_rows({{56, 54}});
  EnvelopeTree tree(m);
  auto c0 = column_max_at(m, column_maxima(tree), 0);
  auto c1 = column_max_at(m, column_maxima(tree), 1);
  REQUIRE(c0);
  REQUIRE(c1);
  CHECK(c0->value == 56);
  CHECK(c1->value == 54);
}

TEST_CASE("submatrix structure trivial cases") {
  auto one = dense_rows({{42}});
  SubmatrixMaxStructure s(one);
  auto g = s.prefix_max(0, 0);
  REQUIRE(g);
  CHECK(g->value == 42);

  SubmatrixMaxStructure p(product_matrix(3, 3));
  auto top = s.prefix_max(0, 0);
  auto best = p.prefix_max(2, 2);
  REQUIRE(best);
  CHECK(best->value == 9);
  CHECK(best->row == 2);
  CHECK(best->col == 2);
}

TEST_CASE("row_range_max hand examples") {
  SubmatrixMaxStructure s(product_matrix(3, 3));
  auto a = s.row_range_max(1, 0, 2);
  REQUIRE(a);
  CHECK(a->value == 6);
  CHECK(a->col == 2);
  auto b = s.row_range_max(2, 1, 1);
  REQUIRE(b);
  CHECK(b->value == 6);
  CHECK(b->col == 1);
  CHECK_FALSE(s.row_range_max(2, 5, 9));
}

TEST_CASE("prefix and submatrix hand examples") {
  SubmatrixMaxStructure s(product_matrix(3, 3));
  auto a = s.prefix_max(1, 1);
  REQUIRE(a);
  CHECK(a->value == 4);
  CHECK(a->row == 1);
  CHECK(a->col == 1);
  auto b = s.submatrix_max(0, 1, 1, 2);
  REQUIRE(b);
  CHECK(b->value == 6);
  CHECK(b->row == 1);
  CHECK(b->col == 2);
  auto full = s.submatrix_max(0, 2, 0, 2);
  auto pref = s.prefix_max(2, 2);
  REQUIRE(full);
  REQUIRE(pref);
  CHECK(full->value == pref->value);
  CHECK(full->row == pref->row);
  CHECK(full->col == pref->col);
}

TEST_CASE("submatrix structure equals brute force on random instances") {
  std::mt19937_64 rng(505);
  for (int trial = 0; trial < 6; ++trial) {
    int m = 8 + static_cast<int>(rng_below(rng, 57));
    int n = 8 + static_cast<int>(rng_below(rng, 57));
    TestMatrix t = random_double_staircase(rng, m, n);
    SubmatrixMaxStructure s(t.oracle());
    for (int probe = 0; probe < 500; ++probe) {
      int r1 = static_cast<int>(rng_below(rng, m));
      int r2 = r1 + static_cast<int>(rng_below(rng, m - r1));
      int c1 = static_cast<int>(rng_below(rng, n));
      int c2 = c1 + static_cast<int>(rng_below(rng, n - c1));
      auto got = s.submatrix_max(r1, r2, c1, c2);
      auto ref = brute_submatrix_max(t, r1, r2, c1, c2);
      if (!ref) {
        CHECK_FALSE(got);
        continue;
      }
      REQUIRE(got);
      CHECK(got->value == ref->value);
      CHECK(t.defined(got->row, got->col));
      CHECK(t.dense[got->row][got->col] == got->value);
      CHECK((got->row >= r1 && got->row <= r2));
      CHECK((got->col >= c1 && got->col <= c2));

      auto pg = s.prefix_max(r2, c2);
      auto pr = brute_submatrix_max(t, 0, r2, 0, c2);
      REQUIRE(pg.has_value() == pr.has_value());
      if (pr) CHECK(pg->value == pr->value);

      int rr = static_cast<int>(rng_below(rng, m));
      auto rg = s.row_range_max(rr, c1, c2);
      auto rrf = brute_row_max(t, rr, c1, c2);
      REQUIRE(rg.has_value() == rrf.has_value());
      if (rrf) {
        CHECK(rg->value == rrf->value);
        CHECK(rg->col == rrf->col);
      }
    }
  }
}

TEST_CASE("stored block maxima come from real entries") {
  std::mt19937_64 rng(606);
  TestMatrix t = random_double_staircase(rng, 64, 64);
  SubmatrixMaxStructure s(t.oracle());
  for (const auto& node : s.row_tree().nodes())
    for (const auto& blk : node.env.blocks) {
      auto ref = brute_row_max(t, blk.row, blk.col_lo, blk.col_hi);
      auto got = s.row_range_max(blk.row, blk.col_lo, blk.col_hi);
      REQUIRE(ref);
      REQUIRE(got);
      CHECK(got->value == ref->value);
    }
}

TEST_CASE("generated matrices satisfy inverse Monge on random quadruples") {
  std::mt19937_64 rng(707);
  TestMatrix t = random_double_staircase(rng, 48, 48);
  int checked = 0;
  while (checked < 10000) {
    int r1 = static_cast<int>(rng_below(rng, 47));
    int r2 = r1 + 1 + static_cast<int>(rng_below(rng, 47 - r1));
    int c1 = static_cast<int>(rng_below(rng, 47));
    int c2 = c1 + 1 + static_cast<int>(rng_below(rng, 47 - c1));
    if (!(t.defined(r1, c1) && t.defined(r1, c2) && t.defined(r2, c1) &&
          t.defined(r2, c2)))
      continue;
    ++checked;
    CHECK(t.dense[r1][c1] - t.dense[r2][c1] >=
          t.dense[r1][c2] - t.dense[r2][c2]);
  }
}

TEST_CASE("row pairs cross at most once") {
  std::mt19937_64 rng(808);
  TestMatrix t = random_double_staircase(rng, 64, 64);
  for (int pair = 0; pair < 1000; ++pair) {
    int a = static_cast<int>(rng_below(rng, 63));
    int b = a + 1 + static_cast<int>(rng_below(rng, 63 - a));
    int lo = std::max(t.spans[a].lo, t.spans[b].lo);
    int hi = std::min(t.spans[a].hi, t.spans[b].hi);
    int switches = 0;
    int prev = 0;  // +1: a wins, -1: b wins
    for (int c = lo; c <= hi; ++c) {
      int cur = t.dense[b][c] > t.dense[a][c] ? -1 : 1;
      if (prev != 0 && cur != prev) ++switches;
      prev = cur;
    }
    CHECK(switches <= 1);
  }
}

TEST_CASE("envelope tree construction is lazy") {
  std::mt19937_64 rng(909);
  for (int size : {64, 128, 256}) {
    TestMatrix t = random_double_staircase(rng, size, size);
    auto counter = std::make_shared<std::atomic<std::uint64_t>>(0);
    auto m = t.oracle(counter);
    EnvelopeTree tree(m);
    double evals = static_cast<double>(m.eval_count());
    double bound = 8.0 * size * std::log2(double(size)) *
                       std::log2(double(size)) +
                   size;
    CHECK(evals <= bound);
    CHECK(evals < double(size) * size);
  }
}

TEST_CASE("transposed oracle shares the counter and flips spans") {
  std::mt19937_64 rng(111);
  TestMatrix t = random_double_staircase(rng, 20, 30);
  auto m = t.oracle();
  auto mt = m.transposed();
  REQUIRE(mt.nrows() == 30);
  REQUIRE(mt.ncols() == 20);
  for (int c = 0; c < 30; ++c) {
    ColSpan s = mt.row_span(c);
    int lo = -1, hi = -1;
    for (int r = 0; r < 20; ++r)
      if (t.defined(r, c)) {
        if (lo < 0) lo = r;
        hi = r;
      }
    if (lo < 0) {
      CHECK(s.empty());
    } else {
      CHECK(s.lo == lo);
      CHECK(s.hi == hi);
    }
  }
  auto before = m.eval_count();
  ColSpan s0 = mt.row_span(0);
  if (!s0.empty()) {
    CHECK(mt.at(0, s0.lo) == t.dense[s0.lo][0]);
    CHECK(m.eval_count() == before + 1);
  }
}

TEST_CASE("staircase row maxima") {
  // fully defined matrices agree with smawk
  std::mt19937_64 rng(121);
  for (int trial = 0; trial < 10; ++trial) {
    int m = 1 + static_cast<int>(rng_below(rng, 30));
    int n = 1 + static_cast<int>(rng_below(rng, 30));
    TestMatrix t = random_full_monge(rng, m, n);
    auto res = staircase_row_maxima(t.oracle());
    auto ref = smawk_row_maxima(t.oracle());
    for (int r = 0; r < m; ++r) {
      REQUIRE(res[r]);
      CHECK(res[r]->value == ref[r].value);
    }
  }
  // one-row staircase
  std::vector<ColSpan> spans{{0, 2}};
  MatrixOracle one(
      1, 5, [spans](int r) { return spans[r]; },
      [](int, int c) { return static_cast<Value>(10 - c); });
  auto res = staircase_row_maxima(one);
  REQUIRE(res[0]);
  CHECK(res[0]->value == 10);
  CHECK(res[0]->col == 0);
  // random staircases vs brute force
  for (int trial = 0; trial < 20; ++trial) {
    int m = 1 + static_cast<int>(rng_below(rng, 40));
    int n = 1 + static_cast<int>(rng_below(rng, 40));
    TestMatrix t = random_staircase(rng, m, n);
    auto got = staircase_row_maxima(t.oracle());
    for (int r = 0; r < m; ++r) {
      auto ref = brute_leftmost_row_max(t, r);
      REQUIRE(got[r].has_value() == ref.has_value());
      if (ref) CHECK(got[r]->value == ref->value);
    }
  }
}
