#include "catch_amalgamated.hpp"

#include <cmath>
#include <random>

#include "mer/generators.hpp"
#include "mer/oracle.hpp"
#include "mer/stab_index.hpp"

using namespace mer;

namespace {

std::vector<Rect> random_rects(std::mt19937_64& rng, int count, Coord span) {
  std::vector<Rect> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    Coord x1 = rng_range(rng, 0, span - 1), x2 = rng_range(rng, x1 + 1, span);
    Coord y1 = rng_range(rng, 0, span - 1), y2 = rng_range(rng, y1 + 1, span);
    out.push_back(Rect{x1, y1, x2, y2});
  }
  return out;
}

}  // namespace

TEST_CASE("single rectangle index") {
  StabIndex idx = build_stab_index({Rect{2, 3, 8, 9}});
  auto hit = stab_max_area(idx, 5, 5);
  REQUIRE(hit);
  CHECK(rect_coords(*hit) == std::array<Coord, 4>{2, 3, 8, 9});
  CHECK(stab_max_area(idx, 2, 3).has_value());
  CHECK(stab_max_area(idx, 8, 9).has_value());
  CHECK_FALSE(stab_max_area(idx, 1, 5));
  CHECK_FALSE(stab_max_area(idx, 5, 10));
}

TEST_CASE("empty index answers none") {
  StabIndex idx = build_stab_index({});
  CHECK_FALSE(stab_max_area(idx, 0, 0));
}

TEST_CASE("nested rectangles prefer the larger") {
  StabIndex idx = build_stab_index({Rect{0, 0, 10, 10}, Rect{2, 2, 8, 8}});
  auto hit = stab_max_area(idx, 5, 5);
  REQUIRE(hit);
  CHECK(rect_coords(*hit) == std::array<Coord, 4>{0, 0, 10, 10});
}

TEST_CASE("two-point instance rectangles") {
  std::vector<Point> pts{Point{3, 4}, Point{7, 5}};
  PointSet ps = normalize_point_set(std::move(pts), Rect{0, 0, 12, 10});
  auto rects = enumerate_maximal_empty(ps);
  StabIndex idx = build_stab_index(rects);
  // q=(5,4) sits on the shared edge y=4: [0,12]x[0,4] (48) beats
  // [3,12]x[0,5] (45) under the global comparator
  auto hit = stab_max_area(idx, 5, 4);
  REQUIRE(hit);
  CHECK(rect_coords(*hit) == std::array<Coord, 4>{0, 0, 12, 4});
  CHECK(area(*hit) == 48);
  auto ref = largest_containing(rects, 5, 4);
  REQUIRE(ref);
  CHECK(rect_coords(*hit) == rect_coords(*ref));
}

TEST_CASE("index equals linear scan on random instances") {
  std::mt19937_64 rng(321);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + static_cast<int>(rng_below(rng, 512));
    auto rects = random_rects(rng, n, 1024);
    StabIndex idx = build_stab_index(rects);
    for (int q = 0; q < 100; ++q) {
      Coord qx = rng_range(rng, -10, 1034);
      Coord qy = rng_range(rng, -10, 1034);
      auto got = stab_max_area(idx, qx, qy);
      auto ref = largest_containing(rects, qx, qy);
      REQUIRE(got.has_value() == ref.has_value());
      if (ref) CHECK(rect_coords(*got) == rect_coords(*ref));
    }
  }
}

TEST_CASE("node count stays near-linear") {
  std::mt19937_64 rng(654);
  for (int n : {64, 128, 256, 512}) {
    auto rects = random_rects(rng, n, 4096);
    StabIndex idx = build_stab_index(rects);
    double bound = 40.0 * n * std::log2(double(2 * n));
    CHECK(static_cast<double>(idx.node_count()) <= bound);
  }
}
