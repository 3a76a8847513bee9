#include "catch_amalgamated.hpp"

#include <sstream>

#include "mer/generators.hpp"
#include "mer/geometry.hpp"
#include "mer/io.hpp"

using namespace mer;

namespace {

PointSet make_set(std::vector<std::pair<Coord, Coord>> pts, Rect b) {
  std::vector<Point> raw;
  for (auto [x, y] : pts) raw.push_back(Point{x, y});
  return normalize_point_set(std::move(raw), b);
}

}  // namespace

TEST_CASE("area of simple rectangles") {
  CHECK(area(Rect{0, 0, 10, 10}) == 100);
  CHECK(area(Rect{3, 0, 12, 5}) == 45);
  CHECK(area(Rect{-4, -3, 3, 5}) == 56);
}

TEST_CASE("contains_point is closed") {
  CHECK(contains_point(Rect{0, 0, 4, 10}, 4, 5));
  CHECK_FALSE(contains_point(Rect{0, 0, 4, 10}, 5, 5));
  CHECK(contains_point(Rect{3, 0, 7, 10}, 5, 4));
}

TEST_CASE("interior_empty ignores boundary points") {
  PointSet ps = make_set({{3, 4}, {7, 5}}, Rect{0, 0, 12, 10});
  CHECK(interior_empty(Rect{3, 0, 7, 10}, ps));
  CHECK_FALSE(interior_empty(Rect{0, 0, 7, 7}, ps));
  CHECK(interior_empty(Rect{0, 4, 12, 5}, ps));
}

TEST_CASE("is_maximal_empty") {
  PointSet ps = make_set({{3, 4}, {7, 5}}, Rect{0, 0, 12, 10});
  CHECK(is_maximal_empty(Rect{3, 0, 12, 5}, ps));
  // top can still grow
  CHECK_FALSE(is_maximal_empty(Rect{3, 0, 7, 9}, ps));
  // B itself is not empty
  CHECK_FALSE(is_maximal_empty(ps.bounds, ps));
  // expanding each side of a maximal rect by one unit breaks emptiness or
  // leaves the bounds
  Rect r{3, 0, 12, 5};
  for (int side = 0; side < 4; ++side) {
    Rect g = r;
    if (side == 0) g.x_lo -= 1;
    if (side == 1) g.x_hi += 1;
    if (side == 2) g.y_lo -= 1;
    if (side == 3) g.y_hi += 1;
    bool inside = g.x_lo >= 0 && g.x_hi <= 12 && g.y_lo >= 0 && g.y_hi <= 10;
    CHECK((!inside || !interior_empty(g, ps)));
  }
}

TEST_CASE("normalize_point_set validation") {
  CHECK_NOTHROW(make_set({{1, 2}, {3, 4}}, Rect{0, 0, 10, 10}));
  CHECK_THROWS_AS(make_set({{1, 2}, {1, 4}}, Rect{0, 0, 10, 10}),
                  validation_error);
  CHECK_THROWS_AS(make_set({{1, 2}, {3, 2}}, Rect{0, 0, 10, 10}),
                  validation_error);
  // points on the boundary are rejected
  CHECK_THROWS_AS(make_set({{0, 2}}, Rect{0, 0, 10, 10}), validation_error);
  CHECK_THROWS_AS(make_set({{2, 10}}, Rect{0, 0, 10, 10}), validation_error);
  CHECK_THROWS_AS(make_set({{1 << 21, 2}}, Rect{0, 0, 1 << 22, 10}),
                  validation_error);
}

TEST_CASE("rect comparator is a strict total order on distinct rects") {
  Rect a{0, 0, 10, 10};
  Rect b{2, 2, 8, 8};
  CHECK(rect_better(a, b));
  CHECK_FALSE(rect_better(b, a));
  Rect c{0, 0, 5, 4};
  Rect d{0, 0, 4, 5};  // same area, compare coords
  CHECK(rect_better(c, d) != rect_better(d, c));
}

TEST_CASE("point file round trip") {
  PointSet ps = generate_uniform(16, 42, Rect{0, 0, 1000, 1000});
  std::stringstream s;
  write_point_stream(s, ps);
  PointSet back = parse_point_stream(s);
  REQUIRE(back.size() == ps.size());
  for (int i = 0; i < ps.size(); ++i) {
    CHECK(back.points[i].x == ps.points[i].x);
    CHECK(back.points[i].y == ps.points[i].y);
  }
  CHECK(back.bounds == ps.bounds);
}

TEST_CASE("point file parse errors carry line numbers") {
  std::stringstream s("B:0,0,10,10\n1,2\n3,oops\n");
  try {
    parse_point_stream(s);
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("generators are deterministic and valid") {
  PointSet a = generate_uniform(8, 1, Rect{0, 0, 4096, 4096});
  PointSet b = generate_uniform(8, 1, Rect{0, 0, 4096, 4096});
  REQUIRE(a.size() == 8);
  for (int i = 0; i < 8; ++i) {
    CHECK(a.points[i].x == b.points[i].x);
    CHECK(a.points[i].y == b.points[i].y);
  }
  CHECK(generate_point_set("uniform", 0, 1, Rect{0, 0, 10, 10}).size() == 0);
  CHECK(generate_staircase(16, Rect{0, 0, 4096, 4096}).size() == 16);
  CHECK(generate_grid_adversarial(9, Rect{0, 0, 4096, 4096}).size() == 9);
}
