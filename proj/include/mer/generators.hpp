#pragma once

#include <limits>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mer/geometry.hpp"

namespace mer {

// Deterministic helpers on top of mt19937_64; std::uniform_int_distribution
// is implementation-defined, so sampling is done by rejection here.
inline std::uint64_t rng_below(std::mt19937_64& rng, std::uint64_t m) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % m;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % m;
}

inline Coord rng_range(std::mt19937_64& rng, Coord lo, Coord hi) {
  return lo + static_cast<Coord>(rng_below(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

// n points with distinct x and distinct y, strictly inside the bounds.
// Distinctness by sampling coordinate sets without replacement.
inline PointSet generate_uniform(int n, std::uint64_t seed, Rect bounds) {
  std::mt19937_64 rng(seed);
  const Coord w = bounds.x_hi - bounds.x_lo - 1;
  const Coord h = bounds.y_hi - bounds.y_lo - 1;
  if (w < n || h < n)
    throw validation_error("bounds too small for " + std::to_string(n) +
                           " points with distinct coordinates");
  auto sample_axis = [&](Coord lo, Coord span) {
    std::vector<Coord> vals;
    std::set<Coord> used;
    while (static_cast<int>(vals.size()) < n) {
      Coord v = lo + 1 + static_cast<Coord>(rng_below(rng, static_cast<std::uint64_t>(span)));
      if (used.insert(v).second) vals.push_back(v);
    }
    return vals;
  };
  std::vector<Coord> xs = sample_axis(bounds.x_lo, w);
  std::vector<Coord> ys = sample_axis(bounds.y_lo, h);
  // random pairing: shuffle ys by Fisher-Yates with the deterministic rng
  for (int i = n - 1; i > 0; --i) {
    int j = static_cast<int>(rng_below(rng, static_cast<std::uint64_t>(i + 1)));
    std::swap(ys[i], ys[j]);
  }
  std::vector<Point> pts(n);
  for (int i = 0; i < n; ++i) pts[i] = Point{xs[i], ys[i]};
  return normalize_point_set(std::move(pts), bounds);
}

// Two interleaved descending chains with Theta(k^2) maximal empty
// rectangles: an upper chain u_i = (2i-1, 2k+1-i) and a lower chain
// l_i = (2i, k+1-i).  Every pair (u_i, l_j) with j <= i spans a bounded
// maximal rectangle between the chains.
inline PointSet generate_staircase(int n, Rect bounds) {
  if (n % 2 != 0)
    throw validation_error("staircase kind needs an even point count");
  const int k = n / 2;
  const Coord native = 2 * static_cast<Coord>(k) + 1;
  const Coord sx = std::max<Coord>(1, (bounds.x_hi - bounds.x_lo) / (native + 1));
  const Coord sy = std::max<Coord>(1, (bounds.y_hi - bounds.y_lo) / (native + 1));
  if (bounds.x_hi - bounds.x_lo <= native || bounds.y_hi - bounds.y_lo <= native)
    throw validation_error("bounds too small for the staircase construction");
  std::vector<Point> pts;
  pts.reserve(n);
  for (int i = 1; i <= k; ++i) {
    pts.push_back(Point{bounds.x_lo + (2 * i - 1) * sx,
                        bounds.y_lo + (2 * static_cast<Coord>(k) + 1 - i) * sy});
    pts.push_back(Point{bounds.x_lo + 2 * i * sx,
                        bounds.y_lo + (static_cast<Coord>(k) + 1 - i) * sy});
  }
  return normalize_point_set(std::move(pts), bounds);
}

// Sheared grid: row r, column c maps to (c*g + r, r*g + c); base-g digits
// keep both coordinate sets distinct.
inline PointSet generate_grid_adversarial(int n, Rect bounds) {
  int g = 1;
  while (g * g < n) ++g;
  const Coord native = static_cast<Coord>(g) * g + g;
  if (bounds.x_hi - bounds.x_lo <= native + 1 ||
      bounds.y_hi - bounds.y_lo <= native + 1)
    throw validation_error("bounds too small for the grid construction");
  std::vector<Point> pts;
  pts.reserve(n);
  for (int i = 0; i < n; ++i) {
    Coord r = i / g, c = i % g;
    pts.push_back(Point{bounds.x_lo + 1 + c * g + r, bounds.y_lo + 1 + r * g + c});
  }
  return normalize_point_set(std::move(pts), bounds);
}

inline PointSet generate_point_set(const std::string& kind, int n,
                                   std::uint64_t seed, Rect bounds) {
  if (n < 0) throw validation_error("n must be non-negative");
  if (n == 0) return normalize_point_set({}, bounds);
  if (kind == "uniform") return generate_uniform(n, seed, bounds);
  if (kind == "staircase") return generate_staircase(n, bounds);
  if (kind == "grid-adversarial") return generate_grid_adversarial(n, bounds);
  throw validation_error("unknown generator kind: " + kind);
}

}  // namespace mer
