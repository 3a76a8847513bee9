#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mer/geometry.hpp"

namespace mer {

struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<Coord> parse_coord_list(std::string_view s, int expect,
                                           int line_no) {
  std::vector<Coord> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    std::string_view tok = s.substr(pos, comma == std::string_view::npos
                                             ? std::string_view::npos
                                             : comma - pos);
    Coord v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
      throw parse_error("line " + std::to_string(line_no) +
                        ": bad integer '" + std::string(tok) + "'");
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (static_cast<int>(out.size()) != expect)
    throw parse_error("line " + std::to_string(line_no) + ": expected " +
                      std::to_string(expect) + " integers");
  return out;
}

}  // namespace detail

// Point files are UTF-8 text: a header line `B:x_lo,y_lo,x_hi,y_hi`
// followed by one `x,y` pair per line.
inline PointSet parse_point_stream(std::istream& in) {
  std::string line;
  int line_no = 0;
  Rect bounds;
  bool have_bounds = false;
  std::vector<Point> pts;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
      line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("B:", 0) == 0) {
      if (have_bounds)
        throw parse_error("line " + std::to_string(line_no) +
                          ": duplicate bounds header");
      auto v = detail::parse_coord_list(std::string_view(line).substr(2), 4,
                                        line_no);
      bounds = Rect{v[0], v[1], v[2], v[3]};
      have_bounds = true;
      continue;
    }
    auto v = detail::parse_coord_list(line, 2, line_no);
    pts.push_back(Point{v[0], v[1]});
  }
  if (!have_bounds) throw parse_error("missing bounds header line 'B:...'");
  return normalize_point_set(std::move(pts), bounds);
}

inline PointSet load_point_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open point file: " + path);
  return parse_point_stream(in);
}

inline void write_point_stream(std::ostream& out, const PointSet& ps) {
  out << "B:" << ps.bounds.x_lo << ',' << ps.bounds.y_lo << ','
      << ps.bounds.x_hi << ',' << ps.bounds.y_hi << '\n';
  for (const Point& p : ps.points) out << p.x << ',' << p.y << '\n';
}

inline void save_point_file(const std::string& path, const PointSet& ps) {
  std::ofstream out(path);
  if (!out) throw parse_error("cannot open output file: " + path);
  write_point_stream(out, ps);
}

// Query files: one `x,y` pair per line.
inline std::vector<std::pair<Coord, Coord>> parse_query_stream(std::istream& in) {
  std::string line;
  int line_no = 0;
  std::vector<std::pair<Coord, Coord>> out;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
      line.pop_back();
    if (line.empty()) continue;
    auto v = detail::parse_coord_list(line, 2, line_no);
    out.emplace_back(v[0], v[1]);
  }
  return out;
}

inline std::vector<std::pair<Coord, Coord>> load_query_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open query file: " + path);
  return parse_query_stream(in);
}

}  // namespace mer
