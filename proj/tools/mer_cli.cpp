#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mer/generators.hpp"
#include "mer/io.hpp"
#include "mer/monge_testing.hpp"
#include "mer/oracle.hpp"
#include "mer/query_engine.hpp"

using nlohmann::json;
using namespace mer;

namespace {

Rect parse_bounds(const std::string& s) {
  auto v = mer::detail::parse_coord_list(s, 4, 0);
  return Rect{v[0], v[1], v[2], v[3]};
}

void emit(const json& report, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << report.dump(2) << '\n';
  } else {
    std::ofstream out(out_path);
    if (!out) throw parse_error("cannot open output file: " + out_path);
    out << report.dump(2) << '\n';
  }
}

json build_section(const BuildStats& st) {
  return json{{"stored_cells", st.stored_cells},
              {"entry_evals", st.entry_evals},
              {"nodes", st.tree_nodes}};
}

json query_entry(Coord x, Coord y, const QueryResult& qr) {
  return json{{"x", x},
              {"y", y},
              {"rect", {qr.rect.x_lo, qr.rect.y_lo, qr.rect.x_hi, qr.rect.y_hi}},
              {"area", area(qr.rect)},
              {"provenance", provenance_name(qr.rect.provenance)},
              {"work_units", qr.work_units}};
}

// least-squares slope of log2(y) against log2(x)
double loglog_slope(const std::vector<std::pair<double, double>>& pts) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    double lx = std::log2(x), ly = std::log2(std::max(y, 1.0));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double n = static_cast<double>(pts.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

int cmd_generate(const std::string& kind, int n, std::uint64_t seed,
                 const std::string& bounds_str, const std::string& out_path) {
  PointSet ps = generate_point_set(kind, n, seed, parse_bounds(bounds_str));
  if (out_path.empty()) {
    write_point_stream(std::cout, ps);
  } else {
    save_point_file(out_path, ps);
  }
  return 0;
}

int cmd_build(const std::string& points_path, const std::string& out_path) {
  Index idx = preprocess(load_point_file(points_path));
  json report{{"n", idx.point_set().size()},
              {"build", build_section(idx.stats())},
              {"queries", json::array()}};
  emit(report, out_path);
  return 0;
}

int cmd_query(const std::string& points_path, const std::string& queries_path,
              const std::string& out_path) {
  Index idx = preprocess(load_point_file(points_path));
  json queries = json::array();
  for (auto [x, y] : load_query_file(queries_path))
    queries.push_back(query_entry(x, y, idx.query(x, y)));
  json report{{"n", idx.point_set().size()},
              {"build", build_section(idx.stats())},
              {"queries", std::move(queries)}};
  emit(report, out_path);
  return 0;
}

int cmd_verify(const std::string& points_path, const std::string& queries_path,
               std::uint64_t seed, int cap) {
  PointSet ps = load_point_file(points_path);
  if (ps.size() > cap) {
    std::cerr << "verify: refusing n=" << ps.size() << " > cap " << cap
              << " (the oracle is brute-force; raise --verify-cap to insist)\n";
    return 2;
  }
  std::vector<std::pair<Coord, Coord>> queries;
  if (!queries_path.empty()) {
    queries = load_query_file(queries_path);
  } else {
    std::mt19937_64 rng(seed);
    for (int i = 0; i < 100; ++i)
      queries.emplace_back(rng_range(rng, ps.bounds.x_lo, ps.bounds.x_hi),
                           rng_range(rng, ps.bounds.y_lo, ps.bounds.y_hi));
  }
  Index idx = preprocess(ps);
  auto rects = enumerate_maximal_empty(ps);
  for (auto [x, y] : queries) {
    QueryResult got = idx.query(x, y);
    auto want = largest_containing(rects, x, y);
    if (!want || rect_coords(*want) != rect_coords(got.rect)) {
      std::cerr << "mismatch at q=(" << x << ',' << y << "): index gave ["
                << got.rect.x_lo << ',' << got.rect.y_lo << ','
                << got.rect.x_hi << ',' << got.rect.y_hi << "] area "
                << area(got.rect) << ", oracle ";
      if (want)
        std::cerr << '[' << want->x_lo << ',' << want->y_lo << ','
                  << want->x_hi << ',' << want->y_hi << "] area "
                  << area(*want) << '\n';
      else
        std::cerr << "found none\n";
      return 1;
    }
  }
  std::cout << "verify: " << queries.size() << " queries on n=" << ps.size()
            << " match the oracle\n";
  return 0;
}

int cmd_bench(std::uint64_t seed, const std::string& out_path) {
  const std::vector<int> sizes{256, 512, 1024, 2048, 4096};
  const Rect bounds{0, 0, 1 << 20, 1 << 20};
  json rows = json::array();
  std::vector<std::pair<double, double>> eval_pts, work_pts;
  for (int n : sizes) {
    PointSet ps = generate_staircase(n, bounds);
    Index idx = preprocess(ps);
    std::mt19937_64 rng(seed);
    std::uint64_t total_work = 0, max_work = 0;
    const int nq = 100;
    for (int i = 0; i < nq; ++i) {
      Coord x = rng_range(rng, bounds.x_lo, bounds.x_hi);
      Coord y = rng_range(rng, bounds.y_lo, bounds.y_hi);
      QueryResult qr = idx.query(x, y);
      total_work += qr.work_units;
      max_work = std::max(max_work, qr.work_units);
    }
    const BuildStats& st = idx.stats();
    rows.push_back(json{{"n", n},
                        {"entry_evals", st.entry_evals},
                        {"stored_cells", st.stored_cells},
                        {"nodes", st.tree_nodes},
                        {"avg_query_work", total_work / nq},
                        {"max_query_work", max_work}});
    eval_pts.emplace_back(n, static_cast<double>(st.entry_evals));
    work_pts.emplace_back(n, static_cast<double>(total_work) / nq);
  }
  json report{{"kind", "staircase"},
              {"bench", std::move(rows)},
              {"slopes",
               {{"entry_evals", loglog_slope(eval_pts)},
                {"avg_query_work", loglog_slope(work_pts)}}}};
  emit(report, out_path);
  return 0;
}

int cmd_monge_fuzz(std::uint64_t seed, int trials) {
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    int m = 1 + static_cast<int>(rng_below(rng, 48));
    int n = 1 + static_cast<int>(rng_below(rng, 48));
    TestMatrix tm = random_double_staircase(rng, m, n);
    MatrixOracle oracle = tm.oracle();
    SubmatrixMaxStructure s(oracle);
    TestMatrix st = random_staircase(rng, m, n);
    auto maxima = staircase_row_maxima(st.oracle());
    for (int r = 0; r < m; ++r) {
      auto want = brute_row_max(tm, r, 0, n - 1);
      auto got_tree = s.row_range_max(r, 0, n - 1);
      bool tree_ok = want.has_value() == got_tree.has_value() &&
                     (!want || want->value == oracle.at(got_tree->row,
                                                        got_tree->col));
      auto st_want = brute_row_max(st, r, 0, n - 1);
      bool smawk_ok = st_want.has_value() == maxima[r].has_value() &&
                      (!st_want || (st_want->value == maxima[r]->value &&
                                    st_want->col == maxima[r]->col));
      if (!tree_ok || !smawk_ok) {
        std::cerr << "monge-fuzz: trial " << t << " row " << r
                  << " disagrees with brute force\n";
        return 1;
      }
    }
    for (int probe = 0; probe < 20; ++probe) {
      int r1 = static_cast<int>(rng_below(rng, m));
      int r2 = r1 + static_cast<int>(rng_below(rng, m - r1));
      int c1 = static_cast<int>(rng_below(rng, n));
      int c2 = c1 + static_cast<int>(rng_below(rng, n - c1));
      auto want = brute_submatrix_max(tm, r1, r2, c1, c2);
      auto got = s.submatrix_max(r1, r2, c1, c2);
      bool ok = want.has_value() == got.has_value() &&
                (!want || want->value == oracle.at(got->row, got->col));
      if (!ok) {
        std::cerr << "monge-fuzz: trial " << t << " submatrix [" << r1 << ','
                  << r2 << "]x[" << c1 << ',' << c2
                  << "] disagrees with brute force\n";
        return 1;
      }
    }
  }
  std::cout << "monge-fuzz: " << trials << " matrices agree with brute force\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maximal empty rectangle query toolkit"};
  app.require_subcommand(1);

  std::string kind = "uniform", bounds_str = "0,0,4096,4096";
  std::string points_path, queries_path, out_path;
  int n = 0, verify_cap = kDefaultOracleCap, trials = 50;
  std::uint64_t seed = 1;

  auto* gen = app.add_subcommand("generate", "write a deterministic point file");
  gen->add_option("--kind", kind, "uniform | staircase | grid-adversarial");
  gen->add_option("-n,--n", n, "point count")->required();
  gen->add_option("--seed", seed, "rng seed");
  gen->add_option("--bounds", bounds_str, "x_lo,y_lo,x_hi,y_hi");
  gen->add_option("--out", out_path, "output file (default stdout)");

  auto* build = app.add_subcommand("build", "build the index, report stats");
  build->add_option("--points", points_path, "point file")->required();
  build->add_option("--out", out_path, "JSON report file (default stdout)");

  auto* query = app.add_subcommand("query", "answer a batch of queries");
  query->add_option("--points", points_path, "point file")->required();
  query->add_option("--queries", queries_path, "query file, one x,y per line")
      ->required();
  query->add_option("--out", out_path, "JSON report file (default stdout)");

  auto* verify = app.add_subcommand("verify", "check the index against the oracle");
  verify->add_option("--points", points_path, "point file")->required();
  verify->add_option("--queries", queries_path,
                     "query file (default: 100 seeded random queries)");
  verify->add_option("--seed", seed, "rng seed for generated queries");
  verify->add_option("--verify-cap", verify_cap,
                     "largest n the brute-force oracle will accept");

  auto* bench = app.add_subcommand("bench", "staircase build/query scaling");
  bench->add_option("--seed", seed, "rng seed for query sampling");
  bench->add_option("--out", out_path, "JSON report file (default stdout)");

  auto* fuzz = app.add_subcommand("monge-fuzz",
                                  "randomized Monge toolkit cross-check");
  fuzz->add_option("--seed", seed, "rng seed");
  fuzz->add_option("--trials", trials, "number of random matrices");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return cmd_generate(kind, n, seed, bounds_str, out_path);
    if (build->parsed()) return cmd_build(points_path, out_path);
    if (query->parsed()) return cmd_query(points_path, queries_path, out_path);
    if (verify->parsed())
      return cmd_verify(points_path, queries_path, seed, verify_cap);
    if (bench->parsed()) return cmd_bench(seed, out_path);
    if (fuzz->parsed()) return cmd_monge_fuzz(seed, trials);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
