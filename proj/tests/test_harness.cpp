#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "mcis/harness.hpp"

using namespace mcis;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::BadField;
}

std::size_t count_of(const std::string& s, const std::string& needle) {
  std::size_t k = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++k;
  return k;
}

NetworkConfig small_sc_ah() {
  return validate_config(apply_preset(parse_config("n = 1200\nb = 16\nW_A = 1\nW_I = 0\n"), Preset::ScAh));
}

}  // namespace

TEST_CASE("CSV quoting round-trips") {
  std::vector<std::string> cells = {"plain", "with,comma", "with \"quotes\"", "two\nlines", "", "crlf\r\nend"};
  std::ostringstream os;
  write_csv_row(os, {"a", "b", "c", "d", "e", "f"});
  write_csv_row(os, cells);
  std::istringstream in(os.str());
  auto t = read_csv(in);
  REQUIRE(t.header.size() == 6);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0] == cells);
  CHECK(csv_escape("x\"y") == "\"x\"\"y\"");
  std::istringstream crlf("x,y\r\n1,2\r\n3,4");
  auto u = read_csv(crlf);
  CHECK(u.numbers("y") == std::vector<double>{2, 4});
}

TEST_CASE("numbers print at the shortest round-trip precision") {
  for (double v : {0.1, 1.0 / 3, 1e-300, 123456789.125, -2.5, 0.0}) {
    CHECK(std::strtod(format_number(v).c_str(), nullptr) == v);
  }
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(16) == "16");
}

TEST_CASE("missing columns are reported by name") {
  std::istringstream in("a,b\n1,2\n");
  auto t = read_csv(in);
  CHECK(code_of([&] { t.numbers("c"); }) == ErrorCode::MissingColumn);
  CHECK(code_of([&] { fit_scaling(t, "a", "b", "zz"); }) == ErrorCode::MissingColumn);
}

TEST_CASE("fit recovers a known power law") {
  std::vector<double> x, m, p;
  for (double n = 1024; n <= 65536; n *= 2) {
    double pred = 1 / std::sqrt(n * std::log(n));
    x.push_back(n);
    p.push_back(pred);
    m.push_back(3 * pred);
  }
  auto f = fit_scaling(x, m, p);
  CHECK(f.spread == doctest::Approx(1.0));
  CHECK(f.slope == doctest::Approx(f.predicted_slope));
  for (double r : f.ratios) CHECK(r == doctest::Approx(3.0));
  CHECK(f.xs.size() == 7);
  // repeated x values average into one ratio
  x.push_back(1024);
  m.push_back(6 * p[0]);
  p.push_back(p[0]);
  auto g = fit_scaling(x, m, p);
  CHECK(g.ratios.front() == doctest::Approx(4.5));
  CHECK(g.spread == doctest::Approx(1.5));
}

TEST_CASE("degenerate fits are rejected") {
  CHECK(code_of([] { fit_scaling({1, 2, 3}, {1, 1, 1}, {1, 1, 1}); }) == ErrorCode::DegenerateFit);
  CHECK(code_of([] { fit_scaling({1, 2, 3, 4}, {1, 0, 1, 1}, {1, 1, 1, 1}); }) == ErrorCode::DegenerateFit);
  CHECK(code_of([] { fit_scaling({1, 2, 3, 4}, {1, 1, 1}, {1, 1, 1, 1}); }) == ErrorCode::DegenerateFit);
  CHECK(code_of([] { fit_scaling({2, 2, 2, 2}, {1, 1, 1, 1}, {1, 1, 1, 1}); }) == ErrorCode::DegenerateFit);
}

TEST_CASE("SVG output is deterministic") {
  std::vector<double> x = {1, 10, 100}, y = {3, 2, 1};
  auto a = plot_svg(x, y, "n", "lambda", {true, true});
  CHECK(a == plot_svg(x, y, "n", "lambda", {true, true}));
  CHECK(count_of(a, "<circle") == 3);
  CHECK(count_of(a, "<polyline") == 1);
  auto empty = plot_svg({}, {}, "x", "y");
  CHECK(count_of(empty, "<line") == 2);
  CHECK(count_of(empty, "<circle") == 0);
  CHECK(count_of(empty, "<polyline") == 0);
  auto two = plot_svg({0, 1}, {0, 1}, "x", "y");
  CHECK(count_of(two, "<polyline") == 1);
  CHECK(count_of(two, "<circle") == 2);
  // one segment: corners of the plot area
  CHECK(two.find("points=\"70.00,430.00 620.00,20.00\"") != std::string::npos);
  CHECK(plot_svg({1}, {1}, "a<b", "y").find("a&lt;b") != std::string::npos);
}

TEST_CASE("sweep specs") {
  auto s = parse_sweep("param = n\nvalues = 600, 800\nseeds = 2\npreset = sc-ah\n");
  CHECK(s.values == std::vector<std::string>{"600", "800"});
  CHECK(s.seeds == std::vector<std::uint64_t>{1, 2});
  CHECK(code_of([] { parse_sweep("param = bogus\nvalues = 1\nseeds = 1\n"); }) == ErrorCode::UnknownKey);
  CHECK(code_of([] { parse_sweep("param = n\nseeds = 1\n"); }) == ErrorCode::BadField);
  CHECK(code_of([] { parse_sweep("param = n\nvalues = 5\nseed_list = \n"); }) == ErrorCode::BadField);
  CHECK(code_of([] { parse_sweep("param = n\nvalues = 5\nseeds = 1\nwhat = 1\n"); }) == ErrorCode::UnknownKey);
  auto rel = parse_sweep("param = m\nvalues = 2\nseeds = 1\nbase = x.conf\n", "/tmp/d");
  CHECK(rel.base_config == "/tmp/d/x.conf");
}

TEST_CASE("sweeps produce one row per value and seed in order") {
  auto spec = parse_sweep("param = n\nvalues = 600, 900\nseed_list = 5, 7, 9\npreset = sc-ah\n");
  auto base = small_sc_ah();
  auto one = run_sweep(spec, base, 1);
  auto many = run_sweep(spec, base, 3);
  REQUIRE(one.size() == 6);
  REQUIRE(many.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(one[i].value == spec.values[i / 3]);
    CHECK(one[i].report.seed == spec.seeds[i % 3]);
    CHECK(one[i].cfg.H == preset_hops(one[i].cfg.n));
    CHECK(metrics_values(one[i].report) == metrics_values(many[i].report));
  }
  std::ostringstream os;
  write_sweep_csv(os, spec, one);
  std::istringstream in(os.str());
  auto t = read_csv(in);
  CHECK(t.header == sweep_header());
  CHECK(t.rows.size() == 6);
  CHECK(t.numbers("n") == std::vector<double>{600, 600, 600, 900, 900, 900});
  auto bad = parse_sweep("param = m\nvalues = 3\nseeds = 1\n");
  try {
    run_sweep(bad, base);
    FAIL("odd m accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OddInterfaces);
    CHECK(std::string(e.what()).find("m=3") != std::string::npos);
  }
}

TEST_CASE("simulate output is deterministic and the analytic row depends only on the config") {
  auto cfg = small_sc_ah();
  std::ostringstream a, b, c;
  cmd_simulate(cfg, 1, {}, a);
  cmd_simulate(cfg, 1, {}, b);
  cmd_simulate(cfg, 2, {}, c);
  CHECK(a.str() == b.str());
  std::istringstream ia(a.str()), ic(c.str());
  auto ta = read_csv(ia), tc = read_csv(ic);
  REQUIRE(ta.rows.size() == 3);
  CHECK(ta.rows[0][0] == "measured");
  CHECK(ta.rows[1][0] == "analytic");
  CHECK(ta.rows[2][0] == "ratio");
  CHECK(ta.rows[1] == tc.rows[1]);
  auto k = ta.column("lambda");
  double ratio = std::strtod(ta.rows[2][k].c_str(), nullptr);
  double direct = std::strtod(ta.rows[0][k].c_str(), nullptr) / std::strtod(ta.rows[1][k].c_str(), nullptr);
  CHECK(ratio == doctest::Approx(direct));
}

TEST_CASE("classify prints the regime") {
  NetworkConfig c;
  c.n = 22026;
  c.C_A = 4;
  c.H = 10;
  std::ostringstream os;
  cmd_classify(c, os);
  CHECK(os.str().rfind("condition: Connectivity\n", 0) == 0);
  c.H = 1;
  std::ostringstream os2;
  cmd_classify(c, os2);
  CHECK(os2.str().rfind("condition: InterfaceBottleneck\n", 0) == 0);
}

TEST_CASE("analytic row quantities") {
  auto cfg = small_sc_ah();
  auto a = analytic_row(cfg);
  double L = std::log(1200.0), h = static_cast<double>(cfg.H);
  CHECK(a.n_t == doctest::Approx(std::numbers::pi * h * h * L));
  CHECK(a.lambda_sc_ah == doctest::Approx(1 / std::sqrt(1200 * L)));
  CHECK(a.lambda_i == 0);
  CHECK(analytic_cells(a).size() == analytic_columns().size());
  CHECK(config_cells(cfg).size() == config_columns().size());
}
