#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "mcis/analytic.hpp"
#include "mcis/routing.hpp"

using namespace mcis;

namespace {

NetworkConfig sc_ah(std::int64_t n) {
  NetworkConfig c;
  c.n = n;
  c.b = 16;
  c.b0 = 4;
  c.W = 1;
  c.W_A = 1;
  c.W_I = 0;
  return validate_config(apply_preset(c, Preset::ScAh));
}

std::set<int> brute_cells(Point a, Point b, int s) {
  std::set<int> out;
  for (int row = 0; row < s; ++row) {
    for (int col = 0; col < s; ++col) {
      if (segment_hits_cell(a, b, {row, col}, s)) out.insert(row * s + col);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("decide_mode uses the H r disk") {
  double r = 0.01;
  CHECK(decide_mode({0.1, 0.1}, {0.1 + 0.5 * 5 * r, 0.1}, 5, r) == Mode::AdHoc);
  CHECK(decide_mode({0.1, 0.1}, {0.1 + 1.0001 * 5 * r, 0.1}, 5, r) == Mode::Infra);
}

TEST_CASE("neighbours across a BS-cell border stay ad hoc") {
  std::vector<Point> nodes = {{0.499, 0.3}, {0.501, 0.3}};
  auto topo = build_topology(nodes, 4, 2, 0.01);
  NetworkConfig c;
  c.n = 2;
  c.H = 1;
  c.b = 4;
  c.b0 = 2;
  auto t = assign_flows_to(topo, c, {1, 0});
  REQUIRE(t.flows.size() == 2);
  CHECK(topo.node_bs_cell[0] != topo.node_bs_cell[1]);
  for (const auto& f : t.flows) {
    CHECK(f.mode == Mode::AdHoc);
    CHECK(f.hop_count() == 1);
  }
}

TEST_CASE("path fixtures") {
  // s = 2 grid, range 0.3
  std::vector<Point> nodes = {{0.1, 0.25}, {0.3, 0.25}, {0.35, 0.26}, {0.6, 0.25}};
  auto topo = build_topology(nodes, 1, 2, 0.3);
  CHECK(build_adhoc_path(0, 1, topo, 5) == std::vector<int>{0, 1});  // same cell, in range
  CHECK(build_adhoc_path(1, 3, topo, 5) == std::vector<int>{1, 3});  // adjacent cells, in range
  auto p = build_adhoc_path(0, 3, topo, 5);                           // 0.5 apart: one relay
  REQUIRE(p.size() == 3);
  CHECK(p.front() == 0);
  CHECK(p.back() == 3);
  CHECK((p[1] == 1 || p[1] == 2));
  CHECK_THROWS_AS(build_adhoc_path(0, 3, topo, 1), Error);
  // nothing ahead within range
  std::vector<Point> sparse = {{0.1, 0.1}, {0.9, 0.9}};
  auto t2 = build_topology(sparse, 1, 4, 0.2);
  try {
    build_adhoc_path(0, 1, t2, 10);
    FAIL("expected EmptyCell");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyCell);
  }
}

TEST_CASE("grid traversal equals the exhaustive cell-intersection test") {
  std::mt19937_64 g(5);
  for (int s : {1, 2, 3, 7, 16, 41}) {
    for (int k = 0; k < 300; ++k) {
      Point a{unit_uniform(g), unit_uniform(g)}, b{unit_uniform(g), unit_uniform(g)};
      auto closed = cells_on_segment(a, b, s, true);
      std::set<int> got;
      for (auto v : closed) got.insert(v.cell);
      REQUIRE(got.size() == closed.size());
      REQUIRE(got == brute_cells(a, b, s));
      REQUIRE(cells_on_segment(a, b, s).size() <= static_cast<std::size_t>(2 * s));
    }
  }
}

TEST_CASE("lines_through_cell on a 2x2 fixture") {
  std::vector<Point> nodes = {{0.1, 0.1}, {0.9, 0.4}, {0.2, 0.8}, {0.3, 0.9}};
  auto topo = build_topology(nodes, 1, 2, 1.0);
  NetworkConfig c;
  c.n = 4;
  c.H = 3;
  c.b = 1;
  c.b0 = 1;
  FlowTable empty;
  CHECK(lines_through_cell(empty, {0, 0}, topo) == 0);
  auto t = assign_flows_to(topo, c, {1, -1, 3, -1});
  REQUIRE(t.flows.size() == 2);
  auto per = lines_per_cell(t, topo);
  for (int row = 0; row < 2; ++row) {
    for (int col = 0; col < 2; ++col) {
      int want = 0;
      for (const auto& f : t.flows) want += segment_hits_cell(nodes[f.src], nodes[f.dst], {row, col}, 2);
      CHECK(lines_through_cell(t, {row, col}, topo) == want);
      CHECK(per[static_cast<std::size_t>(row * 2 + col)] == want);
    }
  }
  // (0.1,0.1)-(0.9,0.4) crosses the two bottom cells only; (0.2,0.8)-(0.3,0.9) stays top-left
  CHECK(per == std::vector<int>{1, 1, 1, 0});
}

TEST_CASE("flow table invariants on random instances") {
  for (std::int64_t n : {300, 1500, 4000}) {
    auto cfg = sc_ah(n);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      auto topo = build_cell_grid(cfg, place_nodes(n, seed));
      auto t = assign_flows(topo, cfg, seed);
      CHECK(static_cast<std::int64_t>(t.flows.size()) + t.dropped == n);
      double hr = static_cast<double>(cfg.H) * topo.range;
      for (const auto& f : t.flows) {
        Point s = topo.node_positions[f.src], d = topo.node_positions[f.dst];
        if (f.mode == Mode::AdHoc) {
          REQUIRE(dist(s, d) <= hr);
          REQUIRE(f.path.front() == f.src);
          REQUIRE(f.path.back() == f.dst);
          REQUIRE(f.hop_count() <= cfg.H);
          for (std::size_t h = 0; h + 1 < f.path.size(); ++h) {
            REQUIRE(dist(topo.node_positions[f.path[h]], topo.node_positions[f.path[h + 1]]) <= topo.range);
          }
        } else {
          // BS-cell membership equals nearest BS away from ties
          auto nearest = [&](Point p) {
            int best = 0;
            for (std::size_t k = 1; k < topo.bs_positions.size(); ++k) {
              if (dist2(p, topo.bs_positions[k]) < dist2(p, topo.bs_positions[static_cast<std::size_t>(best)])) best = static_cast<int>(k);
            }
            return best;
          };
          REQUIRE(f.uplink_bs == nearest(s));
          REQUIRE(f.downlink_bs == nearest(d));
          if (!f.fallback) REQUIRE(dist(s, d) > hr);
        }
      }
    }
  }
}

TEST_CASE("degenerate and deterministic tables") {
  auto cfg = sc_ah(1000);
  auto topo1 = build_topology(place_nodes(1, 3), cfg.b, 1, 0.5);
  auto one = assign_flows(topo1, cfg, 3);
  CHECK(one.flows.empty());
  CHECK(one.dropped == 1);
  auto topo = build_cell_grid(cfg, place_nodes(cfg.n, 8));
  auto a = assign_flows(topo, cfg, 8), b = assign_flows(topo, cfg, 8);
  REQUIRE(a.flows.size() == b.flows.size());
  for (std::size_t i = 0; i < a.flows.size(); ++i) {
    CHECK(a.flows[i].dst == b.flows[i].dst);
    CHECK(a.flows[i].path == b.flows[i].path);
  }
  std::ostringstream os;
  write_flow_csv(os, a);
  CHECK(os.str().rfind("flow_id,src,dst,mode,hop_count,bs_up,bs_down\n", 0) == 0);
}

TEST_CASE("relay load is balanced within a cluster of interchangeable relays") {
  // 23 parallel flows, each needing exactly one relay from a 10-node cluster
  std::vector<Point> nodes;
  std::vector<int> dests;
  for (int i = 0; i < 10; ++i) nodes.push_back({0.25 + 0.0009 * i, 0.5});
  for (int j = 0; j < 23; ++j) {
    double y = 0.5 + 0.0001 * (j - 11);
    nodes.push_back({0.05, y});
    nodes.push_back({0.45, y});
  }
  dests.assign(nodes.size(), -1);
  for (int j = 0; j < 23; ++j) dests[static_cast<std::size_t>(10 + 2 * j)] = 11 + 2 * j;
  auto topo = build_topology(nodes, 1, 4, 0.25);
  NetworkConfig c;
  c.n = static_cast<std::int64_t>(nodes.size());
  c.H = 10;
  c.b = 1;
  c.b0 = 1;
  auto t = assign_flows_to(topo, c, dests);
  REQUIRE(t.flows.size() == 23);
  for (const auto& f : t.flows) REQUIRE(f.hop_count() == 2);
  auto [lo, hi] = std::minmax_element(t.relay_load.begin(), t.relay_load.begin() + 10);
  CHECK(*hi - *lo <= 1);
  CHECK(std::accumulate(t.relay_load.begin(), t.relay_load.begin() + 10, 0) == 23);
}

TEST_CASE("max_flows_per_node") {
  FlowTable empty;
  CHECK(max_flows_per_node(empty) == 0);
  std::vector<Point> nodes = place_nodes(50, 2);
  auto topo = build_topology(nodes, 1, 1, 0.1);
  NetworkConfig c;
  c.n = 50;
  c.b = 1;
  c.b0 = 1;
  std::vector<int> perm(50);
  for (int i = 0; i < 50; ++i) perm[static_cast<std::size_t>(i)] = (i + 7) % 50;
  CHECK(max_flows_per_node(assign_flows_to(topo, c, perm, false)) == 1);
}

TEST_CASE("inbound flow count concentrates at n = 1e5") {
  std::int64_t n = 100000;
  auto cfg = sc_ah(n);
  double x = static_cast<double>(cfg.H) * static_cast<double>(cfg.H) * std::log(static_cast<double>(n));
  double bound = 5 * std::log(x) / std::log(std::log(x));
  auto topo = build_topology(place_nodes(n, 1), cfg.b, 1, transmission_range(n));
  int pass = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto t = assign_flows_to(topo, cfg, draw_destinations(n, seed), false);
    if (max_flows_per_node(t) <= bound) ++pass;
  }
  CHECK(pass >= 19);
}
