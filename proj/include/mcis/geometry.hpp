#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "mcis/config.hpp"
#include "mcis/error.hpp"

namespace mcis {

struct Point {
  double x = 0;
  double y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

inline double dist2(Point a, Point b) {
  double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

inline double dist(Point a, Point b) { return std::sqrt(dist2(a, b)); }

struct CellIndex {
  int row = 0;
  int col = 0;
  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

// Connectivity threshold sqrt(ln n / (pi n)); r(n) sits a factor sqrt(2) * r_factor above it.
inline double connectivity_threshold(std::int64_t n) {
  double dn = static_cast<double>(n);
  return std::sqrt(std::log(dn) / (std::numbers::pi * dn));
}

inline double transmission_range(std::int64_t n, double r_factor = 1.0) {
  if (n < 2) throw Error(ErrorCode::BadField, "transmission_range needs n >= 2");
  if (!(r_factor >= 1)) throw Error(ErrorCode::BadField, "r_factor must be >= 1");
  double dn = static_cast<double>(n);
  return r_factor * std::sqrt(2.0 * std::log(dn) / (std::numbers::pi * dn));
}

// 53 random mantissa bits; avoids the implementation-defined uniform_real_distribution.
inline double unit_uniform(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline std::vector<Point> place_nodes(std::int64_t n, std::uint64_t seed) {
  std::vector<Point> pts;
  if (n <= 0) return pts;
  pts.reserve(static_cast<std::size_t>(n));
  std::mt19937_64 g(seed);
  for (std::int64_t i = 0; i < n; ++i) {
    double x = unit_uniform(g);
    double y = unit_uniform(g);
    pts.push_back({x, y});
  }
  return pts;
}

inline std::vector<Point> place_bs(std::int64_t b) {
  if (b < 1 || !is_perfect_square(b)) {
    throw Error(ErrorCode::NonSquareBs, "b=" + std::to_string(b) + " is not a perfect square");
  }
  auto b0 = isqrt(b);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(b));
  for (std::int64_t row = 0; row < b0; ++row) {
    for (std::int64_t col = 0; col < b0; ++col) {
      pts.push_back({(static_cast<double>(col) + 0.5) / static_cast<double>(b0),
                     (static_cast<double>(row) + 0.5) / static_cast<double>(b0)});
    }
  }
  return pts;
}

// ln(H^2 ln n) must exceed 1 so that its iterated log is positive.
inline double h2logn(std::int64_t n, std::int64_t H) {
  double L = std::log(static_cast<double>(n));
  double v = static_cast<double>(H) * static_cast<double>(H) * L;
  if (!(n >= 2) || !(v > std::numbers::e)) {
    throw Error(ErrorCode::DegenerateScale,
                "H^2 ln n = " + std::to_string(v) + " <= e (n=" + std::to_string(n) + ", H=" + std::to_string(H) + ")");
  }
  return v;
}

inline double cell_area(std::int64_t n, std::int64_t C_A, std::int64_t H, double phi = kTwoPi,
                        AntennaMode mode = AntennaMode::Omni) {
  double x = h2logn(n, H);
  double dn = static_cast<double>(n);
  double L = std::log(dn);
  double t1 = 100.0 * L / dn;
  double t2 = std::pow(L, 1.5) / (std::sqrt(static_cast<double>(C_A)) * dn);
  if (mode == AntennaMode::Directional) t2 *= phi / kTwoPi;
  double t3 = std::pow(L, 1.5) * std::log(x) / (std::pow(dn, 1.5) * std::log(std::log(x)));
  return std::min(std::max(t1, t2), t3);
}

inline double cell_area(const NetworkConfig& c) { return cell_area(c.n, c.C_A, c.H, c.phi, c.antenna_mode); }

inline int grid_side_for_area(double a) {
  return std::max(1, static_cast<int>(std::lround(1.0 / std::sqrt(a))));
}

// Coordinate k/s on a shared boundary belongs to the lower-index cell.
inline int axis_index(double v, int s) {
  int i = static_cast<int>(std::ceil(v * s)) - 1;
  return std::clamp(i, 0, s - 1);
}

inline CellIndex cell_of(Point p, int s) { return {axis_index(p.y, s), axis_index(p.x, s)}; }

struct Topology {
  std::vector<Point> node_positions;
  std::vector<Point> bs_positions;
  int cell_side_count = 1;
  int bs_cell_side_count = 1;
  double range = 0;
  double area = 0;  // a(n) the grid side was derived from
  std::vector<int> node_cell;           // linear cell id = row * s + col
  std::vector<int> node_bs_cell;        // BS id whose BS-cell holds the node
  std::vector<int> cell_start;          // CSR offsets, size s*s + 1
  std::vector<int> cell_nodes;          // node ids grouped by cell, ascending within a cell
  // Coarser bucket grid with side >= range, so a range query touches at most 3x3 buckets.
  int range_side_count = 1;
  std::vector<int> range_start;
  std::vector<int> range_nodes;

  int cell_count() const { return cell_side_count * cell_side_count; }
  int cell_id(CellIndex c) const { return c.row * cell_side_count + c.col; }
  CellIndex cell_index(int id) const { return {id / cell_side_count, id % cell_side_count}; }
  double cell_side() const { return 1.0 / cell_side_count; }

  std::vector<int> members(int cell) const {
    return {cell_nodes.begin() + cell_start[cell], cell_nodes.begin() + cell_start[cell + 1]};
  }
  int member_count(int cell) const { return cell_start[cell + 1] - cell_start[cell]; }

  // Calls f(v) for every node v with dist(p, v) <= radius, radius <= range.
  template <class F>
  void for_each_within(Point p, double radius, F&& f) const {
    int rs = range_side_count;
    auto ax = [&](double v) { return std::clamp(static_cast<int>(v * rs), 0, rs - 1); };
    double r2 = radius * radius;
    for (int row = ax(p.y - radius); row <= ax(p.y + radius); ++row) {
      for (int col = ax(p.x - radius); col <= ax(p.x + radius); ++col) {
        int id = row * rs + col;
        for (int q = range_start[id]; q < range_start[id + 1]; ++q) {
          int v = range_nodes[q];
          if (dist2(p, node_positions[v]) <= r2) f(v);
        }
      }
    }
  }
};

namespace detail {
// Counting sort of node ids into an s x s grid; ids stay ascending inside a bucket.
inline void bucket_nodes(const std::vector<Point>& pts, int s, const std::vector<int>& id_of,
                         std::vector<int>& start, std::vector<int>& nodes) {
  std::size_t n = pts.size();
  start.assign(static_cast<std::size_t>(s) * s + 1, 0);
  for (std::size_t i = 0; i < n; ++i) ++start[static_cast<std::size_t>(id_of[i]) + 1];
  for (std::size_t k = 1; k < start.size(); ++k) start[k] += start[k - 1];
  nodes.assign(n, 0);
  std::vector<int> fill(start.begin(), start.end() - 1);
  for (std::size_t i = 0; i < n; ++i) nodes[static_cast<std::size_t>(fill[id_of[i]]++)] = static_cast<int>(i);
}
}  // namespace detail

inline Topology build_topology(std::vector<Point> nodes, std::int64_t b, int cell_side, double range) {
  Topology t;
  t.node_positions = std::move(nodes);
  t.bs_positions = place_bs(b);
  t.bs_cell_side_count = static_cast<int>(isqrt(b));
  t.cell_side_count = std::max(1, cell_side);
  t.range = range;
  t.area = 1.0 / (static_cast<double>(t.cell_side_count) * t.cell_side_count);
  int s = t.cell_side_count;
  std::size_t n = t.node_positions.size();
  t.node_cell.resize(n);
  t.node_bs_cell.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto c = cell_of(t.node_positions[i], s);
    t.node_cell[i] = t.cell_id(c);
    auto bc = cell_of(t.node_positions[i], t.bs_cell_side_count);
    t.node_bs_cell[i] = bc.row * t.bs_cell_side_count + bc.col;
  }
  detail::bucket_nodes(t.node_positions, s, t.node_cell, t.cell_start, t.cell_nodes);
  t.range_side_count = range > 0 ? std::clamp(static_cast<int>(1.0 / range), 1, 4096) : 1;
  int rs = t.range_side_count;
  std::vector<int> rid(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = t.node_positions[i];
    rid[i] = std::clamp(static_cast<int>(p.y * rs), 0, rs - 1) * rs + std::clamp(static_cast<int>(p.x * rs), 0, rs - 1);
  }
  detail::bucket_nodes(t.node_positions, rs, rid, t.range_start, t.range_nodes);
  return t;
}

inline Topology build_cell_grid(const NetworkConfig& cfg, std::vector<Point> nodes) {
  double a = cell_area(cfg);
  double r = transmission_range(cfg.n, cfg.r_factor);
  Topology t = build_topology(std::move(nodes), cfg.b, grid_side_for_area(a), r);
  t.area = a;
  return t;
}

inline Topology build_cell_grid(const NetworkConfig& cfg) {
  return build_cell_grid(cfg, place_nodes(cfg.n, cfg.rng_seed));
}

}  // namespace mcis
