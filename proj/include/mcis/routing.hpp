#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mcis/config.hpp"
#include "mcis/error.hpp"
#include "mcis/geometry.hpp"

namespace mcis {

enum class Mode { AdHoc, Infra };

inline std::string_view to_string(Mode m) { return m == Mode::AdHoc ? "adhoc" : "infra"; }

struct Flow {
  int id = 0;
  int src = 0;
  int dst = 0;
  Mode mode = Mode::AdHoc;
  std::vector<int> path;  // src, relays..., dst (ad hoc only)
  int uplink_bs = -1;
  int downlink_bs = -1;
  double rate = 0;
  bool fallback = false;  // ad hoc eligible, routed through BSs

  int hop_count() const { return mode == Mode::AdHoc ? static_cast<int>(path.size()) - 1 : 2; }
};

struct FlowTable {
  std::vector<Flow> flows;
  std::vector<int> per_node_load;  // flows whose path or endpoints include the node
  std::vector<int> relay_load;     // flows relayed by the node (endpoints excluded)
  int dropped = 0;
  int fallbacks = 0;

  int adhoc_count() const {
    return static_cast<int>(std::count_if(flows.begin(), flows.end(), [](const Flow& f) { return f.mode == Mode::AdHoc; }));
  }
};

inline Mode decide_mode(Point src, Point dst, std::int64_t H, double range) {
  return dist(src, dst) <= static_cast<double>(H) * range ? Mode::AdHoc : Mode::Infra;
}

// ---- segment / grid geometry ----

// Closed segment vs closed axis-aligned square [x0,x1] x [y0,y1] (Liang-Barsky clip).
inline bool segment_hits_box(Point a, Point b, double x0, double y0, double x1, double y1) {
  double t0 = 0, t1 = 1;
  double dx = b.x - a.x, dy = b.y - a.y;
  auto clip = [&](double p, double q) {
    if (p == 0) return q >= 0;
    double r = q / p;
    if (p < 0) {
      if (r > t1) return false;
      if (r > t0) t0 = r;
    } else {
      if (r < t0) return false;
      if (r < t1) t1 = r;
    }
    return true;
  };
  return clip(-dx, a.x - x0) && clip(dx, x1 - a.x) && clip(-dy, a.y - y0) && clip(dy, y1 - a.y);
}

inline bool segment_hits_cell(Point a, Point b, CellIndex c, int s) {
  double w = 1.0 / s;
  return segment_hits_box(a, b, c.col * w, c.row * w, (c.col + 1) * w, (c.row + 1) * w);
}

struct CellVisit {
  int cell = 0;       // linear id
  double t_enter = 0; // segment parameter where the visit begins
};

// Grid traversal from cell_of(a). With `closed`, cells touched only at a corner or at the far
// endpoint are included so the set equals the closed-square intersection set.
inline std::vector<CellVisit> cells_on_segment(Point a, Point b, int s, bool closed = false) {
  std::vector<CellVisit> out;
  CellIndex c = cell_of(a, s);
  double dx = b.x - a.x, dy = b.y - a.y;
  int step_x = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
  int step_y = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
  const double inf = std::numeric_limits<double>::infinity();
  auto next_t = [&](double p, double d, int idx, int step) {
    if (step == 0) return inf;
    double boundary = (step > 0 ? idx + 1 : idx) / static_cast<double>(s);
    return (boundary - p) / d;
  };
  auto dt = [&](double d) { return d == 0 ? inf : 1.0 / (s * std::abs(d)); };
  double tx = next_t(a.x, dx, c.col, step_x), ty = next_t(a.y, dy, c.row, step_y);
  double tdx = dt(dx), tdy = dt(dy);
  auto push = [&](int row, int col, double t) {
    if (row < 0 || row >= s || col < 0 || col >= s) return;
    int id = row * s + col;
    if (!out.empty() && out.back().cell == id) return;
    out.push_back({id, t});
  };
  push(c.row, c.col, 0.0);
  auto within = [&](double t) { return closed ? t <= 1.0 : t < 1.0; };
  for (int guard = 0; guard < 4 * s + 8; ++guard) {
    double t = std::min(tx, ty);
    if (!within(t)) break;
    if (tx < ty) {
      c.col += step_x;
      tx += tdx;
    } else if (ty < tx) {
      c.row += step_y;
      ty += tdy;
    } else {
      if (closed) {
        push(c.row, c.col + step_x, t);
        push(c.row + step_y, c.col, t);
      }
      c.col += step_x;
      c.row += step_y;
      tx += tdx;
      ty += tdy;
    }
    if (c.row < 0 || c.row >= s || c.col < 0 || c.col >= s) break;
    push(c.row, c.col, t);
  }
  return out;
}

// Squared distance from p to the closed square of `cell`.
inline double cell_dist2(Point p, int cell, int s) {
  double w = 1.0 / s;
  int row = cell / s, col = cell % s;
  double cx = std::clamp(p.x, col * w, (col + 1) * w);
  double cy = std::clamp(p.y, row * w, (row + 1) * w);
  double dx = p.x - cx, dy = p.y - cy;
  return dx * dx + dy * dy;
}

inline double dist_to_line(Point p, Point a, Point b) {
  double dx = b.x - a.x, dy = b.y - a.y;
  double len = std::sqrt(dx * dx + dy * dy);
  if (len == 0) return dist(p, a);
  return std::abs(dx * (p.y - a.y) - dy * (p.x - a.x)) / len;
}

enum class RelayPolicy { NearestToSegment, LeastLoaded };

// Relays stay within this many ranges of the S-D line.
inline constexpr double kCorridorHalfWidth = 1.0;
// A relay must make at least this share of the best progress available from the current holder.
inline constexpr double kProgressFloor = 0.5;

// Greedy forwarding along the S-D line: candidates are within range of the current holder,
// strictly ahead of it, not past the destination and inside the corridor around the line.
// `policy` picks among the candidates with enough progress.
inline std::vector<int> build_adhoc_path(int src, int dst, const Topology& topo, std::int64_t H,
                                         RelayPolicy policy = RelayPolicy::NearestToSegment,
                                         const std::vector<int>* load = nullptr) {
  const auto& pos = topo.node_positions;
  Point a = pos[src], b = pos[dst];
  double r = topo.range, r2 = r * r;
  std::vector<int> path{src};
  if (src == dst) return path;
  double len = dist(a, b);
  double ux = (b.x - a.x) / len, uy = (b.y - a.y) / len;
  auto progress = [&](int v) { return (pos[v].x - a.x) * ux + (pos[v].y - a.y) * uy; };
  auto offset = [&](int v) { return std::abs((pos[v].y - a.y) * ux - (pos[v].x - a.x) * uy); };
  const double corridor = kCorridorHalfWidth * r;
  auto budget_error = [&] {
    return Error(ErrorCode::HopBudgetExceeded, "flow " + std::to_string(src) + "->" + std::to_string(dst) +
                                                   " needs more than H=" + std::to_string(H) + " hops");
  };
  std::vector<std::pair<int, double>> cand;
  int cur = src;
  while (true) {
    if (dist2(pos[cur], b) <= r2) {
      path.push_back(dst);
      break;
    }
    if (static_cast<std::int64_t>(path.size()) >= H) throw budget_error();
    double p0 = progress(cur);
    double top = p0;
    cand.clear();
    topo.for_each_within(pos[cur], r, [&](int v) {
      if (v == src || v == dst) return;
      double p = progress(v);
      if (p <= p0 || p > len || offset(v) > corridor) return;
      cand.emplace_back(v, p);
      top = std::max(top, p);
    });
    if (cand.empty()) {
      throw Error(ErrorCode::EmptyCell, "flow " + std::to_string(src) + "->" + std::to_string(dst) +
                                            ": no node in range ahead along the line");
    }
    double floor_p = p0 + kProgressFloor * (top - p0);
    int pick = -1;
    double pick_d = 0;
    int pick_load = 0;
    for (auto [v, p] : cand) {
      if (p < floor_p) continue;
      double d = offset(v);
      int l = (policy == RelayPolicy::LeastLoaded && load) ? (*load)[v] : 0;
      if (pick < 0 || l < pick_load || (l == pick_load && (d < pick_d || (d == pick_d && v < pick)))) {
        pick = v;
        pick_d = d;
        pick_load = l;
      }
    }
    path.push_back(pick);
    cur = pick;
  }
  if (static_cast<std::int64_t>(path.size()) - 1 > H) throw budget_error();
  return path;
}

// Unbiased index in [0, n) from one 64-bit draw (multiply-shift).
inline std::int64_t draw_index(std::mt19937_64& g, std::int64_t n) {
  return static_cast<std::int64_t>((static_cast<unsigned __int128>(g()) * static_cast<std::uint64_t>(n)) >> 64);
}

inline std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

inline std::vector<int> draw_destinations(std::int64_t n, std::uint64_t seed) {
  auto g = stream_rng(seed, 0x5d);
  std::vector<int> dst(static_cast<std::size_t>(n), -1);
  for (std::int64_t i = 0; i < n; ++i) {
    auto d = draw_index(g, n);
    if (d == i) d = draw_index(g, n);
    dst[static_cast<std::size_t>(i)] = d == i ? -1 : static_cast<int>(d);
  }
  return dst;
}

// With `adhoc_allowed` false every flow is routed through BSs (saturated infrastructure traffic).
inline FlowTable assign_flows_to(const Topology& topo, const NetworkConfig& cfg, const std::vector<int>& dests,
                                 bool adhoc_allowed = true) {
  FlowTable t;
  std::size_t n = topo.node_positions.size();
  t.per_node_load.assign(n, 0);
  t.relay_load.assign(n, 0);
  double hr = static_cast<double>(cfg.H) * topo.range;
  for (std::size_t i = 0; i < n; ++i) {
    int d = dests[i];
    if (d < 0) {
      ++t.dropped;
      continue;
    }
    Flow f;
    f.id = static_cast<int>(t.flows.size());
    f.src = static_cast<int>(i);
    f.dst = d;
    f.mode = adhoc_allowed && dist(topo.node_positions[i], topo.node_positions[d]) <= hr ? Mode::AdHoc : Mode::Infra;
    if (f.mode == Mode::AdHoc) {
      try {
        f.path = build_adhoc_path(f.src, f.dst, topo, cfg.H, RelayPolicy::LeastLoaded, &t.relay_load);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::EmptyCell && e.code() != ErrorCode::HopBudgetExceeded) throw;
        f.mode = Mode::Infra;
        f.fallback = true;
        ++t.fallbacks;
      }
    }
    if (f.mode == Mode::AdHoc) {
      for (std::size_t h = 0; h < f.path.size(); ++h) {
        ++t.per_node_load[f.path[h]];
        if (h > 0 && h + 1 < f.path.size()) ++t.relay_load[f.path[h]];
      }
    } else {
      f.uplink_bs = topo.node_bs_cell[f.src];
      f.downlink_bs = topo.node_bs_cell[f.dst];
      ++t.per_node_load[f.src];
      ++t.per_node_load[f.dst];
    }
    t.flows.push_back(std::move(f));
  }
  return t;
}

inline FlowTable assign_flows(const Topology& topo, const NetworkConfig& cfg, std::uint64_t seed,
                              bool adhoc_allowed = true) {
  return assign_flows_to(topo, cfg, draw_destinations(static_cast<std::int64_t>(topo.node_positions.size()), seed),
                         adhoc_allowed);
}

inline int lines_through_cell(const FlowTable& table, CellIndex cell, const Topology& topo) {
  int count = 0;
  for (const auto& f : table.flows) {
    if (f.mode != Mode::AdHoc) continue;
    if (segment_hits_cell(topo.node_positions[f.src], topo.node_positions[f.dst], cell, topo.cell_side_count)) ++count;
  }
  return count;
}

// Counts for every cell at once; agrees with lines_through_cell cell by cell.
inline std::vector<int> lines_per_cell(const FlowTable& table, const Topology& topo) {
  std::vector<int> counts(static_cast<std::size_t>(topo.cell_count()), 0);
  for (const auto& f : table.flows) {
    if (f.mode != Mode::AdHoc) continue;
    for (const auto& v : cells_on_segment(topo.node_positions[f.src], topo.node_positions[f.dst], topo.cell_side_count, true)) {
      ++counts[static_cast<std::size_t>(v.cell)];
    }
  }
  return counts;
}

inline int max_flows_per_node(const FlowTable& table) {
  if (table.flows.empty()) return 0;
  int hi = 0;
  for (const auto& f : table.flows) hi = std::max(hi, f.dst);
  std::vector<int> in(static_cast<std::size_t>(hi) + 1, 0);
  int best = 0;
  for (const auto& f : table.flows) best = std::max(best, ++in[static_cast<std::size_t>(f.dst)]);
  return best;
}

inline void write_flow_csv(std::ostream& os, const FlowTable& table) {
  os << "flow_id,src,dst,mode,hop_count,bs_up,bs_down\n";
  for (const auto& f : table.flows) {
    os << f.id << ',' << f.src << ',' << f.dst << ',' << to_string(f.mode) << ',' << f.hop_count() << ',';
    if (f.mode == Mode::Infra) os << f.uplink_bs << ',' << f.downlink_bs;
    else os << ',';
    os << '\n';
  }
}

}  // namespace mcis
