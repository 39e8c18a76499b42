#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mcis/analytic.hpp"
#include "mcis/config.hpp"
#include "mcis/error.hpp"
#include "mcis/geometry.hpp"
#include "mcis/routing.hpp"

namespace mcis {

struct InterferenceParams {
  double delta = 1.0;
  AntennaMode mode = AntennaMode::Omni;
  double theta = kTwoPi;  // BS beamwidth
  double phi = kTwoPi;    // node beamwidth
};

inline InterferenceParams interference_params(const NetworkConfig& c) {
  return {c.delta, c.antenna_mode, c.theta, c.phi};
}

inline double bearing(Point from, Point to) {
  double a = std::atan2(to.y - from.y, to.x - from.x);
  return a < 0 ? a + kTwoPi : a;
}

// Flat-top beam: full gain within width/2 of the boresight, none outside.
inline bool beam_covers(Point apex, double boresight, Point target, double width) {
  if (width >= kTwoPi) return true;
  double d = std::abs(bearing(apex, target) - boresight);
  d = std::min(d, kTwoPi - d);
  return d <= 0.5 * width;
}

// Does tx_b disturb the reception of tx_a at rx_a? Boresights are explicit.
inline bool interferes(Point tx_a, Point rx_a, Point tx_b, const InterferenceParams& p, double tx_b_boresight,
                       double rx_a_boresight) {
  bool omni = dist2(tx_b, rx_a) < (1.0 + p.delta) * (1.0 + p.delta) * dist2(tx_a, rx_a);
  if (!omni || p.mode == AntennaMode::Omni) return omni;
  return beam_covers(tx_b, tx_b_boresight, rx_a, p.phi) && beam_covers(rx_a, rx_a_boresight, tx_b, p.phi);
}

// Boresights follow the link partners: tx_b aims at rx_b, rx_a aims at tx_a.
inline bool interferes(Point tx_a, Point rx_a, Point tx_b, Point rx_b, const InterferenceParams& p) {
  if (p.mode == AntennaMode::Omni) return interferes(tx_a, rx_a, tx_b, p, 0.0, 0.0);
  return interferes(tx_a, rx_a, tx_b, p, bearing(tx_b, rx_b), bearing(rx_a, tx_a));
}

// ---- graphs and colorings ----

struct Graph {
  int n = 0;
  std::vector<std::vector<int>> adj;

  explicit Graph(int vertices = 0) : n(vertices), adj(static_cast<std::size_t>(vertices)) {}
  void add_edge(int u, int v) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  int max_degree() const {
    std::size_t d = 0;
    for (const auto& a : adj) d = std::max(d, a.size());
    return static_cast<int>(d);
  }
  std::size_t edge_count() const {
    std::size_t e = 0;
    for (const auto& a : adj) e += a.size();
    return e / 2;
  }
};

struct Hop {
  int tx = 0;
  int rx = 0;
  int flow = 0;
  int index = 0;  // position along the flow's path
};

// One edge per flow hop; parallel edges are kept.
inline std::vector<Hop> build_routing_graph(const FlowTable& table) {
  std::vector<Hop> hops;
  for (const auto& f : table.flows) {
    if (f.mode != Mode::AdHoc) continue;
    for (std::size_t h = 0; h + 1 < f.path.size(); ++h) {
      hops.push_back({f.path[h], f.path[h + 1], f.id, static_cast<int>(h)});
    }
  }
  return hops;
}

struct Coloring {
  std::vector<int> color;  // 0-based
  int count = 0;
};

// Greedy in edge order: smallest color free at both endpoints, so at most 2*maxdeg - 1 colors.
inline Coloring edge_color(int vertices, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<std::uint64_t>> used(static_cast<std::size_t>(vertices));
  Coloring out;
  out.color.reserve(edges.size());
  for (auto [u, v] : edges) {
    auto& a = used[u];
    auto& b = used[v];
    std::size_t words = std::max(a.size(), b.size());
    int c = -1;
    for (std::size_t w = 0; w <= words && c < 0; ++w) {
      std::uint64_t x = (w < a.size() ? a[w] : 0) | (w < b.size() ? b[w] : 0);
      if (~x != 0) c = static_cast<int>(w * 64 + static_cast<std::size_t>(std::countr_one(x)));
    }
    std::size_t w = static_cast<std::size_t>(c) / 64;
    if (a.size() <= w) a.resize(w + 1, 0);
    if (b.size() <= w) b.resize(w + 1, 0);
    a[w] |= std::uint64_t{1} << (c % 64);
    b[w] |= std::uint64_t{1} << (c % 64);
    out.color.push_back(c);
    out.count = std::max(out.count, c + 1);
  }
  return out;
}

inline Coloring edge_color(int vertices, const std::vector<Hop>& hops) {
  std::vector<std::pair<int, int>> e;
  e.reserve(hops.size());
  for (const auto& h : hops) e.emplace_back(h.tx, h.rx);
  return edge_color(vertices, e);
}

// Greedy in vertex-id order: at most maxdeg + 1 colors.
inline Coloring vertex_color(const Graph& g) {
  Coloring out;
  out.color.assign(static_cast<std::size_t>(g.n), -1);
  std::vector<int> mark;
  for (int v = 0; v < g.n; ++v) {
    mark.assign(g.adj[v].size() + 1, 0);
    for (int u : g.adj[v]) {
      int c = out.color[u];
      if (c >= 0 && c < static_cast<int>(mark.size())) mark[c] = 1;
    }
    int c = 0;
    while (mark[c]) ++c;
    out.color[v] = c;
    out.count = std::max(out.count, c + 1);
  }
  return out;
}

// Distinct outgoing links per transmitter, ascending receiver id.
inline std::vector<std::vector<int>> distinct_links(int vertices, const std::vector<Hop>& hops) {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(vertices));
  for (const auto& h : hops) out[h.tx].push_back(h.rx);
  for (auto& l : out) {
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
  }
  return out;
}

// Edge u-v iff some link of one can disturb some reception of the other's links.
inline Graph build_interference_graph(const std::vector<Point>& pos, const std::vector<Hop>& hops,
                                      const InterferenceParams& p) {
  int n = static_cast<int>(pos.size());
  Graph g(n);
  auto links = distinct_links(n, hops);
  double max_link = 0;
  std::vector<int> tx;
  for (int v = 0; v < n; ++v) {
    if (links[v].empty()) continue;
    tx.push_back(v);
    for (int y : links[v]) max_link = std::max(max_link, dist(pos[v], pos[y]));
  }
  if (tx.size() < 2) return g;
  // u disturbs some link of v only if dist(u, v) < (2 + delta) * max_link
  double reach = (2.0 + p.delta) * max_link;
  int side = std::max(1, std::min(4096, static_cast<int>(1.0 / std::max(reach, 1e-9))));
  std::unordered_map<long long, std::vector<int>> bucket;
  auto key = [&](int cx, int cy) { return static_cast<long long>(cx) * 8192 + cy; };
  auto cidx = [&](double v) { return std::clamp(static_cast<int>(v * side), 0, side - 1); };
  for (int v : tx) bucket[key(cidx(pos[v].x), cidx(pos[v].y))].push_back(v);

  auto disturbs = [&](int u, int v) {  // u transmitting disturbs one of v's receptions
    for (int y : links[v]) {
      if (p.mode == AntennaMode::Omni) {
        if (interferes(pos[v], pos[y], pos[u], p, 0.0, 0.0)) return true;
      } else {
        for (int x : links[u]) {
          if (interferes(pos[v], pos[y], pos[u], pos[x], p)) return true;
        }
      }
    }
    return false;
  };
  for (int u : tx) {
    int cx = cidx(pos[u].x), cy = cidx(pos[u].y);
    for (int dx = -1; dx <= 1; ++dx) {
      for (int dy = -1; dy <= 1; ++dy) {
        auto it = bucket.find(key(cx + dx, cy + dy));
        if (it == bucket.end()) continue;
        for (int v : it->second) {
          if (v <= u) continue;
          if (disturbs(u, v) || disturbs(v, u)) g.add_edge(u, v);
        }
      }
    }
  }
  for (auto& a : g.adj) std::sort(a.begin(), a.end());
  return g;
}

struct MiniSlot {
  int mini_slot = 1;
  int channel = 1;
  friend bool operator==(const MiniSlot&, const MiniSlot&) = default;
};

inline MiniSlot minislot_of(std::int64_t s, std::int64_t C_A) {
  return {static_cast<int>((s + C_A - 1) / C_A), static_cast<int>(s % C_A) + 1};
}

struct Transmission {
  int slot = 0;       // edge-color slot, 0-based
  int mini_slot = 1;  // 1-based
  int channel = 1;    // 1-based
  int tx = 0;
  int rx = 0;
  int flow = 0;
  int hop = 0;
};

struct AdHocSchedule {
  int edge_color_count = 0;
  int vertex_color_count = 0;
  int minislot_count = 0;
  int routing_max_degree = 0;
  int interference_max_degree = 0;
  std::vector<Transmission> entries;

  // Super-frame length in mini-slots.
  long long frame_length() const { return static_cast<long long>(edge_color_count) * minislot_count; }
  long long offset(const Transmission& t) const {
    return static_cast<long long>(t.slot) * minislot_count + (t.mini_slot - 1);
  }
};

inline AdHocSchedule build_adhoc_schedule(const Topology& topo, const FlowTable& table, const NetworkConfig& cfg) {
  AdHocSchedule s;
  int n = static_cast<int>(topo.node_positions.size());
  auto hops = build_routing_graph(table);
  if (hops.empty()) return s;
  std::vector<int> degree(static_cast<std::size_t>(n), 0);
  for (const auto& h : hops) {
    ++degree[h.tx];
    ++degree[h.rx];
  }
  s.routing_max_degree = *std::max_element(degree.begin(), degree.end());
  auto ec = edge_color(n, hops);
  auto ig = build_interference_graph(topo.node_positions, hops, interference_params(cfg));
  s.interference_max_degree = ig.max_degree();
  auto vc = vertex_color(ig);
  s.edge_color_count = ec.count;
  int top = 0;
  for (const auto& h : hops) top = std::max(top, vc.color[h.tx] + 1);
  s.vertex_color_count = top;
  s.minislot_count = static_cast<int>((top + cfg.C_A - 1) / cfg.C_A);
  s.entries.reserve(hops.size());
  for (std::size_t e = 0; e < hops.size(); ++e) {
    const auto& h = hops[e];
    auto ms = minislot_of(vc.color[h.tx] + 1, cfg.C_A);
    s.entries.push_back({ec.color[e], ms.mini_slot, ms.channel, h.tx, h.rx, h.flow, h.index});
  }
  return s;
}

inline void write_schedule_csv(std::ostream& os, const AdHocSchedule& s) {
  os << "slot,mini_slot,channel,tx,rx,flow_id\n";
  for (const auto& t : s.entries) {
    os << t.slot << ',' << t.mini_slot << ',' << t.channel << ',' << t.tx << ',' << t.rx << ',' << t.flow << '\n';
  }
}

// ---- audit ----

enum class ViolationKind { Interference, Duplex };

struct Violation {
  ViolationKind kind = ViolationKind::Interference;
  int slot = 0;
  int mini_slot = 0;
  int a = 0;  // entry index (Interference) or node id (Duplex)
  int b = 0;  // entry index
};

enum class AuditMode { BruteForce, Indexed };

// Every pair of simultaneous same-channel transmissions against the predicate, and every node
// against the single-interface rule. Indexed mode skips only pairs farther apart than any
// disturbance can reach, so both modes report the same list.
inline std::vector<Violation> verify_schedule(const std::vector<Transmission>& entries, const std::vector<Point>& pos,
                                              const InterferenceParams& p, AuditMode mode = AuditMode::Indexed) {
  std::vector<Violation> out;
  std::vector<std::size_t> order(entries.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const auto& a = entries[x];
    const auto& b = entries[y];
    if (a.slot != b.slot) return a.slot < b.slot;
    if (a.mini_slot != b.mini_slot) return a.mini_slot < b.mini_slot;
    return x < y;
  });
  std::unordered_map<int, int> seen;
  auto pair_check = [&](std::size_t i, std::size_t j) {
    const auto& a = entries[i];
    const auto& b = entries[j];
    if (a.channel != b.channel) return;
    if (interferes(pos[a.tx], pos[a.rx], pos[b.tx], pos[b.rx], p) ||
        interferes(pos[b.tx], pos[b.rx], pos[a.tx], pos[a.rx], p)) {
      out.push_back({ViolationKind::Interference, a.slot, a.mini_slot, static_cast<int>(std::min(i, j)),
                     static_cast<int>(std::max(i, j))});
    }
  };
  std::size_t lo = 0;
  while (lo < order.size()) {
    std::size_t hi = lo;
    const auto& first = entries[order[lo]];
    while (hi < order.size() && entries[order[hi]].slot == first.slot &&
           entries[order[hi]].mini_slot == first.mini_slot) {
      ++hi;
    }
    seen.clear();
    for (std::size_t k = lo; k < hi; ++k) {
      const auto& t = entries[order[k]];
      for (int node : {t.tx, t.rx}) {
        auto [it, fresh] = seen.emplace(node, static_cast<int>(order[k]));
        if (!fresh) out.push_back({ViolationKind::Duplex, t.slot, t.mini_slot, node, static_cast<int>(order[k])});
      }
    }
    if (mode == AuditMode::BruteForce || hi - lo <= 64) {
      for (std::size_t x = lo; x < hi; ++x) {
        for (std::size_t y = x + 1; y < hi; ++y) pair_check(order[x], order[y]);
      }
    } else {
      double max_link = 0;
      for (std::size_t k = lo; k < hi; ++k) max_link = std::max(max_link, dist(pos[entries[order[k]].tx], pos[entries[order[k]].rx]));
      double reach = (2.0 + p.delta) * max_link;
      int side = std::max(1, std::min(4096, static_cast<int>(1.0 / std::max(reach, 1e-9))));
      auto cidx = [&](double v) { return std::clamp(static_cast<int>(v * side), 0, side - 1); };
      std::unordered_map<long long, std::vector<std::size_t>> bucket;
      for (std::size_t k = lo; k < hi; ++k) {
        const auto& t = pos[entries[order[k]].tx];
        bucket[static_cast<long long>(cidx(t.x)) * 8192 + cidx(t.y)].push_back(order[k]);
      }
      for (std::size_t k = lo; k < hi; ++k) {
        std::size_t i = order[k];
        const auto& t = pos[entries[i].tx];
        int cx = cidx(t.x), cy = cidx(t.y);
        for (int dx = -1; dx <= 1; ++dx) {
          for (int dy = -1; dy <= 1; ++dy) {
            auto it = bucket.find(static_cast<long long>(cx + dx) * 8192 + (cy + dy));
            if (it == bucket.end()) continue;
            for (std::size_t j : it->second) {
              if (j > i) pair_check(i, j);
            }
          }
        }
      }
    }
    lo = hi;
  }
  std::sort(out.begin(), out.end(), [](const Violation& x, const Violation& y) {
    return std::tie(x.slot, x.mini_slot, x.kind, x.a, x.b) < std::tie(y.slot, y.mini_slot, y.kind, y.a, y.b);
  });
  return out;
}

// ---- analytic interference constants and BS scheduling ----

inline double interfering_cell_bound(double delta, AntennaMode mode, double phi = kTwoPi) {
  if (mode == AntennaMode::Omni) return 4.0 * (1.0 + delta) * (1.0 + delta);
  double f = phi / kTwoPi;
  return 81.0 * (2.0 + delta) * (2.0 + delta) * f * f;
}

inline std::int64_t bs_interfaces_directional(double theta, std::int64_t C_I) { return sector_count(theta) * C_I; }

struct BsSchedule {
  int frame_length = 9;
  int b0 = 1;
  std::vector<int> slot_of_bs_cell;  // indexed row * b0 + col
};

inline BsSchedule build_bs_schedule(int b0, int k8 = 8) {
  int size = k8 + 1;
  if (k8 < 0 || !is_perfect_square(size)) {
    throw Error(ErrorCode::ClusterMismatch, "k8 + 1 = " + std::to_string(size) + " is not a perfect square");
  }
  int q = static_cast<int>(isqrt(size));
  BsSchedule s;
  s.frame_length = size;
  s.b0 = b0;
  s.slot_of_bs_cell.resize(static_cast<std::size_t>(b0) * b0);
  for (int row = 0; row < b0; ++row) {
    for (int col = 0; col < b0; ++col) s.slot_of_bs_cell[static_cast<std::size_t>(row) * b0 + col] = (row % q) * q + (col % q);
  }
  return s;
}

// Worst case over node positions: a node anywhere in BS-cell B against the longest uplink in
// co-slotted BS-cell A (half diagonal). True iff no such pair can interfere.
inline bool bs_schedule_sound(const BsSchedule& s, double delta) {
  int b0 = s.b0;
  double w = 1.0 / b0;
  double longest = w * std::sqrt(0.5);
  for (int a = 0; a < b0 * b0; ++a) {
    for (int b = 0; b < b0 * b0; ++b) {
      if (a == b || s.slot_of_bs_cell[a] != s.slot_of_bs_cell[b]) continue;
      Point bs{((a % b0) + 0.5) * w, ((a / b0) + 0.5) * w};
      double d2 = cell_dist2(bs, b, b0);
      if (d2 < (1.0 + delta) * (1.0 + delta) * longest * longest) return false;
    }
  }
  return true;
}

}  // namespace mcis
