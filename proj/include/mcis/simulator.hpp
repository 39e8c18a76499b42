#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "mcis/analytic.hpp"
#include "mcis/config.hpp"
#include "mcis/error.hpp"
#include "mcis/geometry.hpp"
#include "mcis/routing.hpp"
#include "mcis/scheduling.hpp"

namespace mcis {

inline constexpr int kInfraFillFrames = 4;

struct SimOptions {
  std::int64_t horizon = 0;  // slots; 0 picks warm-up + measure_frames super-frames
  int warmup_frames = 2;
  int measure_frames = 18;
  int k8 = 8;
  double relay_constant = 1.0;  // c1, slots a packet spends per relay
  bool audit = true;
  bool infra_only = false;  // route every flow through BSs
  double interior_margin = 0;  // > 0: lambda averages only sources this far from the border
  AuditMode audit_mode = AuditMode::Indexed;
};

struct MetricsReport {
  std::uint64_t seed = 0;
  std::int64_t n = 0;
  std::vector<double> per_node_throughput;
  double lambda = 0;
  double T_A = 0;
  double T_I = 0;
  double D_a = 0;
  double D_i = 0;
  double D = 0;
  double packets_adhoc = 0;
  double packets_infra = 0;
  double bits_injected = 0;
  double bits_delivered = 0;
  std::map<int, int> hop_histogram;
  int n_t = 0;  // flows carried in ad hoc mode
  int n_infra = 0;
  int dropped = 0;
  int fallbacks = 0;
  double mean_hops = 0;
  int max_hops = 0;
  int edge_colors = 0;
  int vertex_colors = 0;
  int minislots = 0;
  long long adhoc_frame = 0;
  int bs_frame = 0;
  std::int64_t horizon = 0;
  std::int64_t warmup = 0;
  int cell_side = 0;
  int max_lines_per_cell = 0;
  int max_inbound = 0;
  std::size_t audit = 0;
};

struct SimState {
  Topology topo;
  FlowTable table;
  AdHocSchedule adhoc;
  BsSchedule bs;
};

inline SimState prepare(const NetworkConfig& cfg, std::uint64_t seed, const SimOptions& opt = {}) {
  SimState st;
  st.topo = build_cell_grid(cfg, place_nodes(cfg.n, seed));
  st.table = assign_flows(st.topo, cfg, seed, !opt.infra_only);
  st.adhoc = build_adhoc_schedule(st.topo, st.table, cfg);
  st.bs = build_bs_schedule(static_cast<int>(cfg.b0), opt.k8);
  return st;
}

// Per-slot fluid service of one BS in its active slot.
inline double infra_slot_capacity(const NetworkConfig& cfg) {
  std::int64_t channels = cfg.antenna_mode == AntennaMode::Directional ? cfg.C_I : std::min(cfg.C_I, cfg.m);
  return static_cast<double>(channels) * (cfg.W_I / static_cast<double>(cfg.C_I)) / cfg.bs_service_constant;
}

inline MetricsReport run_prepared(const NetworkConfig& cfg, std::uint64_t seed, const SimState& st,
                                  const SimOptions& opt = {}) {
  MetricsReport rep;
  rep.seed = seed;
  rep.n = cfg.n;
  const auto& flows = st.table.flows;
  const auto& sched = st.adhoc;
  rep.dropped = st.table.dropped;
  rep.fallbacks = st.table.fallbacks;
  rep.cell_side = st.topo.cell_side_count;
  rep.edge_colors = sched.edge_color_count;
  rep.vertex_colors = sched.vertex_color_count;
  rep.minislots = sched.minislot_count;
  rep.max_inbound = max_flows_per_node(st.table);
  {
    auto lines = lines_per_cell(st.table, st.topo);
    rep.max_lines_per_cell = lines.empty() ? 0 : *std::max_element(lines.begin(), lines.end());
  }

  if (opt.audit && !sched.entries.empty()) {
    auto v = verify_schedule(sched.entries, st.topo.node_positions, interference_params(cfg), opt.audit_mode);
    rep.audit = v.size();
    if (!v.empty()) throw Error(ErrorCode::ScheduleInvalid, std::to_string(v.size()) + " audit violations");
  }

  std::vector<int> hops(flows.size(), 0);
  long long hop_sum = 0;
  for (std::size_t f = 0; f < flows.size(); ++f) {
    if (flows[f].mode == Mode::AdHoc) {
      hops[f] = flows[f].hop_count();
      ++rep.n_t;
      ++rep.hop_histogram[hops[f]];
      hop_sum += hops[f];
      rep.max_hops = std::max(rep.max_hops, hops[f]);
    } else {
      ++rep.n_infra;
    }
  }
  rep.mean_hops = rep.n_t ? static_cast<double>(hop_sum) / rep.n_t : 0.0;

  const bool adhoc_on = !sched.entries.empty() && cfg.W_A > 0;
  const bool infra_on = rep.n_infra > 0 && cfg.W_I > 0;
  const long long Fa = adhoc_on ? sched.frame_length() : 0;
  const int Fi = infra_on ? st.bs.frame_length : 0;
  const long long F = std::max<long long>({Fa, static_cast<long long>(Fi), 1});
  rep.adhoc_frame = Fa;
  rep.bs_frame = Fi;
  // Fluid needs up to one ad hoc frame per hop to reach the far end of a path, and a few BS
  // frames to fill the downlink queues.
  const int fill = std::max(adhoc_on ? rep.max_hops : 0, infra_on ? kInfraFillFrames : 0);
  const std::int64_t warmup = (opt.warmup_frames + fill) * F;
  const std::int64_t horizon = opt.horizon > 0 ? opt.horizon : warmup + opt.measure_frames * F;
  if (horizon < warmup + F) {
    throw Error(ErrorCode::HorizonTooShort, "horizon " + std::to_string(horizon) + " < warm-up " +
                                                std::to_string(warmup) + " + one super-frame " + std::to_string(F));
  }
  rep.horizon = horizon;
  rep.warmup = warmup;

  // Whole frames of each subsystem inside [warmup, horizon).
  auto frame_window = [&](long long frame) -> std::pair<long long, long long> {
    if (frame <= 0) return {0, 0};
    long long first = (warmup + frame - 1) / frame;
    long long last = horizon / frame;  // exclusive
    return {first, std::max(first, last)};
  };
  auto [a_first, a_last] = frame_window(Fa);
  auto [i_first, i_last] = frame_window(Fi);
  const double a_time = static_cast<double>((a_last - a_first) * Fa);
  const double i_time = static_cast<double>((i_last - i_first) * Fi);

  std::vector<double> delivered(flows.size(), 0.0);

  // ---- ad hoc fluid ----
  double a_bits = 0, a_packets = 0, a_delay_sum = 0;
  if (adhoc_on) {
    const double cap = cfg.W_A / static_cast<double>(cfg.C_A);
    std::vector<std::size_t> base(flows.size() + 1, 0);
    for (std::size_t f = 0; f < flows.size(); ++f) base[f + 1] = base[f] + static_cast<std::size_t>(hops[f]);
    std::vector<double> buf(base.back(), 0.0);  // buf[base[f] + h]: bits waiting at the tx of hop h
    std::vector<std::size_t> order(sched.entries.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return sched.offset(sched.entries[x]) < sched.offset(sched.entries[y]);
    });
    struct Act {
      std::size_t slot_idx;  // into buf
      int flow;
      bool first;
      bool last;
    };
    std::vector<Act> acts;
    acts.reserve(order.size());
    for (auto i : order) {
      const auto& e = sched.entries[i];
      acts.push_back({base[e.flow] + static_cast<std::size_t>(e.hop), e.flow, e.hop == 0, e.hop + 1 == hops[e.flow]});
    }
    const long long frames = horizon / Fa;
    for (long long k = 0; k < frames; ++k) {
      const bool measured = k >= a_first && k < a_last;
      for (const auto& a : acts) {
        double move = a.first ? cap : std::min(cap, buf[a.slot_idx]);
        if (move <= 0) continue;
        if (a.first) rep.bits_injected += move;
        else buf[a.slot_idx] -= move;
        if (a.last) {
          rep.bits_delivered += move;
          if (measured) delivered[a.flow] += move;
        } else {
          buf[a.slot_idx + 1] += move;
        }
      }
    }
    for (std::size_t f = 0; f < flows.size(); ++f) {
      if (flows[f].mode != Mode::AdHoc || delivered[f] <= 0) continue;
      double pk = delivered[f] / cap;
      a_bits += delivered[f];
      a_packets += pk;
      a_delay_sum += pk * opt.relay_constant * hops[f];
    }
  }

  // ---- infrastructure fluid ----
  double i_bits = 0, i_packets = 0, i_delay_sum = 0;
  if (infra_on) {
    const int b = static_cast<int>(cfg.b);
    const double cap = infra_slot_capacity(cfg);
    const double quantum = cfg.W_I / static_cast<double>(cfg.C_I);
    const double per_packet_delay = cfg.bs_service_constant / static_cast<double>(bs_concurrency(cfg));
    std::vector<std::vector<int>> up(static_cast<std::size_t>(b)), down(static_cast<std::size_t>(b));
    for (std::size_t f = 0; f < flows.size(); ++f) {
      if (flows[f].mode != Mode::Infra) continue;
      up[flows[f].uplink_bs].push_back(static_cast<int>(f));
      down[flows[f].downlink_bs].push_back(static_cast<int>(f));
    }
    std::vector<double> q(flows.size(), 0.0);  // bits of flow f waiting at its downlink BS
    std::vector<double> Q(static_cast<std::size_t>(b), 0.0);
    const double room_cap = 2.0 * cap;  // downlink buffer bound that gates uplink admission
    std::vector<std::vector<int>> by_slot(static_cast<std::size_t>(Fi));
    for (int k = 0; k < b; ++k) by_slot[st.bs.slot_of_bs_cell[k]].push_back(k);
    // Uplink u feeds destination groups; within a group the flows split evenly.
    struct Group {
      int d;
      std::vector<int> flows;
    };
    std::vector<std::vector<Group>> groups(static_cast<std::size_t>(b));
    for (int u = 0; u < b; ++u) {
      std::vector<std::vector<int>> by_dest(static_cast<std::size_t>(b));
      for (int f : up[u]) by_dest[flows[f].downlink_bs].push_back(f);
      for (int d = 0; d < b; ++d) {
        if (!by_dest[d].empty()) groups[u].push_back({d, std::move(by_dest[d])});
      }
    }
    std::vector<double> level;
    for (std::int64_t t = 0; t < horizon; ++t) {
      const long long frame = t / Fi;
      const bool measured = frame >= i_first && frame < i_last;
      for (int u : by_slot[t % Fi]) {
        // Water-fill the emptiest downlink queues first, none above room_cap.
        auto& gs = groups[u];
        if (gs.empty()) continue;
        std::sort(gs.begin(), gs.end(), [&](const Group& x, const Group& y) {
          return Q[x.d] < Q[y.d] || (Q[x.d] == Q[y.d] && x.d < y.d);
        });
        double remaining = cap;
        double fill = Q[gs[0].d];
        std::size_t k = 1;
        while (remaining > 0 && fill < room_cap) {
          double next = k < gs.size() ? std::min(Q[gs[k].d], room_cap) : room_cap;
          double need = (next - fill) * static_cast<double>(k);
          if (need >= remaining) {
            fill += remaining / static_cast<double>(k);
            remaining = 0;
            break;
          }
          remaining -= need;
          fill = next;
          if (k < gs.size() && Q[gs[k].d] <= fill) ++k;
        }
        for (std::size_t j = 0; j < k; ++j) {
          int d = gs[j].d;
          double give = fill - Q[d];
          if (give <= 0) continue;
          double each = give / static_cast<double>(gs[j].flows.size());
          for (int f : gs[j].flows) q[f] += each;
          Q[d] = fill;
          rep.bits_injected += give;
        }
      }
      for (int d : by_slot[t % Fi]) {
        if (Q[d] <= 0) continue;
        double serve = std::min(cap, Q[d]);
        double frac = serve / Q[d];
        for (int f : down[d]) {
          double x = q[f] * frac;
          if (x <= 0) continue;
          q[f] -= x;
          rep.bits_delivered += x;
          if (measured) delivered[f] += x;
        }
        Q[d] -= serve;
        if (Q[d] < 1e-12 * cap) Q[d] = 0;
      }
    }
    for (std::size_t f = 0; f < flows.size(); ++f) {
      if (flows[f].mode != Mode::Infra || delivered[f] <= 0) continue;
      double pk = delivered[f] / quantum;
      i_bits += delivered[f];
      i_packets += pk;
      i_delay_sum += pk * per_packet_delay;
    }
  }

  rep.T_A = a_time > 0 ? a_bits / a_time : 0.0;
  rep.T_I = i_time > 0 ? i_bits / i_time : 0.0;
  rep.per_node_throughput.assign(static_cast<std::size_t>(cfg.n), 0.0);
  for (std::size_t f = 0; f < flows.size(); ++f) {
    double time = flows[f].mode == Mode::AdHoc ? a_time : i_time;
    rep.per_node_throughput[static_cast<std::size_t>(flows[f].src)] = time > 0 ? delivered[f] / time : 0.0;
  }
  double sum = 0;
  std::int64_t counted = 0;
  for (std::int64_t i = 0; i < cfg.n; ++i) {
    const auto& p = st.topo.node_positions[static_cast<std::size_t>(i)];
    if (opt.interior_margin > 0 && std::min({p.x, 1 - p.x, p.y, 1 - p.y}) < opt.interior_margin) continue;
    sum += rep.per_node_throughput[static_cast<std::size_t>(i)];
    ++counted;
  }
  rep.lambda = counted > 0 ? sum / static_cast<double>(counted) : 0.0;
  rep.packets_adhoc = a_packets;
  rep.packets_infra = i_packets;
  rep.D_a = a_packets > 0 ? a_delay_sum / a_packets : 0.0;
  rep.D_i = i_packets > 0 ? i_delay_sum / i_packets : 0.0;
  rep.D = (a_packets + i_packets) > 0 ? (a_delay_sum + i_delay_sum) / (a_packets + i_packets) : 0.0;
  return rep;
}

inline MetricsReport run(const NetworkConfig& cfg, std::uint64_t seed, const SimOptions& opt = {}) {
  auto st = prepare(cfg, seed, opt);
  return run_prepared(cfg, seed, st, opt);
}

inline MetricsReport run(const NetworkConfig& cfg, std::uint64_t seed, std::int64_t horizon) {
  SimOptions opt;
  opt.horizon = horizon;
  return run(cfg, seed, opt);
}

struct ThroughputMeasure {
  double lambda_measured = 0;
  double T_A = 0;
  double T_I = 0;
};

inline ThroughputMeasure measure_throughput(const MetricsReport& r) { return {r.lambda, r.T_A, r.T_I}; }

struct DelayMeasure {
  double D_a = 0;
  double D_i = 0;
  double D = 0;
};

inline DelayMeasure measure_delay(const MetricsReport& r) {
  if (r.packets_adhoc + r.packets_infra <= 0) throw Error(ErrorCode::NoPackets, "no packet delivered in the window");
  return {r.D_a, r.D_i, r.D};
}

inline const std::vector<std::string>& metrics_columns() {
  static const std::vector<std::string> cols = {
      "seed", "n", "lambda", "T_A", "T_I", "D_a", "D_i", "D", "packets_adhoc", "packets_infra",
      "bits_injected", "bits_delivered", "n_t", "n_infra", "dropped", "fallbacks", "mean_hops", "max_hops",
      "edge_colors", "vertex_colors", "minislots", "adhoc_frame", "bs_frame", "horizon", "warmup",
      "cell_side", "max_lines_per_cell", "max_inbound", "audit"};
  return cols;
}

inline std::vector<double> metrics_values(const MetricsReport& r) {
  return {static_cast<double>(r.seed), static_cast<double>(r.n), r.lambda, r.T_A, r.T_I, r.D_a, r.D_i, r.D,
          r.packets_adhoc, r.packets_infra, r.bits_injected, r.bits_delivered, static_cast<double>(r.n_t),
          static_cast<double>(r.n_infra), static_cast<double>(r.dropped), static_cast<double>(r.fallbacks),
          r.mean_hops, static_cast<double>(r.max_hops), static_cast<double>(r.edge_colors),
          static_cast<double>(r.vertex_colors), static_cast<double>(r.minislots), static_cast<double>(r.adhoc_frame),
          static_cast<double>(r.bs_frame), static_cast<double>(r.horizon), static_cast<double>(r.warmup),
          static_cast<double>(r.cell_side), static_cast<double>(r.max_lines_per_cell),
          static_cast<double>(r.max_inbound), static_cast<double>(r.audit)};
}

}  // namespace mcis
