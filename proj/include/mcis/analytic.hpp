#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>
#include <string_view>
#include <utility>

#include "mcis/config.hpp"
#include "mcis/error.hpp"
#include "mcis/geometry.hpp"

namespace mcis {

// Orders are evaluated with every implied constant set to 1 and natural logs.

enum class Condition { Connectivity, Interference, DestinationBottleneck, InterfaceBottleneck };

inline std::string_view to_string(Condition c) {
  switch (c) {
    case Condition::Connectivity: return "Connectivity";
    case Condition::Interference: return "Interference";
    case Condition::DestinationBottleneck: return "DestinationBottleneck";
    case Condition::InterfaceBottleneck: return "InterfaceBottleneck";
  }
  return "?";
}

struct Thresholds {
  double F1 = 0, F2 = 0, G1 = 0, G2 = 0, G3 = 0;
};

inline Thresholds thresholds(std::int64_t n, std::int64_t H, std::int64_t C_A = 1) {
  double x = h2logn(n, H);
  double dn = static_cast<double>(n);
  double L = std::log(dn);
  double q = std::log(std::log(x)) / std::log(x);
  Thresholds t;
  t.F1 = L;
  t.F2 = dn * q * q;
  t.G1 = std::cbrt(dn) / std::pow(L, 2.0 / 3.0);
  t.G2 = std::cbrt(dn) * std::pow(static_cast<double>(C_A), 1.0 / 6.0) / std::sqrt(L);
  t.G3 = std::sqrt(dn / L);
  return t;
}

// Case 1: C_A <= F1, Case 2: F1 < C_A <= F2, Case 3: C_A > F2; sub-case x.1 iff H < G_x.
inline int regime_case(std::int64_t n, std::int64_t C_A, std::int64_t H) {
  auto t = thresholds(n, H, C_A);
  double ca = static_cast<double>(C_A);
  if (ca <= t.F1) return 1;
  if (ca <= t.F2) return 2;
  return 3;
}

inline Condition classify_regime(std::int64_t n, std::int64_t C_A, std::int64_t H) {
  auto t = thresholds(n, H, C_A);
  double ca = static_cast<double>(C_A);
  double h = static_cast<double>(H);
  if (ca <= t.F1) return h < t.G1 ? Condition::InterfaceBottleneck : Condition::Connectivity;
  if (ca <= t.F2) return h < t.G2 ? Condition::InterfaceBottleneck : Condition::Interference;
  return h < t.G3 ? Condition::InterfaceBottleneck : Condition::DestinationBottleneck;
}

// Exact value as a reduced fraction (numerator, denominator).
inline std::pair<std::int64_t, std::int64_t> expected_hops_fraction(std::int64_t H) {
  std::int64_t num = 4 * H * H * H + 3 * H * H - H;
  std::int64_t den = 6 * H * H;
  auto g = std::gcd(num, den);
  return {num / g, den / g};
}

inline double expected_hops(std::int64_t H) {
  double h = static_cast<double>(H);
  return (4.0 * h * h * h + 3.0 * h * h - h) / (6.0 * h * h);
}

inline double prob_adhoc(std::int64_t H, std::int64_t n, double r_factor = 1.0) {
  double r = transmission_range(n, r_factor);
  double h = static_cast<double>(H);
  return std::min(1.0, std::numbers::pi * h * h * r * r);
}

struct ThroughputOrder {
  double lambda_a = 0;
  double lambda_i = 0;
  Condition condition = Condition::Connectivity;
  std::string formula_id;
};

inline double lambda_infra(std::int64_t n, std::int64_t b, std::int64_t m, std::int64_t C_I, double W_I) {
  double dn = static_cast<double>(n), db = static_cast<double>(b);
  return std::min(db / dn, db * static_cast<double>(m) / (dn * static_cast<double>(C_I))) * W_I;
}

// Directional gain on the ad hoc term; 1 when phi = 2pi or antennas are omni.
inline double directional_gain(Condition c, const NetworkConfig& cfg) {
  if (cfg.antenna_mode != AntennaMode::Directional) return 1.0;
  double g = kTwoPi / cfg.phi;
  switch (c) {
    case Condition::Connectivity: return g * g;
    case Condition::Interference: return g;
    default: return 1.0;
  }
}

inline ThroughputOrder per_node_throughput(const NetworkConfig& cfg) {
  ThroughputOrder out;
  out.condition = classify_regime(cfg.n, cfg.C_A, cfg.H);
  double dn = static_cast<double>(cfg.n);
  double L = std::log(dn);
  double h = static_cast<double>(cfg.H);
  double ca = static_cast<double>(cfg.C_A);
  double x = h2logn(cfg.n, cfg.H);
  double base = 0;
  switch (out.condition) {
    case Condition::Connectivity:
      base = cfg.W_A / (h * L);
      break;
    case Condition::Interference:
      base = cfg.W_A / (std::sqrt(ca) * h * std::sqrt(L));
      break;
    case Condition::DestinationBottleneck:
      base = std::sqrt(dn) * std::log(std::log(x)) * cfg.W_A / (ca * h * std::sqrt(L) * std::log(x));
      break;
    case Condition::InterfaceBottleneck:
      base = h * h * (L / dn) * cfg.W_A / ca;
      break;
  }
  out.lambda_a = directional_gain(out.condition, cfg) * base;
  out.lambda_i = lambda_infra(cfg.n, cfg.b, cfg.m, cfg.C_I, cfg.W_I);
  out.formula_id = std::string(to_string(out.condition)) + "/" + std::string(to_string(cfg.antenna_mode));
  return out;
}

// Same branch selection as per_node_throughput; the directional gain carries over unchanged.
inline double aggregate_adhoc(const NetworkConfig& cfg) {
  Condition c = classify_regime(cfg.n, cfg.C_A, cfg.H);
  double dn = static_cast<double>(cfg.n);
  double L = std::log(dn);
  double h = static_cast<double>(cfg.H);
  double ca = static_cast<double>(cfg.C_A);
  double x = h2logn(cfg.n, cfg.H);
  double base = 0;
  switch (c) {
    case Condition::Connectivity:
      base = dn * cfg.W_A / (h * L);
      break;
    case Condition::Interference:
      base = dn * cfg.W_A / (std::sqrt(ca) * h * std::sqrt(L));
      break;
    case Condition::DestinationBottleneck:
      base = std::pow(dn, 1.5) * std::log(std::log(x)) * cfg.W_A / (ca * h * std::sqrt(L) * std::log(x));
      break;
    case Condition::InterfaceBottleneck:
      base = h * h * L * cfg.W_A / ca;
      break;
  }
  return directional_gain(c, cfg) * base;
}

inline double aggregate_infra(std::int64_t b, std::int64_t m, std::int64_t C_I, double W_I) {
  double db = static_cast<double>(b);
  if (C_I <= m) return db * W_I;
  return db * (static_cast<double>(m) / static_cast<double>(C_I)) * W_I;
}

inline std::int64_t sector_count(double theta) {
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(kTwoPi / theta + 1e-12)));
}

// Concurrent BS services: min{C_I, m} omni, floor(2pi/theta) * C_I directional.
inline std::int64_t bs_concurrency(const NetworkConfig& cfg) {
  if (cfg.antenna_mode == AntennaMode::Directional) return sector_count(cfg.theta) * cfg.C_I;
  return std::min(cfg.C_I, cfg.m);
}

struct DelayOrder {
  double d_a = 0;
  double d_i = 0;
  double total = 0;
};

inline DelayOrder delay(const NetworkConfig& cfg) {
  DelayOrder d;
  double dn = static_cast<double>(cfg.n);
  double h = static_cast<double>(cfg.H);
  d.d_a = h * h * h * std::log(dn) / dn;
  d.d_i = cfg.bs_service_constant / static_cast<double>(bs_concurrency(cfg));
  d.total = d.d_a + d.d_i;
  return d;
}

enum class Preset { ScAh, McAh, ScIs };

inline std::string_view to_string(Preset p) {
  switch (p) {
    case Preset::ScAh: return "sc-ah";
    case Preset::McAh: return "mc-ah";
    case Preset::ScIs: return "sc-is";
  }
  return "?";
}

inline Preset parse_preset(std::string_view s) {
  if (s == "sc-ah") return Preset::ScAh;
  if (s == "mc-ah") return Preset::McAh;
  if (s == "sc-is") return Preset::ScIs;
  throw Error(ErrorCode::BadField, "unknown preset '" + std::string(s) + "' (sc-ah|mc-ah|sc-is)");
}

// Ceiling keeps H >= sqrt(n / ln n), so the preset never drops below the G3 threshold it sits on.
inline std::int64_t preset_hops(std::int64_t n) {
  double dn = static_cast<double>(n);
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(std::sqrt(dn / std::log(dn)))));
}

inline NetworkConfig apply_preset(NetworkConfig c, Preset p) {
  switch (p) {
    case Preset::ScAh:
      c.H = preset_hops(c.n);
      c.C_A = 1;
      c.W_A = c.W;
      c.W_I = 0;
      c.C = c.C_A + c.C_I;
      break;
    case Preset::McAh:
      c.H = preset_hops(c.n);
      c.W_A = c.W;
      c.W_I = 0;
      break;
    case Preset::ScIs:
      c.C_A = 1;
      c.C_I = 1;
      c.m = 2;
      c.C = 2;
      break;
  }
  return c;
}

struct OptimalPoint {
  double lambda_opt = 0;
  double d_opt = 0;
};

inline OptimalPoint optimal_point(const NetworkConfig& cfg) {
  double ratio = static_cast<double>(cfg.b) / static_cast<double>(cfg.n);
  return {std::min(1.0, ratio) * cfg.W,
          cfg.bs_service_constant / static_cast<double>(std::min(cfg.C_I, cfg.m))};
}

}  // namespace mcis
