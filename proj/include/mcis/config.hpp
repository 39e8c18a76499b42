#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mcis/error.hpp"

namespace mcis {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class AntennaMode { Omni, Directional };

inline std::string_view to_string(AntennaMode m) {
  return m == AntennaMode::Omni ? "omni" : "directional";
}

struct NetworkConfig {
  std::int64_t n = 1000;
  std::int64_t b = 4;
  std::int64_t b0 = 2;
  std::int64_t m = 2;
  std::int64_t C = 2;
  std::int64_t C_A = 1;
  std::int64_t C_I = 1;
  double W = 3.0;
  double W_A = 1.0;
  double W_I = 1.0;
  std::int64_t H = 1;
  double delta = 1.0;
  AntennaMode antenna_mode = AntennaMode::Omni;
  double theta = kTwoPi;
  double phi = kTwoPi;
  double bs_service_constant = 1.0;
  double r_factor = 1.0;
  std::uint64_t rng_seed = 1;
};

inline std::int64_t isqrt(std::int64_t v) {
  if (v < 0) return -1;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

inline bool is_perfect_square(std::int64_t v) {
  if (v < 0) return false;
  auto r = isqrt(v);
  return r * r == v;
}

// Relative tolerance only absorbs decimal parsing noise; W = W_A + 2 W_I is otherwise exact.
inline bool bandwidth_split_ok(double W, double W_A, double W_I) {
  double sum = W_A + 2.0 * W_I;
  return std::abs(W - sum) <= 1e-12 * std::max({1.0, std::abs(W), std::abs(sum)});
}

inline NetworkConfig validate_config(const NetworkConfig& raw) {
  NetworkConfig c = raw;
  if (c.n < 1) throw Error(ErrorCode::BadField, "n must be >= 1");
  if (c.W_A < 0 || c.W_I < 0) throw Error(ErrorCode::BandwidthSplit, "W_A and W_I must be nonnegative");
  if (!bandwidth_split_ok(c.W, c.W_A, c.W_I)) {
    std::ostringstream os;
    os << "W=" << c.W << " but W_A + 2*W_I=" << c.W_A + 2.0 * c.W_I;
    throw Error(ErrorCode::BandwidthSplit, os.str());
  }
  if (c.C_A < 1 || c.C_I < 1) throw Error(ErrorCode::ChannelSplit, "C_A and C_I must be >= 1");
  if (c.C != c.C_A + c.C_I) {
    throw Error(ErrorCode::ChannelSplit, "C=" + std::to_string(c.C) + " but C_A + C_I=" +
                                             std::to_string(c.C_A + c.C_I));
  }
  if (c.m < 2) throw Error(ErrorCode::OddInterfaces, "m must be >= 2, got " + std::to_string(c.m));
  if (c.m % 2 != 0) throw Error(ErrorCode::OddInterfaces, "m must be even, got " + std::to_string(c.m));
  if (c.b < 1 || !is_perfect_square(c.b)) {
    throw Error(ErrorCode::NonSquareBs, "b=" + std::to_string(c.b) + " is not a perfect square");
  }
  if (c.b0 != isqrt(c.b)) {
    throw Error(ErrorCode::NonSquareBs, "b0=" + std::to_string(c.b0) + " but b=" + std::to_string(c.b));
  }
  if (c.H < 1) throw Error(ErrorCode::BadField, "H must be >= 1");
  if (!(c.delta > 0)) throw Error(ErrorCode::BadField, "delta must be > 0");
  if (!(c.theta > 0 && c.theta <= kTwoPi)) throw Error(ErrorCode::BadBeamwidth, "theta outside (0, 2pi]");
  if (!(c.phi > 0 && c.phi <= kTwoPi)) throw Error(ErrorCode::BadBeamwidth, "phi outside (0, 2pi]");
  if (!(c.bs_service_constant > 0)) throw Error(ErrorCode::BadField, "bs_service_constant must be > 0");
  if (!(c.r_factor >= 1)) throw Error(ErrorCode::BadField, "r_factor must be >= 1");
  return c;
}

// ---- key = value ingestion ----

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t a = 0, e = s.size();
  while (a < e && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (e > a && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(a, e - a));
}

inline double parse_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double d = 0;
  try {
    d = std::stod(v, &pos);
  } catch (...) {
    throw Error(ErrorCode::ConfigSyntax, "key '" + key + "': not a number: '" + v + "'");
  }
  if (pos != v.size()) throw Error(ErrorCode::ConfigSyntax, "key '" + key + "': trailing text in '" + v + "'");
  return d;
}

inline std::int64_t parse_int(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &pos);
  } catch (...) {
    throw Error(ErrorCode::ConfigSyntax, "key '" + key + "': not an integer: '" + v + "'");
  }
  if (pos != v.size()) throw Error(ErrorCode::ConfigSyntax, "key '" + key + "': not an integer: '" + v + "'");
  return x;
}

// Accepts a plain number or [k*]pi[/d], e.g. "pi/12", "2*pi", "0.5".
inline double parse_angle(const std::string& key, const std::string& v) {
  auto p = v.find("pi");
  if (p == std::string::npos) return parse_double(key, v);
  double coef = 1.0, div = 1.0;
  std::string head = trim(std::string_view(v).substr(0, p));
  std::string tail = trim(std::string_view(v).substr(p + 2));
  if (!head.empty()) {
    if (head.back() == '*') head.pop_back();
    coef = parse_double(key, trim(head));
  }
  if (!tail.empty()) {
    if (tail.front() != '/') throw Error(ErrorCode::ConfigSyntax, "key '" + key + "': bad angle '" + v + "'");
    div = parse_double(key, trim(std::string_view(tail).substr(1)));
  }
  return coef * std::numbers::pi / div;
}

}  // namespace detail

inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "n", "b", "b0", "m", "C", "C_A", "C_I", "W", "W_A", "W_I", "H", "delta", "antenna_mode",
      "theta", "phi", "bs_service_constant", "r_factor", "rng_seed"};
  return keys;
}

// Sets one field; the caller is responsible for validation afterwards.
inline void set_config_field(NetworkConfig& c, const std::string& key, const std::string& value) {
  using detail::parse_double;
  using detail::parse_int;
  if (key == "n") c.n = parse_int(key, value);
  else if (key == "b") c.b = parse_int(key, value);
  else if (key == "b0") c.b0 = parse_int(key, value);
  else if (key == "m") c.m = parse_int(key, value);
  else if (key == "C") c.C = parse_int(key, value);
  else if (key == "C_A") c.C_A = parse_int(key, value);
  else if (key == "C_I") c.C_I = parse_int(key, value);
  else if (key == "W") c.W = parse_double(key, value);
  else if (key == "W_A") c.W_A = parse_double(key, value);
  else if (key == "W_I") c.W_I = parse_double(key, value);
  else if (key == "H") c.H = parse_int(key, value);
  else if (key == "delta") c.delta = parse_double(key, value);
  else if (key == "antenna_mode") {
    if (value == "omni" || value == "Omni") c.antenna_mode = AntennaMode::Omni;
    else if (value == "directional" || value == "Directional") c.antenna_mode = AntennaMode::Directional;
    else throw Error(ErrorCode::ConfigSyntax, "key 'antenna_mode': expected omni|directional, got '" + value + "'");
  } else if (key == "theta") c.theta = detail::parse_angle(key, value);
  else if (key == "phi") c.phi = detail::parse_angle(key, value);
  else if (key == "bs_service_constant") c.bs_service_constant = parse_double(key, value);
  else if (key == "r_factor") c.r_factor = parse_double(key, value);
  else if (key == "rng_seed") {
    std::size_t pos = 0;
    unsigned long long x = 0;
    try {
      if (!value.empty() && value[0] == '-') throw std::invalid_argument("negative");
      x = std::stoull(value, &pos);
    } catch (...) {
      throw Error(ErrorCode::ConfigSyntax, "key 'rng_seed': expected an unsigned 64-bit integer");
    }
    if (pos != value.size()) throw Error(ErrorCode::ConfigSyntax, "key 'rng_seed': trailing text");
    c.rng_seed = static_cast<std::uint64_t>(x);
  } else {
    throw Error(ErrorCode::UnknownKey, "unknown key '" + key + "'");
  }
}

// Unset derived fields follow the set ones: b <-> b0, C from C_A + C_I, W from W_A + 2 W_I.
inline NetworkConfig parse_config(std::string_view text, const NetworkConfig& base = {}) {
  NetworkConfig c = base;
  bool has_b = false, has_b0 = false, has_C = false, has_W = false;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::string t = detail::trim(line);
    if (t.empty()) continue;
    auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ConfigSyntax, "line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    std::string key = detail::trim(std::string_view(t).substr(0, eq));
    std::string value = detail::trim(std::string_view(t).substr(eq + 1));
    if (value.empty()) throw Error(ErrorCode::ConfigSyntax, "key '" + key + "': empty value");
    set_config_field(c, key, value);
    has_b |= key == "b";
    has_b0 |= key == "b0";
    has_C |= key == "C";
    has_W |= key == "W";
  }
  if (has_b && !has_b0) c.b0 = isqrt(c.b);
  if (has_b0 && !has_b) c.b = c.b0 * c.b0;
  if (!has_C) c.C = c.C_A + c.C_I;
  if (!has_W) c.W = c.W_A + 2.0 * c.W_I;
  return c;
}

inline std::string format_config(const NetworkConfig& c) {
  std::ostringstream os;
  os.precision(17);
  os << "n = " << c.n << "\n"
     << "b = " << c.b << "\n"
     << "b0 = " << c.b0 << "\n"
     << "m = " << c.m << "\n"
     << "C = " << c.C << "\n"
     << "C_A = " << c.C_A << "\n"
     << "C_I = " << c.C_I << "\n"
     << "W = " << c.W << "\n"
     << "W_A = " << c.W_A << "\n"
     << "W_I = " << c.W_I << "\n"
     << "H = " << c.H << "\n"
     << "delta = " << c.delta << "\n"
     << "antenna_mode = " << to_string(c.antenna_mode) << "\n"
     << "theta = " << c.theta << "\n"
     << "phi = " << c.phi << "\n"
     << "bs_service_constant = " << c.bs_service_constant << "\n"
     << "r_factor = " << c.r_factor << "\n"
     << "rng_seed = " << c.rng_seed << "\n";
  return os.str();
}

}  // namespace mcis
