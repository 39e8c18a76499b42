#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mcis/analytic.hpp"
#include "mcis/config.hpp"
#include "mcis/error.hpp"
#include "mcis/simulator.hpp"

namespace mcis {

// ---- CSV (RFC 4180 quoting) ----

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// Shortest text that reads back to the same double.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << csv_escape(cells[i]);
  }
  os << '\n';
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error(ErrorCode::MissingColumn, "column '" + name + "' not found");
    return static_cast<std::size_t>(it - header.begin());
  }

  std::vector<double> numbers(const std::string& name) const {
    auto k = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(k < r.size() && !r[k].empty() ? std::strtod(r[k].c_str(), nullptr) : std::nan(""));
    return out;
  }
};

inline CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> rec;
  std::string cell;
  bool quoted = false, any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          cell += '"';
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      rec.push_back(std::move(cell));
      cell.clear();
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && in.peek() == '\n') in.get(c);
      rec.push_back(std::move(cell));
      cell.clear();
      records.push_back(std::move(rec));
      rec.clear();
      any = false;
    } else {
      cell += c;
    }
  }
  if (any) {
    rec.push_back(std::move(cell));
    records.push_back(std::move(rec));
  }
  if (records.empty()) return t;
  t.header = std::move(records.front());
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].size() == 1 && records[i][0].empty()) continue;
    t.rows.push_back(std::move(records[i]));
  }
  return t;
}

inline CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::BadField, "cannot open '" + path + "'");
  return read_csv(in);
}

inline NetworkConfig load_config_file(const std::string& path, const NetworkConfig& base = {}) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::BadField, "cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), base);
}

// ---- analytic side-by-side ----

struct AnalyticRow {
  std::string condition;
  double lambda_a = 0;
  double lambda_i = 0;
  double lambda = 0;
  double lambda_sc_ah = 0;  // W_A / sqrt(n ln n)
  double T_A = 0;
  double T_I = 0;
  double D_a = 0;
  double D_i = 0;
  double D = 0;
  double n_t = 0;  // pi H^2 ln n
  double lines_bound = 0;
};

inline AnalyticRow analytic_row(const NetworkConfig& cfg) {
  AnalyticRow a;
  auto tp = per_node_throughput(cfg);
  auto d = delay(cfg);
  double dn = static_cast<double>(cfg.n), L = std::log(dn), h = static_cast<double>(cfg.H);
  a.condition = std::string(to_string(tp.condition));
  a.lambda_a = tp.lambda_a;
  a.lambda_i = tp.lambda_i;
  a.lambda = tp.lambda_a + tp.lambda_i;
  a.lambda_sc_ah = cfg.W_A / std::sqrt(dn * L);
  a.T_A = aggregate_adhoc(cfg);
  a.T_I = aggregate_infra(cfg.b, cfg.m, cfg.C_I, cfg.W_I);
  a.D_a = d.d_a;
  a.D_i = d.d_i;
  a.D = d.total;
  a.n_t = std::numbers::pi * h * h * L;
  double area = cell_area(cfg);
  a.lines_bound = 20.0 * dn * h * h * h * area * area;
  return a;
}

inline const std::vector<std::string>& analytic_columns() {
  static const std::vector<std::string> cols = {"condition", "lambda_a_pred", "lambda_i_pred", "lambda_pred",
                                                "lambda_sc_ah", "T_A_pred", "T_I_pred", "D_a_pred", "D_i_pred",
                                                "D_pred", "n_t_pred", "lines_bound"};
  return cols;
}

inline std::vector<std::string> analytic_cells(const AnalyticRow& a) {
  return {a.condition, format_number(a.lambda_a), format_number(a.lambda_i), format_number(a.lambda),
          format_number(a.lambda_sc_ah), format_number(a.T_A), format_number(a.T_I), format_number(a.D_a),
          format_number(a.D_i), format_number(a.D), format_number(a.n_t), format_number(a.lines_bound)};
}

inline const std::vector<std::string>& config_columns() {
  static const std::vector<std::string> cols = {"H", "C_A", "C_I", "m", "b", "W_A", "W_I", "antenna_mode", "theta", "phi"};
  return cols;
}

inline std::vector<std::string> config_cells(const NetworkConfig& c) {
  return {std::to_string(c.H), std::to_string(c.C_A), std::to_string(c.C_I), std::to_string(c.m), std::to_string(c.b),
          format_number(c.W_A), format_number(c.W_I), std::string(to_string(c.antenna_mode)), format_number(c.theta),
          format_number(c.phi)};
}

inline std::vector<std::string> metrics_cells(const MetricsReport& r) {
  std::vector<std::string> out;
  for (double v : metrics_values(r)) out.push_back(format_number(v));
  out[0] = std::to_string(r.seed);  // full u64 precision
  return out;
}

// ---- sweeps ----

struct SweepSpec {
  std::string param;
  std::vector<std::string> values;
  std::vector<std::uint64_t> seeds;
  std::string base_config;  // path, empty for defaults
  std::string out;
  std::optional<Preset> preset;
  std::int64_t horizon = 0;
  bool infra_only = false;
};

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ',')) {
    auto t = detail::trim(cur);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

inline void validate_sweep(const SweepSpec& s) {
  const auto& keys = config_keys();
  if (std::find(keys.begin(), keys.end(), s.param) == keys.end()) {
    throw Error(ErrorCode::UnknownKey, "swept parameter '" + s.param + "' is not a config field");
  }
  if (s.values.empty()) throw Error(ErrorCode::BadField, "sweep needs at least one value");
  if (s.seeds.empty()) throw Error(ErrorCode::BadField, "sweep needs at least one seed");
}

// Keys: param, values (comma list), seeds (count, seeds 1..k) or seed_list, base, out, preset,
// horizon, infra_only. Relative paths resolve against `dir`.
inline SweepSpec parse_sweep(std::string_view text, const std::filesystem::path& dir = {}) {
  SweepSpec s;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    auto t = detail::trim(line);
    if (t.empty()) continue;
    auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ConfigSyntax, "line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    auto key = detail::trim(std::string_view(t).substr(0, eq));
    auto value = detail::trim(std::string_view(t).substr(eq + 1));
    auto resolve = [&](const std::string& p) { return (dir.empty() || std::filesystem::path(p).is_absolute()) ? p : (dir / p).string(); };
    if (key == "param") s.param = value;
    else if (key == "values") s.values = split_list(value);
    else if (key == "seeds") {
      auto k = detail::parse_int(key, value);
      if (k < 1) throw Error(ErrorCode::BadField, "key 'seeds': need at least one seed");
      s.seeds.clear();
      for (std::int64_t i = 1; i <= k; ++i) s.seeds.push_back(static_cast<std::uint64_t>(i));
    } else if (key == "seed_list") {
      s.seeds.clear();
      for (const auto& v : split_list(value)) s.seeds.push_back(static_cast<std::uint64_t>(detail::parse_int(key, v)));
    } else if (key == "base") s.base_config = resolve(value);
    else if (key == "out") s.out = resolve(value);
    else if (key == "preset") s.preset = parse_preset(value);
    else if (key == "horizon") s.horizon = detail::parse_int(key, value);
    else if (key == "infra_only") s.infra_only = value == "true" || value == "1";
    else throw Error(ErrorCode::UnknownKey, "unknown sweep key '" + key + "'");
  }
  validate_sweep(s);
  return s;
}

// Applies one swept value; the derived fields (b0, C, W) follow and the preset goes last so that
// preset-derived H tracks the swept n.
inline NetworkConfig config_for_point(NetworkConfig base, const SweepSpec& s, const std::string& value) {
  set_config_field(base, s.param, value);
  if (s.param == "b") base.b0 = isqrt(base.b);
  if (s.param == "b0") base.b = base.b0 * base.b0;
  if (s.param == "C_A" || s.param == "C_I") base.C = base.C_A + base.C_I;
  if (s.param == "W_A" || s.param == "W_I") base.W = base.W_A + 2.0 * base.W_I;
  if (s.preset) base = apply_preset(base, *s.preset);
  return validate_config(base);
}

struct SweepRow {
  std::string value;
  NetworkConfig cfg;
  MetricsReport report;
  AnalyticRow analytic;
};

inline std::vector<SweepRow> run_sweep(const SweepSpec& spec, const NetworkConfig& base, int workers = 1,
                                       SimOptions opt = {}) {
  validate_sweep(spec);
  opt.infra_only = opt.infra_only || spec.infra_only;
  if (spec.horizon > 0) opt.horizon = spec.horizon;
  std::size_t total = spec.values.size() * spec.seeds.size();
  // Configs are checked up front so a bad value fails before any simulation starts.
  std::vector<NetworkConfig> cfgs;
  for (const auto& v : spec.values) {
    try {
      cfgs.push_back(config_for_point(base, spec, v));
    } catch (const Error& e) {
      throw Error(e.code(), spec.param + "=" + v + ": " + e.what());
    }
  }
  std::vector<SweepRow> rows(total);
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr first_error;
  std::size_t first_error_index = total;
  auto work = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= total) return;
      std::size_t vi = i / spec.seeds.size(), si = i % spec.seeds.size();
      try {
        auto& row = rows[i];
        row.value = spec.values[vi];
        row.cfg = cfgs[vi];
        row.report = run(row.cfg, spec.seeds[si], opt);
        row.analytic = analytic_row(row.cfg);
      } catch (const Error& e) {
        std::lock_guard lk(err_mu);
        if (i < first_error_index) {
          first_error_index = i;
          first_error = std::make_exception_ptr(Error(e.code(), spec.param + "=" + spec.values[vi] + " seed=" +
                                                                    std::to_string(spec.seeds[si]) + ": " + e.what()));
        }
        next = total;
      }
    }
  };
  int w = std::max(1, std::min<int>(workers, static_cast<int>(total)));
  std::vector<std::thread> pool;
  for (int k = 1; k < w; ++k) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return rows;
}

inline std::vector<std::string> sweep_header() {
  std::vector<std::string> h = {"param", "value"};
  for (const auto& c : config_columns()) h.push_back(c);
  for (const auto& c : metrics_columns()) h.push_back(c);
  for (const auto& c : analytic_columns()) h.push_back(c);
  return h;
}

inline void write_sweep_csv(std::ostream& os, const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  write_csv_row(os, sweep_header());
  for (const auto& r : rows) {
    std::vector<std::string> cells = {spec.param, r.value};
    for (auto& c : config_cells(r.cfg)) cells.push_back(std::move(c));
    for (auto& c : metrics_cells(r.report)) cells.push_back(std::move(c));
    for (auto& c : analytic_cells(r.analytic)) cells.push_back(std::move(c));
    write_csv_row(os, cells);
  }
}

// ---- fitting ----

struct FitResult {
  double slope = 0;
  double intercept = 0;
  double predicted_slope = 0;
  std::vector<double> xs;      // distinct swept values, ascending
  std::vector<double> ratios;  // mean measured / predicted per swept value
  double spread = 1;           // max ratio / min ratio
};

// Least squares of ln(measured) on ln(x) over all rows; ratios average over rows sharing an x.
inline FitResult fit_scaling(const std::vector<double>& x, const std::vector<double>& measured,
                             const std::vector<double>& predicted) {
  if (x.size() != measured.size() || x.size() != predicted.size()) {
    throw Error(ErrorCode::DegenerateFit, "column lengths differ");
  }
  FitResult f;
  std::vector<std::pair<double, std::pair<double, double>>> pts;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(measured[i] > 0) || !(predicted[i] > 0) || !std::isfinite(x[i]) ||
        !std::isfinite(measured[i]) || !std::isfinite(predicted[i])) {
      throw Error(ErrorCode::DegenerateFit, "row " + std::to_string(i) + " has a non-positive or non-finite value");
    }
    pts.push_back({x[i], {measured[i], predicted[i]}});
  }
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < pts.size();) {
    std::size_t j = i;
    double sum = 0;
    while (j < pts.size() && pts[j].first == pts[i].first) {
      sum += pts[j].second.first / pts[j].second.second;
      ++j;
    }
    f.xs.push_back(pts[i].first);
    f.ratios.push_back(sum / static_cast<double>(j - i));
    i = j;
  }
  if (f.xs.size() < 4) {
    throw Error(ErrorCode::DegenerateFit, "need at least 4 distinct swept values, got " + std::to_string(f.xs.size()));
  }
  auto regress = [&](auto value, double& slope, double& intercept) {
    double n = static_cast<double>(pts.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& p : pts) {
      double lx = std::log(p.first), ly = std::log(value(p));
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    double var = sxx - sx * sx / n;
    if (!(var > 1e-300)) throw Error(ErrorCode::DegenerateFit, "zero variance in the swept values");
    slope = (sxy - sx * sy / n) / var;
    intercept = (sy - slope * sx) / n;
  };
  regress([](const auto& p) { return p.second.first; }, f.slope, f.intercept);
  double unused = 0;
  regress([](const auto& p) { return p.second.second; }, f.predicted_slope, unused);
  auto [lo, hi] = std::minmax_element(f.ratios.begin(), f.ratios.end());
  f.spread = *hi / *lo;
  return f;
}

inline FitResult fit_scaling(const CsvTable& t, const std::string& x, const std::string& measured,
                             const std::string& predicted) {
  return fit_scaling(t.numbers(x), t.numbers(measured), t.numbers(predicted));
}

// ---- SVG ----

struct PlotOptions {
  bool log_x = false;
  bool log_y = false;
  int width = 640;
  int height = 480;
};

inline std::string plot_svg(const std::vector<double>& xs_in, const std::vector<double>& ys_in,
                            const std::string& x_label, const std::string& y_label, const PlotOptions& o = {}) {
  auto fmt = [](double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.2f", v);
    return std::string(b);
  };
  auto esc = [](const std::string& s) {
    std::string out;
    for (char c : s) {
      if (c == '<') out += "&lt;";
      else if (c == '>') out += "&gt;";
      else if (c == '&') out += "&amp;";
      else out += c;
    }
    return out;
  };
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < std::min(xs_in.size(), ys_in.size()); ++i) {
    double x = xs_in[i], y = ys_in[i];
    if (!std::isfinite(x) || !std::isfinite(y)) continue;
    if ((o.log_x && x <= 0) || (o.log_y && y <= 0)) continue;
    pts.push_back({o.log_x ? std::log10(x) : x, o.log_y ? std::log10(y) : y});
  }
  std::sort(pts.begin(), pts.end());
  const double ml = 70, mr = 20, mt = 20, mb = 50;
  const double pw = o.width - ml - mr, ph = o.height - mt - mb;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (!pts.empty()) {
    x0 = x1 = pts[0].first;
    y0 = y1 = pts[0].second;
    for (auto [x, y] : pts) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
    if (x1 == x0) {
      x0 -= 0.5;
      x1 += 0.5;
    }
    if (y1 == y0) {
      y0 -= 0.5;
      y1 += 0.5;
    }
  }
  auto sx = [&](double x) { return ml + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return mt + ph - (y - y0) / (y1 - y0) * ph; };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << o.width << "\" height=\"" << o.height
     << "\" viewBox=\"0 0 " << o.width << ' ' << o.height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << fmt(ml) << "\" y1=\"" << fmt(mt + ph) << "\" x2=\"" << fmt(ml + pw) << "\" y2=\"" << fmt(mt + ph)
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << fmt(ml) << "\" y1=\"" << fmt(mt) << "\" x2=\"" << fmt(ml) << "\" y2=\"" << fmt(mt + ph)
     << "\" stroke=\"black\"/>\n";
  auto tick_label = [&](double v, bool log) {
    char b[32];
    std::snprintf(b, sizeof b, "%.3g", log ? std::pow(10.0, v) : v);
    return std::string(b);
  };
  for (int k = 0; k <= 4; ++k) {
    double fx = x0 + (x1 - x0) * k / 4.0, fy = y0 + (y1 - y0) * k / 4.0;
    os << "<text x=\"" << fmt(sx(fx)) << "\" y=\"" << fmt(mt + ph + 18)
       << "\" font-size=\"11\" text-anchor=\"middle\">" << tick_label(fx, o.log_x) << "</text>\n";
    os << "<text x=\"" << fmt(ml - 6) << "\" y=\"" << fmt(sy(fy) + 4)
       << "\" font-size=\"11\" text-anchor=\"end\">" << tick_label(fy, o.log_y) << "</text>\n";
  }
  os << "<text x=\"" << fmt(ml + pw / 2) << "\" y=\"" << fmt(o.height - 10.0) << "\" font-size=\"13\" text-anchor=\"middle\">"
     << esc(x_label) << (o.log_x ? " (log)" : "") << "</text>\n";
  os << "<text x=\"15\" y=\"" << fmt(mt + ph / 2) << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
     << fmt(mt + ph / 2) << ")\">" << esc(y_label) << (o.log_y ? " (log)" : "") << "</text>\n";
  if (pts.size() >= 2) {
    os << "<polyline fill=\"none\" stroke=\"steelblue\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) os << ' ';
      os << fmt(sx(pts[i].first)) << ',' << fmt(sy(pts[i].second));
    }
    os << "\"/>\n";
  }
  for (auto [x, y] : pts) {
    os << "<circle cx=\"" << fmt(sx(x)) << "\" cy=\"" << fmt(sy(y)) << "\" r=\"3\" fill=\"steelblue\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

inline std::string plot_svg(const CsvTable& t, const std::string& x, const std::string& y, const PlotOptions& o = {}) {
  if (t.header.empty()) return plot_svg({}, {}, x, y, o);
  return plot_svg(t.numbers(x), t.numbers(y), x, y, o);
}

// ---- commands ----

inline void cmd_classify(const NetworkConfig& cfg, std::ostream& os) {
  auto t = thresholds(cfg.n, cfg.H, cfg.C_A);
  auto c = classify_regime(cfg.n, cfg.C_A, cfg.H);
  int k = regime_case(cfg.n, cfg.C_A, cfg.H);
  double g = k == 1 ? t.G1 : (k == 2 ? t.G2 : t.G3);
  int sub = static_cast<double>(cfg.H) < g ? 1 : 2;
  auto tp = per_node_throughput(cfg);
  os.precision(10);
  os << "condition: " << to_string(c) << "\n"
     << "case: " << k << "." << sub << "\n"
     << "F1 = " << t.F1 << "\nF2 = " << t.F2 << "\nG1 = " << t.G1 << "\nG2 = " << t.G2 << "\nG3 = " << t.G3 << "\n"
     << "formula: " << tp.formula_id << "\n"
     << "lambda_a = " << tp.lambda_a << "\nlambda_i = " << tp.lambda_i << "\n";
}

// Three rows: measured, analytic, measured / analytic.
inline void cmd_simulate(const NetworkConfig& cfg, std::uint64_t seed, const SimOptions& opt, std::ostream& os) {
  auto r = run(cfg, seed, opt);
  auto a = analytic_row(cfg);
  std::vector<std::string> header = {"row"};
  for (const auto& c : metrics_columns()) header.push_back(c);
  header.push_back("condition");
  write_csv_row(os, header);
  auto measured = metrics_values(r);
  std::vector<std::string> m = {"measured"};
  for (auto& c : metrics_cells(r)) m.push_back(std::move(c));
  m.push_back(a.condition);
  write_csv_row(os, m);
  const auto& cols = metrics_columns();
  auto pred = [&](const std::string& col) -> std::optional<double> {
    if (col == "lambda") return a.lambda;
    if (col == "T_A") return a.T_A;
    if (col == "T_I") return a.T_I;
    if (col == "D_a") return a.D_a;
    if (col == "D_i") return a.D_i;
    if (col == "D") return a.D;
    if (col == "n_t") return a.n_t;
    if (col == "max_lines_per_cell") return a.lines_bound;
    return std::nullopt;
  };
  std::vector<std::string> an = {"analytic"}, ratio = {"ratio"};
  for (std::size_t i = 0; i < cols.size(); ++i) {
    auto p = pred(cols[i]);
    an.push_back(p ? format_number(*p) : "");
    ratio.push_back(p && *p != 0 ? format_number(measured[i] / *p) : "");
  }
  an.push_back(a.condition);
  ratio.push_back("");
  write_csv_row(os, an);
  write_csv_row(os, ratio);
}

inline void cmd_preset(Preset p, const NetworkConfig& base, std::ostream& os) {
  os << "# preset " << to_string(p) << "\n" << format_config(validate_config(apply_preset(base, p)));
}

inline void write_fit(std::ostream& os, const FitResult& f) {
  write_csv_row(os, {"x", "ratio"});
  for (std::size_t i = 0; i < f.xs.size(); ++i) write_csv_row(os, {format_number(f.xs[i]), format_number(f.ratios[i])});
  os << "# slope " << format_number(f.slope) << " intercept " << format_number(f.intercept) << " predicted_slope "
     << format_number(f.predicted_slope) << " spread " << format_number(f.spread) << "\n";
}

}  // namespace mcis
