// Command-line front end: classify, simulate, sweep, fit, plot, preset.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "mcis/harness.hpp"

namespace {

enum Exit { kOk = 0, kConfigError = 1, kRuntimeError = 2, kAcceptanceFailure = 3 };

struct Common {
  std::string config;
  std::string preset;
  std::string out;
  std::uint64_t seed = 1;
  std::int64_t horizon = 0;
  int workers = 1;
  bool infra_only = false;
};

mcis::NetworkConfig load(const Common& o) {
  mcis::NetworkConfig c;
  if (!o.config.empty()) c = mcis::load_config_file(o.config);
  if (!o.preset.empty()) c = mcis::apply_preset(c, mcis::parse_preset(o.preset));
  return mcis::validate_config(c);
}

// Writes to --out when given, stdout otherwise.
template <class F>
void emit(const std::string& out, F&& body) {
  if (out.empty()) {
    body(std::cout);
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw mcis::Error(mcis::ErrorCode::BadField, "cannot write '" + out + "'");
  body(f);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacity and delay simulator for hybrid multi-channel wireless networks"};
  app.require_subcommand(1);
  Common o;

  auto add_config = [&](CLI::App* sc) {
    sc->add_option("--config", o.config, "network config file (key = value)");
    sc->add_option("--preset", o.preset, "sc-ah | mc-ah | sc-is");
  };

  auto* classify = app.add_subcommand("classify", "print the regime and thresholds");
  add_config(classify);

  auto* simulate = app.add_subcommand("simulate", "run one simulation and compare with the orders");
  add_config(simulate);
  simulate->add_option("--seed", o.seed, "placement and traffic seed");
  simulate->add_option("--horizon", o.horizon, "slots to simulate (0 = default)");
  simulate->add_option("--out", o.out, "CSV output path");
  simulate->add_flag("--infra-only", o.infra_only, "route every flow through base stations");

  std::string sweep_file;
  auto* sweep = app.add_subcommand("sweep", "sweep one config field over values and seeds");
  sweep->add_option("file", sweep_file, "sweep file")->required();
  sweep->add_option("--config", o.config, "base config (overrides the sweep file's base)");
  sweep->add_option("--preset", o.preset, "preset applied at every point");
  sweep->add_option("--workers", o.workers, "concurrent runs")->check(CLI::PositiveNumber);
  sweep->add_option("--horizon", o.horizon, "slots per run (0 = default)");
  sweep->add_option("--out", o.out, "CSV output path");

  std::string csv_file, x_col = "n", y_col = "lambda", pred_col = "lambda_sc_ah";
  double max_spread = 0;
  auto* fit = app.add_subcommand("fit", "log-log fit of a measured column with per-point ratios");
  fit->add_option("csv", csv_file, "sweep CSV")->required();
  fit->add_option("--x", x_col, "swept column");
  fit->add_option("--y", y_col, "measured column");
  fit->add_option("--predicted", pred_col, "analytic column");
  fit->add_option("--max-spread", max_spread, "exit 3 when the ratio spread exceeds this (0 = off)");
  fit->add_option("--out", o.out, "CSV output path");

  bool log_scale = false;
  auto* plot = app.add_subcommand("plot", "SVG scatter/line of two CSV columns");
  plot->add_option("csv", csv_file, "input CSV")->required();
  plot->add_option("--x", x_col, "x column");
  plot->add_option("--y", y_col, "y column");
  plot->add_flag("--log", log_scale, "log-log axes");
  plot->add_option("--out", o.out, "SVG output path");

  std::int64_t preset_n = 0;
  auto* preset = app.add_subcommand("preset", "print a preset config");
  preset->add_option("--preset", o.preset, "sc-ah | mc-ah | sc-is")->required();
  preset->add_option("--config", o.config, "base config");
  preset->add_option("--n", preset_n, "node count");
  preset->add_option("--out", o.out, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    if (*classify) {
      mcis::cmd_classify(load(o), std::cout);
    } else if (*simulate) {
      mcis::SimOptions opt;
      opt.horizon = o.horizon;
      opt.infra_only = o.infra_only;
      auto cfg = load(o);
      emit(o.out, [&](std::ostream& os) { mcis::cmd_simulate(cfg, o.seed, opt, os); });
    } else if (*sweep) {
      std::ifstream in(sweep_file);
      if (!in) throw mcis::Error(mcis::ErrorCode::BadField, "cannot open sweep file '" + sweep_file + "'");
      std::stringstream ss;
      ss << in.rdbuf();
      auto spec = mcis::parse_sweep(ss.str(), std::filesystem::path(sweep_file).parent_path());
      if (!o.config.empty()) spec.base_config = o.config;
      if (!o.preset.empty()) spec.preset = mcis::parse_preset(o.preset);
      if (o.horizon > 0) spec.horizon = o.horizon;
      if (!o.out.empty()) spec.out = o.out;
      mcis::NetworkConfig base;
      if (!spec.base_config.empty()) base = mcis::load_config_file(spec.base_config);
      auto rows = mcis::run_sweep(spec, base, o.workers);
      emit(spec.out, [&](std::ostream& os) { mcis::write_sweep_csv(os, spec, rows); });
    } else if (*fit) {
      auto f = mcis::fit_scaling(mcis::read_csv_file(csv_file), x_col, y_col, pred_col);
      emit(o.out, [&](std::ostream& os) { mcis::write_fit(os, f); });
      if (max_spread > 0 && f.spread > max_spread) {
        std::cerr << "ratio spread " << f.spread << " exceeds " << max_spread << "\n";
        return kAcceptanceFailure;
      }
    } else if (*plot) {
      mcis::PlotOptions po;
      po.log_x = po.log_y = log_scale;
      auto svg = mcis::plot_svg(mcis::read_csv_file(csv_file), x_col, y_col, po);
      emit(o.out, [&](std::ostream& os) { os << svg; });
    } else if (*preset) {
      mcis::NetworkConfig base;
      if (!o.config.empty()) base = mcis::load_config_file(o.config);
      if (preset_n > 0) base.n = preset_n;
      emit(o.out, [&](std::ostream& os) { mcis::cmd_preset(mcis::parse_preset(o.preset), base, os); });
    }
  } catch (const mcis::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mcis::is_config_error(e.code()) ? kConfigError : kRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kOk;
}
