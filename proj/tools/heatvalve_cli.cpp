// heatvalve_cli: flux and temperature sweeps, single-point steady state,
// zero-coupling search and the oracle check.
//
// Exit codes: 0 success, 1 physics/validation/IO error or failed check, 2 usage error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>

#include "heatvalve/heatvalve.hpp"

namespace hv = heatvalve;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes to `path`, or stdout when empty.
template <class Fn>
void emit(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output '" + path + "'");
  fn(out);
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::pair<double, double> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) {
      const double v = std::stod(text);
      return {v, v};
    }
    return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw CLI::ValidationError("range", "expected <value> or <start>:<stop>, got '" + text + "'");
  }
}

std::string format_kv(const char* key, double v) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s=%.12g\n", key, v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flux-tunable quantum heat valve: sweeps, steady states and oracle checks"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_path;
  std::optional<int> points;
  unsigned threads = hv::default_threads();
  app.add_option("--config", config_path, "Config file (key = value lines)")->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "Output path (default: stdout)");
  app.add_option("--points", points, "Override the number of grid points")->check(CLI::Range(2, 100000000));
  app.add_option("--threads", threads, "Worker threads for sweeps")->check(CLI::Range(1u, 1024u));

  auto* flux_cmd = app.add_subcommand("sweep-flux", "Sweep the external flux; write CSV");

  auto* temp_cmd = app.add_subcommand("sweep-temp", "Sweep bath temperatures at fixed flux; write CSV");
  double temp_phi = 0.5;
  std::string tl_range = "0.1:0.4";
  std::string tr_range = "0.1";
  temp_cmd->add_option("--phi", temp_phi, "Flux in units of 2 pi")->capture_default_str();
  temp_cmd->add_option("--tl", tl_range, "T_L range in K, <value> or <start>:<stop>")->capture_default_str();
  temp_cmd->add_option("--tr", tr_range, "T_R range in K, <value> or <start>:<stop>")->capture_default_str();

  auto* steady_cmd = app.add_subcommand("steady-state", "Analytic steady state at one flux point");
  double steady_phi = 0.5;
  steady_cmd->add_option("--phi", steady_phi, "Flux in units of 2 pi")->required();

  auto* zero_cmd = app.add_subcommand("zero-coupling", "Locate the fluxes where g vanishes");

  auto* oracle_cmd = app.add_subcommand("oracle-check", "Compare the analytic steady state with the Lindblad oracle");
  double rel_tol = 0.01;
  oracle_cmd->add_option("--rel-tol", rel_tol, "Relative tolerance")->capture_default_str()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    hv::SweepConfig cfg = config_path.empty() ? hv::parse_config("") : hv::parse_config(read_file(config_path));
    cfg.output_path = out_path;

    if (*flux_cmd) {
      if (points) cfg.flux.points = *points;
      const auto rows = hv::sweep_flux(cfg, threads);
      emit(out_path, [&](std::ostream& os) { hv::write_csv(os, rows, hv::SweepKind::Flux); });
    } else if (*temp_cmd) {
      hv::TempGrid grid;
      std::tie(grid.tl_start, grid.tl_stop) = parse_range(tl_range);
      std::tie(grid.tr_start, grid.tr_stop) = parse_range(tr_range);
      if (points) grid.points = *points;
      cfg.temp_grid = grid;
      const auto rows = hv::sweep_temperature(cfg, temp_phi, threads);
      emit(out_path, [&](std::ostream& os) { hv::write_csv(os, rows, hv::SweepKind::Temperature); });
    } else if (*steady_cmd) {
      const auto p = hv::evaluate_point(cfg.circuit, cfg.left, cfg.right, steady_phi);
      emit(out_path, [&](std::ostream& os) {
        os << format_kv("phi_over_2pi", steady_phi) << format_kv("omega_L_GHz", hv::units::angular_to_ghz(p.mode.omega_L))
           << format_kv("omega_R_GHz", hv::units::angular_to_ghz(p.mode.omega_R))
           << format_kv("g_GHz", hv::units::angular_to_ghz(p.mode.g))
           << format_kv("omega_plus_GHz", hv::units::angular_to_ghz(p.basis.omega_plus))
           << format_kv("omega_minus_GHz", hv::units::angular_to_ghz(p.basis.omega_minus))
           << format_kv("occ_plus", p.steady.occ_plus) << format_kv("occ_minus", p.steady.occ_minus)
           << format_kv("N_tot", p.steady.N_tot) << format_kv("Z_diff", p.steady.Z_diff)
           << format_kv("Q_L_natural", p.steady.Q_L) << format_kv("Q_R_natural", p.steady.Q_R)
           << format_kv("Q_L_watts", p.steady.Q_L_watts) << format_kv("Q_R_watts", p.steady.Q_R_watts)
           << format_kv("E_N", p.entanglement.E_N) << format_kv("secular_ratio", p.secular_ratio);
      });
    } else if (*zero_cmd) {
      const auto report = hv::find_zero_coupling(cfg);
      emit(out_path, [&](std::ostream& os) { hv::write_zero_coupling(os, report); });
    } else if (*oracle_cmd) {
      hv::OracleCheckOptions opts;
      opts.rel_tol = rel_tol;
      const auto result = hv::oracle_check(cfg, opts);
      emit(out_path, [&](std::ostream& os) { hv::write_oracle_check(os, result); });
      return result.pass ? 0 : kExitFailure;
    }
  } catch (const hv::ParseError& e) {
    std::cerr << "error: config " << e.what() << '\n';
    return kExitFailure;
  } catch (const hv::ValidationError& e) {
    std::cerr << "error: invalid config: " << e.what() << '\n';
    return kExitFailure;
  } catch (const hv::PhysicsError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return 0;
}
