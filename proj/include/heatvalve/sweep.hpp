#pragma once

// Configuration files, flux and temperature sweeps, CSV output and the
// analytic-vs-oracle check harness.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <thread>
#include <utility>
#include <vector>

#include "heatvalve/bath_model.hpp"
#include "heatvalve/circuit_model.hpp"
#include "heatvalve/errors.hpp"
#include "heatvalve/gaussian.hpp"
#include "heatvalve/hopfield.hpp"
#include "heatvalve/lindblad_oracle.hpp"
#include "heatvalve/steady_state.hpp"
#include "heatvalve/units.hpp"

namespace heatvalve {

struct FluxGrid {
  double start = 0.0;  // phi / 2 pi
  double stop = 1.0;
  int points = 1001;

  double at(int i) const { return start + (stop - start) * i / (points - 1); }
};

struct TempGrid {
  double tl_start = 0.1;
  double tl_stop = 0.4;
  double tr_start = 0.1;
  double tr_stop = 0.1;
  int points = 31;

  int tl_points() const { return tl_start == tl_stop ? 1 : points; }
  int tr_points() const { return tr_start == tr_stop ? 1 : points; }
  double tl_at(int i) const { return tl_points() == 1 ? tl_start : tl_start + (tl_stop - tl_start) * i / (points - 1); }
  double tr_at(int i) const { return tr_points() == 1 ? tr_start : tr_start + (tr_stop - tr_start) * i / (points - 1); }

  void validate() const {
    if (points < 2) throw ValidationError("temperature grid needs points >= 2");
    for (double t : {tl_start, tl_stop, tr_start, tr_stop})
      if (!(t >= 0.0) || !std::isfinite(t)) throw ValidationError("temperatures must be finite and >= 0");
  }
};

inline BathSpec default_left_bath() {
  BathSpec b;
  b.T = 0.2;
  return b;
}

inline BathSpec default_right_bath() {
  BathSpec b;
  b.T = 0.1;
  return b;
}

struct SweepConfig {
  CircuitParams circuit;
  BathSpec left = default_left_bath();
  BathSpec right = default_right_bath();
  FluxGrid flux;
  std::optional<TempGrid> temp_grid;
  std::string output_path;
  oracle::OracleConfig oracle;

  void validate() const {
    circuit.validate();
    left.validate();
    right.validate();
    if (flux.points < 2) throw ValidationError("flux_points must be >= 2");
    if (!std::isfinite(flux.start) || !std::isfinite(flux.stop))
      throw ValidationError("flux range must be finite");
    if (temp_grid) temp_grid->validate();
    oracle.validate();
  }
};

namespace detail {

struct ConfigKey {
  const char* name;
  bool integral;
  std::function<double(const SweepConfig&)> get;
  std::function<void(SweepConfig&, double)> set;
};

inline const std::vector<ConfigKey>& config_keys() {
  using units::fF;
  using units::nH;
  auto inductance = [](double CircuitParams::*field) {
    return std::pair{
        std::function<double(const SweepConfig&)>([field](const SweepConfig& c) { return c.circuit.*field / units::nano; }),
        std::function<void(SweepConfig&, double)>([field](SweepConfig& c, double v) { c.circuit.*field = nH(v); })};
  };
  auto capacitance = [](double CircuitParams::*field) {
    return std::pair{
        std::function<double(const SweepConfig&)>([field](const SweepConfig& c) { return c.circuit.*field / units::femto; }),
        std::function<void(SweepConfig&, double)>([field](SweepConfig& c, double v) { c.circuit.*field = fF(v); })};
  };
  auto key = [](const char* name, auto accessors, bool integral = false) {
    return ConfigKey{name, integral, accessors.first, accessors.second};
  };
  auto plain = [](auto get, auto set) {
    return std::pair{std::function<double(const SweepConfig&)>(get), std::function<void(SweepConfig&, double)>(set)};
  };

  static const std::vector<ConfigKey> keys{
      key("L_a_nH", inductance(&CircuitParams::L_a)),
      key("L_b_nH", inductance(&CircuitParams::L_b)),
      key("C_a_fF", capacitance(&CircuitParams::C_a)),
      key("C_b_fF", capacitance(&CircuitParams::C_b)),
      key("L_sh_nH", inductance(&CircuitParams::L_sh)),
      key("L_J0_nH", inductance(&CircuitParams::L_J0)),
      key("M_0_nH", inductance(&CircuitParams::M_0)),
      key("L_0_nH", inductance(&CircuitParams::L_0)),
      key("delta", plain([](const SweepConfig& c) { return c.circuit.delta; },
                         [](SweepConfig& c, double v) { c.circuit.delta = v; })),
      key("R_L", plain([](const SweepConfig& c) { return c.left.R; }, [](SweepConfig& c, double v) { c.left.R = v; })),
      key("R_R", plain([](const SweepConfig& c) { return c.right.R; }, [](SweepConfig& c, double v) { c.right.R = v; })),
      key("Q_L", plain([](const SweepConfig& c) { return c.left.Q; }, [](SweepConfig& c, double v) { c.left.Q = v; })),
      key("Q_R", plain([](const SweepConfig& c) { return c.right.Q; }, [](SweepConfig& c, double v) { c.right.Q = v; })),
      key("omega_LC_L_GHz", plain([](const SweepConfig& c) { return units::angular_to_ghz(c.left.omega_LC); },
                                  [](SweepConfig& c, double v) { c.left.omega_LC = units::ghz_to_angular(v); })),
      key("omega_LC_R_GHz", plain([](const SweepConfig& c) { return units::angular_to_ghz(c.right.omega_LC); },
                                  [](SweepConfig& c, double v) { c.right.omega_LC = units::ghz_to_angular(v); })),
      key("T_L_K", plain([](const SweepConfig& c) { return c.left.T; }, [](SweepConfig& c, double v) { c.left.T = v; })),
      key("T_R_K", plain([](const SweepConfig& c) { return c.right.T; }, [](SweepConfig& c, double v) { c.right.T = v; })),
      key("flux_start", plain([](const SweepConfig& c) { return c.flux.start; },
                              [](SweepConfig& c, double v) { c.flux.start = v; })),
      key("flux_stop", plain([](const SweepConfig& c) { return c.flux.stop; },
                             [](SweepConfig& c, double v) { c.flux.stop = v; })),
      key("flux_points", plain([](const SweepConfig& c) { return double(c.flux.points); },
                               [](SweepConfig& c, double v) { c.flux.points = static_cast<int>(v); }),
          true),
      key("oracle_cutoff", plain([](const SweepConfig& c) { return double(c.oracle.cutoff); },
                                 [](SweepConfig& c, double v) { c.oracle.cutoff = static_cast<int>(v); }),
          true),
  };
  return keys;
}

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::string format_number(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

}  // namespace detail

/// Flat `key = value` text; `#` starts a comment. Missing keys keep their defaults.
inline SweepConfig parse_config(std::string_view text) {
  SweepConfig cfg;
  const auto& keys = detail::config_keys();
  std::vector<std::string> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
    const std::string name(detail::trim(line.substr(0, eq)));
    const std::string_view value = detail::trim(line.substr(eq + 1));
    const auto it = std::find_if(keys.begin(), keys.end(), [&](const auto& k) { return name == k.name; });
    if (it == keys.end()) throw ParseError(line_no, "unknown key '" + name + "'");
    if (std::find(seen.begin(), seen.end(), name) != seen.end())
      throw ParseError(line_no, "duplicate key '" + name + "'");
    seen.push_back(name);

    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size() || value.empty())
      throw ParseError(line_no, "value of '" + name + "' is not a number");
    if (it->integral && (v != std::floor(v) || std::abs(v) > 1e9))
      throw ParseError(line_no, "value of '" + name + "' must be an integer");
    it->set(cfg, v);
  }
  cfg.validate();
  return cfg;
}

/// Canonical text form: every key, fixed order, 15 significant digits.
inline std::string serialize_config(const SweepConfig& cfg) {
  std::string out;
  for (const auto& k : detail::config_keys()) {
    out += k.name;
    out += " = ";
    out += detail::format_number(k.get(cfg), k.integral ? 12 : 15);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Single operating point

struct PointResult {
  ModeParams mode;
  PolaritonBasis basis;
  RateSet rates;
  SteadyStateReport steady;
  GaussianState gaussian;
  EntanglementResult entanglement;
  double secular_ratio = 0.0;
};

inline PointResult evaluate_point(const CircuitParams& circuit, const BathSpec& left,
                                  const BathSpec& right, double phi_over_2pi) {
  PointResult r;
  r.mode = mode_params(units::two_pi * phi_over_2pi, circuit);
  r.basis = hopfield_coefficients(r.mode);
  r.rates = rate_set(r.basis, left, right);
  r.steady = steady_state(r.rates, r.basis);
  r.gaussian = gaussian_state(r.steady, r.basis);
  r.entanglement = logarithmic_negativity(r.gaussian.gamma_lab);
  r.secular_ratio = secular_ratio(r.basis, r.rates);
  return r;
}

enum class RowStatus { ok, pole, unstable, isolated };

inline const char* to_string(RowStatus s) {
  switch (s) {
    case RowStatus::ok: return "ok";
    case RowStatus::pole: return "pole";
    case RowStatus::unstable: return "unstable";
    case RowStatus::isolated: return "isolated";
  }
  return "unknown";
}

inline RowStatus status_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::PolePassage: return RowStatus::pole;
    case ErrorKind::IsolatedMode: return RowStatus::isolated;
    default: return RowStatus::unstable;
  }
}

struct SweepRow {
  double phi_over_2pi = 0.0;
  double T_L = 0.0;
  double T_R = 0.0;
  double omega_plus_GHz = 0.0;
  double omega_minus_GHz = 0.0;
  double g_GHz = 0.0;
  double Q_L_natural = 0.0;
  double Q_L_watts = 0.0;
  double E_N = 0.0;
  double occ_plus = 0.0;
  double occ_minus = 0.0;
  double secular_ratio = 0.0;
  RowStatus status = RowStatus::ok;
};

inline SweepRow make_row(const CircuitParams& circuit, const BathSpec& left, const BathSpec& right,
                         double phi_over_2pi) {
  SweepRow row;
  row.phi_over_2pi = phi_over_2pi;
  row.T_L = left.T;
  row.T_R = right.T;
  try {
    const PointResult p = evaluate_point(circuit, left, right, phi_over_2pi);
    row.omega_plus_GHz = units::angular_to_ghz(p.basis.omega_plus);
    row.omega_minus_GHz = units::angular_to_ghz(p.basis.omega_minus);
    row.g_GHz = units::angular_to_ghz(p.mode.g);
    row.Q_L_natural = p.steady.Q_L;
    row.Q_L_watts = p.steady.Q_L_watts;
    row.E_N = p.entanglement.E_N;
    row.occ_plus = p.steady.occ_plus;
    row.occ_minus = p.steady.occ_minus;
    row.secular_ratio = p.secular_ratio;
  } catch (const PhysicsError& e) {
    const double phi = row.phi_over_2pi, tl = row.T_L, tr = row.T_R;
    row = SweepRow{};
    row.phi_over_2pi = phi;
    row.T_L = tl;
    row.T_R = tr;
    row.status = status_for(e.kind());
  }
  return row;
}

namespace detail {

// Evaluates fn(i) for i in [0, n) on up to `threads` workers; results keep index order.
template <class Fn>
auto parallel_map(int n, unsigned threads, Fn&& fn) {
  using T = decltype(fn(0));
  std::vector<T> out(static_cast<std::size_t>(n));
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fn(i);
    return out;
  }
  std::atomic<int> next{0};
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) out[static_cast<std::size_t>(i)] = fn(i);
    });
  }
  return out;
}

}  // namespace detail

inline unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

inline std::vector<SweepRow> sweep_flux(const SweepConfig& cfg, unsigned threads = default_threads()) {
  cfg.validate();
  return detail::parallel_map(cfg.flux.points, threads, [&](int i) {
    return make_row(cfg.circuit, cfg.left, cfg.right, cfg.flux.at(i));
  });
}

/// Grid over (T_L, T_R) at fixed flux, T_L outer and T_R inner.
inline std::vector<SweepRow> sweep_temperature(const SweepConfig& cfg, double phi_over_2pi = 0.5,
                                               unsigned threads = default_threads()) {
  cfg.validate();
  if (!cfg.temp_grid) throw ValidationError("temperature sweep needs a temperature grid");
  const TempGrid grid = *cfg.temp_grid;
  const int n_tr = grid.tr_points();
  return detail::parallel_map(grid.tl_points() * n_tr, threads, [&](int k) {
    BathSpec left = cfg.left;
    BathSpec right = cfg.right;
    left.T = grid.tl_at(k / n_tr);
    right.T = grid.tr_at(k % n_tr);
    return make_row(cfg.circuit, left, right, phi_over_2pi);
  });
}

inline constexpr std::string_view flux_csv_header =
    "phi_over_2pi,omega_plus_GHz,omega_minus_GHz,g_GHz,Q_L_natural,Q_L_watts,E_N,occ_plus,occ_minus,"
    "secular_ratio,status";
inline constexpr std::string_view temperature_csv_header =
    "T_L_K,T_R_K,omega_plus_GHz,omega_minus_GHz,g_GHz,Q_L_natural,Q_L_watts,E_N,occ_plus,occ_minus,"
    "secular_ratio,status";

enum class SweepKind { Flux, Temperature };

inline void write_csv(std::ostream& os, const std::vector<SweepRow>& rows, SweepKind kind) {
  auto num = [](double v) { return detail::format_number(v, 12); };
  os << (kind == SweepKind::Flux ? flux_csv_header : temperature_csv_header) << '\n';
  for (const auto& r : rows) {
    if (kind == SweepKind::Flux) os << num(r.phi_over_2pi);
    else os << num(r.T_L) << ',' << num(r.T_R);
    const bool ok = r.status == RowStatus::ok;
    for (double v : {r.omega_plus_GHz, r.omega_minus_GHz, r.g_GHz, r.Q_L_natural, r.Q_L_watts, r.E_N,
                     r.occ_plus, r.occ_minus, r.secular_ratio}) {
      os << ',';
      if (ok) os << num(v);
    }
    os << ',' << to_string(r.status) << '\n';
  }
}

inline std::string to_csv(const std::vector<SweepRow>& rows, SweepKind kind) {
  std::ostringstream os;
  write_csv(os, rows, kind);
  return os.str();
}

// ---------------------------------------------------------------------------
// Zero-coupling report

struct ZeroCouplingReport {
  double root1_over_2pi = 0.0;
  double root2_over_2pi = 0.0;
  double closed1_over_2pi = 0.0;
  double closed2_over_2pi = 0.0;

  double max_difference() const {
    return std::max(std::abs(root1_over_2pi - closed1_over_2pi), std::abs(root2_over_2pi - closed2_over_2pi));
  }
};

inline ZeroCouplingReport find_zero_coupling(const SweepConfig& cfg) {
  cfg.circuit.validate();
  const ZeroCouplingRoots r = zero_coupling_flux(cfg.circuit);
  return {r.first / units::two_pi, r.second / units::two_pi, r.closed_form_first / units::two_pi,
          r.closed_form_second / units::two_pi};
}

inline void write_zero_coupling(std::ostream& os, const ZeroCouplingReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "root1_phi_over_2pi=%.9f\nroot2_phi_over_2pi=%.9f\nclosed_form1_phi_over_2pi=%.9f\n"
                "closed_form2_phi_over_2pi=%.9f\nmax_difference=%.3e\n",
                r.root1_over_2pi, r.root2_over_2pi, r.closed1_over_2pi, r.closed2_over_2pi, r.max_difference());
  os << buf;
}

// ---------------------------------------------------------------------------
// Oracle check

struct OracleCheckOptions {
  std::vector<double> phis{0.30, 0.50, 0.70};
  std::vector<std::pair<double, double>> temperatures{{0.2, 0.1}, {0.3, 0.1}, {0.15, 0.15}};
  double rel_tol = 0.01;
};

struct OracleCheckCase {
  double phi_over_2pi = 0.0;
  double T_L = 0.0;
  double T_R = 0.0;
  double tolerance = 0.0;
  double leakage = 0.0;
  oracle::ComparisonReport comparison;
  std::string error;  // non-empty if the case could not be evaluated
  bool pass = false;
};

struct OracleCheckResult {
  std::vector<OracleCheckCase> cases;
  bool pass = false;
};

/// Equal-temperature cases are held to a tenfold tighter tolerance.
inline OracleCheckResult oracle_check(const SweepConfig& cfg, const OracleCheckOptions& opts = {}) {
  cfg.validate();
  OracleCheckResult result;
  result.pass = true;
  for (double phi : opts.phis) {
    for (auto [tl, tr] : opts.temperatures) {
      OracleCheckCase c;
      c.phi_over_2pi = phi;
      c.T_L = tl;
      c.T_R = tr;
      c.tolerance = tl == tr ? opts.rel_tol / 10.0 : opts.rel_tol;
      try {
        BathSpec left = cfg.left;
        BathSpec right = cfg.right;
        left.T = tl;
        right.T = tr;
        const PointResult p = evaluate_point(cfg.circuit, left, right, phi);
        const auto o = oracle::run_oracle(p.basis, p.rates, p.mode, cfg.oracle);
        c.leakage = o.leakage;
        c.comparison = oracle::compare(p.steady, p.gaussian, o, p.basis, p.rates, c.tolerance);
        c.pass = c.comparison.pass;
      } catch (const PhysicsError& e) {
        c.error = e.what();
      }
      result.pass = result.pass && c.pass;
      result.cases.push_back(std::move(c));
    }
  }
  return result;
}

inline void write_oracle_check(std::ostream& os, const OracleCheckResult& r) {
  char buf[512];
  for (const auto& c : r.cases) {
    if (!c.error.empty()) {
      std::snprintf(buf, sizeof buf, "case phi_over_2pi=%.4f T_L=%.4f T_R=%.4f status=error message=\"%s\"\n",
                    c.phi_over_2pi, c.T_L, c.T_R, c.error.c_str());
      os << buf;
      continue;
    }
    for (const auto& e : c.comparison.entries) {
      std::snprintf(buf, sizeof buf,
                    "case phi_over_2pi=%.4f T_L=%.4f T_R=%.4f observable=%s analytic=%.12g oracle=%.12g "
                    "rel_diff=%.3e tol=%.3e status=%s\n",
                    c.phi_over_2pi, c.T_L, c.T_R, e.name.c_str(), e.analytic, e.oracle, e.rel_diff, c.tolerance,
                    e.pass ? "pass" : "fail");
      os << buf;
    }
    std::snprintf(buf, sizeof buf,
                  "case phi_over_2pi=%.4f T_L=%.4f T_R=%.4f leakage=%.3e converged=%s status=%s\n", c.phi_over_2pi,
                  c.T_L, c.T_R, c.leakage, c.comparison.converged ? "yes" : "no", c.pass ? "pass" : "fail");
    os << buf;
  }
  std::size_t passed = 0;
  for (const auto& c : r.cases) passed += c.pass ? 1 : 0;
  os << "oracle-check " << (r.pass ? "PASS " : "FAIL ") << passed << '/' << r.cases.size() << '\n';
  if (!r.pass) {
    os << "note: the oracle truncates each polariton at a finite Fock cutoff; its populations differ from the "
          "closed form by roughly the top-level weight, so tolerances below that level cannot pass. Raise "
          "oracle_cutoff or the tolerance.\n";
  }
}

}  // namespace heatvalve
