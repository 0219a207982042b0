#pragma once

// Flux-to-Hamiltonian map for two LC resonators coupled through a shared
// inductance and a SQUID-tunable coupler branch.
//
// The coupler branch has inductance L_J(phi) + 2 L_sh. Eliminating its current
// loads each resonator and shifts the mutual inductance by the same amount
//
//   X(phi)  = L_sh^2 / (L_J(phi) + 2 L_sh)
//   L_m,nu  = L_nu - X,        M_eff = M_0 + X
//
// The resonator Hamiltonian follows from the inverse of the 2x2 inductance
// matrix [[L_mL, M_eff], [M_eff, L_mR]]; with D = L_mL L_mR - M_eff^2 > 0 the
// effective single-mode inductances are D / L_mR and D / L_mL and the
// flux-flux coupling is g = sqrt(Z_L Z_R) M_eff / (2 D).

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heatvalve/errors.hpp"
#include "heatvalve/units.hpp"

namespace heatvalve {

/// Lumped-element circuit values, SI units (H, F).
struct CircuitParams {
  double L_a = units::nH(2.023);
  double L_b = units::nH(2.023);
  double C_a = units::fF(42.3);
  double C_b = units::fF(18.27);
  double L_sh = units::nH(0.446);
  double L_J0 = units::nH(1.210);
  double M_0 = units::nH(0.381);
  double L_0 = units::nH(0.177);
  double delta = 0.053;

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v))
        throw ValidationError(std::string(name) + " must be strictly positive and finite");
    };
    positive(L_a, "L_a");
    positive(L_b, "L_b");
    positive(C_a, "C_a");
    positive(C_b, "C_b");
    positive(L_J0, "L_J0");
    positive(M_0, "M_0");
    positive(L_0, "L_0");
    // A vanishing shared inductance is allowed: it switches the flux tuning off.
    if (!(L_sh >= 0.0) || !std::isfinite(L_sh))
      throw ValidationError("L_sh must be non-negative and finite");
    if (!(delta >= 0.0 && delta < 1.0)) throw ValidationError("delta must lie in [0, 1)");
  }
};

/// Bare frequencies and coupling of the two-mode Hamiltonian, rad/s.
struct ModeParams {
  double omega_L = 0.0;
  double omega_R = 0.0;
  double g = 0.0;

  bool is_stable() const {
    return omega_L > 0.0 && omega_R > 0.0 && 4.0 * g * g < omega_L * omega_R;
  }
};

inline void require_stable(const ModeParams& m) {
  if (!(m.omega_L > 0.0) || !(m.omega_R > 0.0))
    throw PhysicsError(ErrorKind::Instability, "bare frequencies must be positive");
  if (!(4.0 * m.g * m.g < m.omega_L * m.omega_R))
    throw PhysicsError(ErrorKind::Instability, "|g| >= sqrt(omega_L omega_R)/2");
}

inline constexpr double default_pole_eps = 1e-9;

/// L_J(phi) = L_J0 / (cos(phi) - delta) + L_0.
inline double junction_inductance(double phi, const CircuitParams& p,
                                  double pole_eps = default_pole_eps) {
  const double denom = std::cos(phi) - p.delta;
  if (std::abs(denom) < pole_eps)
    throw PhysicsError(ErrorKind::PolePassage, "junction inductance diverges at this flux");
  return p.L_J0 / denom + p.L_0;
}

namespace detail {

// Shift X(phi) = L_sh^2 / (L_J + 2 L_sh) of both the self and mutual inductances.
inline double coupler_shift(double phi, const CircuitParams& p, double pole_eps) {
  if (p.L_sh == 0.0) return 0.0;
  const double branch = junction_inductance(phi, p, pole_eps) + 2.0 * p.L_sh;
  if (std::abs(branch) < pole_eps * p.L_J0)
    throw PhysicsError(ErrorKind::PolePassage, "coupler branch inductance vanishes");
  return p.L_sh * p.L_sh / branch;
}

}  // namespace detail

/// Signed effective mutual inductance M_0 + L_sh^2 / (L_J + 2 L_sh); g carries its sign.
inline double effective_mutual(double phi, const CircuitParams& p,
                               double pole_eps = default_pole_eps) {
  return p.M_0 + detail::coupler_shift(phi, p, pole_eps);
}

/// Loaded self inductances (L_mL, L_mR).
inline std::pair<double, double> loaded_inductances(double phi, const CircuitParams& p,
                                                    double pole_eps = default_pole_eps) {
  const double x = detail::coupler_shift(phi, p, pole_eps);
  return {p.L_a - x, p.L_b - x};
}

inline ModeParams mode_params(double phi_ex, const CircuitParams& p,
                              double pole_eps = default_pole_eps) {
  const double x = detail::coupler_shift(phi_ex, p, pole_eps);
  const double l_left = p.L_a - x;
  const double l_right = p.L_b - x;
  const double mutual = p.M_0 + x;
  const double det = l_left * l_right - mutual * mutual;
  if (!(l_left > 0.0) || !(l_right > 0.0) || !(det > 0.0))
    throw PhysicsError(ErrorKind::Instability, "inductance matrix is not positive definite");

  const double eff_left = det / l_right;
  const double eff_right = det / l_left;
  const double z_left = std::sqrt(eff_left / p.C_a);
  const double z_right = std::sqrt(eff_right / p.C_b);

  ModeParams m;
  m.omega_L = 1.0 / std::sqrt(eff_left * p.C_a);
  m.omega_R = 1.0 / std::sqrt(eff_right * p.C_b);
  m.g = std::sqrt(z_left * z_right) * mutual / (2.0 * det);
  require_stable(m);
  return m;
}

/// Both zeros of g over one flux period, in rad, with the closed-form prediction.
struct ZeroCouplingRoots {
  double first = 0.0;   // in (0, pi]
  double second = 0.0;  // in [pi, 2 pi)
  double closed_form_first = 0.0;
  double closed_form_second = 0.0;
};

/// cos(phi) at which M_eff vanishes: delta - L_J0 / (L_sh^2/M_0 + 2 L_sh + L_0).
inline double zero_coupling_cosine(const CircuitParams& p) {
  return p.delta - p.L_J0 / (p.L_sh * p.L_sh / p.M_0 + 2.0 * p.L_sh + p.L_0);
}

namespace detail {

// Bisection on a bracket [lo, hi] with f(lo), f(hi) of opposite sign.
template <class F>
double bisect(F&& f, double lo, double hi, double f_lo) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Sign changes of M_eff on [a, b] that are genuine zeros, skipping pole jumps.
inline std::vector<double> mutual_zeros(const CircuitParams& p, double a, double b,
                                        int intervals, double pole_eps) {
  auto mutual_or_nan = [&](double phi) {
    try {
      return effective_mutual(phi, p, pole_eps);
    } catch (const PhysicsError&) {
      return std::nan("");
    }
  };
  std::vector<double> roots;
  const double step = (b - a) / intervals;
  double prev_phi = a;
  double prev = mutual_or_nan(a);
  for (int i = 1; i <= intervals; ++i) {
    const double phi = a + i * step;
    const double cur = mutual_or_nan(phi);
    if (std::isfinite(prev) && std::isfinite(cur) && (prev > 0.0) != (cur > 0.0)) {
      const double r = bisect(mutual_or_nan, prev_phi, phi, prev);
      // A jump through a pole of X looks like a sign change but is not a zero.
      if (std::abs(mutual_or_nan(r)) < 1e-6 * p.M_0) roots.push_back(r);
    }
    prev_phi = phi;
    prev = cur;
  }
  return roots;
}

}  // namespace detail

inline ZeroCouplingRoots zero_coupling_flux(const CircuitParams& p,
                                            double pole_eps = default_pole_eps) {
  const double c = zero_coupling_cosine(p);
  if (p.L_sh == 0.0 || !(std::abs(c) <= 1.0))
    throw PhysicsError(ErrorKind::NoRoot, "arccos argument outside [-1, 1]");

  constexpr double pi = std::numbers::pi;
  const auto lower = detail::mutual_zeros(p, 0.0, pi, 4096, pole_eps);
  const auto upper = detail::mutual_zeros(p, pi, 2.0 * pi, 4096, pole_eps);
  if (lower.size() != 1 || upper.size() != 1)
    throw PhysicsError(ErrorKind::NoRoot, "expected exactly one zero of g per half period");

  ZeroCouplingRoots r;
  r.first = lower.front();
  r.second = upper.front();
  r.closed_form_first = std::acos(c);
  r.closed_form_second = 2.0 * pi - r.closed_form_first;
  return r;
}

}  // namespace heatvalve
