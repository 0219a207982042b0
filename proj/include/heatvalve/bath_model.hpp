#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "heatvalve/errors.hpp"
#include "heatvalve/hopfield.hpp"
#include "heatvalve/units.hpp"

namespace heatvalve {

inline constexpr std::size_t kLeft = 0;
inline constexpr std::size_t kRight = 1;

/// Series RLC heat bath. R is a normalized (dimensionless) resistance, so the
/// damping rate 2 omega Re Y comes out in rad/s.
struct BathSpec {
  double R = 1.0;
  double Q = 5.0;
  double omega_LC = units::ghz_to_angular(10.0);
  double T = 0.1;  // K

  void validate() const {
    if (!(R > 0.0) || !std::isfinite(R)) throw ValidationError("bath R must be positive");
    if (!(Q > 0.0) || !std::isfinite(Q)) throw ValidationError("bath Q must be positive");
    if (!(omega_LC > 0.0) || !std::isfinite(omega_LC))
      throw ValidationError("bath omega_LC must be positive");
    if (!(T >= 0.0) || !std::isfinite(T)) throw ValidationError("bath temperature must be >= 0");
  }
};

/// Re Y(omega) = 1 / (R [1 + Q^2 (omega/omega_LC - omega_LC/omega)^2]).
inline double admittance_real(double omega, const BathSpec& b) {
  const double detuning = omega / b.omega_LC - b.omega_LC / omega;
  return 1.0 / (b.R * (1.0 + b.Q * b.Q * detuning * detuning));
}

/// Bose-Einstein occupation 1 / (exp(hbar omega / k_B T) - 1); exactly 0 at T = 0.
inline double bose_occupation(double omega, double temperature_k) {
  if (temperature_k == 0.0) return 0.0;
  return 1.0 / std::expm1(units::boltzmann_exponent(omega, temperature_k));
}

/// zeta(omega) = 2 omega Re Y(omega).
inline double damping_rate(double omega, const BathSpec& b) {
  return 2.0 * omega * admittance_real(omega, b);
}

struct RateSet {
  // [bath][mode], bath in {kLeft, kRight}, mode in {kPlus, kMinus}.
  std::array<std::array<double, 2>, 2> zeta{};
  std::array<std::array<double, 2>, 2> n_occ{};

  /// Absorption rate Gamma_nu(omega_j) = zeta N.
  double upward(std::size_t bath, std::size_t j) const { return zeta[bath][j] * n_occ[bath][j]; }
  /// Emission rate Gamma_nu(-omega_j) = zeta (N + 1).
  double downward(std::size_t bath, std::size_t j) const {
    return zeta[bath][j] * (n_occ[bath][j] + 1.0);
  }
};

inline RateSet rate_set(const PolaritonBasis& basis, const BathSpec& left, const BathSpec& right) {
  RateSet r;
  const std::array<const BathSpec*, 2> baths{&left, &right};
  for (std::size_t nu : {kLeft, kRight}) {
    for (std::size_t j : {kPlus, kMinus}) {
      r.zeta[nu][j] = damping_rate(basis.omega(j), *baths[nu]);
      r.n_occ[nu][j] = bose_occupation(basis.omega(j), baths[nu]->T);
    }
  }
  return r;
}

/// (omega_+ - omega_-) / max zeta: how well separated the polariton lines are
/// compared with their widths.
inline double secular_ratio(const PolaritonBasis& basis, const RateSet& rates) {
  double widest = 0.0;
  for (const auto& bath : rates.zeta)
    for (double z : bath) widest = std::max(widest, z);
  return (basis.omega_plus - basis.omega_minus) / widest;
}

}  // namespace heatvalve
