#pragma once

#include <numbers>

namespace heatvalve::units {

// CODATA 2018 exact values.
inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr double k_B = 1.380649e-23;      // J / K

inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline constexpr double nano = 1e-9;
inline constexpr double femto = 1e-15;
inline constexpr double giga = 1e9;

constexpr double nH(double v) { return v * nano; }
constexpr double fF(double v) { return v * femto; }

/// Ordinary frequency in GHz to angular frequency in rad/s.
constexpr double ghz_to_angular(double f_ghz) { return two_pi * giga * f_ghz; }
constexpr double angular_to_ghz(double omega) { return omega / (two_pi * giga); }

/// ħω / (k_B T), the dimensionless Boltzmann exponent.
constexpr double boltzmann_exponent(double omega, double temperature_k) {
  return hbar * omega / (k_B * temperature_k);
}

}  // namespace heatvalve::units
