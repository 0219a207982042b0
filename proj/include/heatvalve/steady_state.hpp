#pragma once

// Fixed point of the polariton population balance: each polariton relaxes to
// the rate-weighted mean of the two bath occupations at its frequency, and
// the left heat current is the energy it exchanges with the left bath.

#include <cstddef>

#include "heatvalve/bath_model.hpp"
#include "heatvalve/errors.hpp"
#include "heatvalve/hopfield.hpp"
#include "heatvalve/units.hpp"

namespace heatvalve {

struct SteadyStateReport {
  double occ_plus = 0.0;
  double occ_minus = 0.0;
  double N_tot = 0.0;
  double Z_diff = 0.0;
  double Q_L = 0.0;  // rad^2 / s^2
  double Q_R = 0.0;
  double Q_L_watts = 0.0;
  double Q_R_watts = 0.0;

  double occupation(std::size_t j) const { return j == kPlus ? occ_plus : occ_minus; }
};

namespace detail {

inline double left_weight(std::size_t j, const RateSet& r, const PolaritonBasis& b) {
  return b.W(j) * b.W(j) * r.zeta[kLeft][j];
}
inline double right_weight(std::size_t j, const RateSet& r, const PolaritonBasis& b) {
  return b.X(j) * b.X(j) * r.zeta[kRight][j];
}

inline double total_weight(std::size_t j, const RateSet& r, const PolaritonBasis& b) {
  const double total = left_weight(j, r, b) + right_weight(j, r, b);
  if (!(total > 0.0))
    throw PhysicsError(ErrorKind::IsolatedMode, "polariton is decoupled from both baths");
  return total;
}

}  // namespace detail

inline double mode_occupation(std::size_t j, const RateSet& rates, const PolaritonBasis& basis) {
  const double wl = detail::left_weight(j, rates, basis);
  const double wr = detail::right_weight(j, rates, basis);
  const double total = detail::total_weight(j, rates, basis);
  return (rates.n_occ[kLeft][j] * wl + rates.n_occ[kRight][j] * wr) / total;
}

inline double heat_current_left(const RateSet& rates, const PolaritonBasis& basis) {
  double q = 0.0;
  for (std::size_t j : {kPlus, kMinus}) {
    const double total = detail::total_weight(j, rates, basis);
    q += (rates.n_occ[kLeft][j] - rates.n_occ[kRight][j]) * detail::left_weight(j, rates, basis) *
         detail::right_weight(j, rates, basis) * basis.omega(j) / total;
  }
  return q;
}

inline double heat_current_right(const RateSet& rates, const PolaritonBasis& basis) {
  double q = 0.0;
  for (std::size_t j : {kPlus, kMinus}) {
    const double total = detail::total_weight(j, rates, basis);
    q += (rates.n_occ[kRight][j] - rates.n_occ[kLeft][j]) * detail::right_weight(j, rates, basis) *
         detail::left_weight(j, rates, basis) * basis.omega(j) / total;
  }
  return q;
}

/// Natural heat current (occupation rate x angular frequency) to watts.
constexpr double to_watts(double q_natural) { return units::hbar * q_natural; }
constexpr double from_watts(double q_watts) { return q_watts / units::hbar; }

inline SteadyStateReport steady_state(const RateSet& rates, const PolaritonBasis& basis) {
  SteadyStateReport s;
  s.occ_plus = mode_occupation(kPlus, rates, basis);
  s.occ_minus = mode_occupation(kMinus, rates, basis);
  s.N_tot = s.occ_plus + s.occ_minus;
  s.Z_diff = s.occ_plus - s.occ_minus;
  s.Q_L = heat_current_left(rates, basis);
  s.Q_R = heat_current_right(rates, basis);
  s.Q_L_watts = to_watts(s.Q_L);
  s.Q_R_watts = to_watts(s.Q_R);
  return s;
}

}  // namespace heatvalve
