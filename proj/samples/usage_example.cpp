// Evaluates the valve at a few flux points and cross-checks one of them
// against the truncated-Fock master equation.

#include <cstdio>

#include "heatvalve/heatvalve.hpp"

int main() {
  using namespace heatvalve;

  const CircuitParams circuit;  // defaults
  BathSpec left;
  BathSpec right;
  left.T = 0.2;
  right.T = 0.1;

  std::printf("%8s %12s %12s %14s %10s\n", "phi/2pi", "g [GHz]", "w- [GHz]", "Q_L [W]", "E_N");
  for (double phi : {0.30, 0.374, 0.45, 0.50}) {
    const PointResult p = evaluate_point(circuit, left, right, phi);
    std::printf("%8.3f %12.5f %12.5f %14.6e %10.6f\n", phi, units::angular_to_ghz(p.mode.g),
                units::angular_to_ghz(p.basis.omega_minus), p.steady.Q_L_watts, p.entanglement.E_N);
  }

  const PointResult p = evaluate_point(circuit, left, right, 0.5);
  const auto o = oracle::run_oracle(p.basis, p.rates, p.mode, oracle::OracleConfig{});
  std::printf("\noracle at phi/2pi = 0.5: occ+ %.6g (analytic %.6g), Q_L %.6g (analytic %.6g)\n", o.occ_plus,
              p.steady.occ_plus, o.Q_L, p.steady.Q_L);

  const auto zc = zero_coupling_flux(circuit);
  std::printf("g = 0 at phi/2pi = %.6f and %.6f\n", zc.first / units::two_pi, zc.second / units::two_pi);
}
