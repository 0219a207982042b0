#pragma once

// Steady-state covariance matrices and logarithmic negativity.
//
// Covariances are symmetrized, Gamma_ij = <{dxi_i, dxi_j}>/2, so the vacuum
// has variance 1/2. Quadratures: d = (p + p^dag)/sqrt2, f = i(p^dag - p)/sqrt2
// for polaritons, ordered (d+, f+, d-, f-); the lab vector is (x_L, y_L, x_R, y_R).

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

#include "heatvalve/errors.hpp"
#include "heatvalve/hopfield.hpp"
#include "heatvalve/steady_state.hpp"

namespace heatvalve {

struct EntanglementResult {
  double nu_tilde = 0.0;
  double delta_tilde = 0.0;
  double E_N = 0.0;
};

struct GaussianState {
  Eigen::Matrix4d gamma_polariton = Eigen::Matrix4d::Identity() / 2.0;
  Eigen::Matrix4d s_matrix = Eigen::Matrix4d::Identity();
  Eigen::Matrix4d gamma_lab = Eigen::Matrix4d::Identity() / 2.0;
  double a_diag = 0.5;
  double b_diag = 0.5;

  Eigen::Matrix2d M() const { return gamma_lab.topLeftCorner<2, 2>(); }
  Eigen::Matrix2d N() const { return gamma_lab.bottomRightCorner<2, 2>(); }
  Eigen::Matrix2d K() const { return gamma_lab.topRightCorner<2, 2>(); }
};

/// Two-mode symplectic form for (x1, p1, x2, p2) ordering.
inline Eigen::Matrix4d symplectic_form() {
  Eigen::Matrix4d omega = Eigen::Matrix4d::Zero();
  omega(0, 1) = 1.0;
  omega(1, 0) = -1.0;
  omega(2, 3) = 1.0;
  omega(3, 2) = -1.0;
  return omega;
}

/// Both symplectic eigenvalues, ascending.
inline std::array<double, 2> symplectic_eigenvalues(const Eigen::Matrix4d& gamma) {
  const Eigen::EigenSolver<Eigen::Matrix4d> solver(symplectic_form() * gamma, false);
  std::array<double, 4> mags{};
  for (int k = 0; k < 4; ++k) mags[k] = std::abs(solver.eigenvalues()(k).imag());
  std::sort(mags.begin(), mags.end());
  // Eigenvalues come in +-i nu pairs.
  return {0.5 * (mags[0] + mags[1]), 0.5 * (mags[2] + mags[3])};
}

inline Eigen::Matrix4d polariton_covariance(const SteadyStateReport& report) {
  const double a = report.occ_plus + 0.5;
  const double b = report.occ_minus + 0.5;
  return Eigen::Vector4d(a, a, b, b).asDiagonal();
}

/// s = S r for real Hopfield coefficients.
inline Eigen::Matrix4d transform_matrix(const PolaritonBasis& basis) {
  const auto& p = basis.coeffs[kPlus];
  const auto& q = basis.coeffs[kMinus];
  Eigen::Matrix4d s;
  // clang-format off
  s << p.w - p.y, 0.0,       q.w - q.y, 0.0,
       0.0,       p.w + p.y, 0.0,       q.w + q.y,
       p.x - p.z, 0.0,       q.x - q.z, 0.0,
       0.0,       p.x + p.z, 0.0,       q.x + q.z;
  // clang-format on
  return s;
}

/// Complex Hopfield coefficients (w, x, y, z) for the + and - polaritons.
using ComplexCoefficients = std::array<std::array<std::complex<double>, 4>, 2>;

/// Transform for complex coefficients. Each entry is written with explicit
/// conjugate pairs, so the result is real up to rounding whenever the
/// coefficients describe a valid Bogoliubov transform.
inline Eigen::Matrix4cd transform_matrix(const ComplexCoefficients& c) {
  using cd = std::complex<double>;
  const cd i{0.0, 1.0};
  Eigen::Matrix4cd s;
  for (std::size_t j = 0; j < 2; ++j) {
    const cd w = c[j][0], x = c[j][1], y = c[j][2], z = c[j][3];
    const cd W = w - y;
    const cd X = x - z;
    const cd wy = w + y;
    const cd xz = x + z;
    const auto col = static_cast<Eigen::Index>(2 * j);
    s(0, col) = (W + std::conj(W)) / 2.0;
    s(0, col + 1) = i * (-W + std::conj(W)) / 2.0;
    s(1, col) = i * (wy - std::conj(wy)) / 2.0;
    s(1, col + 1) = (wy + std::conj(wy)) / 2.0;
    s(2, col) = (X + std::conj(X)) / 2.0;
    s(2, col + 1) = i * (-X + std::conj(X)) / 2.0;
    s(3, col) = i * (xz - std::conj(xz)) / 2.0;
    s(3, col + 1) = (xz + std::conj(xz)) / 2.0;
  }
  return s;
}

inline Eigen::Matrix4d lab_covariance(const Eigen::Matrix4d& gamma_polariton,
                                      const Eigen::Matrix4d& s) {
  Eigen::Matrix4d g = s * gamma_polariton * s.transpose();
  g = 0.5 * (g + g.transpose()).eval();
  const auto nu = symplectic_eigenvalues(g);
  if (nu[0] < 0.5 - 1e-12)
    throw PhysicsError(ErrorKind::Unphysical, "lab covariance violates the uncertainty principle");
  return g;
}

inline EntanglementResult logarithmic_negativity(const Eigen::Matrix4d& gamma_lab) {
  const Eigen::Matrix2d m = gamma_lab.topLeftCorner<2, 2>();
  const Eigen::Matrix2d n = gamma_lab.bottomRightCorner<2, 2>();
  const Eigen::Matrix2d k = gamma_lab.topRightCorner<2, 2>();
  const double det = gamma_lab.determinant();

  EntanglementResult r;
  r.delta_tilde = m.determinant() + n.determinant() - 2.0 * k.determinant();
  double disc = r.delta_tilde * r.delta_tilde - 4.0 * det;
  if (disc < -1e-12)
    throw PhysicsError(ErrorKind::NumericalBranch, "partially transposed spectrum is complex");
  disc = std::max(disc, 0.0);
  // (Delta - sqrt(disc)) / 2 rewritten to avoid cancellation for strong squeezing.
  const double nu2 = 2.0 * det / (r.delta_tilde + std::sqrt(disc));
  if (!(nu2 > 0.0))
    throw PhysicsError(ErrorKind::NumericalBranch, "non-positive partially transposed eigenvalue");
  r.nu_tilde = std::sqrt(nu2);
  r.E_N = std::max(0.0, -std::log(2.0 * r.nu_tilde));
  return r;
}

inline GaussianState gaussian_state(const SteadyStateReport& report, const PolaritonBasis& basis) {
  GaussianState g;
  g.gamma_polariton = polariton_covariance(report);
  g.s_matrix = transform_matrix(basis);
  g.gamma_lab = lab_covariance(g.gamma_polariton, g.s_matrix);
  g.a_diag = g.gamma_polariton(0, 0);
  g.b_diag = g.gamma_polariton(2, 2);
  return g;
}

}  // namespace heatvalve
