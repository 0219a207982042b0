#pragma once

// Bogoliubov-Hopfield diagonalization of
//
//   H_S = omega_L a^dag a + omega_R b^dag b - g (a^dag - a)(b^dag - b)
//
// into H_S = sum_j omega_j p_j^dag p_j + const with
// p_j = w_j a + x_j b + y_j a^dag + z_j b^dag. The coefficient vectors are
// eigenvectors of the dynamical matrix obtained from [p, H_S] = omega p.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <utility>

#include "heatvalve/circuit_model.hpp"
#include "heatvalve/errors.hpp"

namespace heatvalve {

inline constexpr std::size_t kPlus = 0;
inline constexpr std::size_t kMinus = 1;

struct HopfieldCoefficients {
  double w = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct PolaritonBasis {
  double omega_plus = 0.0;
  double omega_minus = 0.0;
  std::array<HopfieldCoefficients, 2> coeffs{};  // indexed by kPlus / kMinus

  double omega(std::size_t j) const { return j == kPlus ? omega_plus : omega_minus; }
  /// Weight of the polariton in the left bath coupling (a + a^dag).
  double W(std::size_t j) const { return coeffs[j].w - coeffs[j].y; }
  /// Weight of the polariton in the right bath coupling (b + b^dag).
  double X(std::size_t j) const { return coeffs[j].x - coeffs[j].z; }
};

/// (omega_plus, omega_minus).
inline std::pair<double, double> polariton_frequencies(const ModeParams& m) {
  require_stable(m);
  const double wl2 = m.omega_L * m.omega_L;
  const double wr2 = m.omega_R * m.omega_R;
  const double split = std::sqrt((wl2 - wr2) * (wl2 - wr2) + 16.0 * m.g * m.g * m.omega_L * m.omega_R);
  const double plus2 = 0.5 * (wl2 + wr2 + split);
  // The product of the roots avoids cancellation in the lower branch.
  const double product = m.omega_L * m.omega_R * (m.omega_L * m.omega_R - 4.0 * m.g * m.g);
  if (!(product > 0.0)) throw PhysicsError(ErrorKind::Instability, "omega_minus^2 <= 0");
  return {std::sqrt(plus2), std::sqrt(product / plus2)};
}

/// Dynamical matrix acting on (w, x, y, z); eigenvalues are +-omega_plus, +-omega_minus.
inline Eigen::Matrix4d hopfield_matrix(const ModeParams& m) {
  const double g = m.g;
  Eigen::Matrix4d h;
  // clang-format off
  h <<  m.omega_L,  g,          0.0,        g,
        g,          m.omega_R,  g,          0.0,
        0.0,       -g,         -m.omega_L, -g,
       -g,          0.0,       -g,         -m.omega_R;
  // clang-format on
  return h;
}

inline constexpr double default_degeneracy_eps = 1e-12;

inline PolaritonBasis hopfield_coefficients(const ModeParams& m,
                                            double degeneracy_eps = default_degeneracy_eps) {
  const auto [omega_plus, omega_minus] = polariton_frequencies(m);
  const double tol = degeneracy_eps * m.omega_L;
  if (std::abs(m.g) <= tol && std::abs(m.omega_L - m.omega_R) <= tol)
    throw PhysicsError(ErrorKind::DegenerateBasis,
                       "omega_L == omega_R at g == 0: polariton basis is not unique");

  const double scale = std::max(m.omega_L, m.omega_R);
  const Eigen::Matrix4d h = hopfield_matrix(m) / scale;
  const Eigen::EigenSolver<Eigen::Matrix4d> solver(h);
  if (solver.info() != Eigen::Success)
    throw PhysicsError(ErrorKind::NumericalBranch, "Hopfield eigensolve failed");

  // The mode continuously connected to bare mode a keeps w > 0, the other x > 0.
  const std::size_t a_like = m.omega_L >= m.omega_R ? kPlus : kMinus;

  PolaritonBasis basis;
  basis.omega_plus = omega_plus;
  basis.omega_minus = omega_minus;
  for (std::size_t j : {kPlus, kMinus}) {
    const double target = basis.omega(j) / scale;
    Eigen::Index best = 0;
    double best_dist = std::abs(solver.eigenvalues()(0).real() - target);
    for (Eigen::Index k = 1; k < 4; ++k) {
      const double d = std::abs(solver.eigenvalues()(k).real() - target);
      if (d < best_dist) {
        best = k;
        best_dist = d;
      }
    }
    Eigen::Vector4d v = solver.eigenvectors().col(best).real();
    const double norm2 = v(0) * v(0) + v(1) * v(1) - v(2) * v(2) - v(3) * v(3);
    if (!(norm2 > 0.0))
      throw PhysicsError(ErrorKind::NumericalBranch, "eigenvector has non-positive bosonic norm");
    v /= std::sqrt(norm2);

    const double anchor = j == a_like ? v(0) : v(1);
    const double fallback = j == a_like ? v(1) : v(0);
    if (anchor < 0.0 || (anchor == 0.0 && fallback < 0.0)) v = -v;
    basis.coeffs[j] = {v(0), v(1), v(2), v(3)};
  }
  return basis;
}

/// Rows express (p+, p-, p+^dag, p-^dag) in terms of (a, b, a^dag, b^dag).
inline Eigen::Matrix4d bogoliubov_matrix(const PolaritonBasis& b) {
  const auto& p = b.coeffs[kPlus];
  const auto& q = b.coeffs[kMinus];
  Eigen::Matrix4d t;
  // clang-format off
  t << p.w, p.x, p.y, p.z,
       q.w, q.x, q.y, q.z,
       p.y, p.z, p.w, p.x,
       q.y, q.z, q.w, q.x;
  // clang-format on
  return t;
}

/// Rows express (a, b, a^dag, b^dag) in terms of (p+, p-, p+^dag, p-^dag).
inline Eigen::Matrix4d inverse_bogoliubov_matrix(const PolaritonBasis& b) {
  const auto& p = b.coeffs[kPlus];
  const auto& q = b.coeffs[kMinus];
  Eigen::Matrix4d t;
  // clang-format off
  t <<  p.w,  q.w, -p.y, -q.y,
        p.x,  q.x, -p.z, -q.z,
       -p.y, -q.y,  p.w,  q.w,
       -p.z, -q.z,  p.x,  q.x;
  // clang-format on
  return t;
}

/// Largest coefficient by which H_S, rewritten in polariton operators,
/// differs from sum_j omega_j p_j^dag p_j (constant offsets ignored).
inline double reconstruction_residual(const PolaritonBasis& b, const ModeParams& m) {
  const Eigen::Matrix4d inv = inverse_bogoliubov_matrix(b);
  // Linear forms of the lab operators over beta = (p+, p-, p+^dag, p-^dag).
  const Eigen::Vector4d a = inv.row(0).transpose();
  const Eigen::Vector4d bb = inv.row(1).transpose();
  const Eigen::Vector4d a_dag = inv.row(2).transpose();
  const Eigen::Vector4d b_dag = inv.row(3).transpose();

  // Coefficients of beta_i beta_j in H_S.
  Eigen::Matrix4d c = m.omega_L * a_dag * a.transpose() + m.omega_R * b_dag * bb.transpose();
  const Eigen::Vector4d a_mom = a_dag - a;
  const Eigen::Vector4d b_mom = b_dag - bb;
  c -= m.g * a_mom * b_mom.transpose();

  // Normal order: A_lk multiplies p_l^dag p_k, the anomalous parts p^dag p^dag and p p.
  Eigen::Matrix2d normal = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d creators = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d annihilators = Eigen::Matrix2d::Zero();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const bool i_dag = i >= 2;
      const bool j_dag = j >= 2;
      if (i_dag && !j_dag) normal(i - 2, j) += c(i, j);
      else if (!i_dag && j_dag) normal(j - 2, i) += c(i, j);
      else if (i_dag && j_dag) creators(i - 2, j - 2) += c(i, j);
      else annihilators(i, j) += c(i, j);
    }
  }
  double r = 0.0;
  r = std::max(r, std::abs(normal(0, 0) - b.omega_plus));
  r = std::max(r, std::abs(normal(1, 1) - b.omega_minus));
  r = std::max(r, std::abs(normal(0, 1)));
  r = std::max(r, std::abs(normal(1, 0)));
  r = std::max(r, std::abs(creators(0, 0)));
  r = std::max(r, std::abs(creators(1, 1)));
  r = std::max(r, std::abs(creators(0, 1) + creators(1, 0)));
  r = std::max(r, std::abs(annihilators(0, 0)));
  r = std::max(r, std::abs(annihilators(1, 1)));
  r = std::max(r, std::abs(annihilators(0, 1) + annihilators(1, 0)));
  return r;
}

}  // namespace heatvalve
