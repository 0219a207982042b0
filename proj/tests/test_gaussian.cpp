#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>

#include "test_support.hpp"

namespace hv = heatvalve;
using hv::kMinus;
using hv::kPlus;

namespace {

// Smallest symplectic eigenvalue of the partial transpose (y_R -> -y_R),
// straight from the spectrum of i Omega Gamma^T_B.
double pt_symplectic_min(const Eigen::Matrix4d& gamma) {
  const Eigen::Matrix4d p = Eigen::Vector4d(1, 1, 1, -1).asDiagonal();
  return hv::symplectic_eigenvalues(p * gamma * p)[0];
}

double reference_en(const Eigen::Matrix4d& gamma) {
  return std::max(0.0, -std::log(2.0 * pt_symplectic_min(gamma)));
}

Eigen::Matrix4d squeezed(double r) {
  Eigen::Matrix4d g = Eigen::Matrix4d::Zero();
  const double c = std::cosh(2.0 * r) / 2.0, s = std::sinh(2.0 * r) / 2.0;
  g(0, 0) = g(1, 1) = g(2, 2) = g(3, 3) = c;
  g(0, 2) = g(2, 0) = s;
  g(1, 3) = g(3, 1) = -s;
  return g;
}

hv::PointResult point(double phi, double tl, double tr) {
  hv::BathSpec l, r;
  l.T = tl;
  r.T = tr;
  return hv::evaluate_point(hv::CircuitParams{}, l, r, phi);
}

}  // namespace

TEST(Gaussian, VacuumPolaritonCovariance) {
  const hv::SteadyStateReport s;
  EXPECT_EQ(hv::polariton_covariance(s), Eigen::Matrix4d::Identity() / 2.0);
}

TEST(Gaussian, ThermalDiagonal) {
  const auto p = point(0.5, 0.15, 0.15);
  EXPECT_NEAR(p.gaussian.gamma_polariton(0, 0), hv::bose_occupation(p.basis.omega_plus, 0.15) + 0.5, 1e-15);
  EXPECT_NEAR(p.gaussian.gamma_polariton(3, 3), hv::bose_occupation(p.basis.omega_minus, 0.15) + 0.5, 1e-15);
  EXPECT_EQ(p.gaussian.gamma_polariton(0, 1), 0.0);
}

TEST(Gaussian, TwoModeSqueezedBenchmark) {
  for (double r : {0.1, 0.5, 1.0}) {
    const auto e = hv::logarithmic_negativity(squeezed(r));
    EXPECT_NEAR(e.E_N / (2.0 * r), 1.0, 1e-10) << r;
    EXPECT_NEAR(e.E_N, reference_en(squeezed(r)), 1e-10);
  }
}

TEST(Gaussian, ProductThermalStateSeparable) {
  const Eigen::Matrix4d g = Eigen::Vector4d(0.7, 0.7, 1.9, 1.9).asDiagonal();
  const auto e = hv::logarithmic_negativity(g);
  EXPECT_EQ(e.E_N, 0.0);
  EXPECT_NEAR(e.nu_tilde, 0.7, 1e-14);
}

TEST(Gaussian, IdentityTransformKeepsCovariance) {
  const Eigen::Matrix4d g = Eigen::Vector4d(0.7, 0.7, 1.9, 1.9).asDiagonal();
  EXPECT_LT((hv::lab_covariance(g, Eigen::Matrix4d::Identity()) - g).norm(), 1e-16);
}

TEST(Gaussian, UnphysicalCovarianceRejected) {
  const Eigen::Matrix4d g = Eigen::Matrix4d::Identity() * 0.4;
  try {
    hv::lab_covariance(g, Eigen::Matrix4d::Identity());
    FAIL();
  } catch (const hv::PhysicsError& e) {
    EXPECT_EQ(e.kind(), hv::ErrorKind::Unphysical);
  }
}

TEST(Gaussian, DecoupledTransformIsPermutation) {
  const auto b = hv::hopfield_coefficients({1.0, 1.5, 0.0});
  const Eigen::Matrix4d s = hv::transform_matrix(b);
  Eigen::Matrix4d expect = Eigen::Matrix4d::Zero();
  // + is bare b (lab rows 2, 3), - is bare a (lab rows 0, 1).
  expect(0, 2) = expect(1, 3) = expect(2, 0) = expect(3, 1) = 1.0;
  EXPECT_LT((s - expect).norm(), 1e-15);
}

TEST(Gaussian, ComplexPathMatchesRealPath) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> phase(0.0, hv::units::two_pi);
  for (int i = 0; i < 200; ++i) {
    const auto b = hv::hopfield_coefficients(hvtest::random_modes(rng));
    hv::ComplexCoefficients c;
    for (std::size_t j : {kPlus, kMinus}) {
      const auto& h = b.coeffs[j];
      c[j] = {h.w, h.x, h.y, h.z};
    }
    const Eigen::Matrix4cd sc = hv::transform_matrix(c);
    EXPECT_LT((sc.real() - hv::transform_matrix(b)).norm(), 1e-14);
    EXPECT_LT(sc.imag().norm(), 1e-15);

    // A global phase on p_j rotates that polariton's quadrature pair; the
    // lab covariance of a phase-insensitive polariton state is unchanged.
    hv::ComplexCoefficients rotated = c;
    for (std::size_t j : {kPlus, kMinus}) {
      const std::complex<double> u = std::polar(1.0, phase(rng));
      // p -> u p multiplies (w, x) by u and (y, z) by u as well.
      for (auto& v : rotated[j]) v *= u;
    }
    hv::SteadyStateReport s;
    s.occ_plus = 0.3;
    s.occ_minus = 0.8;
    const Eigen::Matrix4d sr = hv::transform_matrix(rotated).real();
    const Eigen::Matrix4d gp = hv::polariton_covariance(s);
    EXPECT_LT((sr * gp * sr.transpose() - hv::transform_matrix(b) * gp * hv::transform_matrix(b).transpose()).norm(),
              1e-12);
  }
}

TEST(Gaussian, RandomSymplecticInvariants) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> occ(0.0, 3.0);
  const Eigen::Matrix4d omega = hv::symplectic_form();
  for (int i = 0; i < 1000; ++i) {
    const auto b = hv::hopfield_coefficients(hvtest::random_modes(rng));
    const Eigen::Matrix4d s = hv::transform_matrix(b);
    EXPECT_LT((s * omega * s.transpose() - omega).norm(), 1e-10);

    hv::SteadyStateReport rep;
    rep.occ_plus = occ(rng);
    rep.occ_minus = occ(rng);
    const Eigen::Matrix4d gp = hv::polariton_covariance(rep);
    const Eigen::Matrix4d gl = hv::lab_covariance(gp, s);
    const auto nu_p = hv::symplectic_eigenvalues(gp);
    const auto nu_l = hv::symplectic_eigenvalues(gl);
    EXPECT_NEAR(nu_l[0] / nu_p[0], 1.0, 1e-10);
    EXPECT_NEAR(nu_l[1] / nu_p[1], 1.0, 1e-10);
    EXPECT_GE(nu_l[0], 0.5 - 1e-12);
    EXPECT_NEAR(gl.determinant() / gp.determinant(), 1.0, 1e-10);
    EXPECT_NEAR(hv::logarithmic_negativity(gl).E_N, reference_en(gl), 1e-9);
  }
}

TEST(Gaussian, VacuumStaysPure) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 100; ++i) {
    const auto b = hv::hopfield_coefficients(hvtest::random_modes(rng));
    const auto nu = hv::symplectic_eigenvalues(hv::lab_covariance(Eigen::Matrix4d::Identity() / 2.0,
                                                                  hv::transform_matrix(b)));
    EXPECT_NEAR(nu[0], 0.5, 1e-10);
    EXPECT_NEAR(nu[1], 0.5, 1e-10);
  }
}

TEST(Gaussian, EntanglementDecreasesWithLeftTemperature) {
  const double e02 = point(0.5, 0.2, 0.1).entanglement.E_N;
  const double e03 = point(0.5, 0.3, 0.1).entanglement.E_N;
  EXPECT_GT(e02, 0.0);
  EXPECT_LT(e03, e02);
  double prev = point(0.5, 0.1, 0.1).entanglement.E_N;
  for (int i = 1; i <= 30; ++i) {
    const double e = point(0.5, 0.1 + 0.01 * i, 0.1).entanglement.E_N;
    EXPECT_LE(e, prev);
    prev = e;
  }
}

TEST(Gaussian, FluxSymmetryAndZeros) {
  for (double f = 0.02; f < 0.5; f += 0.041) {
    EXPECT_LE(hvtest::rel_diff(point(f, 0.2, 0.1).entanglement.E_N, point(1.0 - f, 0.2, 0.1).entanglement.E_N),
              1e-9);
  }
  const auto roots = hv::zero_coupling_flux(hv::CircuitParams{});
  const auto p = point(roots.first / hv::units::two_pi, 0.2, 0.1);
  EXPECT_LT(p.gaussian.K().norm(), 1e-7);
  EXPECT_EQ(p.entanglement.E_N, 0.0);
}
