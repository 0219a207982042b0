#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "test_support.hpp"

namespace hv = heatvalve;
using hv::kMinus;
using hv::kPlus;

namespace {

double bosonic_norm(const hv::HopfieldCoefficients& c) { return c.w * c.w + c.x * c.x - c.y * c.y - c.z * c.z; }

// Unnormalized closed-form eigenvector, then bosonic renormalization.
Eigen::Vector4d closed_form(const hv::ModeParams& m, double omega) {
  const double wl = m.omega_L, wr = m.omega_R, g = m.g;
  Eigen::Vector4d v(-(omega + wl) * (omega + wr) / (2.0 * g * wl),
                    -1.0 + (wl * wl - omega * omega) * (omega + wr) / (2.0 * g * g * wl),
                    (omega - wl) * (omega + wr) / (2.0 * g * wl), 1.0);
  const double n2 = v(0) * v(0) + v(1) * v(1) - v(2) * v(2) - v(3) * v(3);
  return v / std::sqrt(n2);
}

std::vector<double> sorted_eigenvalues(const Eigen::Matrix4d& h) {
  const Eigen::EigenSolver<Eigen::Matrix4d> s(h, false);
  std::vector<double> ev;
  for (int k = 0; k < 4; ++k) ev.push_back(s.eigenvalues()(k).real());
  std::sort(ev.begin(), ev.end());
  return ev;
}

Eigen::Vector4d as_vector(const hv::HopfieldCoefficients& c) { return {c.w, c.x, c.y, c.z}; }

}  // namespace

TEST(Hopfield, EqualFrequencies) {
  const hv::ModeParams m{1.0, 1.0, 0.1};
  const auto [wp, wm] = hv::polariton_frequencies(m);
  EXPECT_NEAR(wp, std::sqrt(1.0 + 0.2), 1e-15);
  EXPECT_NEAR(wm, std::sqrt(1.0 - 0.2), 1e-15);
}

TEST(Hopfield, DecoupledFrequencies) {
  const auto [wp, wm] = hv::polariton_frequencies({2.0, 1.5, 0.0});
  EXPECT_DOUBLE_EQ(wp, 2.0);
  EXPECT_DOUBLE_EQ(wm, 1.5);
}

TEST(Hopfield, FrequenciesMatchDenseEigensolve) {
  const hv::ModeParams m{1.0, 1.5, 0.2};
  const auto [wp, wm] = hv::polariton_frequencies(m);
  const auto ev = sorted_eigenvalues(hv::hopfield_matrix(m));
  EXPECT_NEAR(ev[0], -wp, 1e-12);
  EXPECT_NEAR(ev[1], -wm, 1e-12);
  EXPECT_NEAR(ev[2], wm, 1e-12);
  EXPECT_NEAR(ev[3], wp, 1e-12);
}

TEST(Hopfield, MatrixStructure) {
  const auto h0 = hv::hopfield_matrix({1.0, 1.5, 0.0});
  const auto ev = sorted_eigenvalues(h0);
  EXPECT_NEAR(ev[0], -1.5, 1e-15);
  EXPECT_NEAR(ev[3], 1.5, 1e-15);
  EXPECT_EQ(hv::hopfield_matrix({1.0, 1.5, 0.3}).trace(), 0.0);
  // eta h with h symmetric, eta = diag(1, 1, -1, -1).
  const Eigen::Matrix4d eta = Eigen::Vector4d(1, 1, -1, -1).asDiagonal();
  const Eigen::Matrix4d sym = eta * hv::hopfield_matrix({1.0, 1.5, 0.3});
  EXPECT_LT((sym - sym.transpose()).norm(), 1e-15);
}

TEST(Hopfield, UnstableInputRejected) {
  EXPECT_THROW(hv::polariton_frequencies({1.0, 1.0, 0.5}), hv::PhysicsError);
  EXPECT_THROW(hv::hopfield_coefficients({1.0, 1.0, 0.6}), hv::PhysicsError);
}

TEST(Hopfield, DegenerateBasis) {
  try {
    hv::hopfield_coefficients({1.0, 1.0, 0.0});
    FAIL();
  } catch (const hv::PhysicsError& e) {
    EXPECT_EQ(e.kind(), hv::ErrorKind::DegenerateBasis);
  }
  EXPECT_NO_THROW(hv::hopfield_coefficients({1.0, 1.0, 1e-6}));
  EXPECT_NO_THROW(hv::hopfield_coefficients({1.0, 1.0 + 1e-6, 0.0}));
}

TEST(Hopfield, DecoupledBasisIsBare) {
  const auto b = hv::hopfield_coefficients({1.0, 1.5, 0.0});
  // + is the b mode, - is the a mode.
  EXPECT_DOUBLE_EQ(b.coeffs[kPlus].w, 0.0);
  EXPECT_DOUBLE_EQ(b.coeffs[kPlus].y, 0.0);
  EXPECT_NEAR(b.coeffs[kPlus].x, 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(b.coeffs[kMinus].x, 0.0);
  EXPECT_DOUBLE_EQ(b.coeffs[kMinus].z, 0.0);
  EXPECT_NEAR(b.coeffs[kMinus].w, 1.0, 1e-15);
  EXPECT_EQ(hv::reconstruction_residual(b, {1.0, 1.5, 0.0}), 0.0);
}

TEST(Hopfield, ClosedFormAgreesUpToSign) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    auto m = hvtest::random_modes(rng);
    if (std::abs(m.g) < 1e-3 * m.omega_L) continue;
    const auto b = hv::hopfield_coefficients(m);
    for (std::size_t j : {kPlus, kMinus}) {
      const Eigen::Vector4d ref = closed_form(m, b.omega(j));
      const Eigen::Vector4d got = as_vector(b.coeffs[j]);
      const double err = std::min((ref - got).norm(), (ref + got).norm());
      EXPECT_LT(err, 1e-8 * ref.norm()) << i;
    }
  }
}

TEST(Hopfield, WeightsTwoWays) {
  const hv::ModeParams m{1.0, 1.0, 0.1};
  const auto b = hv::hopfield_coefficients(m);
  for (std::size_t j : {kPlus, kMinus}) {
    const Eigen::Vector4d ref = closed_form(m, b.omega(j));
    const double w_ref = ref(0) - ref(2), x_ref = ref(1) - ref(3);
    EXPECT_NEAR(b.W(j) * b.W(j) + b.X(j) * b.X(j), w_ref * w_ref + x_ref * x_ref, 1e-10);
  }
}

TEST(Hopfield, RandomStructuralInvariants) {
  std::mt19937_64 rng(3);
  const Eigen::Matrix4d metric = Eigen::Vector4d(1, 1, -1, -1).asDiagonal();
  for (int i = 0; i < 1000; ++i) {
    const auto m = hvtest::random_modes(rng);
    const auto b = hv::hopfield_coefficients(m);
    const auto& p = b.coeffs[kPlus];
    const auto& q = b.coeffs[kMinus];
    ASSERT_GE(b.omega_plus, b.omega_minus);
    ASSERT_GT(b.omega_minus, 0.0);
    EXPECT_NEAR(bosonic_norm(p), 1.0, 1e-10);
    EXPECT_NEAR(bosonic_norm(q), 1.0, 1e-10);
    EXPECT_NEAR(p.w * q.w + p.x * q.x - p.y * q.y - p.z * q.z, 0.0, 1e-10);

    const Eigen::Matrix4d h = hv::hopfield_matrix(m);
    for (std::size_t j : {kPlus, kMinus}) {
      const Eigen::Vector4d v = as_vector(b.coeffs[j]);
      EXPECT_LT((h * v - b.omega(j) * v).norm(), 1e-10 * b.omega_plus * v.norm());
    }
    const auto ev = sorted_eigenvalues(h);
    EXPECT_NEAR(ev[3] / b.omega_plus, 1.0, 1e-10);
    EXPECT_NEAR(ev[2] / b.omega_minus, 1.0, 1e-10);

    const Eigen::Matrix4d t = hv::bogoliubov_matrix(b);
    EXPECT_LT((t * metric * t.transpose() - metric).norm(), 1e-10);
    EXPECT_LT((hv::inverse_bogoliubov_matrix(b) * t - Eigen::Matrix4d::Identity()).norm(), 1e-10);
    EXPECT_LT(hv::reconstruction_residual(b, m), 1e-10 * b.omega_plus);
  }
}

TEST(Hopfield, PerturbedBasisHasLargeResidual) {
  const hv::ModeParams m{1.0, 1.5, 0.2};
  auto b = hv::hopfield_coefficients(m);
  EXPECT_LT(hv::reconstruction_residual(b, m), 1e-12);
  b.coeffs[kPlus].w += 1e-3;
  EXPECT_GT(hv::reconstruction_residual(b, m), 1e-5 * b.omega_plus);
}

TEST(Hopfield, ContinuousAcrossZeroCoupling) {
  const double wl = 1.0, wr = 1.3;
  hv::PolaritonBasis prev = hv::hopfield_coefficients({wl, wr, -0.05});
  for (int k = -49; k <= 50; ++k) {
    const double g = 0.001 * k;
    const auto b = hv::hopfield_coefficients({wl, wr, g});
    for (std::size_t j : {kPlus, kMinus}) {
      const double jump = (as_vector(b.coeffs[j]) - as_vector(prev.coeffs[j])).norm();
      EXPECT_LT(jump, 0.01) << "g=" << g;
    }
    prev = b;
  }
}
