#pragma once

// Brute-force check of the closed-form steady state: assemble the global
// master equation on a truncated two-polariton Fock space, find its steady
// state numerically and measure occupations, heat currents and second
// moments directly on the density matrix.
//
// Density matrices are vectorized column-major, vec(A rho B) = (B^T kron A) vec(rho).
// Basis index of |n+, n-> is n+ * cutoff + n-.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "heatvalve/bath_model.hpp"
#include "heatvalve/errors.hpp"
#include "heatvalve/gaussian.hpp"
#include "heatvalve/hopfield.hpp"
#include "heatvalve/steady_state.hpp"

namespace heatvalve::oracle {

using cplx = std::complex<double>;
using SparseC = Eigen::SparseMatrix<cplx>;

enum class SolverKind { NullSpace, LongTimeIntegration };

struct OracleConfig {
  int cutoff = 12;
  SolverKind solver = SolverKind::NullSpace;
  double convergence_tol = 1e-10;
  double max_time = 1e4;  // in units of 1 / (slowest polariton relaxation rate)

  void validate() const {
    if (cutoff < 2) throw ValidationError("oracle cutoff must be >= 2");
    if (!(convergence_tol > 0.0)) throw ValidationError("oracle convergence_tol must be > 0");
    if (!(max_time > 0.0)) throw ValidationError("oracle max_time must be > 0");
  }
};

/// Absorption/emission rates of each polariton, optionally restricted to one bath.
struct PolaritonRates {
  std::array<double, 2> up{};
  std::array<double, 2> down{};
};

enum class BathSelection { Both, LeftOnly, RightOnly };

inline PolaritonRates polariton_rates(const PolaritonBasis& basis, const RateSet& rates,
                                      BathSelection which = BathSelection::Both) {
  PolaritonRates pr;
  for (std::size_t j : {kPlus, kMinus}) {
    const double wl = basis.W(j) * basis.W(j);
    const double wr = basis.X(j) * basis.X(j);
    if (which != BathSelection::RightOnly) {
      pr.up[j] += rates.upward(kLeft, j) * wl;
      pr.down[j] += rates.downward(kLeft, j) * wl;
    }
    if (which != BathSelection::LeftOnly) {
      pr.up[j] += rates.upward(kRight, j) * wr;
      pr.down[j] += rates.downward(kRight, j) * wr;
    }
  }
  return pr;
}

/// Generator in physical units (1/s) plus the scale used for conditioning.
struct Liouvillian {
  SparseC generator;
  int cutoff = 0;
  double rate_scale = 1.0;    // largest polariton rate
  double slowest_rate = 1.0;  // smallest non-zero relaxation rate down - up
  bool connected = true;      // every polariton ladder is coupled to some bath
};

namespace detail {

inline SparseC identity(Eigen::Index n) {
  SparseC id(n, n);
  id.setIdentity();
  return id;
}

inline SparseC ladder(int cutoff) {
  SparseC a(cutoff, cutoff);
  std::vector<Eigen::Triplet<cplx>> t;
  for (int n = 1; n < cutoff; ++n) t.emplace_back(n - 1, n, std::sqrt(static_cast<double>(n)));
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

/// Annihilation operators (p+, p-) on the two-mode space.
inline std::array<SparseC, 2> polariton_ladders(int cutoff) {
  const SparseC a = ladder(cutoff);
  const SparseC id = identity(cutoff);
  return {SparseC(Eigen::kroneckerProduct(a, id)), SparseC(Eigen::kroneckerProduct(id, a))};
}

/// D[R] rho = R rho R^dag - {R^dag R, rho}/2 as a superoperator.
inline SparseC dissipator(const SparseC& r) {
  const Eigen::Index n = r.rows();
  const SparseC id = identity(n);
  const SparseC r_dag = r.adjoint();
  const SparseC rdr = r_dag * r;
  const SparseC conj_r = r.conjugate();
  const SparseC rdr_t = rdr.transpose();
  SparseC out = Eigen::kroneckerProduct(conj_r, r);
  out -= 0.5 * SparseC(Eigen::kroneckerProduct(id, rdr));
  out -= 0.5 * SparseC(Eigen::kroneckerProduct(rdr_t, id));
  return out;
}

inline Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& rho) {
  return Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size());
}

inline Eigen::MatrixXcd unvectorize(const Eigen::VectorXcd& v, Eigen::Index dim) {
  return Eigen::Map<const Eigen::MatrixXcd>(v.data(), dim, dim);
}

}  // namespace detail

inline Liouvillian build_liouvillian(const PolaritonBasis& basis, const RateSet& rates,
                                     const OracleConfig& cfg,
                                     BathSelection which = BathSelection::Both) {
  cfg.validate();
  const auto pr = polariton_rates(basis, rates, which);
  const auto p = detail::polariton_ladders(cfg.cutoff);
  const Eigen::Index dim = static_cast<Eigen::Index>(cfg.cutoff) * cfg.cutoff;

  Liouvillian l;
  l.cutoff = cfg.cutoff;
  l.generator.resize(dim * dim, dim * dim);
  double scale = 0.0;
  double slowest = 0.0;
  for (std::size_t j : {kPlus, kMinus}) {
    if (pr.down[j] != 0.0) l.generator += pr.down[j] * detail::dissipator(p[j]);
    if (pr.up[j] != 0.0) l.generator += pr.up[j] * detail::dissipator(SparseC(p[j].adjoint()));
    scale = std::max({scale, pr.up[j], pr.down[j]});
    if (!(pr.up[j] > 0.0) && !(pr.down[j] > 0.0)) l.connected = false;
    const double relax = pr.down[j] - pr.up[j];
    if (relax > 0.0) slowest = slowest == 0.0 ? relax : std::min(slowest, relax);
  }
  l.generator.prune(cplx(0.0));
  l.generator.makeCompressed();
  l.rate_scale = scale > 0.0 ? scale : 1.0;
  l.slowest_rate = slowest > 0.0 ? slowest : l.rate_scale;
  return l;
}

/// Row vector t with t . vec(rho) = Tr rho.
inline Eigen::VectorXcd trace_functional(Eigen::Index dim) {
  Eigen::VectorXcd t = Eigen::VectorXcd::Zero(dim * dim);
  for (Eigen::Index k = 0; k < dim; ++k) t(k * dim + k) = 1.0;
  return t;
}

/// Applies the generator to a density matrix.
inline Eigen::MatrixXcd apply(const Liouvillian& l, const Eigen::MatrixXcd& rho) {
  return detail::unvectorize(l.generator * detail::vectorize(rho), rho.rows());
}

namespace detail {

inline double scaled_residual(const Liouvillian& l, const Eigen::VectorXcd& v) {
  return (l.generator * v).norm() / l.rate_scale;
}

inline Eigen::VectorXcd null_space_solve(const Liouvillian& l, Eigen::Index dim) {
  const SparseC scaled = l.generator / cplx(l.rate_scale);
  std::vector<Eigen::Triplet<cplx>> t;
  t.reserve(static_cast<std::size_t>(scaled.nonZeros() + dim));
  for (Eigen::Index col = 0; col < scaled.outerSize(); ++col)
    for (SparseC::InnerIterator it(scaled, col); it; ++it)
      if (it.row() != 0) t.emplace_back(it.row(), it.col(), it.value());
  // Row 0 becomes the normalization Tr rho = 1.
  for (Eigen::Index k = 0; k < dim; ++k) t.emplace_back(0, k * dim + k, 1.0);
  SparseC a(dim * dim, dim * dim);
  a.setFromTriplets(t.begin(), t.end());
  a.makeCompressed();

  Eigen::SparseLU<SparseC, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success)
    throw PhysicsError(ErrorKind::DegenerateKernel, "generator kernel is not one-dimensional");
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(dim * dim);
  rhs(0) = 1.0;
  Eigen::VectorXcd v = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !v.allFinite())
    throw PhysicsError(ErrorKind::DegenerateKernel, "steady-state solve failed");
  return v;
}

inline Eigen::VectorXcd long_time_solve(const Liouvillian& l, Eigen::Index dim,
                                        const OracleConfig& cfg) {
  // Implicit Euler in units of the slowest relaxation time; the step is
  // unconditionally stable and each step preserves the trace exactly.
  const double dt_phys = 10.0 / l.slowest_rate;
  const SparseC step = identity(dim * dim) - cplx(dt_phys) * l.generator;
  Eigen::SparseLU<SparseC, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(step);
  if (lu.info() != Eigen::Success)
    throw PhysicsError(ErrorKind::NotConverged, "implicit step factorization failed");

  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim * dim);
  v(0) = 1.0;  // |0,0><0,0|
  for (double t = 0.0; t <= cfg.max_time; t += 10.0) {
    if (scaled_residual(l, v) < cfg.convergence_tol) return v;
    v = lu.solve(v);
  }
  throw PhysicsError(ErrorKind::NotConverged, "long-time integration exceeded max_time");
}

}  // namespace detail

inline Eigen::MatrixXcd steady_state_density(const Liouvillian& l, const OracleConfig& cfg) {
  if (!l.connected)
    throw PhysicsError(ErrorKind::DegenerateKernel, "a polariton has no transitions: kernel is not one-dimensional");
  const Eigen::Index dim = static_cast<Eigen::Index>(l.cutoff) * l.cutoff;
  const Eigen::VectorXcd v = cfg.solver == SolverKind::NullSpace
                                 ? detail::null_space_solve(l, dim)
                                 : detail::long_time_solve(l, dim, cfg);
  Eigen::MatrixXcd rho = detail::unvectorize(v, dim);
  rho = (0.5 * (rho + rho.adjoint())).eval();
  rho /= rho.trace();

  const double residual = detail::scaled_residual(l, detail::vectorize(rho));
  if (!(residual < cfg.convergence_tol))
    throw PhysicsError(ErrorKind::NotConverged,
                       "steady-state residual " + std::to_string(residual) + " above tolerance");
  return rho;
}

struct OracleReport {
  double occ_plus = 0.0;
  double occ_minus = 0.0;
  double Q_L = 0.0;
  double Q_R = 0.0;
  Eigen::Matrix4d gamma_polariton = Eigen::Matrix4d::Zero();
  /// Second moments of (x_L, y_L, x_R, y_R) measured directly on rho.
  Eigen::Matrix4d gamma_lab = Eigen::Matrix4d::Zero();
  double trace_residual = 0.0;
  double leakage = 0.0;
  double min_eigenvalue = 0.0;
  bool converged = false;
};

inline constexpr double leakage_limit = 1e-6;

namespace detail {

inline double expect(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& op) {
  // Tr(op rho) without forming the product.
  return (op.transpose().cwiseProduct(rho)).sum().real();
}

inline Eigen::Matrix4d symmetrized_moments(const Eigen::MatrixXcd& rho,
                                           const std::array<Eigen::MatrixXcd, 4>& ops) {
  std::array<double, 4> mean{};
  for (int i = 0; i < 4; ++i) mean[i] = expect(rho, ops[i]);
  Eigen::Matrix4d g;
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      const Eigen::MatrixXcd anti = ops[i] * ops[j] + ops[j] * ops[i];
      g(i, j) = 0.5 * expect(rho, anti) - mean[i] * mean[j];
      g(j, i) = g(i, j);
    }
  }
  return g;
}

}  // namespace detail

/// H_S enters in its lab form (bare modes and coupling), built from the
/// truncated polariton ladders.
inline OracleReport oracle_observables(const Eigen::MatrixXcd& rho, const PolaritonBasis& basis,
                                       const RateSet& rates, const ModeParams& m,
                                       const OracleConfig& cfg) {
  using Eigen::MatrixXcd;
  const int n = cfg.cutoff;
  const Eigen::Index dim = static_cast<Eigen::Index>(n) * n;
  const auto ladders = detail::polariton_ladders(n);
  const std::array<MatrixXcd, 2> p{MatrixXcd(ladders[0]), MatrixXcd(ladders[1])};
  const std::array<MatrixXcd, 2> p_dag{p[0].adjoint(), p[1].adjoint()};

  OracleReport r;
  r.occ_plus = detail::expect(rho, p_dag[0] * p[0]);
  r.occ_minus = detail::expect(rho, p_dag[1] * p[1]);

  // Lab operators through the inverse Bogoliubov map, then H_S in the lab form.
  const Eigen::Matrix4d inv = inverse_bogoliubov_matrix(basis);
  const std::array<const MatrixXcd*, 4> beta{&p[0], &p[1], &p_dag[0], &p_dag[1]};
  auto lab_operator = [&](int row) {
    MatrixXcd op = MatrixXcd::Zero(dim, dim);
    for (int k = 0; k < 4; ++k) op += inv(row, k) * *beta[k];
    return op;
  };
  const MatrixXcd a = lab_operator(0);
  const MatrixXcd b = lab_operator(1);
  const MatrixXcd a_dag = lab_operator(2);
  const MatrixXcd b_dag = lab_operator(3);

  const MatrixXcd hs = m.omega_L * a_dag * a + m.omega_R * b_dag * b -
                       m.g * (a_dag - a) * (b_dag - b);

  for (auto [which, target] : {std::pair{BathSelection::LeftOnly, &r.Q_L},
                               std::pair{BathSelection::RightOnly, &r.Q_R}}) {
    const Liouvillian partial = build_liouvillian(basis, rates, cfg, which);
    *target = detail::expect(apply(partial, rho), hs);
  }

  const double s2 = std::sqrt(2.0);
  const cplx i{0.0, 1.0};
  const std::array<MatrixXcd, 4> quad_pol{(p[0] + p_dag[0]) / s2, i * (p_dag[0] - p[0]) / s2,
                                          (p[1] + p_dag[1]) / s2, i * (p_dag[1] - p[1]) / s2};
  r.gamma_polariton = detail::symmetrized_moments(rho, quad_pol);
  const std::array<MatrixXcd, 4> quad_lab{(a + a_dag) / s2, i * (a_dag - a) / s2,
                                          (b + b_dag) / s2, i * (b_dag - b) / s2};
  r.gamma_lab = detail::symmetrized_moments(rho, quad_lab);

  r.trace_residual = std::abs(rho.trace() - cplx(1.0));
  for (int np = 0; np < n; ++np) {
    for (int nm = 0; nm < n; ++nm) {
      if (np == n - 1 || nm == n - 1) {
        const Eigen::Index k = static_cast<Eigen::Index>(np) * n + nm;
        r.leakage += rho(k, k).real();
      }
    }
  }
  const Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(rho, Eigen::EigenvaluesOnly);
  r.min_eigenvalue = eig.eigenvalues().minCoeff();
  r.converged = r.trace_residual < 1e-10 && r.leakage <= leakage_limit && r.min_eigenvalue >= -1e-10;
  return r;
}

/// Builds, solves and measures in one call.
inline OracleReport run_oracle(const PolaritonBasis& basis, const RateSet& rates,
                               const ModeParams& m, const OracleConfig& cfg) {
  const Liouvillian l = build_liouvillian(basis, rates, cfg);
  const Eigen::MatrixXcd rho = steady_state_density(l, cfg);
  return oracle_observables(rho, basis, rates, m, cfg);
}

struct ComparisonEntry {
  std::string name;
  double analytic = 0.0;
  double oracle = 0.0;
  double rel_diff = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ComparisonReport {
  std::vector<ComparisonEntry> entries;
  bool converged = false;
  bool pass = false;
};

/// Per-observable relative differences |a - o| / max(|a|, floor).
inline ComparisonReport compare(const SteadyStateReport& analytic, const GaussianState& gaussian,
                                const OracleReport& oracle, const PolaritonBasis& basis,
                                const RateSet& rates, double rel_tol) {
  ComparisonReport out;
  out.converged = oracle.converged;
  auto add = [&](std::string name, double a, double o, double floor) {
    ComparisonEntry e;
    e.name = std::move(name);
    e.analytic = a;
    e.oracle = o;
    e.rel_diff = std::abs(a - o) / std::max(std::abs(a), floor);
    e.tolerance = rel_tol;
    e.pass = e.rel_diff <= rel_tol;
    out.entries.push_back(std::move(e));
  };

  // Gross energy throughput sets the scale on which a heat current counts as zero.
  double throughput = 0.0;
  for (std::size_t j : {kPlus, kMinus}) {
    throughput += basis.omega(j) * (rates.upward(kLeft, j) * basis.W(j) * basis.W(j) +
                                    rates.upward(kRight, j) * basis.X(j) * basis.X(j));
  }
  throughput = std::max(throughput, 1e-300);

  add("occ_plus", analytic.occ_plus, oracle.occ_plus, 1e-12);
  add("occ_minus", analytic.occ_minus, oracle.occ_minus, 1e-12);
  add("Q_L", analytic.Q_L, oracle.Q_L, throughput);
  add("Q_R", analytic.Q_R, oracle.Q_R, throughput);
  static constexpr std::array<const char*, 4> quad{"var_d_plus", "var_f_plus", "var_d_minus",
                                                   "var_f_minus"};
  for (int k = 0; k < 4; ++k)
    add(quad[k], gaussian.gamma_polariton(k, k), oracle.gamma_polariton(k, k), 0.5);
  double cross = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) cross = std::max(cross, std::abs(oracle.gamma_polariton(i, j)));
  add("max_cross_moment", 0.0, cross, 0.5);

  const auto en_analytic = logarithmic_negativity(gaussian.gamma_lab);
  const Eigen::Matrix4d rebuilt =
      gaussian.s_matrix * oracle.gamma_polariton * gaussian.s_matrix.transpose();
  const auto en_rebuilt = logarithmic_negativity(0.5 * (rebuilt + rebuilt.transpose()));
  const auto en_direct = logarithmic_negativity(oracle.gamma_lab);
  add("nu_tilde", en_analytic.nu_tilde, en_rebuilt.nu_tilde, 1e-12);
  add("E_N", en_analytic.E_N, en_rebuilt.E_N, 1e-3);
  add("E_N_lab_moments", en_analytic.E_N, en_direct.E_N, 1e-3);

  out.pass = out.converged &&
             std::all_of(out.entries.begin(), out.entries.end(), [](const auto& e) { return e.pass; });
  return out;
}

}  // namespace heatvalve::oracle
