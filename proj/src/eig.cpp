// Copyright (c) 2026 The csie Authors
// SPDX-License-Identifier: Apache-2.0

#include "csie/eig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace csie::eig {

namespace {

constexpr double kShiftOffset = 1e-4;

void check_pair(const Eigen::MatrixXcd& S, const Eigen::MatrixXcd& M, const char* who) {
  if (S.rows() != S.cols() || M.rows() != M.cols() || S.rows() != M.rows())
    throw DomainError(std::string(who) + ": S and M must be square and of equal size");
  if (S.rows() == 0) throw DomainError(std::string(who) + ": empty problem");
}

ResonancePair make_pair(const Eigen::MatrixXcd& S, const Eigen::MatrixXcd& M, Complex lambda,
                        Eigen::VectorXcd v) {
  ResonancePair p;
  p.omega = principal_omega(lambda);
  v.normalize();
  p.residual = residual(S, M, p.omega, v);
  p.vector = std::move(v);
  return p;
}

// A shift sitting almost on one eigenvalue leaves the Ritz vectors of the
// others with errors near eps |theta_max / theta|; inverse iteration at the
// Ritz value removes them.
ResonancePair refine(const Eigen::MatrixXcd& S, const Eigen::MatrixXcd& M, ResonancePair p, double tol) {
  for (int it = 0; it < 3 && !(p.residual <= tol); ++it) {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(S - p.omega * p.omega * M);
    Eigen::VectorXcd x = lu.solve(Eigen::VectorXcd(M * p.vector));
    if (!x.allFinite() || x.norm() == 0.0) break;
    x.normalize();
    const Complex den = x.dot(M * x);
    if (den == Complex(0.0)) break;
    const Complex mu = x.dot(S * x) / den;
    ResonancePair q = make_pair(S, M, mu, std::move(x));
    if (!(q.residual < p.residual)) break;
    p = std::move(q);
  }
  return p;
}

}  // namespace

LuFactorization::LuFactorization(const Eigen::MatrixXcd& A) {
  if (A.rows() != A.cols()) throw DomainError("lu_factor: matrix not square");
  if (!A.allFinite()) throw NumericError("lu_factor: matrix has non-finite entries");
  lu_.compute(A);
  const auto& U = lu_.matrixLU();
  for (Eigen::Index i = 0; i < U.rows(); ++i)
    if (!(std::abs(U(i, i)) >= 1e-300))
      throw SingularMatrixError("lu_factor: numerically singular pivot at row " + std::to_string(i));
}

Eigen::VectorXcd LuFactorization::solve(const Eigen::VectorXcd& rhs) const {
  if (rhs.size() != lu_.rows()) throw DomainError("lu solve: rhs size mismatch");
  return lu_.solve(rhs);
}

Eigen::MatrixXcd LuFactorization::solve(const Eigen::MatrixXcd& rhs) const {
  if (rhs.rows() != lu_.rows()) throw DomainError("lu solve: rhs size mismatch");
  return lu_.solve(rhs);
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::physical: return "physical";
    case Classification::essential_artifact: return "essential_artifact";
    default: return "unknown";
  }
}

SeparatedProblem make_separated_problem(int nu, int N, const assembly::ScalingConfig& cfg,
                                        const assembly::PotentialSpec* pot, assembly::RadialBasis basis,
                                        int potential_nodes) {
  if (nu < 0) throw DomainError("separated problem: negative nu");
  SeparatedProblem p;
  p.nu = nu;
  const double lambda = assembly::angular_eigenvalue(nu, cfg.R);
  p.S = assembly::assemble_stiffness(N, cfg, basis).entries + lambda * assembly::assemble_mass0(N, cfg, basis).entries;
  if (pot && pot->eps_tilde != 0.0) {
    int nodes = potential_nodes > 0 ? potential_nodes : 4 * (N + 1) + 200;
    p.M = assembly::assemble_weighted_mass(N, cfg, *pot, nodes, basis).entries;
  } else {
    p.M = assembly::assemble_mass1(N, cfg, basis).entries;
  }
  p.trace = assembly::trace_vector(N, basis);
  p.meta.nu = nu;
  p.meta.N = N;
  p.meta.cfg = cfg;
  p.meta.eps_tilde = pot ? pot->eps_tilde : 0.0;
  p.meta.potential = pot ? pot->name : "none";
  return p;
}

Complex principal_omega(Complex lambda) {
  Complex w = std::sqrt(lambda);
  if (w.real() < 0.0 || (w.real() == 0.0 && w.imag() < 0.0)) w = -w;
  return w;
}

double residual(const Eigen::MatrixXcd& S, const Eigen::MatrixXcd& M, Complex omega, const Eigen::VectorXcd& v) {
  const Complex lambda = omega * omega;
  return (S * v - lambda * (M * v)).norm() / v.norm();
}

ResonanceSet shift_invert_arnoldi(const Eigen::MatrixXcd& S, const Eigen::MatrixXcd& M, Complex shift,
                                  const ArnoldiOptions& opts) {
  check_pair(S, M, "shift_invert_arnoldi");
  if (opts.n_wanted < 1) throw DomainError("shift_invert_arnoldi: n_wanted must be >= 1");
  const int n = static_cast<int>(S.rows());
  int k = opts.krylov_dim > 0 ? opts.krylov_dim : std::max(40, 4 * opts.n_wanted);
  if (k <= opts.n_wanted) throw DomainError("shift_invert_arnoldi: Krylov dimension must exceed n_wanted");
  k = std::min(k, n);

  // Factor slightly off the requested point: a shift on an eigenvalue would
  // make one theta dominate and drown the other Ritz pairs in rounding.
  const Complex tau2 = shift * shift + kShiftOffset * (1.0 + std::norm(shift)) * Complex(0.6, 0.8);
  LuFactorization lu(S - tau2 * M);

  ResonanceSet best;
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  // each restart starts afresh with twice the Krylov dimension
  for (int restart = 0; restart <= opts.max_restarts; ++restart, k = std::min(n, 2 * k)) {
    Eigen::MatrixXcd V = Eigen::MatrixXcd::Zero(n, k + 1);
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(k + 1, k);
    Eigen::VectorXcd v0(n);
    for (int i = 0; i < n; ++i) v0(i) = Complex(normal(rng), normal(rng));
    V.col(0) = v0.normalized();

    int m = k;
    for (int j = 0; j < k; ++j) {
      Eigen::VectorXcd w = lu.solve(Eigen::VectorXcd(M * V.col(j)));
      const double w_norm = w.norm();
      for (int pass = 0; pass < 2; ++pass)
        for (int i = 0; i <= j; ++i) {
          Complex h = V.col(i).dot(w);
          H(i, j) += h;
          w -= h * V.col(i);
        }
      const double beta = w.norm();
      if (beta > 1e-12 * w_norm) {
        H(j + 1, j) = beta;
        V.col(j + 1) = w / beta;
        continue;
      }
      // Invariant subspace found; with a shift near an eigenvalue this happens
      // early, so continue from a fresh direction with H(j+1, j) = 0.
      if (j + 1 >= n) {
        m = j + 1;
        break;
      }
      Eigen::VectorXcd r(n);
      for (int i = 0; i < n; ++i) r(i) = Complex(normal(rng), normal(rng));
      for (int pass = 0; pass < 2; ++pass)
        for (int i = 0; i <= j; ++i) r -= V.col(i).dot(r) * V.col(i);
      V.col(j + 1) = r.normalized();
    }

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(H.topLeftCorner(m, m));
    if (es.info() != Eigen::Success) continue;

    std::vector<ResonancePair> candidates;
    for (int i = 0; i < m; ++i) {
      const Complex theta = es.eigenvalues()(i);
      if (std::abs(theta) == 0.0) continue;
      Eigen::VectorXcd x = V.leftCols(m) * es.eigenvectors().col(i);
      candidates.push_back(make_pair(S, M, tau2 + 1.0 / theta, std::move(x)));
    }
    std::sort(candidates.begin(), candidates.end(), [&](const ResonancePair& a, const ResonancePair& b) {
      return std::abs(a.omega - shift) < std::abs(b.omega - shift);
    });

    ResonanceSet out;
    for (auto& c : candidates) {
      if (!(c.residual <= opts.tol)) c = refine(S, M, std::move(c), opts.tol);
      if (!(c.residual <= opts.tol && std::isfinite(c.residual))) continue;
      bool duplicate = false;
      for (const auto& q : out.pairs) duplicate = duplicate || std::abs(q.omega - c.omega) < 1e-10 * (1.0 + std::abs(c.omega));
      if (!duplicate) out.pairs.push_back(std::move(c));
      if (static_cast<int>(out.pairs.size()) == opts.n_wanted) break;
    }
    std::sort(out.pairs.begin(), out.pairs.end(), [&](const ResonancePair& a, const ResonancePair& b) {
      return std::abs(a.omega - shift) < std::abs(b.omega - shift);
    });
    if (static_cast<int>(out.pairs.size()) == opts.n_wanted) return out;
    if (out.pairs.size() > best.pairs.size()) best = std::move(out);
  }
  const std::string what = "shift_invert_arnoldi: only " + std::to_string(best.pairs.size()) + " of " +
                           std::to_string(opts.n_wanted) + " pairs converged near shift " + format_complex(shift) +
                           " after " + std::to_string(opts.max_restarts) + " restarts";
  throw NonConvergenceError(what, std::move(best));
}

ResonanceSet dense_eig(const Eigen::MatrixXcd& S, const Eigen::MatrixXcd& M) {
  check_pair(S, M, "dense_eig");
  const int n = static_cast<int>(S.rows());
  if (n > 2000) throw DomainError("dense_eig: dimension above 2000");

  const double scale = S.norm() / std::max(M.norm(), 1e-300);
  // probe points off the real and imaginary axes, where spectra of scaled problems rarely sit
  const Complex probes[] = {{0.6180339887, 0.3819660113}, {-0.4142135624, 0.7320508076},
                            {0.2360679775, -0.8660254038}, {1.7320508076, 1.4142135624}};
  for (Complex probe : probes) {
    const Complex tau = scale * probe;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(S - tau * M);
    if (!(lu.rcond() > 1e-12)) continue;
    Eigen::MatrixXcd T = lu.solve(M);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(T, true);
    if (es.info() != Eigen::Success)
      throw NumericError("dense_eig: QR iteration did not converge for dim=" + std::to_string(n));
    ResonanceSet out;
    for (int i = 0; i < n; ++i) {
      const Complex theta = es.eigenvalues()(i);
      if (std::abs(theta) == 0.0) continue;
      out.pairs.push_back(make_pair(S, M, tau + 1.0 / theta, es.eigenvectors().col(i)));
    }
    return out;
  }
  throw NumericError("dense_eig: no usable probe shift (M singular or spectrum at every probe)");
}

ResonanceSet filter_resonances(const ResonanceSet& rs, const ResonanceSet& alt, const FilterOptions& opts) {
  const ProblemMeta& a = rs.meta;
  const ProblemMeta& b = alt.meta;
  if (a.nu != b.nu || a.N != b.N || a.cfg.R != b.cfg.R || a.eps_tilde != b.eps_tilde ||
      a.potential != b.potential || a.discretization != b.discretization)
    throw DomainError("filter_resonances: the two runs differ in more than sigma");

  ResonanceSet out = rs;
  const double ray = -std::arg(a.cfg.sigma);
  for (auto& p : out.pairs) {
    double move = std::numeric_limits<double>::infinity();
    for (const auto& q : alt.pairs) move = std::min(move, std::abs(p.omega - q.omega));
    const double delta = opts.stable_rel * (1.0 + std::abs(p.omega));
    double angle = std::abs(std::arg(p.omega) - ray);
    angle = std::min(angle, 2.0 * std::numbers::pi - angle);
    if (move < delta)
      p.classification = Classification::physical;
    else if (move > opts.artifact_factor * delta && angle < opts.ray_width)
      p.classification = Classification::essential_artifact;
    else
      p.classification = Classification::unknown;
  }
  return out;
}

double condition_number(const Eigen::MatrixXcd& A) {
  if (A.rows() != A.cols()) throw DomainError("condition_number: matrix not square");
  if (A.rows() == 0) return 1.0;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(A);
  const auto& s = svd.singularValues();
  const double smax = s(0);
  const double smin = s(s.size() - 1);
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

}  // namespace csie::eig
