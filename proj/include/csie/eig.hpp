// Copyright (c) 2026 The csie Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "csie/assembly.hpp"

namespace csie::eig {

class LuFactorization {
public:
  explicit LuFactorization(const Eigen::MatrixXcd& A);
  Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const;
  Eigen::MatrixXcd solve(const Eigen::MatrixXcd& rhs) const;
  int dim() const { return static_cast<int>(lu_.rows()); }

private:
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
};

enum class Classification { unknown, physical, essential_artifact };
const char* to_string(Classification c);

struct ResonancePair {
  Complex omega;
  Eigen::VectorXcd vector;
  double residual = 0.0;
  Classification classification = Classification::unknown;
};

struct ProblemMeta {
  int nu = 0;
  int N = 0;  // radial unknowns - 1, or PML unknowns - 1
  assembly::ScalingConfig cfg;
  double eps_tilde = 0.0;
  std::string potential = "none";
  std::string discretization = "infinite_elements";
};

struct ResonanceSet {
  ProblemMeta meta;
  std::vector<ResonancePair> pairs;
};

// S u = omega^2 M u for one spherical index
struct SeparatedProblem {
  int nu = 0;
  Eigen::MatrixXcd S;
  Eigen::MatrixXcd M;
  Eigen::VectorXd trace;
  ProblemMeta meta;
};

SeparatedProblem make_separated_problem(int nu, int N, const assembly::ScalingConfig& cfg,
                                        const assembly::PotentialSpec* pot = nullptr,
                                        assembly::RadialBasis basis = assembly::RadialBasis::orthogonal,
                                        int potential_nodes = 0);

// omega = sqrt(lambda) with Re >= 0, and Im >= 0 when Re = 0
Complex principal_omega(Complex lambda);

// ||S v - omega^2 M v|| / ||v||
double residual(const Eigen::MatrixXcd& S, const Eigen::MatrixXcd& M, Complex omega, const Eigen::VectorXcd& v);

struct ArnoldiOptions {
  int krylov_dim = 0;  // 0: max(40, 4 n_wanted)
  int n_wanted = 1;
  double tol = 1e-9;
  int max_restarts = 5;  // each restart doubles the Krylov dimension, up to the problem size
  std::uint64_t seed = 20260101;
};

class NonConvergenceError : public NumericError {
public:
  NonConvergenceError(const std::string& what, ResonanceSet partial)
      : NumericError(what), partial_(std::move(partial)) {}
  const ResonanceSet& partial() const { return partial_; }

private:
  ResonanceSet partial_;
};

// Krylov iteration on (S - tau M)^{-1} M with tau = shift^2 moved off by
// 1e-4 (1 + |shift|^2), so a shift on an eigenvalue is fine; returns the
// n_wanted converged pairs closest to shift, ordered by distance.
ResonanceSet shift_invert_arnoldi(const Eigen::MatrixXcd& S, const Eigen::MatrixXcd& M, Complex shift,
                                  const ArnoldiOptions& opts = {});

// All eigenpairs via (S - tau M)^{-1} M at a probe tau off the spectrum.
ResonanceSet dense_eig(const Eigen::MatrixXcd& S, const Eigen::MatrixXcd& M);

struct FilterOptions {
  double stable_rel = 1e-6;
  double artifact_factor = 100.0;
  double ray_width = 0.2;
};

// Classifies rs by comparing with alt, the same problem solved at another sigma.
ResonanceSet filter_resonances(const ResonanceSet& rs, const ResonanceSet& alt, const FilterOptions& opts = {});

// 2-norm condition number from the singular values; +inf when singular.
double condition_number(const Eigen::MatrixXcd& A);

}  // namespace csie::eig
