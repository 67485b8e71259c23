// Copyright (c) 2026 The csie Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <string>

#include <Eigen/Dense>

#include "csie/error.hpp"

namespace csie::assembly {

// Linear complex scaling r = R + sigma xi of the exterior r > R.
struct ScalingConfig {
  Complex sigma{0.0, 1.0};
  double R = 1.0;

  void validate() const;
  Complex s() const { return sigma / R; }
};

// orthogonal: phi_n = phi_{n,0}, L2-orthogonal, dense stiffness.
// sparse:     phi_{n,-1} = phi_n - phi_{n-1} (phi_0 for n = 0), same span,
//             banded forms, and only the first function is nonzero at xi = 0.
enum class RadialBasis { orthogonal, sparse };

const char* to_string(RadialBasis b);
RadialBasis basis_from_string(const std::string& s);

struct StructureInfo {
  int bandwidth = 0;
  bool dense = false;
  std::size_t nnz = 0;
  double tol = 0.0;
};

struct RadialOperator {
  std::string form;
  ScalingConfig cfg;
  RadialBasis basis = RadialBasis::orthogonal;
  Eigen::MatrixXcd entries;
  StructureInfo structure;

  int dim() const { return static_cast<int>(entries.rows()); }
};

// Radial potential factor 1 + eps_tilde * profile(arg), arg = sigma xi when
// scale_argument is set and xi otherwise.
struct PotentialSpec {
  double eps_tilde = 0.0;
  std::function<Complex(Complex)> profile;
  bool scale_argument = false;
  std::string name = "none";

  Complex weight(double xi, Complex sigma) const;
};

// (xi - 1)^2 / (1 + (xi - 1)^4)
PotentialSpec bump_potential(double eps_tilde, bool scale_argument = false);
PotentialSpec constant_potential(double eps_tilde);

// Entries below kStructureTol times the largest one count as zero in
// RadialOperator::structure.
constexpr double kStructureTol = 1e-12;

// sigma int f g
RadialOperator assemble_mass0(int N, const ScalingConfig& cfg, RadialBasis basis = RadialBasis::orthogonal);
// sigma int (1 + sigma xi / R)^2 f g
RadialOperator assemble_mass1(int N, const ScalingConfig& cfg, RadialBasis basis = RadialBasis::orthogonal);
// (1/sigma) int (1 + sigma xi / R)^2 f' g'
RadialOperator assemble_stiffness(int N, const ScalingConfig& cfg,
                                  RadialBasis basis = RadialBasis::orthogonal);
// mass1 with the extra factor 1 + eps_tilde p(arg); integrated with n_nodes
// Gauss-Laguerre nodes and checked against 2 n_nodes.
RadialOperator assemble_weighted_mass(int N, const ScalingConfig& cfg, const PotentialSpec& pot, int n_nodes,
                                      RadialBasis basis = RadialBasis::orthogonal);

// Coefficients of the evaluation functional f -> f(0) on the basis.
// The single-argument form refers to the sparse basis, which is the one that
// couples through its first function only.
Eigen::VectorXd trace_vector(int N);
Eigen::VectorXd trace_vector(int N, RadialBasis basis);

// Row n holds the phi-coefficients of basis function n.
Eigen::MatrixXd basis_transform(int N, RadialBasis basis);

StructureInfo structure_report(const Eigen::MatrixXcd& A, double tol);
StructureInfo structure_report(const RadialOperator& op, double tol);

// nu(nu+1)/R^2, the angular term of the separated problem in scaled units
double angular_eigenvalue(int nu, double R);

}  // namespace csie::assembly
