// Copyright (c) 2026 The csie Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include "csie/assembly.hpp"

namespace csie::pml {

// Uniform mesh of [0, T] with n_elems elements of polynomial order `order`,
// homogeneous Dirichlet condition at xi = T.
struct PmlConfig {
  double T = 5.0;
  int n_elems = 10;
  int order = 5;
  assembly::ScalingConfig cfg;

  void validate() const;
  int dofs_before_elimination() const { return n_elems * order + 1; }
  int dofs() const { return n_elems * order; }
};

// S = s + nu(nu+1)/R^2 m0 and M = m1 (potential-weighted when pot is given).
// Unknowns are ordered vertex 0, bubbles of element 0, vertex 1, ...; the
// vertex at T is eliminated, so trace = e_0.
struct PmlSystem {
  Eigen::MatrixXcd S;
  Eigen::MatrixXcd M;
  Eigen::VectorXd trace;
  int dofs_before_elimination = 0;
};

PmlSystem assemble_pml(const PmlConfig& pml, int nu, const assembly::PotentialSpec* pot = nullptr);

// Same forms without the Dirichlet elimination (for tests).
PmlSystem assemble_pml_unconstrained(const PmlConfig& pml, int nu, const assembly::PotentialSpec* pot = nullptr);

// Reference shape functions on [-1, 1]: two affine vertex modes, then
// integrated Legendre bubbles of degree 2..order.
void shape_functions(int order, double t, double* values, double* derivatives);

}  // namespace csie::pml
