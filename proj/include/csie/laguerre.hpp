// Copyright (c) 2026 The csie Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "csie/error.hpp"
#include "csie/quadrature.hpp"

namespace csie {

// L_{n,m}(x) by the three-term recurrence in k.
Complex eval_laguerre(int n, int m, Complex x);
double eval_laguerre(int n, int m, double x);

// phi_{n,m}(x) = exp(-x) L_{n,m}(2x).
Complex eval_phi(int n, int m, Complex x);
double eval_phi(int n, int m, double x);

// L_{0,m}(x), ..., L_{N,m}(x).
std::vector<Complex> laguerre_sequence(int N, int m, Complex x);

// Writes exp(log_scale) * L_n(t) for n = 0..out.size()-1. The recurrence is
// rescaled on the fly, so neither factor needs to be representable.
void scaled_laguerre_row(double t, double log_scale, std::span<double> out);

// log(sum_{k<n} L_k(t)^2), overflow-safe.
double log_christoffel_sum(int n, double t);

// D with phi_n' = sum_k D(n,k) phi_k.
Eigen::MatrixXd derivative_expansion(int N);

// Tabulated basis on a rule: values(i,n) = sqrt(w_i exp(c x_i)) phi_n(x_i),
// so sum_i p(x_i) values(i,n) values(i,k) approximates int p phi_n phi_k.
struct BasisTable {
  std::vector<double> nodes;
  Eigen::MatrixXd values;
  Eigen::MatrixXd derivatives;
};

class LaguerreBasis {
public:
  explicit LaguerreBasis(int max_index);

  int max_index() const { return N_; }
  int dimension() const { return N_ + 1; }

  Eigen::VectorXcd values(Complex x) const;
  Eigen::VectorXcd derivatives(Complex x) const;

  // Nodes needed at weight exponent 2 to integrate phi_n phi_k p exactly for
  // deg p <= q and n, k <= N.
  int nodes_for_weight_degree(int q) const;
  QuadratureRule rule_for_weight_degree(int q) const;

  BasisTable tabulate(const QuadratureRule& rule) const;

private:
  int N_;
  Eigen::MatrixXd D_;
};

}  // namespace csie
