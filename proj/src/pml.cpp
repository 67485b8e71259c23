// Copyright (c) 2026 The csie Authors
// SPDX-License-Identifier: Apache-2.0

#include "csie/pml.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "csie/quadrature.hpp"

namespace csie::pml {

void PmlConfig::validate() const {
  if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("pml: T must be > 0");
  if (n_elems < 1) throw DomainError("pml: n_elems must be >= 1, got " + std::to_string(n_elems));
  if (order < 1) throw DomainError("pml: order must be >= 1, got " + std::to_string(order));
  cfg.validate();
}

void shape_functions(int order, double t, double* values, double* derivatives) {
  values[0] = 0.5 * (1.0 - t);
  values[1] = 0.5 * (1.0 + t);
  derivatives[0] = -0.5;
  derivatives[1] = 0.5;
  if (order < 2) return;
  // Legendre P_0..P_order at t
  std::vector<double> P(order + 1);
  P[0] = 1.0;
  P[1] = t;
  for (int k = 2; k <= order; ++k) P[k] = ((2.0 * k - 1.0) * t * P[k - 1] - (k - 1.0) * P[k - 2]) / k;
  for (int j = 2; j <= order; ++j) {
    double norm = std::sqrt(2.0 * (2.0 * j - 1.0));
    values[j] = (P[j] - P[j - 2]) / norm;
    derivatives[j] = (2.0 * j - 1.0) * P[j - 1] / norm;
  }
}

PmlSystem assemble_pml_unconstrained(const PmlConfig& pml, int nu, const assembly::PotentialSpec* pot) {
  pml.validate();
  if (nu < 0) throw DomainError("pml: negative nu");
  const int p = pml.order;
  const int n_dof = pml.dofs_before_elimination();
  const double h = pml.T / pml.n_elems;
  const Complex sigma = pml.cfg.sigma;
  const Complex s = pml.cfg.s();
  const double lambda = assembly::angular_eigenvalue(nu, pml.cfg.R);
  const LegendreRule gl = gauss_legendre(p + 2);

  PmlSystem sys;
  sys.S = Eigen::MatrixXcd::Zero(n_dof, n_dof);
  sys.M = Eigen::MatrixXcd::Zero(n_dof, n_dof);
  sys.dofs_before_elimination = n_dof;

  std::vector<double> v(p + 1), dv(p + 1);
  std::vector<int> dof(p + 1);
  for (int e = 0; e < pml.n_elems; ++e) {
    // local 0 = left vertex, 1 = right vertex, 2.. = bubbles
    dof[0] = e * p;
    dof[1] = (e + 1) * p;
    for (int j = 2; j <= p; ++j) dof[j] = e * p + (j - 1);
    const double x0 = e * h;
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
      const double t = gl.nodes[q];
      const double xi = x0 + 0.5 * h * (t + 1.0);
      const double jw = 0.5 * h * gl.weights[q];
      shape_functions(p, t, v.data(), dv.data());
      const Complex g = 1.0 + s * xi;
      const Complex g2 = g * g;
      const Complex pw = pot ? pot->weight(xi, sigma) : Complex(1.0);
      const Complex ks = jw * g2 / sigma * (4.0 / (h * h));
      const Complex km0 = jw * sigma * lambda;
      const Complex km1 = jw * sigma * g2 * pw;
      for (int a = 0; a <= p; ++a)
        for (int b = a; b <= p; ++b) {
          const Complex sab = ks * (dv[a] * dv[b]) + km0 * (v[a] * v[b]);
          const Complex mab = km1 * (v[a] * v[b]);
          sys.S(dof[a], dof[b]) += sab;
          sys.M(dof[a], dof[b]) += mab;
          if (b != a) {
            sys.S(dof[b], dof[a]) += sab;
            sys.M(dof[b], dof[a]) += mab;
          }
        }
    }
  }
  sys.trace = Eigen::VectorXd::Zero(n_dof);
  sys.trace(0) = 1.0;
  return sys;
}

PmlSystem assemble_pml(const PmlConfig& pml, int nu, const assembly::PotentialSpec* pot) {
  PmlSystem full = assemble_pml_unconstrained(pml, nu, pot);
  // the vertex at T is the last unknown
  const int n = full.dofs_before_elimination - 1;
  PmlSystem sys;
  sys.S = full.S.topLeftCorner(n, n);
  sys.M = full.M.topLeftCorner(n, n);
  sys.trace = full.trace.head(n);
  sys.dofs_before_elimination = full.dofs_before_elimination;
  return sys;
}

}  // namespace csie::pml
