// Copyright (c) 2026 The csie Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

namespace csie {

// Gauss rule for the weight exp(-c x) on (0, inf).
//
// log_weights is kept alongside weights because the weights of large rules
// underflow long before the products w_i f(x_i) they are used in do.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> log_weights;
  double weight_exponent = 1.0;

  int size() const { return static_cast<int>(nodes.size()); }

  template <class F>
  auto integrate(F&& f) const -> decltype(f(0.0)) {
    decltype(f(0.0)) sum{};
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }
};

// Golub-Welsch on the Laguerre Jacobi matrix, nodes Newton-polished and
// weights from the Christoffel function so they keep full relative accuracy.
QuadratureRule gauss_laguerre(int n_nodes, double weight_exponent);

// Gauss-Legendre on [-1, 1].
struct LegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
LegendreRule gauss_legendre(int n_nodes);

}  // namespace csie
