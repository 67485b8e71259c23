// Copyright (c) 2026 The csie Authors
// SPDX-License-Identifier: Apache-2.0

#include "csie/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

#include "csie/error.hpp"
#include "csie/laguerre.hpp"

namespace csie {

namespace {

// t * L_n(t) / (n (L_n(t) - L_{n-1}(t))) = L_n / L_n', evaluated with rescaling.
double laguerre_newton_step(int n, double t) {
  double prev = 1.0;
  double cur = 1.0 - t;
  for (int k = 2; k <= n; ++k) {
    double next = ((2.0 * k - 1.0 - t) * cur - (k - 1.0) * prev) / double(k);
    prev = cur;
    cur = next;
    if (std::abs(cur) > 1e150) {
      cur *= 1e-150;
      prev *= 1e-150;
    }
  }
  double denom = n * (cur - prev);
  if (denom == 0.0) return 0.0;
  return t * cur / denom;
}
QuadratureRule compute_gauss_laguerre(int n_nodes, double weight_exponent) {

  const int n = n_nodes;
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(n > 1 ? n - 1 : 1);
  for (int k = 0; k < n; ++k) diag(k) = 2.0 * k + 1.0;
  for (int k = 1; k < n; ++k) sub(k - 1) = double(k);

  std::vector<double> t(n);
  if (n == 1) {
    t[0] = 1.0;
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
      throw NumericError("gauss_laguerre: tridiagonal eigensolve failed for n=" + std::to_string(n));
    for (int i = 0; i < n; ++i) t[i] = es.eigenvalues()(i);
  }

  for (int i = 0; i < n; ++i) {
    for (int it = 0; it < 6; ++it) {
      double step = laguerre_newton_step(n, t[i]);
      t[i] -= step;
      if (std::abs(step) <= 1e-16 * t[i]) break;
    }
    if (!(t[i] > 0.0) || !std::isfinite(t[i]))
      throw NumericError("gauss_laguerre: node polishing failed for n=" + std::to_string(n));
  }
  for (int i = 1; i < n; ++i)
    if (!(t[i] > t[i - 1]))
      throw NumericError("gauss_laguerre: nodes not strictly increasing for n=" + std::to_string(n));

  QuadratureRule rule;
  rule.weight_exponent = weight_exponent;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  rule.log_weights.resize(n);
  const double log_c = std::log(weight_exponent);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = t[i] / weight_exponent;
    rule.log_weights[i] = -log_christoffel_sum(n, t[i]) - log_c;
    rule.weights[i] = std::exp(rule.log_weights[i]);
  }
  return rule;
}

}  // namespace

QuadratureRule gauss_laguerre(int n_nodes, double weight_exponent) {
  if (n_nodes < 1) throw DomainError("gauss_laguerre: n_nodes must be >= 1");
  if (!(weight_exponent > 0.0) || !std::isfinite(weight_exponent))
    throw DomainError("gauss_laguerre: weight_exponent must be > 0");

  // Large rules cost O(n^2) and sweeps ask for the same few repeatedly.
  static std::mutex mutex;
  static std::map<std::pair<int, double>, QuadratureRule> cache;
  const std::pair<int, double> key{n_nodes, weight_exponent};
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  QuadratureRule rule = compute_gauss_laguerre(n_nodes, weight_exponent);
  std::lock_guard<std::mutex> lock(mutex);
  return cache.emplace(key, std::move(rule)).first->second;
}

LegendreRule gauss_legendre(int n_nodes) {
  if (n_nodes < 1) throw DomainError("gauss_legendre: n_nodes must be >= 1");
  const int n = n_nodes;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = b;
    J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  if (es.info() != Eigen::Success) throw NumericError("gauss_legendre: eigensolve failed");
  LegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // returns P_n(x) and P_n'(x)
  auto legendre = [n](double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    return std::pair<double, double>{p1, n * (x * p1 - p0) / (x * x - 1.0)};
  };
  for (int i = 0; i < n; ++i) {
    double x = es.eigenvalues()(i);
    for (int it = 0; it < 4; ++it) {
      auto [p, dp] = legendre(x);
      x -= p / dp;
    }
    auto [p, dp] = legendre(x);
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace csie
