// Copyright (c) 2026 The csie Authors
// SPDX-License-Identifier: Apache-2.0

#include "csie/laguerre.hpp"

#include <cmath>
#include <string>

namespace csie {

namespace {

constexpr double kRescale = 1e150;
const double kLogRescale = std::log(kRescale);

void check_index(int n, int m) {
  if (n < 0) throw DomainError("laguerre: negative index n=" + std::to_string(n));
  if (m < -n)
    throw DomainError("laguerre: shift m=" + std::to_string(m) + " below -n=" + std::to_string(-n));
}

template <class T>
T laguerre_impl(int n, int m, T x) {
  check_index(n, m);
  T prev(1.0);
  if (n == 0) return prev;
  T cur = T(1.0 + m) - x;
  for (int k = 2; k <= n; ++k) {
    T next = ((T(2.0 * k - 1 + m) - x) * cur - T(k - 1 + m) * prev) / T(k);
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace

Complex eval_laguerre(int n, int m, Complex x) { return laguerre_impl(n, m, x); }
double eval_laguerre(int n, int m, double x) { return laguerre_impl(n, m, x); }

Complex eval_phi(int n, int m, Complex x) {
  return std::exp(-x) * eval_laguerre(n, m, 2.0 * x);
}

double eval_phi(int n, int m, double x) {
  return std::exp(-x) * eval_laguerre(n, m, 2.0 * x);
}

std::vector<Complex> laguerre_sequence(int N, int m, Complex x) {
  check_index(N, m);
  std::vector<Complex> out(N + 1);
  out[0] = 1.0;
  if (N == 0) return out;
  out[1] = 1.0 + double(m) - x;
  for (int k = 2; k <= N; ++k)
    out[k] = ((double(2 * k - 1 + m) - x) * out[k - 1] - double(k - 1 + m) * out[k - 2]) / double(k);
  return out;
}

void scaled_laguerre_row(double t, double log_scale, std::span<double> out) {
  if (out.empty()) return;
  double prev = 1.0;
  double cur = 1.0 - t;
  double s = log_scale;
  auto emit = [&](std::size_t n, double p) {
    out[n] = p == 0.0 ? 0.0 : std::copysign(std::exp(s + std::log(std::abs(p))), p);
  };
  emit(0, prev);
  if (out.size() == 1) return;
  emit(1, cur);
  for (std::size_t k = 2; k < out.size(); ++k) {
    double next = ((2.0 * k - 1.0 - t) * cur - (k - 1.0) * prev) / double(k);
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescale) {
      cur /= kRescale;
      prev /= kRescale;
      s += kLogRescale;
    }
    emit(k, cur);
  }
}

double log_christoffel_sum(int n, double t) {
  double prev = 1.0;
  double cur = 1.0 - t;
  double sum = 1.0;
  double s2 = 0.0;  // log of the factor applied to sum
  for (int k = 1; k < n; ++k) {
    if (k >= 2) {
      double next = ((2.0 * k - 1.0 - t) * cur - (k - 1.0) * prev) / double(k);
      prev = cur;
      cur = next;
    }
    if (std::abs(cur) > kRescale) {
      cur /= kRescale;
      prev /= kRescale;
      sum /= kRescale * kRescale;
      s2 += 2.0 * kLogRescale;
    }
    sum += cur * cur;
  }
  return std::log(sum) + s2;
}

Eigen::MatrixXd derivative_expansion(int N) {
  if (N < 0) throw DomainError("derivative_expansion: negative N");
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(N + 1, N + 1);
  for (int n = 0; n <= N; ++n) {
    D(n, n) = -1.0;
    for (int k = 0; k < n; ++k) D(n, k) = -2.0;
  }
  return D;
}

LaguerreBasis::LaguerreBasis(int max_index) : N_(max_index) {
  if (max_index < 0) throw DomainError("LaguerreBasis: negative N");
  D_ = derivative_expansion(N_);
}

Eigen::VectorXcd LaguerreBasis::values(Complex x) const {
  Eigen::VectorXcd v(N_ + 1);
  auto L = laguerre_sequence(N_, 0, 2.0 * x);
  Complex e = std::exp(-x);
  for (int n = 0; n <= N_; ++n) v(n) = e * L[n];
  return v;
}

Eigen::VectorXcd LaguerreBasis::derivatives(Complex x) const {
  return D_.cast<Complex>() * values(x);
}

int LaguerreBasis::nodes_for_weight_degree(int q) const {
  if (q < 0) throw DomainError("nodes_for_weight_degree: negative degree");
  return (2 * N_ + q + 2 + 1) / 2;
}

QuadratureRule LaguerreBasis::rule_for_weight_degree(int q) const {
  return gauss_laguerre(nodes_for_weight_degree(q), 2.0);
}

BasisTable LaguerreBasis::tabulate(const QuadratureRule& rule) const {
  const int K = rule.size();
  const double c = rule.weight_exponent;
  BasisTable tab;
  tab.nodes = rule.nodes;
  tab.values.resize(K, N_ + 1);
  std::vector<double> row(N_ + 1);
  for (int i = 0; i < K; ++i) {
    double x = rule.nodes[i];
    // sqrt(w e^{cx}) e^{-x} = exp(log w / 2 + (c/2 - 1) x)
    scaled_laguerre_row(2.0 * x, 0.5 * rule.log_weights[i] + (0.5 * c - 1.0) * x, row);
    for (int n = 0; n <= N_; ++n) tab.values(i, n) = row[n];
  }
  tab.derivatives = tab.values * D_.transpose();
  return tab;
}

}  // namespace csie
