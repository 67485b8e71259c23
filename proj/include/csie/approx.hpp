// Copyright (c) 2026 The csie Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "csie/error.hpp"
#include "csie/quadrature.hpp"

namespace csie::approx {

// Expansion f ~ sum_n c_n phi_n of the L2(0,inf) projection onto span{phi_0..phi_N}.
struct ProjectionResult {
  Eigen::VectorXcd coefficients;
  double tail_error = 0.0;
  double norm = 0.0;
};

// int_0^inf exp(-b x) phi_n(x) dx = (b-1)^n / (b+1)^{n+1}
Complex laplace_coefficient(Complex b, int n);

ProjectionResult project_exp(Complex b, int N);

// || exp(-b.) - Pi_N exp(-b.) || = |(b-1)/(b+1)|^{N+1} / sqrt(2 Re b)
double exp_tail_error(Complex b, int N);

// Same norm from the pointwise residual, integrated adaptively in long double.
double exp_tail_error_quadrature(Complex b, int N);

using Integrand = std::function<Complex(double)>;

// c_n = 2 int f phi_n by the given rule; tail from Parseval.
ProjectionResult project_general(const Integrand& f, int N, const QuadratureRule& rule);

// Coefficients of f in phi_0..phi_M by the given rule, without the Parseval step.
Eigen::VectorXcd expansion_coefficients(const Integrand& f, int M, const QuadratureRule& rule);

struct HankelErrorInfo {
  int coefficients = 0;     // highest index M whose coefficient enters the tails
  int nodes = 0;            // Gauss-Laguerre nodes after doubling validation
  double weight_exponent = 0.0;
  double norm = 0.0;        // ||h_nu(omega(R + sigma .))||
  double doubling_change = 0.0;
};

// e(N) = ||(I - Pi_N) h_nu(omega(R + sigma .))|| for N = 0..N_max, from
// coefficient tails; the rule is doubled until the curve is stable to 1e-8.
std::vector<double> hankel_error_curve(int nu, Complex omega, Complex sigma, double R, int N_max,
                                       HankelErrorInfo* info = nullptr);
double hankel_best_approx_error(int nu, Complex omega, Complex sigma, double R, int N);

// ||(I - Pi_N) (1/(a+.)) Pi_N exp(-b.)||
double epsilon_term(int N, Complex a, Complex b);

struct RatePrediction {
  double exp_term = 0.0;
  double alg_term = 0.0;
  double total() const { return exp_term + alg_term; }
};

// log |(1 + i sigma omega) / (1 - i sigma omega)|
double exponential_rate(Complex omega, Complex sigma);
// -2 Re sqrt(2R / sigma), the slope of log error against sqrt(N+1)
double algebraic_rate(Complex sigma, double R);

RatePrediction predicted_rates(int nu, Complex omega, Complex sigma, double R, int N, double c1, double c2);

struct RateConstants {
  double c1 = 0.0;
  double c2 = 0.0;
};

// Least squares on log error: c1 over the N values in exp_window, c2 over alg_window.
// errors[N] is the error at N.
RateConstants fit_rate_constants(const std::vector<double>& errors, int nu, Complex omega, Complex sigma,
                                 double R, const std::vector<int>& exp_window,
                                 const std::vector<int>& alg_window);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  int points = 0;
};

// Regression of log(y) on x over the points with y in [lo, hi].
SlopeFit log_slope(const std::vector<double>& x, const std::vector<double>& y, double lo = 1e-11,
                   double hi = 1e-2);

}  // namespace csie::approx
