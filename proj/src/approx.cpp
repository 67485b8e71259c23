// Copyright (c) 2026 The csie Authors
// SPDX-License-Identifier: Apache-2.0

#include "csie/approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "csie/hankel.hpp"
#include "csie/laguerre.hpp"

namespace csie::approx {

namespace {

constexpr Complex I(0.0, 1.0);

Complex int_pow(Complex z, int n) {
  Complex r = 1.0;
  for (int k = 0; k < n; ++k) r *= z;
  return r;
}

void check_positive_real_part(Complex b, const char* who) {
  if (!(b.real() > 0.0))
    throw DomainError(std::string(who) + ": requires Re(b) > 0, got b=" + format_complex(b));
}

void check_decay(Complex omega, Complex sigma, const char* who) {
  if (!((sigma * omega).imag() > 0.0))
    throw DomainError(std::string(who) + ": requires Im(sigma*omega) > 0, got sigma=" + format_complex(sigma) +
                      " omega=" + format_complex(omega));
}

std::vector<double> tails_from_coefficients(const Eigen::VectorXcd& c, int N_max) {
  const int M = static_cast<int>(c.size()) - 1;
  std::vector<double> suffix(M + 2, 0.0);
  for (int n = M; n >= 0; --n) suffix[n] = suffix[n + 1] + 0.5 * std::norm(c(n));
  std::vector<double> e(N_max + 1);
  for (int N = 0; N <= N_max; ++N) e[N] = std::sqrt(suffix[N + 1]);
  return e;
}

}  // namespace

Complex laplace_coefficient(Complex b, int n) {
  if (n < 0) throw DomainError("laplace_coefficient: negative index");
  if (!(b.real() > -1.0))
    throw DomainError("laplace_coefficient: requires Re(b) > -1, got b=" + format_complex(b));
  return int_pow((b - 1.0) / (b + 1.0), n) / (b + 1.0);
}

ProjectionResult project_exp(Complex b, int N) {
  check_positive_real_part(b, "project_exp");
  if (N < 0) throw DomainError("project_exp: negative N");
  ProjectionResult r;
  r.coefficients.resize(N + 1);
  const Complex q = (b - 1.0) / (b + 1.0);
  Complex c = 2.0 / (b + 1.0);
  for (int n = 0; n <= N; ++n, c *= q) r.coefficients(n) = c;
  r.tail_error = exp_tail_error(b, N);
  r.norm = 1.0 / std::sqrt(2.0 * b.real());
  return r;
}

double exp_tail_error(Complex b, int N) {
  check_positive_real_part(b, "exp_tail_error");
  if (N < 0) throw DomainError("exp_tail_error: negative N");
  return std::pow(std::abs((b - 1.0) / (b + 1.0)), N + 1) / std::sqrt(2.0 * b.real());
}

double exp_tail_error_quadrature(Complex b, int N) {
  check_positive_real_part(b, "exp_tail_error_quadrature");
  if (N < 0) throw DomainError("exp_tail_error_quadrature: negative N");
  using LC = std::complex<long double>;
  const LC bl(b.real(), b.imag());
  const LC q = (bl - 1.0L) / (bl + 1.0L);
  std::vector<LC> c(N + 1);
  c[0] = 2.0L / (bl + 1.0L);
  for (int n = 1; n <= N; ++n) c[n] = c[n - 1] * q;

  auto residual_sq = [&](long double x) -> long double {
    long double t = 2.0L * x;
    long double prev = 1.0L, cur = 1.0L - t;
    LC s = c[0];
    if (N >= 1) s += c[1] * cur;
    for (int k = 2; k <= N; ++k) {
      long double next = ((2.0L * k - 1.0L - t) * cur - (k - 1.0L) * prev) / k;
      prev = cur;
      cur = next;
      s += c[k] * cur;
    }
    LC r = std::exp(-bl * x) - std::exp(-x) * s;
    return std::norm(r);
  };
  using boost::math::quadrature::gauss_kronrod;
  const long double inf = std::numeric_limits<long double>::infinity();
  // relative tolerance on each piece; 1e-13 on the square is 5e-14 on the norm
  const long double tol = 1e-13L;
  long double total = 0.0L;
  const long double breaks[] = {0.0L, 1.0L, 4.0L, 16.0L, 64.0L};
  for (int j = 0; j + 1 < 5; ++j)
    total += gauss_kronrod<long double, 61>::integrate(residual_sq, breaks[j], breaks[j + 1], 12, tol);
  total += gauss_kronrod<long double, 61>::integrate(residual_sq, 64.0L, inf, 12, tol);
  return static_cast<double>(std::sqrt(total));
}

Eigen::VectorXcd expansion_coefficients(const Integrand& f, int M, const QuadratureRule& rule) {
  if (M < 0) throw DomainError("expansion_coefficients: negative index");
  const double c = rule.weight_exponent;
  Eigen::VectorXcd coef = Eigen::VectorXcd::Zero(M + 1);
  std::vector<double> row(M + 1);
  for (int i = 0; i < rule.size(); ++i) {
    const double x = rule.nodes[i];
    Complex fx = f(x);
    if (!std::isfinite(fx.real()) || !std::isfinite(fx.imag()))
      throw NumericError("expansion_coefficients: integrand not finite at x=" + std::to_string(x));
    if (fx == Complex(0.0)) continue;
    // w e^{cx} phi_n(x) = exp(log w + (c-1) x) L_n(2x)
    scaled_laguerre_row(2.0 * x, rule.log_weights[i] + (c - 1.0) * x, row);
    for (int n = 0; n <= M; ++n) coef(n) += row[n] * fx;
  }
  return 2.0 * coef;
}

ProjectionResult project_general(const Integrand& f, int N, const QuadratureRule& rule) {
  if (N < 0) throw DomainError("project_general: negative N");
  ProjectionResult r;
  r.coefficients = expansion_coefficients(f, N, rule);
  const double c = rule.weight_exponent;
  double norm_sq = 0.0;
  for (int i = 0; i < rule.size(); ++i) {
    Complex fx = f(rule.nodes[i]);
    if (fx == Complex(0.0)) continue;
    norm_sq += std::exp(rule.log_weights[i] + c * rule.nodes[i] + 2.0 * std::log(std::abs(fx)));
  }
  double captured = 0.5 * r.coefficients.squaredNorm();
  double tail_sq = norm_sq - captured;
  if (tail_sq < -1e-13 * norm_sq)
    throw NumericError("project_general: negative tail variance " + std::to_string(tail_sq) +
                       " (quadrature insufficient for N=" + std::to_string(N) + ")");
  r.norm = std::sqrt(norm_sq);
  r.tail_error = std::sqrt(std::max(tail_sq, 0.0));
  return r;
}

std::vector<double> hankel_error_curve(int nu, Complex omega, Complex sigma, double R, int N_max,
                                       HankelErrorInfo* info) {
  if (nu < 0 || nu > 12) throw DomainError("hankel_error: nu must be in [0, 12], got " + std::to_string(nu));
  if (!(R > 0.0)) throw DomainError("hankel_error: R must be > 0");
  if (N_max < 0) throw DomainError("hankel_error: negative N");
  check_decay(omega, sigma, "hankel_error");

  const double d = (sigma * omega).imag();
  const double c = 1.0 + d;
  Integrand f = [=](double x) { return hankel::eval_h(nu, omega * (R + sigma * x)); };

  constexpr int kMaxCoefficients = 4000;
  constexpr int kMaxNodes = 8192;
  if (N_max + 40 > kMaxCoefficients)
    throw NumericError("hankel_error: N_max=" + std::to_string(N_max) + " leaves no room below the " +
                       std::to_string(kMaxCoefficients) + "-coefficient cap");
  int M = std::max(N_max + 40, 60);
  int K = 2 * M + 64;

  for (;;) {
    QuadratureRule rule = gauss_laguerre(K, c);
    Eigen::VectorXcd coef = expansion_coefficients(f, M, rule);
    double largest = coef.cwiseAbs().maxCoeff();
    double last = coef.tail(10).cwiseAbs().maxCoeff();
    // quadrature noise sits near 1e-14 relative, so stop well above it
    if (last > 1e-12 * largest) {
      if (M >= kMaxCoefficients)
        throw NumericError("hankel_error: coefficients not decayed at M=" + std::to_string(M) +
                           " for nu=" + std::to_string(nu) + " omega=" + format_complex(omega) +
                           " sigma=" + format_complex(sigma) + " R=" + std::to_string(R));
      M = std::min(kMaxCoefficients, M * 3 / 2);
      K = std::max(K, 2 * M + 64);
      continue;
    }
    QuadratureRule fine = gauss_laguerre(2 * K, c);
    Eigen::VectorXcd coef2 = expansion_coefficients(f, M, fine);
    auto e1 = tails_from_coefficients(coef, N_max);
    auto e2 = tails_from_coefficients(coef2, N_max);

    double norm_sq = 0.0;
    for (int i = 0; i < fine.size(); ++i) {
      Complex fx = f(fine.nodes[i]);
      if (fx != Complex(0.0))
        norm_sq += std::exp(fine.log_weights[i] + c * fine.nodes[i] + 2.0 * std::log(std::abs(fx)));
    }
    const double norm = std::sqrt(norm_sq);
    double worst = 0.0;
    bool stable = true;
    for (int N = 0; N <= N_max; ++N) {
      double diff = std::abs(e1[N] - e2[N]);
      worst = std::max(worst, diff / std::max(e2[N], 1e-300));
      if (diff > 1e-8 * e2[N] + 1e-12 * norm) stable = false;
    }
    if (stable) {
      if (info) {
        info->coefficients = M;
        info->nodes = K;
        info->weight_exponent = c;
        info->norm = norm;
        info->doubling_change = worst;
      }
      // the coarser rule carries less rounding from the long Laguerre recurrences
      return e1;
    }
    if (2 * K >= kMaxNodes)
      throw NumericError("hankel_error: quadrature not stable under doubling at " + std::to_string(2 * K) +
                         " nodes for nu=" + std::to_string(nu) + " omega=" + format_complex(omega) +
                         " sigma=" + format_complex(sigma) + " R=" + std::to_string(R));
    K *= 2;
  }
}

double hankel_best_approx_error(int nu, Complex omega, Complex sigma, double R, int N) {
  return hankel_error_curve(nu, omega, sigma, R, N).back();
}

double epsilon_term(int N, Complex a, Complex b) {
  if (N < 0) throw DomainError("epsilon_term: negative N");
  check_positive_real_part(b, "epsilon_term");
  hankel::check_off_cut(a, "epsilon_term");

  const Complex q = (b - 1.0) / (b + 1.0);
  auto L = laguerre_sequence(N, 0, -2.0 * a);
  Complex S = 0.0, qk = 1.0;
  for (int k = 0; k <= N; ++k, qk *= q) S += qk * L[k];
  const Complex pref = 4.0 / (b + 1.0) * S;

  double sum = 0.0;
  double prev_term = std::numeric_limits<double>::infinity();
  int small_run = 0, growth_run = 0;
  for (int n = N + 1;; ++n) {
    double term = std::norm(hankel::alpha_lemma(n, a));
    sum += term;
    small_run = term <= 1e-16 * sum ? small_run + 1 : 0;
    growth_run = term >= prev_term ? growth_run + 1 : 0;
    prev_term = term;
    if (small_run >= 3 || sum == 0.0) break;
    if (growth_run >= 50 || n > N + 20000)
      throw NumericError("epsilon_term: tail not converging for N=" + std::to_string(N) +
                         " a=" + format_complex(a) + " b=" + format_complex(b));
  }
  return std::sqrt(0.5 * std::norm(pref) * sum);
}

double exponential_rate(Complex omega, Complex sigma) {
  Complex so = sigma * omega;
  return std::log(std::abs((1.0 + I * so) / (1.0 - I * so)));
}

double algebraic_rate(Complex sigma, double R) { return -2.0 * std::sqrt(2.0 * R / sigma).real(); }

RatePrediction predicted_rates(int nu, Complex omega, Complex sigma, double R, int N, double c1, double c2) {
  check_decay(omega, sigma, "predicted_rates");
  if (sigma.imag() == 0.0 && sigma.real() <= 0.0) throw DomainError("predicted_rates: sigma on the branch cut");
  if (!(R > 0.0)) throw DomainError("predicted_rates: R must be > 0");
  if (nu < 0 || N < 0) throw DomainError("predicted_rates: negative index");
  RatePrediction p;
  const double n1 = N + 1.0;
  p.exp_term = c1 * std::exp(n1 * exponential_rate(omega, sigma));
  p.alg_term = c2 * std::exp(-2.0 * std::sqrt(2.0 * R * n1 / sigma).real()) * std::pow(n1, 0.5 * nu);
  return p;
}

RateConstants fit_rate_constants(const std::vector<double>& errors, int nu, Complex omega, Complex sigma,
                                 double R, const std::vector<int>& exp_window,
                                 const std::vector<int>& alg_window) {
  auto fit = [&](const std::vector<int>& window, bool exp_part) {
    double acc = 0.0;
    int count = 0;
    for (int N : window) {
      if (N < 0 || N >= static_cast<int>(errors.size()) || !(errors[N] > 0.0)) continue;
      auto p = predicted_rates(nu, omega, sigma, R, N, 1.0, 1.0);
      acc += std::log(errors[N]) - std::log(exp_part ? p.exp_term : p.alg_term);
      ++count;
    }
    if (count == 0) throw DomainError("fit_rate_constants: empty fitting window");
    return std::exp(acc / count);
  };
  RateConstants rc;
  if (!exp_window.empty()) rc.c1 = fit(exp_window, true);
  if (!alg_window.empty()) rc.c2 = fit(alg_window, false);
  return rc;
}

SlopeFit log_slope(const std::vector<double>& x, const std::vector<double>& y, double lo, double hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (!(y[i] >= lo && y[i] <= hi)) continue;
    double ly = std::log(y[i]);
    sx += x[i];
    sy += ly;
    sxx += x[i] * x[i];
    sxy += x[i] * ly;
    ++n;
  }
  SlopeFit fit;
  fit.points = n;
  if (n < 2) {
    fit.slope = fit.intercept = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  double den = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

}  // namespace csie::approx
