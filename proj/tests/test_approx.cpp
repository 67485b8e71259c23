// Copyright (c) 2026 The csie Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "csie/approx.hpp"
#include "csie/hankel.hpp"
#include "csie/laguerre.hpp"
#include "csie/quadrature.hpp"
#include "oracles/frozen.hpp"

using namespace csie;
using namespace csie::approx;

namespace {

const Complex I(0.0, 1.0);

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

// || f - sum_{n<=N} c_n phi_n || by adaptive quadrature on (0, inf)
template <class F>
double residual_norm(F&& f, const Eigen::VectorXcd& c) {
  const int N = static_cast<int>(c.size()) - 1;
  auto r2 = [&](double x) {
    Complex s = f(x);
    for (int n = 0; n <= N; ++n) s -= c(n) * eval_phi(n, 0, x);
    return std::norm(s);
  };
  using boost::math::quadrature::gauss_kronrod;
  double total = 0.0;
  const double br[] = {0.0, 1.0, 4.0, 16.0, 64.0};
  for (int j = 0; j < 4; ++j) total += gauss_kronrod<double, 61>::integrate(r2, br[j], br[j + 1], 15, 1e-14);
  total += gauss_kronrod<double, 61>::integrate(r2, 64.0, std::numeric_limits<double>::infinity(), 15, 1e-14);
  return std::sqrt(total);
}

}  // namespace

TEST_CASE("laplace coefficient: closed form") {
  CHECK(laplace_coefficient(1.0, 0) == Complex(0.5));
  for (int n = 1; n <= 5; ++n) CHECK(laplace_coefficient(1.0, n) == Complex(0.0));
  CHECK(laplace_coefficient(3.0, 0) == Complex(0.25));
  CHECK_THROWS_AS(laplace_coefficient(-1.0, 2), DomainError);
  CHECK_THROWS_AS(laplace_coefficient(Complex(-1.5, 2.0), 2), DomainError);
  CHECK_THROWS_AS(laplace_coefficient(2.0, -1), DomainError);
}

TEST_CASE("laplace coefficient: frozen quadrature values") {
  double worst = 0.0;
  for (const auto& v : oracle::kLaplace) worst = std::max(worst, rel(laplace_coefficient(v.b, v.n), v.value));
  CHECK(worst < 1e-11);

  // b = 2+i, n = 7 by a 128-node rule: exp(-(b+1)x) L_7(2x) = exp(-3x) exp(-ix) L_7(2x)
  QuadratureRule rule = gauss_laguerre(128, 3.0);
  Complex q = rule.integrate([](double x) { return std::exp(Complex(0.0, -x)) * eval_laguerre(7, 0, 2.0 * x); });
  CHECK(rel(laplace_coefficient(Complex(2.0, 1.0), 7), q) < 1e-11);
}

TEST_CASE("project_exp") {
  ProjectionResult one = project_exp(1.0, 0);
  REQUIRE(one.coefficients.size() == 1);
  CHECK(std::abs(one.coefficients(0) - 1.0) < 1e-15);
  CHECK(one.tail_error == 0.0);

  for (Complex b : {Complex(3.0), Complex(1.0, 2.0), Complex(0.2, 5.0), Complex(0.5, -0.5)})
    for (int N : {0, 3, 10, 25}) {
      ProjectionResult r = project_exp(b, N);
      CHECK(std::abs(r.tail_error - exp_tail_error(b, N)) <= 1e-12 * std::max(1.0, r.tail_error));
      for (int n = 0; n <= N; ++n) CHECK(rel(r.coefficients(n), 2.0 * laplace_coefficient(b, n)) < 1e-13);
      // Parseval against ||exp(-b.)||^2 = 1 / (2 Re b)
      const double total = r.tail_error * r.tail_error + 0.5 * r.coefficients.squaredNorm();
      CHECK(total == doctest::Approx(1.0 / (2.0 * b.real())).epsilon(1e-10));
      // pointwise, |phi_n| <= 1 on x >= 0 bounds the error by the coefficient tail
      const double x = 0.7;
      Complex s = 0.0;
      for (int n = 0; n <= N; ++n) s += r.coefficients(n) * eval_phi(n, 0, x);
      const double qabs = std::abs((b - 1.0) / (b + 1.0));
      const double bound = 2.0 / std::abs(b + 1.0) * std::pow(qabs, N + 1) / (1.0 - qabs);
      CHECK(std::abs(std::exp(-b * x) - s) <= bound * (1.0 + 1e-12) + 1e-15);
    }

  // sigma*omega = i makes b = -i sigma omega = 1: a single coefficient
  const Complex omega(2.0, -0.3);
  const Complex sigma = I / omega;
  ProjectionResult exact = project_exp(-I * sigma * omega, 12);
  CHECK(exact.tail_error < 1e-15);
  CHECK(std::abs(exact.coefficients(0) - 1.0) < 1e-15);
  for (int n = 1; n <= 12; ++n) CHECK(std::abs(exact.coefficients(n)) < 1e-15);

  CHECK_THROWS_AS(project_exp(Complex(0.0, 1.0), 3), DomainError);
  CHECK_THROWS_AS(project_exp(-0.5, 3), DomainError);
}

TEST_CASE("exp tail error: closed form against quadrature") {
  CHECK(exp_tail_error(1.0, 0) == 0.0);
  CHECK(exp_tail_error(1.0, 17) == 0.0);
  CHECK(exp_tail_error(3.0, 0) == doctest::Approx(1.0 / (2.0 * std::sqrt(6.0))).epsilon(1e-15));
  CHECK(std::abs(exp_tail_error(Complex(1.0, 2.0), 10) - exp_tail_error_quadrature(Complex(1.0, 2.0), 10)) < 1e-10);

  double worst = 0.0;
  for (Complex b : {Complex(3.0), Complex(1.0, 2.0), Complex(0.2, 5.0), Complex(2.0, 1.0), Complex(0.7, -0.4)})
    for (int N : {0, 1, 5, 10, 20, 40})
      worst = std::max(worst, std::abs(exp_tail_error(b, N) - exp_tail_error_quadrature(b, N)));
  CHECK(worst < 1e-10);
  CHECK_THROWS_AS(exp_tail_error(Complex(-0.1, 1.0), 2), DomainError);
}

TEST_CASE("project_general: exact cases") {
  QuadratureRule rule = gauss_laguerre(40, 2.0);
  ProjectionResult r = project_general([](double x) { return Complex(eval_phi(3, 0, x)); }, 10, rule);
  for (int n = 0; n <= 10; ++n) CHECK(std::abs(r.coefficients(n) - (n == 3 ? 1.0 : 0.0)) < 1e-13);
  CHECK(r.tail_error < 1e-7);  // square root of a cancellation at 1e-16
  CHECK(r.norm == doctest::Approx(std::sqrt(0.5)).epsilon(1e-13));

  QuadratureRule rule3 = gauss_laguerre(40, 3.0);
  for (int N : {0, 4, 15}) {
    ProjectionResult g = project_general([](double x) { return Complex(std::exp(-2.0 * x)); }, N, rule3);
    ProjectionResult e = project_exp(2.0, N);
    CHECK((g.coefficients - e.coefficients).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(g.norm == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(std::abs(g.tail_error - e.tail_error) < 1e-7);
    const double parseval = g.tail_error * g.tail_error + 0.5 * g.coefficients.squaredNorm();
    CHECK(parseval == doctest::Approx(g.norm * g.norm).epsilon(1e-10));
  }
  CHECK_THROWS_AS(project_general([](double) { return Complex(0.0); }, -1, rule), DomainError);
}

TEST_CASE("project_general: insufficient quadrature is reported") {
  QuadratureRule tiny = gauss_laguerre(2, 2.0);
  auto f = [](double x) { return Complex(std::exp(-x) * std::cos(3.0 * x)); };
  CHECK_THROWS_AS(project_general(f, 20, tiny), NumericError);
}

TEST_CASE("project_general: h_0 with sigma*omega = i") {
  // h_0(omega R + i x) = -exp(i omega R) exp(-x) / (-i omega R + x)
  const Complex omega(2.0, -0.1);
  const double R = 1.0;
  const Complex a = -I * omega * R;
  const Complex pref = -std::exp(I * omega * R);
  auto f = [&](double x) { return hankel::eval_h(0, omega * R + I * x); };
  QuadratureRule rule = gauss_laguerre(400, 2.0);
  ProjectionResult r = project_general(f, 30, rule);
  // quadrature noise is absolute, near eps times the largest coefficient
  Eigen::VectorXcd exact(31);
  for (int n = 0; n <= 30; ++n) exact(n) = 2.0 * pref * hankel::alpha(n, 1, a);
  CHECK((r.coefficients - exact).cwiseAbs().maxCoeff() < 1e-12 * exact.cwiseAbs().maxCoeff());

  // the error curve from coefficient tails of 2 alpha_{n,1}
  const Complex sigma = I / omega;
  std::vector<double> curve = hankel_error_curve(0, omega, sigma, R, 30);
  for (int N : {0, 5, 10, 20, 30}) {
    double tail = 0.0;
    for (int n = 400; n > N; --n) tail += 0.5 * std::norm(2.0 * pref * hankel::alpha(n, 1, a));
    CHECK(rel(curve[N], std::sqrt(tail)) < 1e-7);
  }
}

TEST_CASE("hankel error curve: basic properties") {
  HankelErrorInfo info;
  const Complex omega(10.0, -0.5), sigma(0.3, 0.3);
  std::vector<double> e = hankel_error_curve(0, omega, sigma, 1.0, 60, &info);
  REQUIRE(e.size() == 61);
  CHECK(info.nodes > 0);
  CHECK(info.coefficients >= 60);
  CHECK(info.norm > 0.0);
  CHECK(info.doubling_change >= 0.0);

  // tails from Parseval on an independent, larger rule
  QuadratureRule big = gauss_laguerre(700, info.weight_exponent);
  auto f = [&](double x) { return hankel::eval_h(0, omega * (1.0 + sigma * x)); };
  for (int N : {0, 5, 10, 20}) {
    ProjectionResult pr = project_general(f, N, big);
    CHECK(pr.tail_error == doctest::Approx(e[N]).epsilon(1e-7));
  }
  for (int N = 1; N <= 60; ++N) CHECK(e[N] <= e[N - 1]);
  CHECK(e[0] <= info.norm);
  CHECK(hankel_best_approx_error(0, omega, sigma, 1.0, 25) == doctest::Approx(e[25]).epsilon(1e-6));

  // the norm against an independent adaptive quadrature
  using boost::math::quadrature::gauss_kronrod;
  auto h2 = [&](double x) { return std::norm(hankel::eval_h(0, omega * (1.0 + sigma * x))); };
  double nrm = gauss_kronrod<double, 61>::integrate(h2, 0.0, 5.0, 15, 1e-13) +
               gauss_kronrod<double, 61>::integrate(h2, 5.0, std::numeric_limits<double>::infinity(), 15, 1e-13);
  CHECK(info.norm == doctest::Approx(std::sqrt(nrm)).epsilon(1e-9));

  CHECK_THROWS_AS(hankel_error_curve(0, omega, Complex(0.3, -0.3), 1.0, 10), DomainError);
  CHECK_THROWS_AS(hankel_error_curve(0, omega, sigma, 0.0, 10), DomainError);
  CHECK_THROWS_AS(hankel_error_curve(13, omega, sigma, 1.0, 10), DomainError);
}

TEST_CASE("epsilon term") {
  // b = 1: Pi_N exp(-.) = phi_0, so eps = ||(I - Pi_N) exp(-.)/(a+.)||
  for (Complex a : {Complex(1.0, 1.0), Complex(2.0), Complex(0.5, -0.8)})
    for (int N : {0, 3, 8}) {
      Eigen::VectorXcd c(N + 1);
      for (int n = 0; n <= N; ++n) c(n) = 2.0 * hankel::alpha(n, 1, a);
      const double direct = residual_norm([&](double x) { return std::exp(-x) / (a + x); }, c);
      CHECK(rel(epsilon_term(N, a, 1.0), direct) < 1e-8);
    }

  // general b: against the residual of (1/(a+.)) Pi_N exp(-b.)
  {
    const Complex a(1.5, 0.5), b(2.0, -1.0);
    for (int N : {2, 6}) {
      ProjectionResult p = project_exp(b, N);
      auto g = [&](double x) {
        Complex s = 0.0;
        for (int n = 0; n <= N; ++n) s += p.coefficients(n) * eval_phi(n, 0, x);
        return s / (a + x);
      };
      QuadratureRule rule = gauss_laguerre(300, 2.0);
      const int M = N;
      Eigen::VectorXcd c = expansion_coefficients(g, M, rule);
      CHECK(rel(epsilon_term(N, a, b), residual_norm(g, c)) < 1e-7);
    }
  }

  // decay bound with C fit at N = 10
  {
    const Complex a = 2.0, b(1.0, 1.0);
    auto env = [&](int N) { return std::exp(-2.0 * std::sqrt(2.0 * a * (N + 1.0)).real()); };
    const double C = epsilon_term(10, a, b) / env(10);
    for (int N = 10; N <= 100; N += 10) CHECK(epsilon_term(N, a, b) <= C * env(N) * (1.0 + 1e-12));
  }

  // nonincreasing in N
  {
    double prev = epsilon_term(0, 1.0, 2.0);
    for (int N = 1; N <= 60; ++N) {
      const double e = epsilon_term(N, 1.0, 2.0);
      CHECK(e <= prev * (1.0 + 1e-12));
      prev = e;
    }
  }
  CHECK_THROWS_AS(epsilon_term(3, -1.0, 2.0), DomainError);
  CHECK_THROWS_AS(epsilon_term(3, 1.0, Complex(-1.0, 1.0)), DomainError);
}

TEST_CASE("predicted rates") {
  const Complex omega(10.0, -0.5), sigma(0.3, 0.3);
  // log|(1 + i s w)/(1 - i s w)| with s w = 3.15 + 2.85i, by hand
  CHECK(exponential_rate(omega, sigma) == doctest::Approx(0.5 * std::log(13.345 / 24.745)).epsilon(1e-12));
  // -2 Re sqrt(2 R / sigma) at R = 0.1, sigma = 0.1 + 0.1i is -2 Re sqrt(1 - i)
  CHECK(algebraic_rate(Complex(0.1, 0.1), 0.1) ==
        doctest::Approx(-2.0 * std::pow(2.0, 0.25) * std::cos(std::numbers::pi / 8)).epsilon(1e-14));

  for (int N : {0, 7, 40}) {
    RatePrediction p0 = predicted_rates(0, omega, sigma, 1.0, N, 2.0, 3.0);
    const double q = std::abs((1.0 + I * sigma * omega) / (1.0 - I * sigma * omega));
    CHECK(p0.exp_term == doctest::Approx(2.0 * std::pow(q, N + 1)).epsilon(1e-12));
    CHECK(p0.alg_term == doctest::Approx(3.0 * std::exp(-2.0 * std::sqrt(2.0 * (N + 1.0) / sigma).real())).epsilon(1e-12));
    CHECK(p0.total() == doctest::Approx(p0.exp_term + p0.alg_term));

    RatePrediction pR = predicted_rates(0, omega, sigma, 7.0, N, 2.0, 3.0);
    CHECK(pR.exp_term == p0.exp_term);
    RatePrediction pw = predicted_rates(0, Complex(4.0, -0.1), sigma, 1.0, N, 2.0, 3.0);
    CHECK(pw.alg_term == p0.alg_term);
    RatePrediction p4 = predicted_rates(4, omega, sigma, 1.0, N, 2.0, 3.0);
    CHECK(p4.alg_term == doctest::Approx(p0.alg_term * std::pow(N + 1.0, 2.0)).epsilon(1e-12));
    CHECK(p4.exp_term >= 0.0);
  }
  CHECK_THROWS_AS(predicted_rates(0, omega, Complex(0.3, -0.3), 1.0, 5, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(predicted_rates(0, omega, sigma, -1.0, 5, 1.0, 1.0), DomainError);
}

TEST_CASE("rate constants and slopes on synthetic data") {
  const Complex omega(10.0, -0.5), sigma(0.3, 0.3);
  const int nu = 2;
  const double R = 1.0;
  std::vector<double> e(81);
  for (int N = 0; N <= 80; ++N) e[N] = predicted_rates(nu, omega, sigma, R, N, 0.7, 0.0).exp_term;
  RateConstants c = fit_rate_constants(e, nu, omega, sigma, R, {5, 10, 15}, {});
  CHECK(c.c1 == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(c.c2 == 0.0);
  for (int N = 0; N <= 80; ++N) e[N] = predicted_rates(nu, omega, sigma, R, N, 0.0, 4.0).alg_term;
  c = fit_rate_constants(e, nu, omega, sigma, R, {}, {60, 70, 80});
  CHECK(c.c2 == doctest::Approx(4.0).epsilon(1e-12));
  CHECK_THROWS_AS(fit_rate_constants(e, nu, omega, sigma, R, {100}, {}), DomainError);

  std::vector<double> x, y;
  for (int k = 0; k < 30; ++k) {
    x.push_back(k);
    y.push_back(0.5 * std::exp(-0.8 * k));
  }
  SlopeFit f = log_slope(x, y);
  CHECK(f.slope == doctest::Approx(-0.8).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(std::log(0.5)).epsilon(1e-12));
  int inside = 0;
  for (double v : y) inside += (v >= 1e-11 && v <= 1e-2);
  CHECK(f.points == inside);
}
