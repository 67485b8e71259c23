// Copyright (c) 2026 The csie Authors
// SPDX-License-Identifier: Apache-2.0

#include "csie/hankel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "csie/laguerre.hpp"

namespace csie::hankel {

namespace {

constexpr Complex I(0.0, 1.0);

void check_nu(int nu) {
  if (nu < 0) throw DomainError("hankel: negative index nu=" + std::to_string(nu));
}

void check_z(Complex z) {
  if (z == Complex(0.0)) throw DomainError("hankel: z = 0 is a pole");
}

Complex ipow(int p) {
  static const Complex table[4] = {1.0, I, -1.0, -I};
  return table[((p % 4) + 4) % 4];
}

// P(u) = (-i)^nu sum_m i^m a_m u^m and its derivative, so that h = -i e^{iz} u P(u), u = 1/z.
// The terms cancel when |h| is small next to |e^{iz}/z| (large nu, Im z < 0), so
// Horner runs in extended precision.
std::pair<Complex, Complex> polynomial_part(int nu, Complex u) {
  using Wide = std::complex<long double>;
  std::vector<long double> a(nu + 1);
  a[0] = 1.0L;
  for (int m = 1; m <= nu; ++m) a[m] = a[m - 1] * (nu + m) * (nu - m + 1) / (2.0L * m);
  const Wide uw(u);
  Wide p = 0.0L, dp = 0.0L;
  for (int m = nu; m >= 0; --m) {
    dp = dp * uw + p;
    p = p * uw + Wide(ipow(m)) * a[m];
  }
  Complex pre = ipow(-nu);
  return {pre * Complex(p), pre * Complex(dp)};
}

template <class F>
Complex integrate_complex(F&& f, double lo, double hi, double tol) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, tol);
}

}  // namespace

void check_off_cut(Complex a, const char* who) {
  if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
    throw DomainError(std::string(who) + ": non-finite argument a");
  if (a.imag() == 0.0 && a.real() <= 0.0)
    throw DomainError(std::string(who) + ": a=" + format_complex(a) + " lies on the branch cut (-inf, 0]");
}

std::vector<double> polynomial_coefficients(int nu) {
  check_nu(nu);
  std::vector<double> a(nu + 1);
  a[0] = 1.0;
  for (int m = 1; m <= nu; ++m) a[m] = a[m - 1] * double(nu + m) * double(nu - m + 1) / (2.0 * m);
  return a;
}

Complex eval_h(int nu, Complex z) {
  check_nu(nu);
  check_z(z);
  Complex u = 1.0 / z;
  return -I * std::exp(I * z) * u * polynomial_part(nu, u).first;
}

Complex eval_h_prime(int nu, Complex z) {
  check_nu(nu);
  check_z(z);
  Complex u = 1.0 / z;
  auto [p, dp] = polynomial_part(nu, u);
  // d/dz (u P(u)) = -u^2 (P + u P')
  return -I * std::exp(I * z) * (I * u * p - u * u * (p + u * dp));
}

Complex eval_h_second(int nu, Complex z) {
  Complex h = eval_h(nu, z);
  Complex hp = eval_h_prime(nu, z);
  return -(2.0 / z) * hp - (1.0 - double(nu) * (nu + 1) / (z * z)) * h;
}

std::vector<Complex> derivative_polynomial(int nu) {
  auto a = polynomial_coefficients(nu);
  std::vector<Complex> p(nu + 2, 0.0);
  for (int m = 0; m <= nu; ++m) {
    Complex c = ipow(-nu) * ipow(m) * a[m];
    p[nu + 1 - m] += c;
    p[nu - m] += I * double(m + 1) * c;
  }
  return p;
}

std::vector<Complex> resonance_roots(int nu, const ComplexBox& box) {
  check_nu(nu);
  if (box.empty()) return {};
  auto p = derivative_polynomial(nu);
  const int deg = nu + 1;
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(deg, deg);
  for (int j = 0; j < deg; ++j) C(0, j) = -p[deg - 1 - j] / p[deg];
  for (int j = 1; j < deg; ++j) C(j, j - 1) = 1.0;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
  if (es.info() != Eigen::Success)
    throw NumericError("resonance_roots: companion eigensolve failed for nu=" + std::to_string(nu));

  std::vector<Complex> roots;
  for (int j = 0; j < deg; ++j) {
    Complex z = es.eigenvalues()(j);
    for (int it = 0; it < 50; ++it) {
      Complex f = eval_h_prime(nu, z);
      if (std::abs(f) < 1e-15) break;
      Complex step = f / eval_h_second(nu, z);
      z -= step;
      if (std::abs(step) < 1e-16 * std::abs(z)) break;
    }
    if (!box.contains(z)) continue;
    if (std::abs(eval_h_prime(nu, z)) >= 1e-12)
      throw NumericError("resonance_roots: Newton polish stalled for nu=" + std::to_string(nu) +
                         " at z=" + format_complex(z));
    roots.push_back(z);
  }
  std::sort(roots.begin(), roots.end(), [](Complex x, Complex y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return roots;
}

Complex alpha_lemma(int n, Complex a) {
  if (n < 0) throw DomainError("alpha: negative index n=" + std::to_string(n));
  check_off_cut(a, "alpha");

  const Complex two_a = 2.0 * a;
  const Complex disc = std::sqrt((two_a + 1.0) * (two_a + 1.0) + 8.0 * a * double(n));
  const Complex saddle = 0.5 * (-(two_a + 1.0) + disc);

  // The ray exp(i theta) (0, inf) must stay on the side of the real axis where
  // the pole -2a is not, and must keep exp(-xi) decaying.
  double arg_a = std::arg(a);
  double theta = std::abs(saddle) > 1e-12 ? std::arg(saddle) : 0.5 * arg_a;
  theta = std::clamp(theta, std::min(0.0, arg_a), std::max(0.0, arg_a));
  theta = std::clamp(theta, -1.2, 1.2);
  const Complex dir = std::exp(I * theta);
  const double dn = n;

  auto log_integrand = [&](double t) -> Complex {
    Complex xi = t * dir;
    Complex v = -xi - (dn + 1.0) * std::log(two_a + xi) + I * theta;
    if (n > 0) v += dn * (std::log(t) + I * theta);
    return v;
  };

  const double t_star = std::max(std::abs(saddle), 1e-3);
  double ref = -std::numeric_limits<double>::infinity();
  for (int j = 0; j <= 60; ++j) {
    double t = t_star * std::pow(10.0, -3.0 + 6.0 * j / 60.0);
    ref = std::max(ref, log_integrand(t).real());
  }
  if (n == 0) ref = std::max(ref, log_integrand(0.0).real());

  auto g = [&](double t) -> Complex {
    if (t <= 0.0) return n == 0 ? std::exp(log_integrand(0.0) - ref) : Complex(0.0);
    return std::exp(log_integrand(t) - ref);
  };
  const double tol = 1e-12;
  Complex total = integrate_complex(g, 0.0, t_star, tol) +
                  integrate_complex(g, t_star, 4.0 * t_star + 40.0, tol) +
                  integrate_complex(g, 4.0 * t_star + 40.0, std::numeric_limits<double>::infinity(), tol);
  return total * std::exp(ref);
}

Complex alpha_definition(int n, int k, Complex a) {
  if (n < 0) throw DomainError("alpha: negative index n=" + std::to_string(n));
  if (k < 1) throw DomainError("alpha: pole order k must be >= 1, got " + std::to_string(k));
  if (n > 200) throw DomainError("alpha: definition route limited to n <= 200, got " + std::to_string(n));
  check_off_cut(a, "alpha");

  auto f = [&](double x) -> Complex {
    return std::exp(-2.0 * x) * eval_laguerre(n, 0, 2.0 * x) / std::pow(a + x, k);
  };
  // oscillatory part lives on [0, 2n + 10]; split it so each piece holds a few zeros
  const double osc_end = 2.0 * n + 10.0;
  const int pieces = 1 + n / 4;
  Complex total = 0.0;
  double lo = 0.0;
  for (int p = 1; p <= pieces; ++p) {
    double hi = osc_end * p / pieces;
    total += integrate_complex(f, lo, hi, 1e-12);
    lo = hi;
  }
  total += integrate_complex(f, osc_end, std::numeric_limits<double>::infinity(), 1e-12);
  return total;
}

Complex alpha(int n, int k, Complex a) {
  if (k < 1) throw DomainError("alpha: pole order k must be >= 1, got " + std::to_string(k));
  return k == 1 ? alpha_lemma(n, a) : alpha_definition(n, k, a);
}

Complex alpha_asymptotic(int n, Complex a) {
  check_off_cut(a, "alpha_asymptotic");
  Complex s = 2.0 * a * double(n + 1);
  return std::exp(a - 2.0 * std::sqrt(s)) * std::sqrt(std::numbers::pi) * std::pow(s, -0.25);
}

Complex beta(int n, int k, Complex a) {
  if (k < 0 || n < k)
    throw DomainError("beta: requires n >= k >= 0, got n=" + std::to_string(n) + " k=" + std::to_string(k));
  return alpha_lemma(n, a) * eval_laguerre(k, 0, -2.0 * a);
}

}  // namespace csie::hankel
