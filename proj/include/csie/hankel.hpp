// Copyright (c) 2026 The csie Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "csie/error.hpp"

namespace csie::hankel {

// Spherical Hankel function of the first kind,
// h_nu(z) = -(i/z) exp(iz) sum_m (-i)^nu i^m a_m z^-m, a_m = (nu+m)! / (m! (nu-m)! 2^m).
Complex eval_h(int nu, Complex z);
Complex eval_h_prime(int nu, Complex z);
// From the spherical Bessel equation; used for Newton steps on h'.
Complex eval_h_second(int nu, Complex z);

// a_0..a_nu of the polynomial part.
std::vector<double> polynomial_coefficients(int nu);

// Ascending coefficients of z^{nu+2} exp(-iz) h_nu'(z), a polynomial of degree nu+1.
std::vector<Complex> derivative_polynomial(int nu);

struct ComplexBox {
  double re_min = 0.0, re_max = 0.0, im_min = 0.0, im_max = 0.0;
  bool empty() const { return !(re_max > re_min) || !(im_max > im_min); }
  bool contains(Complex z) const {
    return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
  }
};

// Roots of h_nu' inside box, sorted by real part, each Newton-polished to
// |h_nu'| < 1e-12. Roots on the imaginary axis (nu = 0 has its only root at -i)
// are returned when the box admits them.
std::vector<Complex> resonance_roots(int nu, const ComplexBox& box);

// alpha_{n,k}(a) = int_0^inf exp(-x) phi_n(x) / (a+x)^k dx.
// k = 1 uses the single-integral form on a ray through its saddle point and
// works well past n = 200; k >= 2 integrates the definition on the real axis.
Complex alpha(int n, int k, Complex a);
Complex alpha_lemma(int n, Complex a);
Complex alpha_definition(int n, int k, Complex a);

// exp(a - 2 sqrt(2a(n+1))) sqrt(pi) (2a(n+1))^{-1/4}
Complex alpha_asymptotic(int n, Complex a);

// beta_{n,k}(a) = int phi_n phi_k / (a+x) dx = alpha_{n,1}(a) L_k(-2a) for n >= k.
Complex beta(int n, int k, Complex a);

void check_off_cut(Complex a, const char* who);

}  // namespace csie::hankel
