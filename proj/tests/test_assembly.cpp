// Copyright (c) 2026 The csie Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "csie/assembly.hpp"
#include "csie/laguerre.hpp"

using namespace csie;
using namespace csie::assembly;

namespace {

using LC = std::complex<long double>;
using Poly = std::vector<long double>;  // ascending coefficients

// L_n(2x) as a polynomial in x
Poly laguerre_poly(int n) {
  Poly p(n + 1);
  long double binom = 1.0L, fact = 1.0L;
  for (int k = 0; k <= n; ++k) {
    if (k > 0) {
      binom = binom * (n - k + 1) / k;
      fact *= k;
    }
    p[k] = ((k % 2) ? -1.0L : 1.0L) * binom * std::pow(2.0L, k) / fact;
  }
  return p;
}

Poly mul(const Poly& a, const Poly& b) {
  Poly c(a.size() + b.size() - 1, 0.0L);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

// int_0^inf exp(-2x) (1 + s x)^2 p(x) dx from x^m -> m! / 2^{m+1}
LC moment(const Poly& p, LC s) {
  LC total = 0.0L;
  long double fact = 1.0L;
  std::vector<long double> mom(p.size() + 2);
  for (std::size_t m = 0; m < mom.size(); ++m) {
    if (m > 0) fact *= m;
    mom[m] = fact / std::pow(2.0L, m + 1);
  }
  for (std::size_t m = 0; m < p.size(); ++m) total += p[m] * (mom[m] + 2.0L * s * mom[m + 1] + s * s * mom[m + 2]);
  return total;
}

LC moment_plain(const Poly& p) {
  long double total = 0.0L, fact = 1.0L;
  for (std::size_t m = 0; m < p.size(); ++m) {
    if (m > 0) fact *= m;
    total += p[m] * fact / std::pow(2.0L, m + 1);
  }
  return total;
}

// phi_n' = exp(-x) (P_n' - P_n)
Poly derivative_factor(const Poly& p) {
  Poly d(p.size(), 0.0L);
  for (std::size_t k = 0; k < p.size(); ++k) d[k] -= p[k];
  for (std::size_t k = 1; k < p.size(); ++k) d[k - 1] += k * p[k];
  return d;
}

enum class Form { mass0, mass1, stiffness };

Eigen::MatrixXcd moment_oracle(Form form, int n, Complex sigma, double R) {
  const LC sg(sigma.real(), sigma.imag());
  const LC s = sg / static_cast<long double>(R);
  Eigen::MatrixXcd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Poly a = laguerre_poly(i), b = laguerre_poly(j);
      LC v;
      if (form == Form::mass0) v = sg * moment_plain(mul(a, b));
      else if (form == Form::mass1) v = sg * moment(mul(a, b), s);
      else v = moment(mul(derivative_factor(a), derivative_factor(b)), s) / sg;
      A(i, j) = Complex(static_cast<double>(v.real()), static_cast<double>(v.imag()));
    }
  return A;
}

double max_abs(const Eigen::MatrixXcd& A) { return A.cwiseAbs().maxCoeff(); }

double max_far(const Eigen::MatrixXcd& A, int band) {
  double m = 0.0;
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j)
      if (std::abs(i - j) > band) m = std::max(m, std::abs(A(i, j)));
  return m;
}

}  // namespace

TEST_CASE("scaling config and basis names") {
  CHECK_NOTHROW(ScalingConfig{Complex(0.3, 0.3), 1.0}.validate());
  CHECK_THROWS_AS((ScalingConfig{Complex(0.3, 0.0), 1.0}.validate()), DomainError);
  CHECK_THROWS_AS((ScalingConfig{Complex(0.3, -0.1), 1.0}.validate()), DomainError);
  CHECK_THROWS_AS((ScalingConfig{Complex(0.3, 0.3), 0.0}.validate()), DomainError);
  CHECK(basis_from_string("sparse") == RadialBasis::sparse);
  CHECK(basis_from_string("orthogonal") == RadialBasis::orthogonal);
  CHECK(std::string(to_string(RadialBasis::sparse)) == "sparse");
  CHECK_THROWS_AS(basis_from_string("banded"), DomainError);
  CHECK(angular_eigenvalue(3, 2.0) == 3.0);
  CHECK_THROWS_AS(assemble_mass1(-1, ScalingConfig{}), DomainError);
}

TEST_CASE("mass0") {
  RadialOperator m = assemble_mass0(0, ScalingConfig{Complex(0.0, 1.0), 1.0});
  REQUIRE(m.dim() == 1);
  CHECK(m.entries(0, 0) == Complex(0.0, 0.5));

  const Complex sigma(0.3, 0.7);
  RadialOperator a = assemble_mass0(30, ScalingConfig{sigma, 2.0});
  CHECK(max_far(a.entries, 0) < 1e-14);
  for (int n = 0; n <= 30; ++n) CHECK(std::abs(a.entries(n, n) - 0.5 * sigma) < 1e-13);
  CHECK(max_abs(a.entries.topLeftCorner(6, 6) - moment_oracle(Form::mass0, 6, sigma, 2.0)) < 1e-13);
  CHECK(a.structure.bandwidth == 0);
  CHECK(a.form == "mass0");

  // homogeneity in sigma
  RadialOperator b = assemble_mass0(30, ScalingConfig{Complex(-1.0, 2.0), 2.0});
  CHECK(max_abs(a.entries / sigma - b.entries / Complex(-1.0, 2.0)) < 1e-15);
}

TEST_CASE("mass1") {
  const Complex sigma(0.3, 0.7);
  const double R = 1.5;
  RadialOperator m = assemble_mass1(40, ScalingConfig{sigma, R});
  CHECK(max_far(m.entries, 2) < 1e-13 * max_abs(m.entries));
  CHECK(m.structure.bandwidth == 2);
  const Complex s = sigma / R;
  CHECK(std::abs(m.entries(0, 0) - sigma * (0.5 + s / 2.0 + s * s / 4.0)) < 1e-14);
  CHECK(max_abs(m.entries.topLeftCorner(6, 6) - moment_oracle(Form::mass1, 6, sigma, R)) < 1e-13);

  // a second (sigma, R) pair
  RadialOperator m2 = assemble_mass1(10, ScalingConfig{Complex(2.0, 0.1), 0.25});
  CHECK(max_abs(m2.entries.topLeftCorner(6, 6) - moment_oracle(Form::mass1, 6, Complex(2.0, 0.1), 0.25)) <
        1e-12 * max_abs(m2.entries));

  // sigma -> 0: m1 / sigma -> diag(1/2)
  const Complex tiny(0.0, 1e-8);
  RadialOperator t = assemble_mass1(15, ScalingConfig{tiny, 1.0});
  // the first-order term is s times the x-moments, which grow like n
  CHECK(max_abs(t.entries / tiny - 0.5 * Eigen::MatrixXcd::Identity(16, 16)) < 16 * std::abs(tiny));
}

TEST_CASE("stiffness") {
  const Complex sigma(0.3, 0.7);
  const double R = 1.5;
  const Complex s = sigma / R;
  RadialOperator k = assemble_stiffness(20, ScalingConfig{sigma, R});
  CHECK(std::abs(k.entries(0, 0) - (0.5 + s / 2.0 + s * s / 4.0) / sigma) < 1e-14);
  CHECK(std::abs(k.entries(0, 1) - (1.0 + s / 2.0) / sigma) < 1e-14);
  CHECK(std::abs(k.entries(0, 2) - (1.0 - s * s / 4.0) / sigma) < 1e-14);
  CHECK(std::abs(k.entries(0, 3) - 1.0 / sigma) < 1e-14);
  CHECK(max_abs(k.entries.topLeftCorner(6, 6) - moment_oracle(Form::stiffness, 6, sigma, R)) < 1e-12);

  RadialOperator k2 = assemble_stiffness(8, ScalingConfig{Complex(-0.4, 1.2), 3.0});
  CHECK(max_abs(k2.entries.topLeftCorner(6, 6) - moment_oracle(Form::stiffness, 6, Complex(-0.4, 1.2), 3.0)) <
        1e-12 * max_abs(k2.entries));

  StructureInfo st = structure_report(k, 1e-10);
  CHECK(st.dense);
  CHECK(st.bandwidth == 20);
}

TEST_CASE("all forms are complex symmetric") {
  const ScalingConfig cfg{Complex(0.2, 0.9), 1.3};
  for (RadialBasis basis : {RadialBasis::orthogonal, RadialBasis::sparse}) {
    for (const RadialOperator& op :
         {assemble_mass0(25, cfg, basis), assemble_mass1(25, cfg, basis), assemble_stiffness(25, cfg, basis),
          assemble_weighted_mass(25, cfg, bump_potential(1.5), 140, basis)}) {
      CHECK(op.entries == op.entries.transpose());
      CHECK(op.entries.allFinite());
    }
  }
}

TEST_CASE("sparse basis is the transformed orthogonal basis") {
  const ScalingConfig cfg{Complex(0.4, 0.6), 0.8};
  const int N = 20;
  Eigen::MatrixXcd T = basis_transform(N, RadialBasis::sparse).cast<Complex>();
  for (int n = 1; n <= N; ++n) CHECK(T(n, n - 1) == Complex(-1.0));
  auto compare = [&](const RadialOperator& orth, const RadialOperator& sp) {
    Eigen::MatrixXcd expect = T * orth.entries * T.transpose();
    return max_abs(expect - sp.entries) / max_abs(expect);
  };
  CHECK(compare(assemble_mass0(N, cfg), assemble_mass0(N, cfg, RadialBasis::sparse)) < 1e-15);
  CHECK(compare(assemble_mass1(N, cfg), assemble_mass1(N, cfg, RadialBasis::sparse)) < 1e-13);
  CHECK(compare(assemble_stiffness(N, cfg), assemble_stiffness(N, cfg, RadialBasis::sparse)) < 1e-13);

  CHECK(structure_report(assemble_mass0(N, cfg, RadialBasis::sparse), 1e-12).bandwidth == 1);
  CHECK(structure_report(assemble_mass1(N, cfg, RadialBasis::sparse), 1e-12).bandwidth == 3);
  StructureInfo ks = structure_report(assemble_stiffness(N, cfg, RadialBasis::sparse), 1e-10);
  CHECK(ks.bandwidth == 3);
  CHECK_FALSE(ks.dense);
}

TEST_CASE("weighted mass") {
  const ScalingConfig cfg{Complex(0.3, 0.5), 1.0};
  const int N = 20;
  RadialOperator m1 = assemble_mass1(N, cfg);
  RadialOperator w0 = assemble_weighted_mass(N, cfg, bump_potential(0.0), 100);
  CHECK(max_abs(w0.entries - m1.entries) < 1e-13);

  RadialOperator c = assemble_weighted_mass(N, cfg, constant_potential(0.7), 100);
  CHECK(max_abs(c.entries - 1.7 * m1.entries) < 1e-14 * max_abs(c.entries));

  // at this sigma the scaled profile has a pole near the ray, hence the large rule
  for (bool scaled : {false, true}) {
    RadialOperator b0 = assemble_weighted_mass(N, cfg, bump_potential(0.0, scaled), 800);
    RadialOperator b1 = assemble_weighted_mass(N, cfg, bump_potential(1.0, scaled), 800);
    for (double eps : {0.5, 1.5}) {
      RadialOperator be = assemble_weighted_mass(N, cfg, bump_potential(eps, scaled), 800);
      CHECK(max_abs(be.entries - (b0.entries + eps * (b1.entries - b0.entries))) < 1e-12 * max_abs(be.entries));
    }
  }

  CHECK_THROWS_AS(assemble_weighted_mass(N, cfg, bump_potential(1.0), N + 3), DomainError);
  CHECK_THROWS_AS(assemble_weighted_mass(N, cfg, constant_potential(-1.0), 100), DomainError);

  PotentialSpec nan_pot;
  nan_pot.eps_tilde = 1.0;
  nan_pot.name = "nan";
  nan_pot.profile = [](Complex) { return Complex(std::numeric_limits<double>::quiet_NaN()); };
  CHECK_THROWS_AS(assemble_weighted_mass(N, cfg, nan_pot, 100), DomainError);

  PotentialSpec step;
  step.eps_tilde = 1.0;
  step.name = "step";
  step.profile = [](Complex x) { return Complex(x.real() < 0.5 ? 0.0 : 1.0); };
  CHECK_THROWS_AS(assemble_weighted_mass(N, cfg, step, 30), NumericError);
}

TEST_CASE("trace vector") {
  CHECK(trace_vector(0).size() == 1);
  CHECK(trace_vector(0)(0) == 1.0);
  Eigen::VectorXd e = trace_vector(5);
  CHECK(e.size() == 6);
  CHECK(e(0) == 1.0);
  CHECK(e.tail(5).cwiseAbs().maxCoeff() == 0.0);
  CHECK(e.sum() == 1.0);
  CHECK(trace_vector(5, RadialBasis::orthogonal) == Eigen::VectorXd::Ones(6));

  // the functional reproduces u(0) for u = sum c_n b_n in either basis
  const int N = 12;
  Eigen::VectorXd c = Eigen::VectorXd::LinSpaced(N + 1, -1.0, 2.0);
  for (RadialBasis basis : {RadialBasis::orthogonal, RadialBasis::sparse}) {
    Eigen::MatrixXd T = basis_transform(N, basis);
    Eigen::VectorXd phi0(N + 1);
    for (int n = 0; n <= N; ++n) phi0(n) = eval_phi(n, 0, 0.0);
    const double u0 = c.dot(T * phi0);
    CHECK(std::abs(c.dot(trace_vector(N, basis)) - u0) < 1e-13);
  }
}

TEST_CASE("structure report") {
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(5, 5);
  A(0, 2) = A(2, 0) = 1e-3;
  StructureInfo s = structure_report(A, 1e-6);
  CHECK(s.bandwidth == 2);
  CHECK(s.nnz == 7);
  CHECK_FALSE(s.dense);
  CHECK(structure_report(A, 1e-2).bandwidth == 0);
  CHECK_THROWS_AS(structure_report(A, 0.0), DomainError);
  CHECK(structure_report(Eigen::MatrixXcd::Ones(6, 6), 0.5).dense);

  const ScalingConfig cfg{Complex(0.3, 0.3), 1.0};
  CHECK(structure_report(assemble_mass0(20, cfg), 1e-12).bandwidth == 0);
  CHECK(structure_report(assemble_mass1(20, cfg), 1e-12).bandwidth == 2);
  CHECK(structure_report(assemble_stiffness(20, cfg), 1e-10).dense);
}
