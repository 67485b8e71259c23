// Copyright (c) 2026 The csie Authors
// SPDX-License-Identifier: Apache-2.0

#include "csie/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "csie/laguerre.hpp"

namespace csie::assembly {

namespace {

void check_N(int N, const char* who) {
  if (N < 0) throw DomainError(std::string(who) + ": negative N");
}

struct Tables {
  Eigen::MatrixXd values;
  Eigen::MatrixXd derivatives;
  std::vector<double> nodes;
};

Tables tabulate(int N, const QuadratureRule& rule, RadialBasis basis) {
  LaguerreBasis lb(N);
  BasisTable t = lb.tabulate(rule);
  Tables out{std::move(t.values), std::move(t.derivatives), std::move(t.nodes)};
  if (basis == RadialBasis::sparse) {
    const Eigen::MatrixXd phi = out.values;
    for (int n = N; n >= 1; --n) {
      out.values.col(n) = phi.col(n) - phi.col(n - 1);
      out.derivatives.col(n) = -(phi.col(n) + phi.col(n - 1));
    }
    out.derivatives.col(0) = -phi.col(0);
  }
  return out;
}

// A(n,k) = sum_i p_i U(i,n) U(i,k), mirrored from the upper triangle so it is exactly symmetric
Eigen::MatrixXcd weighted_gram(const Eigen::MatrixXd& U, const Eigen::VectorXcd& p) {
  const int n = static_cast<int>(U.cols());
  // two real products instead of one complex one
  const Eigen::MatrixXd re = U.transpose() * (p.real().asDiagonal() * U);
  const Eigen::MatrixXd im = U.transpose() * (p.imag().asDiagonal() * U);
  Eigen::MatrixXcd A(n, n);
  A.real() = re;
  A.imag() = im;
  for (int j = 0; j < n; ++j)
    for (int i = j + 1; i < n; ++i) A(i, j) = A(j, i);
  return A;
}

RadialOperator make_op(std::string form, const ScalingConfig& cfg, RadialBasis basis, Eigen::MatrixXcd A) {
  RadialOperator op;
  op.form = std::move(form);
  op.cfg = cfg;
  op.basis = basis;
  op.entries = std::move(A);
  const double largest = op.entries.size() ? op.entries.cwiseAbs().maxCoeff() : 0.0;
  op.structure = structure_report(op.entries, kStructureTol * std::max(largest, 1e-300));
  return op;
}

Eigen::VectorXcd polynomial_weight(const std::vector<double>& x, Complex scale, Complex s) {
  Eigen::VectorXcd p(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    Complex g = 1.0 + s * x[i];
    p(i) = scale * g * g;
  }
  return p;
}

Eigen::MatrixXcd weighted_mass_matrix(int N, const ScalingConfig& cfg, const PotentialSpec& pot, int n_nodes,
                                      RadialBasis basis) {
  QuadratureRule rule = gauss_laguerre(n_nodes, 2.0);
  Tables t = tabulate(N, rule, basis);
  Eigen::VectorXcd p = polynomial_weight(t.nodes, cfg.sigma, cfg.s());
  for (std::size_t i = 0; i < t.nodes.size(); ++i) p(i) *= pot.weight(t.nodes[i], cfg.sigma);
  return weighted_gram(t.values, p);
}

}  // namespace

void ScalingConfig::validate() const {
  if (!std::isfinite(sigma.real()) || !std::isfinite(sigma.imag()) || !(sigma.imag() > 0.0))
    throw DomainError("ScalingConfig: requires Im(sigma) > 0, got sigma=" + format_complex(sigma));
  if (!(R > 0.0) || !std::isfinite(R)) throw DomainError("ScalingConfig: requires R > 0");
}

const char* to_string(RadialBasis b) { return b == RadialBasis::sparse ? "sparse" : "orthogonal"; }

RadialBasis basis_from_string(const std::string& s) {
  if (s == "orthogonal") return RadialBasis::orthogonal;
  if (s == "sparse") return RadialBasis::sparse;
  throw DomainError("unknown radial basis '" + s + "' (expected orthogonal or sparse)");
}

Complex PotentialSpec::weight(double xi, Complex sigma) const {
  if (eps_tilde == 0.0 || !profile) return 1.0;
  Complex v = profile(scale_argument ? sigma * xi : Complex(xi));
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw DomainError("potential '" + name + "' not finite at xi=" + std::to_string(xi));
  Complex w = 1.0 + eps_tilde * v;
  if (w == Complex(0.0))
    throw DomainError("potential '" + name + "': weight 1 + eps p vanishes at xi=" + std::to_string(xi));
  return w;
}

PotentialSpec bump_potential(double eps_tilde, bool scale_argument) {
  PotentialSpec p;
  p.eps_tilde = eps_tilde;
  p.scale_argument = scale_argument;
  p.name = "bump";
  p.profile = [](Complex x) {
    Complex d = x - 1.0;
    Complex d2 = d * d;
    return d2 / (1.0 + d2 * d2);
  };
  return p;
}

PotentialSpec constant_potential(double eps_tilde) {
  PotentialSpec p;
  p.eps_tilde = eps_tilde;
  p.name = "constant";
  p.profile = [](Complex) { return Complex(1.0); };
  return p;
}

Eigen::MatrixXd basis_transform(int N, RadialBasis basis) {
  check_N(N, "basis_transform");
  Eigen::MatrixXd T = Eigen::MatrixXd::Identity(N + 1, N + 1);
  if (basis == RadialBasis::sparse)
    for (int n = 1; n <= N; ++n) T(n, n - 1) = -1.0;
  return T;
}

RadialOperator assemble_mass0(int N, const ScalingConfig& cfg, RadialBasis basis) {
  check_N(N, "assemble_mass0");
  cfg.validate();
  Eigen::MatrixXd T = basis_transform(N, basis);
  Eigen::MatrixXd G = 0.5 * T * T.transpose();
  return make_op("mass0", cfg, basis, cfg.sigma * G.cast<Complex>());
}

RadialOperator assemble_mass1(int N, const ScalingConfig& cfg, RadialBasis basis) {
  check_N(N, "assemble_mass1");
  cfg.validate();
  LaguerreBasis lb(N);
  QuadratureRule rule = lb.rule_for_weight_degree(2);
  Tables t = tabulate(N, rule, basis);
  return make_op("mass1", cfg, basis, weighted_gram(t.values, polynomial_weight(t.nodes, cfg.sigma, cfg.s())));
}

RadialOperator assemble_stiffness(int N, const ScalingConfig& cfg, RadialBasis basis) {
  check_N(N, "assemble_stiffness");
  cfg.validate();
  LaguerreBasis lb(N);
  QuadratureRule rule = lb.rule_for_weight_degree(2);
  Tables t = tabulate(N, rule, basis);
  return make_op("stiffness", cfg, basis,
                 weighted_gram(t.derivatives, polynomial_weight(t.nodes, 1.0 / cfg.sigma, cfg.s())));
}

RadialOperator assemble_weighted_mass(int N, const ScalingConfig& cfg, const PotentialSpec& pot, int n_nodes,
                                      RadialBasis basis) {
  check_N(N, "assemble_weighted_mass");
  cfg.validate();
  if (n_nodes < N + 4)
    throw DomainError("assemble_weighted_mass: n_nodes=" + std::to_string(n_nodes) + " below N+4");
  if (pot.eps_tilde == 0.0 || !pot.profile) {
    RadialOperator op = assemble_mass1(N, cfg, basis);
    op.form = "weighted_mass";
    return op;
  }
  Eigen::MatrixXcd coarse = weighted_mass_matrix(N, cfg, pot, n_nodes, basis);
  Eigen::MatrixXcd fine = weighted_mass_matrix(N, cfg, pot, 2 * n_nodes, basis);
  double change = (fine - coarse).cwiseAbs().maxCoeff();
  double scale = fine.cwiseAbs().maxCoeff();
  if (change > 1e-6 * scale)
    throw NumericError("assemble_weighted_mass: entries change by " + std::to_string(change / scale) +
                       " (relative) under node doubling at n_nodes=" + std::to_string(n_nodes) +
                       ", N=" + std::to_string(N));
  return make_op("weighted_mass", cfg, basis, std::move(fine));
}

Eigen::VectorXd trace_vector(int N) { return trace_vector(N, RadialBasis::sparse); }

Eigen::VectorXd trace_vector(int N, RadialBasis basis) {
  check_N(N, "trace_vector");
  if (basis == RadialBasis::orthogonal) return Eigen::VectorXd::Ones(N + 1);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(N + 1);
  e(0) = 1.0;
  return e;
}

StructureInfo structure_report(const Eigen::MatrixXcd& A, double tol) {
  if (!(tol > 0.0)) throw DomainError("structure_report: tol must be > 0");
  const int n = static_cast<int>(A.rows());
  StructureInfo s;
  s.tol = tol;
  std::size_t far_total = 0, far_above = 0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      bool above = std::abs(A(i, j)) > tol;
      int off = std::abs(i - j);
      if (above) {
        ++s.nnz;
        s.bandwidth = std::max(s.bandwidth, off);
      }
      if (off > 2) {
        ++far_total;
        if (above) ++far_above;
      }
    }
  s.dense = n > 1 && s.bandwidth == n - 1 && far_total > 0 && far_above * 10 > far_total;
  return s;
}

StructureInfo structure_report(const RadialOperator& op, double tol) { return structure_report(op.entries, tol); }

double angular_eigenvalue(int nu, double R) {
  if (nu < 0) throw DomainError("angular_eigenvalue: negative nu");
  return double(nu) * (nu + 1) / (R * R);
}

}  // namespace csie::assembly
