// Copyright (c) 2026 The csie Authors
// SPDX-License-Identifier: Apache-2.0

#include "csie/experiments.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "csie/approx.hpp"
#include "csie/assembly.hpp"
#include "csie/eig.hpp"
#include "csie/hankel.hpp"
#include "csie/laguerre.hpp"
#include "csie/pml.hpp"

#ifndef CSIE_VERSION
#define CSIE_VERSION "unknown"
#endif

namespace csie::experiments {

using nlohmann::ordered_json;
using Rows = std::vector<std::vector<std::string>>;

namespace {

constexpr Complex I{0.0, 1.0};

struct TaskResult {
  Rows rows;
  ordered_json quadrature;
};
using Task = std::function<TaskResult()>;

std::string c_str(Complex z) { return format_complex(z); }

ordered_json cj(Complex z) { return ordered_json::array({z.real(), z.imag()}); }

// Runs body and attaches the tuple to any numeric or domain failure.
template <class F>
TaskResult guarded(const std::string& tuple, F&& body) {
  try {
    return body();
  } catch (const TupleError&) {
    throw;
  } catch (const NumericError& e) {
    throw TupleError(tuple, e.what());
  } catch (const DomainError& e) {
    throw TupleError(tuple, e.what());
  }
}

RunResult collect(const std::vector<Task>& tasks, int threads, std::vector<std::string> header) {
  RunResult r;
  r.table.header = std::move(header);
  for (auto& t : run_pool<TaskResult>(tasks, threads)) {
    for (auto& row : t.rows) r.table.rows.push_back(std::move(row));
    if (!t.quadrature.is_null()) r.quadrature.push_back(std::move(t.quadrature));
  }
  return r;
}

eig::ResonanceSet solve_near(const eig::SeparatedProblem& p, Complex shift, const eig::ArnoldiOptions& opts) {
  try {
    return eig::shift_invert_arnoldi(p.S, p.M, shift, opts);
  } catch (const SingularMatrixError&) {
    return eig::shift_invert_arnoldi(p.S, p.M, shift * Complex(1.0, 1e-7), opts);
  }
}

eig::ArnoldiOptions arnoldi_options(const Params& p) {
  eig::ArnoldiOptions o;
  o.tol = p.real("tol");
  o.seed = static_cast<std::uint64_t>(p.integer("seed"));
  return o;
}

// ---------------------------------------------------------------- project_exp

RunResult run_project_exp(const Params& p, int threads) {
  std::vector<Task> tasks;
  const auto Ns = p.int_list("N");
  for (Complex b : p.complex_list("b"))
    tasks.push_back([=] {
      return guarded("b=" + c_str(b), [&] {
        TaskResult t;
        for (int N : Ns) {
          double closed = approx::exp_tail_error(b, N);
          double quad = approx::exp_tail_error_quadrature(b, N);
          t.rows.push_back({fmt(b.real()), fmt(b.imag()), fmt(N), fmt(closed), fmt(quad),
                            fmt(std::abs(closed - quad))});
        }
        t.quadrature = {{"b", cj(b)},
                        {"rule", "adaptive Gauss-Kronrod 61 in long double"},
                        {"breaks", {0, 1, 4, 16, 64, "inf"}},
                        {"tolerance", 1e-13}};
        return t;
      });
    });
  return collect(tasks, threads, {"b_re", "b_im", "N", "error_closed_form", "error_quadrature", "abs_difference"});
}

// ------------------------------------------------------ hankel_error, overlay

RunResult run_hankel(const Params& p, int threads, bool overlay) {
  std::vector<Task> tasks;
  const int N_max = p.integer("N_max");
  std::vector<int> exp_window, alg_window;
  if (overlay) {
    exp_window = p.int_list("exp_window");
    alg_window = p.int_list("alg_window");
  }
  for (int nu : p.int_list("nu"))
    for (Complex omega : p.complex_list("omega"))
      for (Complex sigma : p.complex_list("sigma"))
        for (double R : p.real_list("R")) {
          std::string tuple = "nu=" + fmt(nu) + " omega=" + c_str(omega) + " sigma=" + c_str(sigma) + " R=" + fmt(R);
          tasks.push_back([=] {
            return guarded(tuple, [&] {
              TaskResult t;
              approx::HankelErrorInfo info;
              auto e = approx::hankel_error_curve(nu, omega, sigma, R, N_max, &info);
              approx::RateConstants c;
              if (overlay) c = approx::fit_rate_constants(e, nu, omega, sigma, R, exp_window, alg_window);
              const double exp_rate = approx::exponential_rate(omega, sigma);
              const double alg_rate = approx::algebraic_rate(sigma, R);
              for (int N = 0; N <= N_max; ++N) {
                std::vector<std::string> row{fmt(nu),        fmt(omega.real()), fmt(omega.imag()), fmt(sigma.real()),
                                             fmt(sigma.imag()), fmt(R),          fmt(N),            fmt(e[N])};
                if (overlay) {
                  auto pr = approx::predicted_rates(nu, omega, sigma, R, N, c.c1, c.c2);
                  for (double v : {pr.exp_term, pr.alg_term, pr.total(), c.c1, c.c2, exp_rate, alg_rate})
                    row.push_back(fmt(v));
                }
                t.rows.push_back(std::move(row));
              }
              t.quadrature = {{"nu", nu},
                              {"omega", cj(omega)},
                              {"sigma", cj(sigma)},
                              {"R", R},
                              {"gauss_laguerre_nodes", info.nodes},
                              {"validated_against_nodes", 2 * info.nodes},
                              {"weight_exponent", info.weight_exponent},
                              {"coefficients", info.coefficients},
                              {"doubling_change_rel", info.doubling_change},
                              {"norm", info.norm}};
              return t;
            });
          });
        }
  std::vector<std::string> header{"nu", "omega_re", "omega_im", "sigma_re", "sigma_im", "R", "N", "error"};
  if (overlay)
    for (const char* h : {"exp_term", "alg_term", "bound", "c1", "c2", "exp_rate", "alg_rate"}) header.push_back(h);
  return collect(tasks, threads, header);
}

// ------------------------------------------------------------ condition_sweep

RunResult run_condition_sweep(const Params& p, int threads) {
  std::vector<Task> tasks;
  const Complex omega = p.complex("omega");
  const assembly::ScalingConfig cfg{p.complex("sigma"), p.real("R")};
  for (int nu : p.int_list("nu"))
    for (const auto& bname : p.string_list("basis"))
      for (int N : p.int_list("N")) {
        const auto basis = assembly::basis_from_string(bname);
        std::string tuple = "nu=" + fmt(nu) + " basis=" + bname + " N=" + fmt(N);
        tasks.push_back([=] {
          return guarded(tuple, [&] {
            TaskResult t;
            auto prob = eig::make_separated_problem(nu, N, cfg, nullptr, basis);
            double kappa = eig::condition_number(prob.S - omega * omega * prob.M);
            t.rows.push_back({fmt(nu), fmt(omega.real()), fmt(omega.imag()), fmt(cfg.sigma.real()),
                              fmt(cfg.sigma.imag()), fmt(cfg.R), bname, fmt(N), fmt(N + 1), fmt(kappa)});
            t.quadrature = {{"nu", nu}, {"basis", bname}, {"N", N},
                            {"gauss_laguerre_nodes", LaguerreBasis(N).nodes_for_weight_degree(2)},
                            {"weight_exponent", 2.0}};
            return t;
          });
        });
      }
  return collect(tasks, threads,
                 {"nu", "omega_re", "omega_im", "sigma_re", "sigma_im", "R", "basis", "N", "dofs", "condition_number"});
}

// ------------------------------------------------------ resonance_convergence

Complex reference_from(const Params& p, int nu, double R) {
  if (p.is_auto("target")) return reference_resonance(nu, R);
  Complex target = p.complex("target");
  return reference_resonance(nu, R, &target);
}

RunResult run_resonance_convergence(const Params& p, int threads) {
  const int nu = p.integer("nu");
  const double R = p.real("R");
  const Complex ref = reference_from(p, nu, R);
  const Complex sigma = p.is_auto("sigma") ? default_sigma(ref) : p.complex("sigma");
  const assembly::ScalingConfig cfg{sigma, R};
  const auto basis = assembly::basis_from_string(p.string("basis"));
  auto opts = arnoldi_options(p);
  opts.krylov_dim = p.integer("krylov_dim");

  std::vector<Task> tasks;
  for (int N : p.int_list("N")) {
    std::string tuple = "nu=" + fmt(nu) + " sigma=" + c_str(sigma) + " R=" + fmt(R) + " N=" + fmt(N);
    tasks.push_back([=] {
      return guarded(tuple, [&] {
        TaskResult t;
        auto prob = eig::make_separated_problem(nu, N, cfg, nullptr, basis);
        auto rs = solve_near(prob, ref, opts);
        const auto& pair = rs.pairs.front();
        t.rows.push_back({fmt(nu), fmt(R), fmt(sigma.real()), fmt(sigma.imag()), p.string("basis"), fmt(N),
                          fmt(N + 1), fmt(pair.omega.real()), fmt(pair.omega.imag()), fmt(pair.residual),
                          fmt(ref.real()), fmt(ref.imag()), fmt(std::abs(pair.omega - ref))});
        t.quadrature = {{"N", N}, {"gauss_laguerre_nodes", LaguerreBasis(N).nodes_for_weight_degree(2)},
                        {"weight_exponent", 2.0}};
        return t;
      });
    });
  }
  return collect(tasks, threads,
                 {"nu", "R", "sigma_re", "sigma_im", "basis", "N", "dofs", "omega_re", "omega_im", "residual",
                  "reference_re", "reference_im", "error"});
}

// ---------------------------------------------------------------- pml_compare

RunResult run_pml_compare(const Params& p, int threads) {
  const int nu = p.integer("nu");
  const double R = p.real("R");
  const Complex ref = reference_from(p, nu, R);
  const Complex sigma = p.is_auto("sigma") ? default_sigma(ref) : p.complex("sigma");
  const assembly::ScalingConfig cfg{sigma, R};
  const int order = p.integer("order");
  const auto opts = arnoldi_options(p);

  auto row = [=](const std::string& method, const std::string& T, const std::string& ord, const std::string& ne,
                 const std::string& N, int dofs, const eig::ResonancePair& pair) {
    return std::vector<std::string>{method, fmt(nu), fmt(R), fmt(sigma.real()), fmt(sigma.imag()), T, ord, ne, N,
                                    fmt(dofs), fmt(pair.omega.real()), fmt(pair.omega.imag()), fmt(pair.residual),
                                    fmt(ref.real()), fmt(ref.imag()), fmt(std::abs(pair.omega - ref))};
  };

  std::vector<Task> tasks;
  for (double T : p.real_list("T"))
    for (int ne : p.int_list("n_elems")) {
      std::string tuple = "pml T=" + fmt(T) + " order=" + fmt(order) + " n_elems=" + fmt(ne);
      tasks.push_back([=] {
        return guarded(tuple, [&] {
          TaskResult t;
          pml::PmlConfig pc;
          pc.T = T;
          pc.n_elems = ne;
          pc.order = order;
          pc.cfg = cfg;
          auto sys = pml::assemble_pml(pc, nu);
          eig::SeparatedProblem prob;
          prob.S = sys.S;
          prob.M = sys.M;
          auto rs = solve_near(prob, ref, opts);
          t.rows.push_back(row("pml", fmt(T), fmt(order), fmt(ne), "", pc.dofs(), rs.pairs.front()));
          t.quadrature = {{"method", "pml"}, {"T", T}, {"n_elems", ne},
                          {"gauss_legendre_points_per_element", order + 2}};
          return t;
        });
      });
    }
  for (int N : p.int_list("N")) {
    std::string tuple = "infinite_elements N=" + fmt(N);
    tasks.push_back([=] {
      return guarded(tuple, [&] {
        TaskResult t;
        auto prob = eig::make_separated_problem(nu, N, cfg);
        auto rs = solve_near(prob, ref, opts);
        t.rows.push_back(row("infinite_elements", "", "", "", fmt(N), N + 1, rs.pairs.front()));
        t.quadrature = {{"method", "infinite_elements"}, {"N", N},
                        {"gauss_laguerre_nodes", LaguerreBasis(N).nodes_for_weight_degree(2)}};
        return t;
      });
    });
  }
  return collect(tasks, threads,
                 {"method", "nu", "R", "sigma_re", "sigma_im", "T", "order", "n_elems", "N", "dofs", "omega_re",
                  "omega_im", "residual", "reference_re", "reference_im", "error"});
}

// ----------------------------------------------------- radial_potential_sweep

std::vector<Complex> positive_roots(int nu) {
  const double reach = 4.0 * (nu + 2);
  return hankel::resonance_roots(nu, {1e-12, reach, -reach, 1e-12});
}

RunResult run_radial_potential_sweep(const Params& p, int threads) {
  const int N = p.integer("N");
  const double R = p.real("R");
  const auto eps_list = p.real_list("eps_tilde");
  const double step = p.real("continuation_step");
  const double alt_factor = p.real("sigma_alt_factor");
  const std::string potential = p.string("potential");
  const auto opts = arnoldi_options(p);

  // eps path from 0 through every requested value in increments <= step
  std::vector<double> path{0.0};
  std::vector<bool> report{true};
  for (std::size_t i = 1; i < eps_list.size(); ++i) {
    const double lo = eps_list[i - 1], hi = eps_list[i];
    const int pieces = std::max(1, static_cast<int>(std::ceil((hi - lo) / step - 1e-12)));
    for (int k = 1; k <= pieces; ++k) {
      path.push_back(k == pieces ? hi : lo + (hi - lo) * k / pieces);
      report.push_back(k == pieces);
    }
  }

  std::vector<Task> tasks;
  for (bool scaled : p.bool_list("scale_argument"))
    for (int nu : p.int_list("nu")) {
      auto roots = positive_roots(nu);
      for (std::size_t branch = 0; branch < roots.size(); ++branch) {
        const Complex ref = roots[branch] / R;
        Complex sigma = default_sigma(ref);
        if (scaled && potential == "bump") sigma = pole_safe_sigma(sigma, ref);
        const Complex sigma_alt = alt_factor * sigma;
        std::string tuple = "nu=" + fmt(nu) + " branch=" + fmt(static_cast<int>(branch)) +
                            " scale_argument=" + (scaled ? "true" : "false") + " sigma=" + c_str(sigma);
        tasks.push_back([=] {
          TaskResult t;
          Complex w = ref, w_alt = ref;
          double eps = 0.0;
          try {
            for (std::size_t k = 0; k < path.size(); ++k) {
              eps = path[k];
              auto pot = potential == "bump" ? assembly::bump_potential(eps, scaled) : assembly::constant_potential(eps);
              auto prob = eig::make_separated_problem(nu, N, {sigma, R}, &pot);
              auto prob_alt = eig::make_separated_problem(nu, N, {sigma_alt, R}, &pot);
              auto rs = solve_near(prob, w, opts);
              auto rs_alt = solve_near(prob_alt, w_alt, opts);
              rs.meta = prob.meta;
              rs_alt.meta = prob_alt.meta;
              w = rs.pairs.front().omega;
              w_alt = rs_alt.pairs.front().omega;
              if (!report[k]) continue;
              auto classified = eig::filter_resonances(rs, rs_alt);
              const auto& pair = classified.pairs.front();
              t.rows.push_back({fmt(nu), fmt(static_cast<int>(branch)), fmt(ref.real()), fmt(ref.imag()),
                                scaled ? "true" : "false", potential, fmt(sigma.real()), fmt(sigma.imag()), fmt(eps),
                                fmt(N), fmt(pair.omega.real()), fmt(pair.omega.imag()), fmt(pair.residual),
                                fmt(w_alt.real()), fmt(w_alt.imag()), eig::to_string(pair.classification)});
            }
          } catch (const NumericError& e) {
            throw TupleError(tuple + " eps_tilde=" + fmt(eps), e.what());
          } catch (const DomainError& e) {
            throw TupleError(tuple + " eps_tilde=" + fmt(eps), e.what());
          }
          t.quadrature = {{"nu", nu},
                          {"branch", branch},
                          {"scale_argument", scaled},
                          {"gauss_laguerre_nodes_potential", 4 * (N + 1) + 200},
                          {"validated_against_nodes", 8 * (N + 1) + 400},
                          {"continuation_steps", path.size() - 1}};
          return t;
        });
      }
    }
  return collect(tasks, threads,
                 {"nu", "branch", "root_re", "root_im", "scale_argument", "potential", "sigma_re", "sigma_im",
                  "eps_tilde", "N", "omega_re", "omega_im", "residual", "omega_alt_re", "omega_alt_im",
                  "classification"});
}

// ----------------------------------------------------------- matrix_structure

RunResult run_matrix_structure(const Params& p, int threads) {
  const assembly::ScalingConfig cfg{p.complex("sigma"), p.real("R")};
  const auto tols = p.real_list("tol");
  const double eps = p.real("eps_tilde");
  const std::string prefix = p.string("dump_prefix");

  std::vector<Task> tasks;
  for (int N : p.int_list("N"))
    for (const auto& bname : p.string_list("basis"))
      for (const auto& form : p.string_list("forms")) {
        const auto basis = assembly::basis_from_string(bname);
        std::string tuple = "form=" + form + " basis=" + bname + " N=" + fmt(N);
        tasks.push_back([=] {
          return guarded(tuple, [&] {
            TaskResult t;
            assembly::RadialOperator op;
            int nodes = LaguerreBasis(N).nodes_for_weight_degree(2);
            if (form == "mass0") {
              op = assembly::assemble_mass0(N, cfg, basis);
              nodes = 0;
            } else if (form == "mass1") {
              op = assembly::assemble_mass1(N, cfg, basis);
            } else if (form == "stiffness") {
              op = assembly::assemble_stiffness(N, cfg, basis);
            } else {
              nodes = 4 * (N + 1) + 200;
              op = assembly::assemble_weighted_mass(N, cfg, assembly::bump_potential(eps), nodes, basis);
            }
            for (double tol : tols) {
              auto s = assembly::structure_report(op, tol);
              t.rows.push_back({form, bname, fmt(N), fmt(op.dim()), fmt(cfg.sigma.real()), fmt(cfg.sigma.imag()),
                                fmt(cfg.R), fmt(tol), s.dense ? "dense" : fmt(s.bandwidth),
                                fmt(static_cast<int>(s.nnz))});
            }
            if (!prefix.empty()) write_operator(prefix + "_" + form + "_" + bname + "_N" + std::to_string(N), op);
            t.quadrature = {{"form", form}, {"basis", bname}, {"N", N}, {"gauss_laguerre_nodes", nodes}};
            return t;
          });
        });
      }
  return collect(tasks, threads,
                 {"form", "basis", "N", "dim", "sigma_re", "sigma_im", "R", "tol", "bandwidth", "nnz_above_tol"});
}

std::string utc_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

Complex reference_resonance(int nu, double R, const Complex* target) {
  if (!(R > 0.0)) throw DomainError("reference_resonance: R must be > 0");
  auto roots = positive_roots(nu);
  if (roots.empty())
    throw DomainError("h_" + std::to_string(nu) + "' has no root with Re > 0 (nu = 0 has only -i)");
  Complex best = roots.front();
  for (Complex r : roots) {
    if (target ? std::abs(r - *target * R) < std::abs(best - *target * R) : r.imag() > best.imag()) best = r;
  }
  return best / R;
}

Complex default_sigma(Complex omega) {
  if (omega == Complex(0.0)) throw DomainError("default_sigma: omega = 0");
  return Complex(1.0, 1.0) / omega;
}

Complex pole_safe_sigma(Complex sigma, Complex omega) {
  constexpr double kPi = std::numbers::pi;
  // poles of (x-1)^2 / (1 + (x-1)^4)
  std::vector<double> pole_args;
  for (int k = 0; k < 4; ++k) pole_args.push_back(std::arg(1.0 + std::polar(1.0, kPi / 4 + k * kPi / 2)));
  auto ok = [&](Complex s) {
    for (double a : pole_args) {
      double d = std::abs(std::arg(s) - a);
      if (std::min(d, 2 * kPi - d) < 0.3) return false;
    }
    double t = std::arg(s * omega);
    return t >= 0.3 && t <= kPi - 0.3 && s.imag() > 0.0;
  };
  if (ok(sigma)) return sigma;
  for (double d : {0.15, -0.15, 0.3, -0.3, 0.45, -0.45}) {
    Complex s = sigma * std::polar(1.0, d);
    if (ok(s)) return s;
  }
  throw DomainError("pole_safe_sigma: no admissible rotation of sigma=" + format_complex(sigma));
}

RunResult run_experiment(const ExperimentConfig& cfg, int threads) {
  const Params& p = cfg.params;
  const std::string& e = cfg.experiment;
  if (e == "project_exp") return run_project_exp(p, threads);
  if (e == "hankel_error") return run_hankel(p, threads, false);
  if (e == "rates_overlay") return run_hankel(p, threads, true);
  if (e == "condition_sweep") return run_condition_sweep(p, threads);
  if (e == "resonance_convergence") return run_resonance_convergence(p, threads);
  if (e == "pml_compare") return run_pml_compare(p, threads);
  if (e == "radial_potential_sweep") return run_radial_potential_sweep(p, threads);
  if (e == "matrix_structure") return run_matrix_structure(p, threads);
  throw ConfigError("experiment", "unknown experiment '" + e + "'");
}

void write_outputs(const ExperimentConfig& cfg, const RunResult& result, int threads) {
  const std::filesystem::path out(cfg.output);
  if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
  write_csv_file(cfg.output, result.table);

  ordered_json prov;
  prov["tool"] = "csie";
  prov["version"] = CSIE_VERSION;
  prov["timestamp"] = utc_timestamp();
  prov["experiment"] = cfg.experiment;
  prov["output"] = cfg.output;
  prov["rows"] = result.table.rows.size();
  prov["threads"] = threads;
  prov["config"] = cfg.source;
  prov["parameters"] = cfg.params.to_json();
  prov["quadrature"] = result.quadrature;

  const std::string path = cfg.output + ".provenance.json";
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << prov.dump(2) << '\n';
  if (!os) throw std::runtime_error("write failed for " + path);
}

}  // namespace csie::experiments
