// Copyright (c) 2026 The csie Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <thread>

#include "csie/experiments.hpp"

namespace csie::experiments {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

json range(int lo, int hi, int step = 1) { return json{{"min", lo}, {"max", hi}, {"step", step}}; }
json cplx(double re, double im) { return json::array({re, im}); }

std::vector<ExperimentInfo> make_registry() {
  const ParamSpec seed{"seed", Kind::integer, 20260101, "seed for Arnoldi start vectors"};
  return {
      {"project_exp",
       "L2 projection of exp(-b x): closed-form tail error next to a quadrature of the residual",
       {{"b", Kind::complex_list, json::array({cplx(3, 0)}), "exponents, Re(b) > 0"},
        {"N", Kind::int_list, range(0, 20), "highest basis index"}}},
      {"hankel_error",
       "best-approximation error of h_nu(omega(R + sigma x)) in the Laguerre space",
       {{"nu", Kind::int_list, json::array({0}), "spherical indices, 0..12"},
        {"omega", Kind::complex_list, json::array({cplx(10, -0.5)}), "frequencies"},
        {"sigma", Kind::complex_list, json::array({cplx(0.3, 0.3)}), "scalings, Im(sigma) > 0, Im(sigma omega) > 0"},
        {"R", Kind::real_list, json::array({1.0}), "interface radii"},
        {"N_max", Kind::integer, 80, "errors are reported for N = 0..N_max"}}},
      {"rates_overlay",
       "hankel_error together with the two-term rate bound, constants fit on N windows",
       {{"nu", Kind::int_list, json::array({0}), "spherical indices, 0..12"},
        {"omega", Kind::complex_list, json::array({cplx(10, -0.5)}), "frequencies"},
        {"sigma", Kind::complex_list, json::array({cplx(0.3, 0.3)}), "scalings, Im(sigma omega) > 0"},
        {"R", Kind::real_list, json::array({1.0}), "interface radii"},
        {"N_max", Kind::integer, 80, "errors are reported for N = 0..N_max"},
        {"exp_window", Kind::int_list, json::array({5, 10, 15}), "N values fitting c1"},
        {"alg_window", Kind::int_list, json::array({60, 70, 80}), "N values fitting c2"}}},
      {"condition_sweep",
       "2-norm condition number of s + nu(nu+1) m0 - omega^2 m1",
       {{"nu", Kind::int_list, json::array({0}), "spherical indices"},
        {"omega", Kind::complex, cplx(10, -0.5), "frequency"},
        {"sigma", Kind::complex, cplx(0.3, 0.3), "scaling, Im(sigma) > 0"},
        {"R", Kind::real, 1.0, "interface radius"},
        {"N", Kind::int_list, range(10, 100, 10), "highest basis index; dofs = N + 1"},
        {"basis", Kind::string_list, json::array({"orthogonal", "sparse"}), "orthogonal | sparse"}}},
      {"resonance_convergence",
       "eigenvalue error against the root of h_nu' as N grows",
       {{"nu", Kind::integer, 3, "spherical index"},
        {"target", Kind::complex_or_auto, "auto", "root of h_nu' to follow; auto: least damped"},
        {"sigma", Kind::complex_or_auto, "auto", "scaling; auto: (1+i)/reference"},
        {"R", Kind::real, 1.0, "interface radius; resonances are roots / R"},
        {"N", Kind::int_list, range(10, 60, 5), "highest basis index"},
        {"basis", Kind::string, "orthogonal", "orthogonal | sparse"},
        {"krylov_dim", Kind::integer, 0, "0: default"},
        {"tol", Kind::real, 1e-9, "residual tolerance"},
        seed}},
      {"pml_compare",
       "truncated PML under h-refinement next to infinite elements, error per dof",
       {{"nu", Kind::integer, 3, "spherical index"},
        {"target", Kind::complex_or_auto, "auto", "root of h_nu' to follow; auto: least damped"},
        {"sigma", Kind::complex_or_auto, "auto", "scaling; auto: (1+i)/reference"},
        {"R", Kind::real, 1.0, "interface radius"},
        {"T", Kind::real_list, json::array({5.0, 8.0}), "PML thickness"},
        {"order", Kind::integer, 5, "element order"},
        {"n_elems", Kind::int_list, json::array({1, 2, 4, 8, 16, 32}), "elements on [0, T]"},
        {"N", Kind::int_list, range(10, 60, 10), "infinite-element basis index"},
        {"tol", Kind::real, 1e-9, "residual tolerance"},
        seed}},
      {"radial_potential_sweep",
       "resonances under p = 1 + eps p(x), tracked by continuation in eps",
       {{"nu", Kind::int_list, json::array({1, 2, 3, 4, 5}), "spherical indices"},
        {"eps_tilde", Kind::real_list, json::array({0.0, 0.5, 1.0, 1.5}), "amplitudes, from 0, increasing"},
        {"potential", Kind::string, "bump", "bump: (x-1)^2/(1+(x-1)^4) | constant"},
        {"scale_argument", Kind::bool_list, json::array({false, true}), "evaluate the profile at sigma x"},
        {"N", Kind::integer, 150, "highest basis index"},
        {"R", Kind::real, 1.0, "interface radius"},
        {"continuation_step", Kind::real, 0.05, "largest eps increment while tracking"},
        {"sigma_alt_factor", Kind::real, 1.25, "second run uses this multiple of sigma"},
        {"tol", Kind::real, 1e-9, "residual tolerance"},
        seed}},
      {"matrix_structure",
       "bandwidth and nonzero count of the assembled radial operators",
       {{"N", Kind::int_list, json::array({20}), "highest basis index"},
        {"sigma", Kind::complex, cplx(0.3, 0.3), "scaling"},
        {"R", Kind::real, 1.0, "interface radius"},
        {"basis", Kind::string_list, json::array({"orthogonal", "sparse"}), "orthogonal | sparse"},
        {"forms", Kind::string_list, json::array({"mass0", "mass1", "stiffness", "weighted_mass"}),
         "mass0 | mass1 | stiffness | weighted_mass"},
        {"tol", Kind::real_list, json::array({1e-12, 1e-10}), "entry threshold"},
        {"eps_tilde", Kind::real, 1.5, "amplitude of the bump potential in weighted_mass"},
        {"dump_prefix", Kind::string, "", "write <prefix>_<form>_<basis>_N<N>.{csv,json} when set"}}},
  };
}

std::string item(const std::string& field, std::size_t i) { return field + "[" + std::to_string(i) + "]"; }

Complex parse_complex(const json& v, const std::string& field) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  if (v.is_object() && v.size() == 2 && v.contains("re") && v.contains("im") && v["re"].is_number() &&
      v["im"].is_number())
    return {v["re"].get<double>(), v["im"].get<double>()};
  throw ConfigError(field, "expected a complex number: x, [re, im] or {\"re\": x, \"im\": y}");
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

double parse_real(const json& v, const std::string& field) {
  if (!v.is_number()) throw ConfigError(field, "expected a number");
  double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(field, "must be finite");
  return x;
}

int parse_int(const json& v, const std::string& field) {
  if (!v.is_number_integer()) throw ConfigError(field, "expected an integer");
  auto x = v.get<long long>();
  if (x < -1000000000LL || x > 1000000000LL) throw ConfigError(field, "out of range");
  return static_cast<int>(x);
}

json expect_array(const json& v, const std::string& field) {
  if (!v.is_array()) throw ConfigError(field, "expected a list");
  if (v.empty()) throw ConfigError(field, "must not be empty");
  return v;
}

json normalize(const ParamSpec& spec, const json& v, const std::string& field) {
  switch (spec.kind) {
    case Kind::integer: return parse_int(v, field);
    case Kind::real: return parse_real(v, field);
    case Kind::complex: return complex_json(parse_complex(v, field));
    case Kind::complex_or_auto:
      if (v.is_string()) {
        if (v.get<std::string>() != "auto") throw ConfigError(field, "expected a complex number or \"auto\"");
        return "auto";
      }
      return complex_json(parse_complex(v, field));
    case Kind::boolean:
      if (!v.is_boolean()) throw ConfigError(field, "expected true or false");
      return v;
    case Kind::string:
      if (!v.is_string()) throw ConfigError(field, "expected a string");
      return v;
    case Kind::int_list: {
      json out = json::array();
      if (v.is_object()) {
        for (auto it = v.begin(); it != v.end(); ++it)
          if (it.key() != "min" && it.key() != "max" && it.key() != "step")
            throw ConfigError(field + "." + it.key(), "unknown key in range (min, max, step)");
        if (!v.contains("min")) throw ConfigError(field + ".min", "missing");
        if (!v.contains("max")) throw ConfigError(field + ".max", "missing");
        int lo = parse_int(v["min"], field + ".min");
        int hi = parse_int(v["max"], field + ".max");
        int step = v.contains("step") ? parse_int(v["step"], field + ".step") : 1;
        if (step < 1) throw ConfigError(field + ".step", "must be >= 1");
        if (hi < lo) throw ConfigError(field + ".max", "must be >= min");
        for (int n = lo; n <= hi; n += step) out.push_back(n);
      } else {
        json a = expect_array(v, field);
        for (std::size_t i = 0; i < a.size(); ++i) out.push_back(parse_int(a[i], item(field, i)));
      }
      for (std::size_t i = 1; i < out.size(); ++i)
        if (out[i].get<int>() <= out[i - 1].get<int>()) throw ConfigError(item(field, i), "list must be strictly increasing");
      return out;
    }
    case Kind::real_list: {
      json a = expect_array(v, field), out = json::array();
      for (std::size_t i = 0; i < a.size(); ++i) out.push_back(parse_real(a[i], item(field, i)));
      return out;
    }
    case Kind::complex_list: {
      json a = expect_array(v, field), out = json::array();
      for (std::size_t i = 0; i < a.size(); ++i) out.push_back(complex_json(parse_complex(a[i], item(field, i))));
      return out;
    }
    case Kind::bool_list: {
      json a = expect_array(v, field);
      for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].is_boolean()) throw ConfigError(item(field, i), "expected true or false");
      return a;
    }
    case Kind::string_list: {
      json a = expect_array(v, field);
      for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].is_string()) throw ConfigError(item(field, i), "expected a string");
      return a;
    }
  }
  throw ConfigError(field, "unsupported parameter kind");
}

// Experiment-level checks on normalized values.
class Checker {
public:
  Checker(const ExperimentInfo& info, const Params& p) : info_(info), p_(p) {}

  static std::string field(const std::string& key) { return "parameters." + key; }

  void nu_range(const std::string& key, int hi = 12) {
    for (std::size_t i = 0; auto v : values_int(key)) {
      if (v < 0 || v > hi)
        throw ConfigError(indexed(key, i), "must be in [0, " + std::to_string(hi) + "]");
      ++i;
    }
  }
  void int_min(const std::string& key, int lo) {
    for (std::size_t i = 0; auto v : values_int(key)) {
      if (v < lo) throw ConfigError(indexed(key, i), "must be >= " + std::to_string(lo));
      ++i;
    }
  }
  void positive(const std::string& key) {
    for (std::size_t i = 0; auto v : values_real(key)) {
      if (!(v > 0.0)) throw ConfigError(indexed(key, i), "must be > 0");
      ++i;
    }
  }
  void sigma(const std::string& key) {
    if (p_.is_auto(key)) return;
    for (std::size_t i = 0; auto s : values_complex(key)) {
      if (!(s.imag() > 0.0)) throw ConfigError(indexed(key, i), "Im(sigma) must be > 0");
      ++i;
    }
  }
  void decay(const std::string& sigma_key, const std::string& omega_key) {
    auto ss = values_complex(sigma_key);
    auto ws = values_complex(omega_key);
    for (std::size_t i = 0; i < ss.size(); ++i)
      for (std::size_t j = 0; j < ws.size(); ++j)
        if (!((ss[i] * ws[j]).imag() > 0.0))
          throw ConfigError(indexed(sigma_key, i), "Im(sigma*omega) must be > 0 so that the scaled Hankel "
                                                   "function decays; fails with " + field(omega_key) +
                                                   (is_list(omega_key) ? "[" + std::to_string(j) + "]" : "") +
                                                   " = " + format_complex(ws[j]));
  }
  void one_of(const std::string& key, std::set<std::string> allowed) {
    auto values = is_list(key) ? p_.string_list(key) : std::vector<std::string>{p_.string(key)};
    for (std::size_t i = 0; i < values.size(); ++i)
      if (!allowed.count(values[i])) {
        std::string names;
        for (const auto& a : allowed) names += (names.empty() ? "" : ", ") + a;
        throw ConfigError(indexed(key, i), "unknown value '" + values[i] + "' (allowed: " + names + ")");
      }
  }
  void within(const std::string& key, int lo, int hi) {
    for (std::size_t i = 0; auto v : values_int(key)) {
      if (v < lo || v > hi)
        throw ConfigError(indexed(key, i), "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
      ++i;
    }
  }

private:
  Kind kind(const std::string& key) const {
    for (const auto& s : info_.params)
      if (s.name == key) return s.kind;
    throw DomainError("no parameter '" + key + "'");
  }
  bool is_list(const std::string& key) const {
    switch (kind(key)) {
      case Kind::int_list:
      case Kind::real_list:
      case Kind::complex_list:
      case Kind::bool_list:
      case Kind::string_list: return true;
      default: return false;
    }
  }
  std::string indexed(const std::string& key, std::size_t i) const {
    return is_list(key) ? item(field(key), i) : field(key);
  }
  std::vector<int> values_int(const std::string& key) const {
    return is_list(key) ? p_.int_list(key) : std::vector<int>{p_.integer(key)};
  }
  std::vector<double> values_real(const std::string& key) const {
    return is_list(key) ? p_.real_list(key) : std::vector<double>{p_.real(key)};
  }
  std::vector<Complex> values_complex(const std::string& key) const {
    return is_list(key) ? p_.complex_list(key) : std::vector<Complex>{p_.complex(key)};
  }

  const ExperimentInfo& info_;
  const Params& p_;
};

void check_experiment(const ExperimentInfo& info, const Params& p) {
  const std::string& name = info.name;
  Checker c(info, p);
  if (name == "project_exp") {
    auto bs = p.complex_list("b");
    for (std::size_t i = 0; i < bs.size(); ++i)
      if (!(bs[i].real() > 0.0)) throw ConfigError(item("parameters.b", i), "Re(b) must be > 0");
    c.int_min("N", 0);
  } else if (name == "hankel_error" || name == "rates_overlay") {
    c.nu_range("nu");
    c.sigma("sigma");
    c.positive("R");
    c.int_min("N_max", 0);
    c.decay("sigma", "omega");
    if (name == "rates_overlay") {
      c.within("exp_window", 0, p.integer("N_max"));
      c.within("alg_window", 0, p.integer("N_max"));
    }
  } else if (name == "condition_sweep") {
    c.nu_range("nu");
    c.sigma("sigma");
    c.positive("R");
    c.within("N", 0, 1999);
    c.one_of("basis", {"orthogonal", "sparse"});
  } else if (name == "resonance_convergence" || name == "pml_compare") {
    c.nu_range("nu");
    c.sigma("sigma");
    c.positive("R");
    c.within("N", 0, 1999);
    c.positive("tol");
    if (p.integer("nu") < 1) throw ConfigError("parameters.nu", "must be >= 1 (h_0' has no root with Re > 0)");
    if (name == "resonance_convergence") {
      c.one_of("basis", {"orthogonal", "sparse"});
      c.int_min("krylov_dim", 0);
    } else {
      c.positive("T");
      c.int_min("order", 1);
      c.int_min("n_elems", 1);
    }
  } else if (name == "radial_potential_sweep") {
    c.nu_range("nu");
    c.within("N", 0, 1999);
    c.positive("R");
    c.positive("continuation_step");
    c.positive("sigma_alt_factor");
    c.positive("tol");
    c.one_of("potential", {"bump", "constant"});
    if (p.real("sigma_alt_factor") == 1.0)
      throw ConfigError("parameters.sigma_alt_factor", "must differ from 1 (the filter needs a second sigma)");
    auto eps = p.real_list("eps_tilde");
    if (eps[0] != 0.0) throw ConfigError("parameters.eps_tilde[0]", "tracking starts from the h_nu' roots, so must be 0");
    for (std::size_t i = 1; i < eps.size(); ++i)
      if (!(eps[i] > eps[i - 1])) throw ConfigError(item("parameters.eps_tilde", i), "list must be strictly increasing");
  } else if (name == "matrix_structure") {
    c.within("N", 0, 1999);
    c.sigma("sigma");
    c.positive("R");
    c.positive("tol");
    c.one_of("basis", {"orthogonal", "sparse"});
    c.one_of("forms", {"mass0", "mass1", "stiffness", "weighted_mass"});
  }
}

}  // namespace

const char* to_string(Kind k) {
  switch (k) {
    case Kind::integer: return "integer";
    case Kind::real: return "real";
    case Kind::complex: return "complex";
    case Kind::complex_or_auto: return "complex|\"auto\"";
    case Kind::boolean: return "bool";
    case Kind::string: return "string";
    case Kind::int_list: return "integer list|{min,max,step}";
    case Kind::real_list: return "real list";
    case Kind::complex_list: return "complex list";
    case Kind::bool_list: return "bool list";
    case Kind::string_list: return "string list";
  }
  return "?";
}

const std::vector<ExperimentInfo>& list_experiments() {
  static const std::vector<ExperimentInfo> registry = make_registry();
  return registry;
}

const ExperimentInfo& find_experiment(const std::string& name) {
  for (const auto& e : list_experiments())
    if (e.name == name) return e;
  throw ConfigError("experiment", "unknown experiment '" + name + "' (see `csie list`)");
}

const json& Params::at(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw DomainError("no parameter '" + key + "'");
  return it->second;
}

int Params::integer(const std::string& key) const { return at(key).get<int>(); }
double Params::real(const std::string& key) const { return at(key).get<double>(); }
Complex Params::complex(const std::string& key) const {
  const json& v = at(key);
  if (v.is_string()) throw DomainError("parameter '" + key + "' is auto");
  return {v[0].get<double>(), v[1].get<double>()};
}
bool Params::is_auto(const std::string& key) const { return at(key).is_string() && at(key).get<std::string>() == "auto"; }
bool Params::boolean(const std::string& key) const { return at(key).get<bool>(); }
std::string Params::string(const std::string& key) const { return at(key).get<std::string>(); }
std::vector<int> Params::int_list(const std::string& key) const { return at(key).get<std::vector<int>>(); }
std::vector<double> Params::real_list(const std::string& key) const { return at(key).get<std::vector<double>>(); }
std::vector<Complex> Params::complex_list(const std::string& key) const {
  std::vector<Complex> out;
  for (const auto& v : at(key)) out.emplace_back(v[0].get<double>(), v[1].get<double>());
  return out;
}
std::vector<bool> Params::bool_list(const std::string& key) const {
  std::vector<bool> out;
  for (const auto& v : at(key)) out.push_back(v.get<bool>());
  return out;
}
std::vector<std::string> Params::string_list(const std::string& key) const {
  return at(key).get<std::vector<std::string>>();
}

ordered_json Params::to_json() const {
  ordered_json j = ordered_json::object();
  for (const auto& [k, v] : values_) j[k] = v;
  return j;
}

ExperimentConfig parse_config(const ordered_json& j) {
  if (!j.is_object()) throw ConfigError("<root>", "configuration must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "experiment" && it.key() != "output" && it.key() != "parameters" && it.key() != "description")
      throw ConfigError(it.key(), "unknown top-level key (expected experiment, output, parameters, description)");

  if (!j.contains("experiment")) throw ConfigError("experiment", "missing");
  if (!j["experiment"].is_string()) throw ConfigError("experiment", "expected a string");
  if (!j.contains("output")) throw ConfigError("output", "missing");
  if (!j["output"].is_string() || j["output"].get<std::string>().empty())
    throw ConfigError("output", "expected a nonempty path");

  ExperimentConfig cfg;
  cfg.experiment = j["experiment"].get<std::string>();
  cfg.output = j["output"].get<std::string>();
  cfg.source = j;
  const ExperimentInfo& info = find_experiment(cfg.experiment);

  ordered_json given = j.contains("parameters") ? j["parameters"] : ordered_json::object();
  if (!given.is_object()) throw ConfigError("parameters", "expected an object");
  for (auto it = given.begin(); it != given.end(); ++it) {
    bool known = false;
    for (const auto& s : info.params) known = known || s.name == it.key();
    if (!known) throw ConfigError("parameters." + it.key(), "unknown parameter for " + cfg.experiment);
  }

  std::map<std::string, json> values;
  for (const auto& s : info.params) {
    const std::string field = "parameters." + s.name;
    if (given.contains(s.name)) {
      values[s.name] = normalize(s, json::parse(given[s.name].dump()), field);
    } else {
      if (s.default_value.is_null()) throw ConfigError(field, "missing");
      values[s.name] = normalize(s, s.default_value, field);
    }
  }
  cfg.params = Params(std::move(values));
  check_experiment(info, cfg.params);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path);
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

int thread_count_from_env() {
  const char* v = std::getenv("CSIE_THREADS");
  if (v && *v) {
    char* end = nullptr;
    long n = std::strtol(v, &end, 10);
    if (*end != '\0' || n < 1 || n > 4096) throw ConfigError("CSIE_THREADS", "must be a positive integer");
    return static_cast<int>(n);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace csie::experiments
