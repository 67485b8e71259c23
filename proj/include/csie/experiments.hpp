// Copyright (c) 2026 The csie Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "csie/error.hpp"
#include "csie/serialize.hpp"

namespace csie::experiments {

enum class Kind {
  integer,
  real,
  complex,
  complex_or_auto,  // a complex value, or the string "auto"
  boolean,
  string,
  int_list,  // list, or {"min", "max", "step"}; must be strictly increasing
  real_list,
  complex_list,
  bool_list,
  string_list,
};
const char* to_string(Kind k);

struct ParamSpec {
  std::string name;
  Kind kind;
  nlohmann::json default_value;  // null: required
  std::string help;
};

struct ExperimentInfo {
  std::string name;
  std::string description;
  std::vector<ParamSpec> params;
};

const std::vector<ExperimentInfo>& list_experiments();
const ExperimentInfo& find_experiment(const std::string& name);  // ConfigError if unknown

// Normalized parameter values; every key of the schema is present.
class Params {
public:
  Params() = default;
  explicit Params(std::map<std::string, nlohmann::json> values) : values_(std::move(values)) {}

  int integer(const std::string& key) const;
  double real(const std::string& key) const;
  Complex complex(const std::string& key) const;
  bool is_auto(const std::string& key) const;
  bool boolean(const std::string& key) const;
  std::string string(const std::string& key) const;
  std::vector<int> int_list(const std::string& key) const;
  std::vector<double> real_list(const std::string& key) const;
  std::vector<Complex> complex_list(const std::string& key) const;
  std::vector<bool> bool_list(const std::string& key) const;
  std::vector<std::string> string_list(const std::string& key) const;

  nlohmann::ordered_json to_json() const;

private:
  const nlohmann::json& at(const std::string& key) const;
  std::map<std::string, nlohmann::json> values_;
};

struct ExperimentConfig {
  std::string experiment;
  std::string output;
  Params params;
  nlohmann::ordered_json source;  // the configuration as read
};

// Both throw ConfigError naming the offending field, e.g. "parameters.sigma[1]".
ExperimentConfig parse_config(const nlohmann::ordered_json& j);
ExperimentConfig load_config(const std::string& path);

struct RunResult {
  Table table;
  nlohmann::ordered_json quadrature = nlohmann::ordered_json::array();  // sizes used, one entry per tuple
};

// Failure of one parameter tuple; the message carries the tuple.
class TupleError : public NumericError {
public:
  TupleError(std::string tuple, const std::string& what)
      : NumericError("numeric failure at (" + tuple + "): " + what), tuple_(std::move(tuple)) {}
  const std::string& tuple() const noexcept { return tuple_; }

private:
  std::string tuple_;
};

// Resonance of the separated problem at spherical index nu: the root of h_nu'
// with Re > 0 nearest to target * R (least damped when target is empty), over R.
Complex reference_resonance(int nu, double R, const Complex* target = nullptr);

// (1+i)/omega, so that sigma*omega = 1+i.
Complex default_sigma(Complex omega);

// Rotates sigma by the smallest of +-0.15, +-0.3, +-0.45 rad that keeps the
// poles of the bump profile at least 0.3 rad away from the ray sigma*x and
// keeps arg(sigma*omega) in [0.3, pi-0.3]. Returns sigma unchanged if it
// already qualifies.
Complex pole_safe_sigma(Complex sigma, Complex omega);

// CSIE_THREADS if set (ConfigError when not a positive integer), else the
// hardware concurrency.
int thread_count_from_env();

RunResult run_experiment(const ExperimentConfig& cfg, int threads = 1);

// Writes cfg.output and cfg.output + ".provenance.json".
void write_outputs(const ExperimentConfig& cfg, const RunResult& result, int threads);

// Runs tasks on up to `threads` workers and returns their results in task
// order. If tasks fail, the failure of the lowest-indexed one is rethrown.
template <class T>
std::vector<T> run_pool(const std::vector<std::function<T()>>& tasks, int threads);

}  // namespace csie::experiments

#include "csie/detail/pool.hpp"
