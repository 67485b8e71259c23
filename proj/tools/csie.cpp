// Copyright (c) 2026 The csie Authors
// SPDX-License-Identifier: Apache-2.0

// csie run <config.json> | csie list | csie validate <config.json>
//
// Exit codes: 0 success, 1 usage or I/O error, 2 invalid configuration,
// 3 numeric failure.

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "csie/experiments.hpp"

namespace ex = csie::experiments;

namespace {

void print_list() {
  for (const auto& e : ex::list_experiments()) {
    std::cout << e.name << "\n  " << e.description << "\n";
    for (const auto& p : e.params)
      std::cout << "    " << p.name << " : " << ex::to_string(p.kind) << " = " << p.default_value.dump() << "  ("
                << p.help << ")\n";
    std::cout << "\n";
  }
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const csie::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const csie::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const csie::DomainError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"complex-scaled infinite elements: experiment runner"};
  app.require_subcommand(1);
  app.set_version_flag("--version", CSIE_VERSION);

  std::string config_path;
  auto* run = app.add_subcommand("run", "run an experiment, writing CSV and a provenance sidecar");
  run->add_option("config", config_path, "experiment configuration (JSON)")->required();
  auto* list = app.add_subcommand("list", "list experiments and their parameters");
  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "check a configuration without running it");
  validate->add_option("config", validate_path, "experiment configuration (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (list->parsed()) {
    print_list();
    return 0;
  }
  if (validate->parsed()) {
    return guarded([&] {
      auto cfg = ex::load_config(validate_path);
      std::cout << "ok: " << cfg.experiment << " -> " << cfg.output << "\n";
      return 0;
    });
  }
  return guarded([&] {
    auto cfg = ex::load_config(config_path);
    const int threads = ex::thread_count_from_env();
    auto result = ex::run_experiment(cfg, threads);
    ex::write_outputs(cfg, result, threads);
    std::cout << "wrote " << result.table.rows.size() << " rows to " << cfg.output << "\n";
    return 0;
  });
}
