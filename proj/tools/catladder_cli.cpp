// Copyright 2026 The catladder Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// catladder: batch front end for variational ladder runs.

#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "catladder/config.hpp"
#include "catladder/errors.hpp"
#include "catladder/linalg.hpp"
#include "catladder/presets.hpp"
#include "catladder/runner.hpp"

namespace {

int cmd_run(const std::string& path, bool quiet) {
  catladder::RunConfig config;
  try {
    config = catladder::load_config(path);
  } catch (const catladder::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return catladder::kExitConfigError;
  }
  catladder::RunOptions opts;
  if (!quiet) opts.log = &std::cerr;
  const auto report = catladder::run(config, opts);
  if (report.exit_code == catladder::kExitConfigError) {
    std::cerr << "config error: " << report.error << '\n';
  } else if (report.exit_code != catladder::kExitOk) {
    std::cerr << "run failed: " << report.error << '\n';
  }
  std::cout << report.directory.string() << '\n';
  return report.exit_code;
}

int cmd_validate(const std::string& path) {
  try {
    const auto config = catladder::load_config(path);
    std::cout << "ok: " << config.name << " (" << config.model.modes << " mode"
              << (config.model.modes == 1 ? "" : "s") << ")\n";
    return catladder::kExitOk;
  } catch (const catladder::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return catladder::kExitConfigError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  catladder::retain_large_allocations();
  CLI::App app{"catladder: coherent-state ladder dynamics of driven-dissipative bosonic modes"};
  app.set_version_flag("--version", std::string(CATLADDER_VERSION));
  app.require_subcommand(1);

  std::string run_path;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "Run a configuration and write its artifacts");
  run->add_option("config", run_path, "Path to a JSON run configuration")->required();
  run->add_flag("-q,--quiet", quiet, "Suppress progress messages");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Parse and validate a configuration");
  validate->add_option("config", validate_path, "Path to a JSON run configuration")->required();

  auto* presets = app.add_subcommand("presets", "Built-in scenarios");
  presets->require_subcommand(1);
  auto* list = presets->add_subcommand("list", "List preset names");
  std::string emit_name;
  auto* emit = presets->add_subcommand("emit", "Print a preset as a JSON configuration");
  emit->add_option("name", emit_name, "Preset name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : catladder::kExitConfigError;
  }

  try {
    if (*run) return cmd_run(run_path, quiet);
    if (*validate) return cmd_validate(validate_path);
    if (*list) {
      for (const auto& n : catladder::preset_names()) std::cout << n << '\n';
      return catladder::kExitOk;
    }
    if (*emit) {
      try {
        std::cout << catladder::to_json(catladder::preset(emit_name)) << '\n';
      } catch (const catladder::ConfigError& e) {
        std::cerr << e.what() << '\n';
        return catladder::kExitConfigError;
      }
      return catladder::kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return catladder::kExitRuntimeFailure;
  }
  return catladder::kExitOk;
}
