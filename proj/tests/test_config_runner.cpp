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

#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "catladder/config.hpp"
#include "catladder/errors.hpp"
#include "catladder/presets.hpp"
#include "catladder/runner.hpp"
#include "json.hpp"

using namespace catladder;
namespace fs = std::filesystem;

namespace {

const char* kMinimalKerr = R"({
  "name": "kerr_small",
  "model": {"builder": "kerr_driven", "params": {"U": 1.0, "F": 0.5, "kappa": 1.0}},
  "basis": [{"depth": 3, "alpha": [0.2, -0.1]}],
  "initial_state": [{"kind": "coherent", "amplitude": [0.2, -0.1]}],
  "run": {"t_end": 0.5, "samples": 6,
          "observables": [{"kind": "moment", "mode": 0, "creation": 1, "annihilation": 1}, {"kind": "purity"}]}
})";

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

fs::path scratch_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("catladder_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::vector<std::vector<std::string>> csv_rows(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("a minimal config parses with defaults") {
  const RunConfig c = parse_config(kMinimalKerr);
  CHECK(c.model.builder == "kerr_driven");
  CHECK(c.basis.size() == 1);
  CHECK(c.basis[0].sector == Sector::Plain);
  CHECK(c.run.observables[0].name == "mom0_1_1");
  CHECK(c.run.sample_times().size() == 6);
  CHECK(c.run.sample_times().back() == 0.5);
  CHECK_FALSE(c.compare.has_value());
}

TEST_CASE("invalid values are rejected with the offending key path") {
  CHECK(error_of(read_file(fs::path(CATLADDER_SOURCE_DIR) / "tests/data/negative_eta.json")).find("model.params.eta") !=
        std::string::npos);
  auto j = nlohmann::json::parse(kMinimalKerr);
  j["run"]["samples"] = 1;
  CHECK(error_of(j.dump()).find("run.samples") != std::string::npos);
  j = nlohmann::json::parse(kMinimalKerr);
  j["compare"] = {{"oracle_cutoff", 10}, {"depths", {2, 0}}};
  CHECK(error_of(j.dump()).find("compare.depths[1]") != std::string::npos);
  j = nlohmann::json::parse(kMinimalKerr);
  j["basis"].push_back(j["basis"][0]);
  CHECK(error_of(j.dump()).find("basis") != std::string::npos);
  j = nlohmann::json::parse(kMinimalKerr);
  j["run"]["observables"][0]["mode"] = 3;
  CHECK_FALSE(error_of(j.dump()).empty());
}

TEST_CASE("unknown keys are rejected") {
  auto j = nlohmann::json::parse(kMinimalKerr);
  j["engine"] = {{"rtol", 1e-6}, {"rtoll", 1e-6}};
  CHECK(error_of(j.dump()).find("rtoll") != std::string::npos);
  j = nlohmann::json::parse(kMinimalKerr);
  j["extra"] = 1;
  CHECK(error_of(j.dump()).find("extra") != std::string::npos);
  CHECK_FALSE(error_of("{not json").empty());
}

TEST_CASE("canonical JSON round-trips") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    const RunConfig c = preset(name);
    const RunConfig back = parse_config(to_json(c));
    CHECK(back == c);
    CHECK(to_json(back) == to_json(c));
    CHECK(config_hash(back) == config_hash(c));
  }
  const RunConfig c = parse_config(kMinimalKerr);
  CHECK(parse_config(to_json(c)) == c);
}

TEST_CASE("shipped preset files match the built-in presets") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    const fs::path p = fs::path(CATLADDER_SOURCE_DIR) / "presets" / (name + ".json");
    REQUIRE(fs::exists(p));
    CHECK(load_config(p.string()) == preset(name));
  }
  CHECK_THROWS_AS(preset("no_such_preset"), ConfigError);
}

TEST_CASE("two-cat preset uses the stated ratios") {
  const RunConfig c = preset("two_cat_fig4ab");
  const double U = c.model.U;
  CHECK(c.model.builder == "cat_chain");
  CHECK(c.model.modes == 2);
  CHECK(std::abs(c.model.G.front().second) == doctest::Approx(5.0 * U));
  CHECK(c.model.eta == doctest::Approx(0.25 * U));
  REQUIRE(c.model.hopping.size() == 1);
  CHECK(c.model.hopping[0] == doctest::Approx(U));
  for (const auto& s : c.initial_state) CHECK(std::abs(s.amplitude) == doctest::Approx(2.0));
}

TEST_CASE("piecewise drives round-trip") {
  const RunConfig c = preset("cat_quench_fig3ab");
  REQUIRE(c.model.G.size() == 2);
  const ModelSpec m = build_model(c.model);
  CHECK(m.modes == 1);
  CHECK(parse_config(to_json(c)).model.G == c.model.G);
}

}  // TEST_SUITE

TEST_SUITE("cli_runner") {

TEST_CASE("a zero model gives a flat time series") {
  auto j = nlohmann::json::parse(kMinimalKerr);
  j["model"] = {{"builder", "zero"}, {"params", {{"modes", 1}}}};
  const RunConfig c = parse_config(j.dump());
  const fs::path root = scratch_dir("zero");
  const RunReport r = run(c, {root, nullptr});
  REQUIRE(r.exit_code == kExitOk);
  CHECK(r.directory == root / "out" / "kerr_small");
  const auto rows = csv_rows(r.directory / "timeseries.csv");
  REQUIRE(rows.size() == 7);
  CHECK(rows[0][0] == "t");
  for (std::size_t i = 2; i < rows.size(); ++i) {
    for (std::size_t k = 1; k < rows[i].size(); ++k) {
      if (rows[0][k].rfind("re_mom", 0) == 0 || rows[0][k] == "purity" || rows[0][k] == "re_alpha0") {
        CHECK(std::stod(rows[i][k]) == doctest::Approx(std::stod(rows[1][k])).epsilon(1e-9));
      }
    }
  }
  const auto manifest = nlohmann::json::parse(read_file(r.directory / "manifest.json"));
  CHECK(manifest["status"] == "ok");
  CHECK(manifest["partial"] == false);
  CHECK(manifest["config"] == nlohmann::json::parse(to_json(c)));
}

TEST_CASE("CSV outputs are reproducible") {
  const RunConfig c = parse_config(kMinimalKerr);
  const fs::path a = scratch_dir("repro_a"), b = scratch_dir("repro_b");
  const RunReport ra = run(c, {a, nullptr});
  const RunReport rb = run(c, {b, nullptr});
  REQUIRE(ra.exit_code == kExitOk);
  REQUIRE(rb.exit_code == kExitOk);
  CHECK(read_file(ra.directory / "timeseries.csv") == read_file(rb.directory / "timeseries.csv"));
}

TEST_CASE("the environment variable overrides the output root") {
  const fs::path env_root = scratch_dir("env"), fallback = scratch_dir("fallback");
  const RunConfig c = parse_config(kMinimalKerr);
  ::setenv(kOutputRootEnv, env_root.c_str(), 1);
  const fs::path dir = resolve_output_dir(c, fallback);
  const RunReport r = run(c, {fallback, nullptr});
  ::unsetenv(kOutputRootEnv);
  CHECK(dir == env_root / "out" / "kerr_small");
  CHECK(r.directory == dir);
  CHECK(fs::exists(env_root / "out" / "kerr_small" / "timeseries.csv"));
  CHECK_FALSE(fs::exists(fallback / "out"));
  CHECK(resolve_output_dir(c, fallback) == fallback / "out" / "kerr_small");
}

TEST_CASE("inconsistent configs give the config exit code") {
  RunConfig c = parse_config(kMinimalKerr);
  c.basis.push_back(c.basis[0]);
  const RunReport r = run(c, {scratch_dir("bad"), nullptr});
  CHECK(r.exit_code == kExitConfigError);
  CHECK_FALSE(r.error.empty());
}

TEST_CASE("a compare sweep writes a non-increasing summary") {
  auto j = nlohmann::json::parse(kMinimalKerr);
  j["run"]["t_end"] = 1.0;
  j["compare"] = {{"oracle_cutoff", 14}, {"depths", {1, 3, 5}}};
  const RunConfig c = parse_config(j.dump());
  const RunReport r = run(c, {scratch_dir("sweep"), nullptr});
  REQUIRE(r.exit_code == kExitOk);
  REQUIRE(r.sweep.size() == 3);
  for (std::size_t i = 0; i < r.sweep.size(); ++i) {
    CHECK(r.sweep[i].ok);
    if (i > 0) CHECK(r.sweep[i].max_infidelity <= 1.1 * r.sweep[i - 1].max_infidelity + 1e-12);
  }
  CHECK(r.sweep.back().max_infidelity < 1e-3);
  for (const char* f : {"oracle.csv", "sweep_summary.csv", "infidelity_N3.csv", "timeseries_N5.csv"}) {
    CHECK(fs::exists(r.directory / f));
  }
  CHECK(csv_rows(r.directory / "sweep_summary.csv").size() == 4);
}

}  // TEST_SUITE
