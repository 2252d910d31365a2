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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "catladder/model.hpp"
#include "catladder/tdvp.hpp"

namespace catladder {

/// Builder name plus the parameters it reads; unused fields keep defaults.
struct ModelConfig {
  std::string builder = "zero";  // zero | kerr_driven | dimer | two_photon_kerr | cat_chain
  std::size_t modes = 1;
  double U = 0.0;
  double F = 0.0;
  double kappa = 0.0;
  double J = 0.0;
  double Delta = 0.0;
  double eta = 0.0;
  double F_x = 0.0;
  /// Two-photon drive; one segment means a constant drive.
  std::vector<std::pair<double, Complex>> G{{0.0, Complex(0.0)}};
  std::vector<double> hopping;  // cat_chain, M-1 entries

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

struct ObservableRequest {
  enum class Kind { Moment, Parity, Purity };
  Kind kind = Kind::Moment;
  std::string name;
  /// Moment: <a_mode†^creation a_mode^annihilation>.
  std::size_t mode = 0;
  int creation = 0;
  int annihilation = 0;
  /// Parity: product of (-1)^{n_k} over these modes.
  std::vector<std::size_t> modes;

  friend bool operator==(const ObservableRequest&, const ObservableRequest&) = default;
};

struct WignerRequest {
  std::size_t mode = 0;
  double x_min = -4.0, x_max = 4.0;
  double p_min = -4.0, p_max = 4.0;
  std::size_t resolution = 81;
  int cutoff = 40;
  std::vector<double> times;

  friend bool operator==(const WignerRequest&, const WignerRequest&) = default;
};

struct RunSection {
  double t_start = 0.0;
  double t_end = 1.0;
  std::size_t samples = 101;
  std::vector<ObservableRequest> observables;

  std::vector<double> sample_times() const;
  friend bool operator==(const RunSection&, const RunSection&) = default;
};

struct CompareSection {
  int oracle_cutoff = 20;
  std::vector<int> depths;

  friend bool operator==(const CompareSection&, const CompareSection&) = default;
};

struct OutputSection {
  std::string directory = "out";
  std::vector<WignerRequest> wigner;

  friend bool operator==(const OutputSection&, const OutputSection&) = default;
};

struct RunConfig {
  std::string name = "run";
  std::string description;
  ModelConfig model;
  std::vector<LadderBasisSpec> basis;
  std::vector<ModeState> initial_state;
  EngineConfig engine;
  RunSection run;
  std::optional<CompareSection> compare;
  OutputSection output;

  friend bool operator==(const RunConfig& a, const RunConfig& b);
};

bool operator==(const ModeState& a, const ModeState& b);
bool operator==(const EngineConfig& a, const EngineConfig& b);

/// Parses and validates; throws ConfigError with a key path on any problem.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
/// Canonical JSON text of a fully resolved config.
std::string to_json(const RunConfig& config, int indent = 2);
/// Cross-field checks (mode counts, ranges); parse_config calls it.
void validate(const RunConfig& config);

ModelSpec build_model(const ModelConfig& config);

/// 64-bit FNV-1a of the canonical JSON.
std::uint64_t config_hash(const RunConfig& config);

}  // namespace catladder
