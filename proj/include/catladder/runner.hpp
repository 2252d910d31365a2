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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "catladder/config.hpp"
#include "catladder/fock.hpp"
#include "catladder/tdvp.hpp"

namespace catladder {

enum ExitCode : int { kExitOk = 0, kExitConfigError = 1, kExitRuntimeFailure = 2 };

/// Environment variable that replaces the working directory as output root.
inline constexpr const char* kOutputRootEnv = "CATLADDER_OUTPUT_ROOT";

/// <root>/<output.directory>/<name>, where root is the env override or `fallback_root`.
std::filesystem::path resolve_output_dir(const RunConfig& config,
                                         const std::filesystem::path& fallback_root = std::filesystem::current_path());

/// Basis specs with every depth replaced by `depth` (sweep members).
std::vector<LadderBasisSpec> basis_with_depth(const std::vector<LadderBasisSpec>& basis, int depth);

/// Observable values in request order. Moments give complex values, parity
/// and purity are real.
std::vector<Complex> evaluate_observables(const std::vector<ObservableRequest>& requests,
                                          const VariationalState& state, const std::vector<LadderBasisSpec>& specs);
std::vector<Complex> evaluate_observables(const std::vector<ObservableRequest>& requests,
                                          const FockDensityMatrix& rho);

/// CSV column names contributed by each observable.
std::vector<std::string> observable_columns(const std::vector<ObservableRequest>& requests);

/// Deterministic "%.12e" formatting.
std::string format_number(double x);

struct SweepMember {
  int depth = 0;
  bool ok = false;
  std::string error;
  double max_infidelity_raw = 0.0;
  double max_infidelity = 0.0;  // renormalized states
  double max_leakage = 0.0;
  double max_clipped_mass = 0.0;
};

struct RunReport {
  int exit_code = kExitOk;
  std::string status = "ok";  // ok | failed
  std::string error;
  std::filesystem::path directory;
  std::vector<std::string> files;
  Trajectory trajectory;  // main run, coefficients not stored
  std::vector<SweepMember> sweep;
  double wall_seconds = 0.0;
};

struct RunOptions {
  /// Replaces the working directory as the output root (the env var still wins).
  std::optional<std::filesystem::path> root;
  /// Progress messages; null silences them.
  std::ostream* log = nullptr;
};

/// Executes the main TDVP run, Wigner snapshots, and the compare sweep, and
/// writes all artifacts. Engine failures give exit code 2 with partial
/// outputs flagged in the manifest; nothing is thrown for them.
RunReport run(const RunConfig& config, const RunOptions& options = {});

}  // namespace catladder
