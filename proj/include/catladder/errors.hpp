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

#include <stdexcept>
#include <string>

namespace catladder {

/// Invalid basis specification or an overlap request outside the built extent.
class BasisError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid model declaration (negative rates, non-Hermitian Hamiltonian, bad shapes).
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Overlap matrix could not be regularized for some mode.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive integration failed (step-size underflow, non-finite state).
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double t_reached)
      : std::runtime_error(what), t_reached_(t_reached) {}
  double t_reached() const noexcept { return t_reached_; }

 private:
  double t_reached_;
};

/// Run configuration failed validation. Messages carry the offending key path.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace catladder
