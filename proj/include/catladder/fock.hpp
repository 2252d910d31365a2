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

#include <functional>
#include <vector>

#include "catladder/integrator.hpp"
#include "catladder/ladder_basis.hpp"
#include "catladder/model.hpp"
#include "catladder/tdvp.hpp"

namespace catladder {

/// Density matrix over Fock states |0..cutoff> per mode, mode-major.
struct FockDensityMatrix {
  int cutoff = 0;
  std::size_t modes = 1;
  Matrix entries;

  std::size_t local_dim() const { return static_cast<std::size_t>(cutoff + 1); }
  std::vector<std::size_t> dims() const { return std::vector<std::size_t>(modes, local_dim()); }
  Complex trace() const { return entries.trace(); }
};

/// Truncated a†^p a^q on one mode.
Matrix fock_monomial(const ModePowers& powers, int cutoff);
/// Polynomial as a sum of per-mode Fock factors.
KronOperator fock_operator(const OperatorPolynomial& poly, int cutoff);

struct FockEmbedding {
  FockDensityMatrix rho;
  /// 1 - Tr(rho_fock) / Tr(B S): weight lost above the cutoff.
  double leakage = 0.0;
  bool truncated = false;  // leakage above the 1e-10 bound
};

FockEmbedding ladder_to_fock(const VariationalState& state, const std::vector<LadderBasisSpec>& specs,
                             int cutoff);

/// Reduced Fock density matrix of one mode, traced over the others in the
/// ladder basis so the full multi-mode Fock space is never formed.
Matrix reduced_fock(const VariationalState& state, const std::vector<LadderBasisSpec>& specs, std::size_t mode,
                    int cutoff);

/// Pure product states in Fock space.
FockDensityMatrix fock_product_state(const std::vector<ModeState>& states, int cutoff);
FockDensityMatrix fock_coherent(Complex beta, int cutoff);

struct FockTolerances {
  double rtol = 1e-8;
  double atol = 1e-8;
  double max_step = std::numeric_limits<double>::infinity();
};

struct FockTrajectory {
  std::vector<double> times;
  std::vector<FockDensityMatrix> states;  // when stored
  std::vector<double> trace_drift;
  double max_hermiticity_defect = 0.0;
  IntegratorStats stats;
};

struct FockEvolveOptions {
  bool store_states = true;
  std::function<void(double, const FockDensityMatrix&)> on_sample;
};

/// Dense truncated Lindblad integration with the engine's integrator.
FockTrajectory evolve_fock(const FockDensityMatrix& rho0, const ModelSpec& model, double t0, double t_end,
                           const std::vector<double>& sample_times, const FockTolerances& tol = {},
                           const FockEvolveOptions& options = {});

/// Generator applied to rho: sum_p c_p L_p rho R_p at time t.
Matrix apply_lindblad(const ModelSpec& model, double t, const FockDensityMatrix& rho);

/// Reduced density matrix of one mode.
Matrix partial_trace(const FockDensityMatrix& rho, std::size_t keep);

}  // namespace catladder
