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
#include <limits>
#include <optional>
#include <vector>

#include "catladder/integrator.hpp"
#include "catladder/ladder_basis.hpp"
#include "catladder/linalg.hpp"
#include "catladder/model.hpp"

namespace catladder {

struct EngineConfig {
  double rtol = 1e-8;
  double atol = 1e-8;
  /// Relative threshold of the corner-population gate on alpha motion.
  double epsilon_alpha = 1e-8;
  /// Relative eigenvalue cutoff used when inverting overlap matrices.
  double svd_cutoff = 1e-12;
  bool renormalize_trace = true;
  bool symmetrize_B = true;
  double max_step = std::numeric_limits<double>::infinity();
  /// Keep every displacement fixed at its initial value (pure master equation
  /// in a fixed non-orthogonal basis).
  bool freeze_alpha = false;

  void validate() const;
};

/// Variational density matrix rho = sum_ij B_ij |phi_i><phi_j| over the
/// tensor-product ladder basis. B is stored in the raw (unscaled) convention.
struct VariationalState {
  double t = 0.0;
  std::vector<Complex> alphas;
  Matrix B;
};

/// Per-mode normalization of ladder state n: sqrt(n!). Internally the engine
/// works with S_hat = L^-1 S L^-1 and B_hat = L B L for L = diag(sqrt(n!)).
RealVector ladder_scale(const LadderBasisSpec& spec);
RealVector ladder_scale(std::span<const LadderBasisSpec> specs);

/// Single-mode geometric data at fixed alpha.
struct ModeGeometry {
  LadderBasisSpec spec;
  OverlapMatrix overlap;
  Matrix S;      // restricted, raw
  Matrix S_l;    // bra shifted one ladder step
  Matrix S_r;    // ket shifted (tangent overlap)
  Matrix S_lr;
  Matrix S_pinv;  // regularized inverse, raw
  /// Spectral data of the rescaled overlap.
  SpectralInverse scaled;
  /// ||S_l (1 - S^+ S)||_F / ||S_l||_F: how far the tangent leaves the basis
  /// span; the scalar-per-mode alpha equation assumes cross-mode terms vanish.
  double orthogonality_defect = 0.0;
};

/// Builds per-mode geometry; throws GeometryError naming the mode when no
/// eigenvalue survives the cutoff.
ModeGeometry build_mode_geometry(const LadderBasisSpec& spec, int extra_degree, double svd_cutoff,
                                 std::size_t mode_index = 0);

/// Dense geometry in the raw convention, for small systems, inspection, and tests.
struct GeometryBundle {
  std::vector<ModeGeometry> modes;
  std::vector<std::size_t> dims;
  double t = 0.0;
  Matrix S;
  Matrix S_pinv;
  KrausTermList terms;
  std::vector<Matrix> left;                // A_p
  std::vector<Matrix> right;               // D_p
  std::vector<std::vector<Matrix>> left_shifted;  // A_p^(l_k), [p][k]
  double epsilon_alpha = 1e-8;
  bool freeze_alpha = false;

  std::size_t dim() const { return static_cast<std::size_t>(S.rows()); }
  std::size_t mode_count() const { return modes.size(); }
  /// Tensor-embedded single-mode block: other modes carry S_j.
  Matrix embed(std::size_t k, const Matrix& factor) const;
};

/// Basis specs with the displacements replaced by `alphas`.
std::vector<LadderBasisSpec> with_alphas(std::vector<LadderBasisSpec> specs,
                                         const std::vector<Complex>& alphas);

GeometryBundle assemble_geometry(const std::vector<Complex>& alphas,
                                 const std::vector<LadderBasisSpec>& specs, const ModelSpec& model,
                                 double t, const EngineConfig& config = {});

/// L = sum_p c_p A_p B D_p.
Matrix liouvillian_matrix(const GeometryBundle& g, const Matrix& B);

struct AlphaDot {
  std::vector<Complex> values;
  std::vector<bool> frozen;
  std::vector<Complex> denominators;
  std::vector<double> thresholds;
};

/// alpha_dot_k = Tr(Y0 B) / Tr(C0 [B S B]) with the corner-population gate.
AlphaDot compute_alpha_dot(const GeometryBundle& g, const Matrix& B, const Matrix& L);
AlphaDot compute_alpha_dot(const GeometryBundle& g, const Matrix& B);

/// B_dot = S^+ L S^+ - S^+ tau B - B tau† S^+.
Matrix compute_B_dot(const GeometryBundle& g, const Matrix& B, const Matrix& L,
                     const std::vector<Complex>& alpha_dots);
Matrix compute_B_dot(const GeometryBundle& g, const Matrix& B, const std::vector<Complex>& alpha_dots);

/// C0 for mode k, tensor-embedded.
Matrix corner_tensor(const GeometryBundle& g, std::size_t k);

struct RhsResult {
  AlphaDot alpha_dot;
  Matrix B_dot;  // raw convention
};

/// Factored right-hand side used by evolve; agrees with the dense path.
RhsResult evaluate_rhs(const VariationalState& state, const std::vector<LadderBasisSpec>& specs,
                       const ModelSpec& model, const EngineConfig& config = {});

struct SampleDiagnostics {
  double trace = 1.0;               // Tr(B S) before any renormalization at this sample
  double hermiticity_defect = 0.0;  // ||B - B†|| / ||B|| in the scaled frame
  double min_eigenvalue = std::numeric_limits<double>::quiet_NaN();
  std::vector<bool> gate_open;
  double orthogonality_defect = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<Complex>> alphas;
  std::vector<Matrix> coefficients;  // raw B, when stored
  std::vector<SampleDiagnostics> diagnostics;
  /// Times at which the gate of each mode opened (closed to open transitions).
  std::vector<std::vector<double>> gate_open_times;
  double max_step_trace_drift = 0.0;  // largest |Tr(BS) - 1| seen after a step
  IntegratorStats stats;
};

struct EvolveOptions {
  bool store_states = true;
  /// Skip the physical-spectrum diagnostic above this dimension.
  std::size_t eigen_diagnostic_max_dim = 400;
  std::function<void(const VariationalState&, const SampleDiagnostics&)> on_sample;
};

Trajectory evolve(const VariationalState& state0, const ModelSpec& model,
                  const std::vector<LadderBasisSpec>& specs, const EngineConfig& config,
                  double t_end, const std::vector<double>& sample_times,
                  const EvolveOptions& options = {});

/// Single-mode initial states.
struct ModeState {
  enum class Kind { Coherent, EvenCat, OddCat };
  Kind kind = Kind::Coherent;
  Complex amplitude{0.0, 0.0};
};

/// Projects a product of normalized single-mode states onto the ladder basis:
/// B_k = S^+ v v† S^+ with v_m = <phi_m|psi>, B = kron of B_k.
VariationalState embed_initial_state(const std::vector<ModeState>& states,
                                     const std::vector<LadderBasisSpec>& specs, double t0 = 0.0);

/// Tr(B S).
Complex physical_trace(const Matrix& B, const std::vector<LadderBasisSpec>& specs);

}  // namespace catladder
