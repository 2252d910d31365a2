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

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "catladder/polynomial.hpp"

namespace catladder {

/// Piecewise-constant complex multiplier. Before the first segment start the
/// first value applies, so a quench from G0 to G1 at t = 0 is {(-inf.., G0), (0, G1)}.
class DriveSchedule {
 public:
  enum class Kind { Constant, PiecewiseConstant };

  DriveSchedule() : segments_{{0.0, Complex(1.0, 0.0)}} {}

  static DriveSchedule constant(Complex value);
  /// Segments (t_start, value) with strictly increasing t_start.
  static DriveSchedule piecewise(std::vector<std::pair<double, Complex>> segments);

  Kind kind() const { return kind_; }
  const std::vector<std::pair<double, Complex>>& segments() const { return segments_; }
  Complex at(double t) const;
  DriveSchedule conjugated() const;
  DriveSchedule scaled(Complex s) const;
  /// Segment starts after the first, where the value jumps.
  std::vector<double> breakpoints() const;

 private:
  Kind kind_ = Kind::Constant;
  std::vector<std::pair<double, Complex>> segments_;
};

struct HamiltonianTerm {
  OperatorPolynomial poly;
  DriveSchedule multiplier;
};

struct Dissipator {
  OperatorPolynomial jump;
  double rate = 0.0;
};

/// Lindblad model: H(t) = sum_i multiplier_i(t) * poly_i plus rate_j D[L_j].
struct ModelSpec {
  std::size_t modes = 1;
  std::string name = "custom";
  std::vector<HamiltonianTerm> hamiltonian;
  std::vector<Dissipator> dissipators;

  void add_hamiltonian(OperatorPolynomial poly, DriveSchedule multiplier = DriveSchedule());
  void add_dissipator(OperatorPolynomial jump, double rate);

  /// Throws ModelError on negative rates, mode-count mismatches, or a
  /// Hamiltonian that is not Hermitian on some schedule segment.
  void validate() const;
  OperatorPolynomial hamiltonian_at(double t) const;
  /// Union of all schedule breakpoints, sorted.
  std::vector<double> breakpoints() const;
};

/// One term coeff * left rho right of the operator-sum form of the generator.
struct KrausTerm {
  OperatorPolynomial left;
  OperatorPolynomial right;
  Complex coeff{1.0, 0.0};
};

using KrausTermList = std::vector<KrausTerm>;

/// -i[H(t), .] as (H, 1, -i), (1, H, +i); each rate D[L] as (L, L†, rate),
/// (L†L, 1, -rate/2), (1, L†L, -rate/2). Zero polynomials are omitted.
KrausTermList kraus_terms(const ModelSpec& model, double t);

/// Highest creation power on mode k over every polynomial kraus_terms can emit.
int max_creation_power(const ModelSpec& model, std::size_t k);

ModelSpec build_zero_model(std::size_t modes);
/// H = (U/2) a†² a² + F (a + a†), loss kappa D[a].
ModelSpec build_kerr_driven(double U, double F, double kappa);
/// Two Kerr modes with shared detuning -Delta a†a, hopping -J(a1† a2 + a1 a2†),
/// drive F on mode 1 only, loss kappa on both.
ModelSpec build_dimer(double U, double F, double J, double Delta, double kappa);
/// H = (G(t)/2) a² + (G*(t)/2) a†² + (U/2) a†² a² + F_x (a + a†), loss eta D[a²].
ModelSpec build_two_photon_kerr(const DriveSchedule& G, double U, double eta, double F_x);
/// M two-photon Kerr modes on an open chain with hopping J_i (a_i a†_{i+1} + a†_i a_{i+1}).
ModelSpec build_cat_chain(std::size_t M, Complex G, double U, double eta, const std::vector<double>& J);

}  // namespace catladder
