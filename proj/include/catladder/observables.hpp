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

#include <vector>

#include "catladder/fock.hpp"
#include "catladder/tdvp.hpp"

namespace catladder {

/// <O> = Tr(M_O B) with M_O the operator matrix between basis states.
Complex expectation(const VariationalState& state, const std::vector<LadderBasisSpec>& specs,
                    const OperatorPolynomial& poly);
Complex expectation(const FockDensityMatrix& rho, const OperatorPolynomial& poly);

/// <prod_{k in modes} (-1)^{n_k}>. Cat ladders read it from parity-block
/// traces; plain ladders use the exact overlap <phi_m|phi_n(-alpha)>.
double parity(const VariationalState& state, const std::vector<LadderBasisSpec>& specs,
              const std::vector<std::size_t>& modes);
double parity(const FockDensityMatrix& rho, const std::vector<std::size_t>& modes);

struct FidelityResult {
  double fidelity = 0.0;
  /// Sum of |negative eigenvalues| removed from either state (after normalization).
  double clipped_mass = 0.0;
};

/// Uhlmann fidelity (Tr sqrt(sqrt(r1) r2 sqrt(r1)))^2. With normalize set,
/// both states are scaled to unit trace first and the result is capped at 1.
FidelityResult fidelity(const Matrix& rho1, const Matrix& rho2, bool normalize = true);
FidelityResult fidelity(const FockDensityMatrix& rho1, const FockDensityMatrix& rho2, bool normalize = true);

/// Tr(rho^2) / Tr(rho)^2.
double purity(const FockDensityMatrix& rho);
double purity(const VariationalState& state, const std::vector<LadderBasisSpec>& specs);

struct WignerGrid {
  std::vector<double> x;  // Re beta
  std::vector<double> p;  // Im beta
  RealMatrix values;      // values(ip, ix)
};

std::vector<double> linspace(double lo, double hi, std::size_t n);

/// W(beta) = (2/pi) Tr[D(beta) Pi D†(beta) rho] for a single-mode Fock matrix,
/// normalized so that its integral over d Re(beta) d Im(beta) is 1.
WignerGrid wigner(const Matrix& rho_single_mode, const std::vector<double>& x, const std::vector<double>& p);
/// Reduced Wigner function of one mode.
WignerGrid wigner(const FockDensityMatrix& rho, std::size_t mode, const std::vector<double>& x,
                  const std::vector<double>& p);

/// Trapezoid integral of a Wigner grid.
double wigner_integral(const WignerGrid& w);

}  // namespace catladder
