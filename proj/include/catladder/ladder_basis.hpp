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

#include <cstddef>
#include <span>
#include <string>

#include "catladder/linalg.hpp"
#include "catladder/polynomial.hpp"

namespace catladder {

enum class Sector { Plain, Z2Cat };

std::string to_string(Sector s);
Sector sector_from_string(const std::string& s);

/// Per-mode variational basis.
///
/// Plain: the photon-added coherent-state ladder a†^n ||alpha>, n = 0..depth.
/// Z2Cat: the same ladder built on the Bargmann cats ||alpha> ± ||-alpha>.
/// Cat states are labelled by their photon-number parity, so a† and a flip the
/// label while d/dalpha keeps it. Flattened index is 2n + parity (0 even, 1 odd).
struct LadderBasisSpec {
  Complex alpha{0.0, 0.0};
  int depth = 0;
  Sector sector = Sector::Plain;

  int parities() const { return sector == Sector::Z2Cat ? 2 : 1; }
  std::size_t dim() const { return static_cast<std::size_t>((depth + 1) * parities()); }
  std::size_t index(int n, int parity = 0) const {
    return static_cast<std::size_t>(n * parities() + parity);
  }
  /// Throws BasisError on negative depth or a cat basis at alpha = 0.
  void validate() const;

  friend bool operator==(const LadderBasisSpec&, const LadderBasisSpec&) = default;
};

/// Gram matrix <phi_i|phi_j> of a ladder basis, built beyond the basis depth
/// so that creation operators and block shifts can be read off directly.
class OverlapMatrix {
 public:
  OverlapMatrix(LadderBasisSpec spec, int extent, Matrix entries);

  const LadderBasisSpec& spec() const { return spec_; }
  int extent() const { return extent_; }
  /// Square matrix over ladder indices 0..extent (times parity).
  const Matrix& entries() const { return entries_; }

  Complex at(int m, int n, int mu = 0, int nu = 0) const;
  /// d x d block read at [m + row_shift, n + col_shift]; the (l), (r), (l,r)
  /// block shifts are (1,0), (0,1), (1,1).
  Matrix shifted(int row_shift, int col_shift) const;
  Matrix restricted() const { return shifted(0, 0); }

 private:
  LadderBasisSpec spec_;
  int extent_;
  Matrix entries_;
};

using OperatorMatrix = Matrix;

/// Builds S to extent depth + extra_degree with the two-index ladder recursion.
OverlapMatrix build_overlap(const LadderBasisSpec& spec, int extra_degree);

/// <phi_{m + row_shift}| a†^p a^q |phi_n> for one mode, m, n in 0..depth.
OperatorMatrix monomial_matrix(const ModePowers& powers, const OverlapMatrix& s, int row_shift = 0);

/// Matrix of a single-mode polynomial between basis states of depth N.
OperatorMatrix operator_matrix(const OperatorPolynomial& poly, const OverlapMatrix& s);

/// Matrix of a multi-mode polynomial on the tensor-product basis, mode-major.
/// Small systems only; see operator_kron for the factored form.
OperatorMatrix operator_matrix(const OperatorPolynomial& poly, std::span<const OverlapMatrix> s);

/// Factored form of operator_matrix. When shift_mode is set, the bra index of
/// that mode is advanced by one ladder step (the (l_k) block shift).
KronOperator operator_kron(const OperatorPolynomial& poly, std::span<const OverlapMatrix> s,
                           std::optional<std::size_t> shift_mode = std::nullopt);

/// <phi_m | d/dalpha phi_n>, which equals S[m, n+1] in both sectors.
OperatorMatrix tangent_overlap(const OverlapMatrix& s);

/// <phi^bra_m | phi^ket_n> between two ladders with different displacements
/// and possibly different sectors.
Matrix cross_overlap(const LadderBasisSpec& bra, const LadderBasisSpec& ket);

/// Matrix of the photon-number parity (-1)^n between basis states.
OperatorMatrix parity_matrix(const LadderBasisSpec& spec);

/// Fock amplitudes <j|phi_n>, j = 0..cutoff; shape (cutoff+1) x dim.
Matrix fock_amplitudes(const LadderBasisSpec& spec, int cutoff);

}  // namespace catladder
