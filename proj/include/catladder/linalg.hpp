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

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace catladder {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Dense Kronecker product, first factor slowest.
Matrix kron(const Matrix& a, const Matrix& b);
Matrix kron(std::span<const Matrix> factors);

/// Regularized spectral functions of a Hermitian positive semidefinite matrix.
///
/// Eigenvalues below `relative_cutoff * lambda_max` are discarded; the
/// inverse and the inverse square root act as zero on the discarded subspace.
struct SpectralInverse {
  Matrix inverse;
  Matrix inverse_sqrt;
  Matrix sqrt;
  Matrix projector;
  RealVector eigenvalues;  // ascending, all of them
  std::size_t retained = 0;
  double lambda_max = 0.0;

  bool truncated() const { return retained < static_cast<std::size_t>(eigenvalues.size()); }
};

/// Returns nullopt when no eigenvalue survives the cutoff (or lambda_max <= 0).
std::optional<SpectralInverse> spectral_inverse(const Matrix& hermitian, double relative_cutoff);

/// Sum of Kronecker products acting on a tensor-product space.
///
/// A missing factor stands for the identity on that mode and is skipped when
/// the operator is applied.
struct KronTerm {
  Complex coeff{1.0, 0.0};
  std::vector<std::optional<Matrix>> factors;
};

class KronOperator {
 public:
  KronOperator() = default;
  explicit KronOperator(std::vector<std::size_t> dims) : dims_(std::move(dims)) {}

  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t dim() const;
  const std::vector<KronTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  void add(KronTerm term);
  void add(const KronOperator& other, Complex scale = 1.0);

  /// Elementwise transpose of every factor: (sum c ⊗F)^T.
  KronOperator transposed() const;
  KronOperator adjoint() const;

  /// Op * X for X with dim() rows.
  Matrix apply_left(const Matrix& x) const;
  /// X * Op for X with dim() columns.
  Matrix apply_right(const Matrix& x) const;
  Matrix dense() const;

 private:
  std::vector<std::size_t> dims_;
  std::vector<KronTerm> terms_;
};

/// Apply one factor along `mode` (left multiplication on the row index).
Matrix apply_mode_factor(const Matrix& factor, std::span<const std::size_t> dims, std::size_t mode,
                         const Matrix& x);

/// Tr(A B) without forming the product.
Complex trace_of_product(const Matrix& a, const Matrix& b);

/// Keeps freed large blocks in the heap so per-step temporaries are not
/// mapped and unmapped each time. Process-wide; a no-op outside glibc.
void retain_large_allocations();

}  // namespace catladder
