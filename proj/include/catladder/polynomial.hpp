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
#include <string>
#include <utility>
#include <vector>

#include "catladder/linalg.hpp"

namespace catladder {

/// (creation power p, annihilation power q) of a†^p a^q on one mode.
struct ModePowers {
  int creation = 0;
  int annihilation = 0;

  bool is_identity() const { return creation == 0 && annihilation == 0; }
  int degree() const { return creation + annihilation; }
  friend bool operator==(const ModePowers&, const ModePowers&) = default;
  friend auto operator<=>(const ModePowers&, const ModePowers&) = default;
};

/// coeff * prod_k a_k†^{p_k} a_k^{q_k}, normal ordered on every mode.
struct Monomial {
  Complex coeff{1.0, 0.0};
  std::vector<ModePowers> powers;

  std::vector<std::size_t> support() const;
  int total_degree() const;
};

/// Normally ordered polynomial in the creation and annihilation operators of
/// M bosonic modes.
///
/// Every constructor and arithmetic operation keeps the result normal ordered,
/// so products are rewritten with [a, a†] = 1 once, when the polynomial is
/// built, and never during evaluation.
class OperatorPolynomial {
 public:
  OperatorPolynomial() = default;
  explicit OperatorPolynomial(std::size_t modes) : modes_(modes) {}

  static OperatorPolynomial identity(std::size_t modes, Complex coeff = 1.0);
  static OperatorPolynomial annihilation(std::size_t modes, std::size_t k);
  static OperatorPolynomial creation(std::size_t modes, std::size_t k);
  static OperatorPolynomial number(std::size_t modes, std::size_t k);
  /// coeff * a_k†^p a_k^q.
  static OperatorPolynomial monomial(std::size_t modes, std::size_t k, int p, int q,
                                     Complex coeff = 1.0);

  std::size_t modes() const { return modes_; }
  const std::vector<Monomial>& monomials() const { return monomials_; }
  bool is_zero() const { return monomials_.empty(); }

  /// Appends a monomial after validating it; like terms are merged.
  void add_term(const Monomial& m);

  OperatorPolynomial adjoint() const;
  /// Highest creation power that appears on mode k.
  int max_creation(std::size_t k) const;
  int max_creation() const;
  bool is_hermitian(double tol = 1e-12) const;

  OperatorPolynomial& operator+=(const OperatorPolynomial& rhs);
  OperatorPolynomial& operator*=(Complex s);

  friend OperatorPolynomial operator+(OperatorPolynomial a, const OperatorPolynomial& b) {
    return a += b;
  }
  friend OperatorPolynomial operator-(OperatorPolynomial a, const OperatorPolynomial& b) {
    OperatorPolynomial nb = b;
    nb *= -1.0;
    return a += nb;
  }
  friend OperatorPolynomial operator*(Complex s, OperatorPolynomial a) { return a *= s; }
  friend OperatorPolynomial operator*(const OperatorPolynomial& a, const OperatorPolynomial& b);
  friend bool operator==(const OperatorPolynomial& a, const OperatorPolynomial& b);

  std::string to_string() const;

 private:
  void simplify();

  std::size_t modes_ = 0;
  std::vector<Monomial> monomials_;
};

}  // namespace catladder
