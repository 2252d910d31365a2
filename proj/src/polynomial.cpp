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

#include "catladder/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "catladder/errors.hpp"

namespace catladder {
namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// a^q a†^p = sum_j C(q,j) C(p,j) j! a†^{p-j} a^{q-j}
std::vector<std::pair<double, ModePowers>> reorder(const ModePowers& left, const ModePowers& right) {
  std::vector<std::pair<double, ModePowers>> out;
  const int q = left.annihilation;
  const int p = right.creation;
  for (int j = 0; j <= std::min(q, p); ++j) {
    const double c = binomial(q, j) * binomial(p, j) * factorial(j);
    out.emplace_back(c, ModePowers{left.creation + p - j, q - j + right.annihilation});
  }
  return out;
}

}  // namespace

std::vector<std::size_t> Monomial::support() const {
  std::vector<std::size_t> s;
  for (std::size_t k = 0; k < powers.size(); ++k) {
    if (!powers[k].is_identity()) s.push_back(k);
  }
  return s;
}

int Monomial::total_degree() const {
  int d = 0;
  for (const auto& p : powers) d += p.degree();
  return d;
}

OperatorPolynomial OperatorPolynomial::identity(std::size_t modes, Complex coeff) {
  OperatorPolynomial out(modes);
  out.add_term(Monomial{coeff, std::vector<ModePowers>(modes)});
  return out;
}

OperatorPolynomial OperatorPolynomial::monomial(std::size_t modes, std::size_t k, int p, int q,
                                                Complex coeff) {
  if (k >= modes) throw ModelError("mode index " + std::to_string(k) + " out of range");
  OperatorPolynomial out(modes);
  Monomial m{coeff, std::vector<ModePowers>(modes)};
  m.powers[k] = ModePowers{p, q};
  out.add_term(m);
  return out;
}

OperatorPolynomial OperatorPolynomial::annihilation(std::size_t modes, std::size_t k) {
  return monomial(modes, k, 0, 1);
}

OperatorPolynomial OperatorPolynomial::creation(std::size_t modes, std::size_t k) {
  return monomial(modes, k, 1, 0);
}

OperatorPolynomial OperatorPolynomial::number(std::size_t modes, std::size_t k) {
  return monomial(modes, k, 1, 1);
}

void OperatorPolynomial::add_term(const Monomial& m) {
  if (m.powers.size() != modes_) {
    throw ModelError("monomial has " + std::to_string(m.powers.size()) + " modes, polynomial has " +
                     std::to_string(modes_));
  }
  for (const auto& p : m.powers) {
    if (p.creation < 0 || p.annihilation < 0) throw ModelError("negative operator power");
  }
  monomials_.push_back(m);
  simplify();
}

void OperatorPolynomial::simplify() {
  std::map<std::vector<ModePowers>, Complex> merged;
  for (const auto& m : monomials_) merged[m.powers] += m.coeff;
  monomials_.clear();
  for (const auto& [powers, c] : merged) {
    if (c != Complex(0.0)) monomials_.push_back(Monomial{c, powers});
  }
}

OperatorPolynomial OperatorPolynomial::adjoint() const {
  OperatorPolynomial out(modes_);
  for (const auto& m : monomials_) {
    Monomial a{std::conj(m.coeff), m.powers};
    for (auto& p : a.powers) std::swap(p.creation, p.annihilation);
    out.monomials_.push_back(a);
  }
  out.simplify();
  return out;
}

int OperatorPolynomial::max_creation(std::size_t k) const {
  int best = 0;
  for (const auto& m : monomials_) best = std::max(best, m.powers[k].creation);
  return best;
}

int OperatorPolynomial::max_creation() const {
  int best = 0;
  for (std::size_t k = 0; k < modes_; ++k) best = std::max(best, max_creation(k));
  return best;
}

bool OperatorPolynomial::is_hermitian(double tol) const {
  const OperatorPolynomial diff = *this - adjoint();
  for (const auto& m : diff.monomials_) {
    if (std::abs(m.coeff) > tol) return false;
  }
  return true;
}

OperatorPolynomial& OperatorPolynomial::operator+=(const OperatorPolynomial& rhs) {
  if (rhs.modes_ != modes_) throw ModelError("adding polynomials over different mode counts");
  monomials_.insert(monomials_.end(), rhs.monomials_.begin(), rhs.monomials_.end());
  simplify();
  return *this;
}

OperatorPolynomial& OperatorPolynomial::operator*=(Complex s) {
  for (auto& m : monomials_) m.coeff *= s;
  simplify();
  return *this;
}

OperatorPolynomial operator*(const OperatorPolynomial& a, const OperatorPolynomial& b) {
  if (a.modes_ != b.modes_) throw ModelError("multiplying polynomials over different mode counts");
  OperatorPolynomial out(a.modes_);
  for (const auto& ma : a.monomials_) {
    for (const auto& mb : b.monomials_) {
      std::vector<Monomial> partial{Monomial{ma.coeff * mb.coeff, {}}};
      for (std::size_t k = 0; k < a.modes_; ++k) {
        std::vector<Monomial> next;
        for (const auto& [c, pw] : reorder(ma.powers[k], mb.powers[k])) {
          for (const auto& m : partial) {
            Monomial n = m;
            n.coeff *= c;
            n.powers.push_back(pw);
            next.push_back(std::move(n));
          }
        }
        partial = std::move(next);
      }
      out.monomials_.insert(out.monomials_.end(), partial.begin(), partial.end());
    }
  }
  out.simplify();
  return out;
}

bool operator==(const OperatorPolynomial& a, const OperatorPolynomial& b) {
  if (a.modes_ != b.modes_ || a.monomials_.size() != b.monomials_.size()) return false;
  for (std::size_t i = 0; i < a.monomials_.size(); ++i) {
    if (a.monomials_[i].powers != b.monomials_[i].powers) return false;
    if (a.monomials_[i].coeff != b.monomials_[i].coeff) return false;
  }
  return true;
}

std::string OperatorPolynomial::to_string() const {
  if (monomials_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& m : monomials_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << m.coeff.real() << (m.coeff.imag() < 0 ? "-" : "+") << std::abs(m.coeff.imag())
       << "i)";
    for (std::size_t k = 0; k < m.powers.size(); ++k) {
      const auto& p = m.powers[k];
      if (p.creation) os << " ad" << k << (p.creation > 1 ? "^" + std::to_string(p.creation) : "");
      if (p.annihilation) {
        os << " a" << k << (p.annihilation > 1 ? "^" + std::to_string(p.annihilation) : "");
      }
    }
  }
  return os.str();
}

}  // namespace catladder
