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

#include "catladder/ladder_basis.hpp"

#include <cmath>

#include "catladder/errors.hpp"

namespace catladder {

std::string to_string(Sector s) { return s == Sector::Plain ? "plain" : "z2cat"; }

Sector sector_from_string(const std::string& s) {
  if (s == "plain") return Sector::Plain;
  if (s == "z2cat") return Sector::Z2Cat;
  throw BasisError("unknown sector '" + s + "' (expected plain or z2cat)");
}

void LadderBasisSpec::validate() const {
  if (depth < 0) throw BasisError("ladder depth must be >= 0, got " + std::to_string(depth));
  if (sector == Sector::Z2Cat && alpha == Complex(0.0)) {
    throw BasisError("z2cat basis at alpha = 0: the odd cat state vanishes and S is singular");
  }
}

OverlapMatrix::OverlapMatrix(LadderBasisSpec spec, int extent, Matrix entries)
    : spec_(spec), extent_(extent), entries_(std::move(entries)) {}

Complex OverlapMatrix::at(int m, int n, int mu, int nu) const {
  if (m < 0 || n < 0) return 0.0;
  if (m > extent_ || n > extent_) {
    throw BasisError("overlap entry (" + std::to_string(m) + "," + std::to_string(n) +
                     ") beyond built extent " + std::to_string(extent_));
  }
  const LadderBasisSpec& sp = spec_;
  return entries_(static_cast<Eigen::Index>(sp.index(m, mu)),
                  static_cast<Eigen::Index>(sp.index(n, nu)));
}

Matrix OverlapMatrix::shifted(int row_shift, int col_shift) const {
  const int n_max = spec_.depth;
  if (n_max + row_shift > extent_ || n_max + col_shift > extent_) {
    throw BasisError("block shift (" + std::to_string(row_shift) + "," + std::to_string(col_shift) +
                     ") needs extent " + std::to_string(n_max + std::max(row_shift, col_shift)) +
                     ", built " + std::to_string(extent_));
  }
  const auto np = static_cast<Eigen::Index>(spec_.parities());
  const auto d = static_cast<Eigen::Index>(spec_.dim());
  return entries_.block(row_shift * np, col_shift * np, d, d);
}

OverlapMatrix build_overlap(const LadderBasisSpec& spec, int extra_degree) {
  spec.validate();
  if (extra_degree < 0) throw BasisError("extra_degree must be >= 0");
  const int ext = spec.depth + extra_degree;
  const Complex a = spec.alpha;
  const Complex ac = std::conj(a);
  const double a2 = std::norm(a);

  LadderBasisSpec ext_spec = spec;
  ext_spec.depth = ext;
  const auto dim = static_cast<Eigen::Index>(ext_spec.dim());
  Matrix s = Matrix::Zero(dim, dim);
  auto idx = [&](int n, int p) { return static_cast<Eigen::Index>(ext_spec.index(n, p)); };
  auto get = [&](int m, int n, int mu, int nu) -> Complex {
    return (m < 0 || n < 0) ? Complex(0.0) : s(idx(m, mu), idx(n, nu));
  };

  if (spec.sector == Sector::Plain) {
    s(0, 0) = std::exp(a2);
    // Eigenvalue relation seeds the first column: <alpha, m||alpha> = alpha^m e^{|alpha|^2}.
    for (int m = 1; m <= ext; ++m) s(m, 0) = a * s(m - 1, 0);
    for (int n = 1; n <= ext; ++n) s(0, n) = std::conj(s(n, 0));
    for (int m = 1; m <= ext; ++m) {
      for (int n = m; n <= ext; ++n) {
        const double mm = m - 1, nn = n - 1;
        const Complex v = (1.0 + a2) * get(m - 1, n - 1, 0, 0) +
                          mm * nn * get(m - 2, n - 2, 0, 0) + a * mm * get(m - 2, n - 1, 0, 0) +
                          ac * nn * get(m - 1, n - 2, 0, 0);
        s(m, n) = v;
        s(n, m) = std::conj(v);
      }
    }
  } else {
    s(idx(0, 0), idx(0, 0)) = 4.0 * std::cosh(a2);
    s(idx(0, 1), idx(0, 1)) = 4.0 * std::sinh(a2);
    // a flips the parity label: <C^mu_m | C^nu_0> = alpha <C^mubar_{m-1} | C^nubar_0>.
    for (int m = 1; m <= ext; ++m) {
      for (int mu = 0; mu < 2; ++mu) {
        for (int nu = 0; nu < 2; ++nu) {
          s(idx(m, mu), idx(0, nu)) = a * get(m - 1, 0, 1 - mu, 1 - nu);
        }
      }
    }
    for (int n = 1; n <= ext; ++n) {
      for (int mu = 0; mu < 2; ++mu) {
        for (int nu = 0; nu < 2; ++nu) {
          s(idx(0, mu), idx(n, nu)) = std::conj(s(idx(n, nu), idx(0, mu)));
        }
      }
    }
    for (int m = 1; m <= ext; ++m) {
      for (int n = m; n <= ext; ++n) {
        const double mm = m - 1, nn = n - 1;
        for (int mu = 0; mu < 2; ++mu) {
          for (int nu = 0; nu < 2; ++nu) {
            const Complex v = get(m - 1, n - 1, 1 - mu, 1 - nu) +
                              mm * nn * get(m - 2, n - 2, mu, nu) +
                              a2 * get(m - 1, n - 1, mu, nu) + a * mm * get(m - 2, n - 1, mu, nu) +
                              ac * nn * get(m - 1, n - 2, mu, nu);
            s(idx(m, mu), idx(n, nu)) = v;
            s(idx(n, nu), idx(m, mu)) = std::conj(v);
          }
        }
      }
    }
  }
  return OverlapMatrix(spec, ext, std::move(s));
}

namespace {

// Action of a and a† on ladder expansion coefficients over indices 0..extent.
Matrix lowering_action(const LadderBasisSpec& ext_spec) {
  const auto d = static_cast<Eigen::Index>(ext_spec.dim());
  const int np = ext_spec.parities();
  Matrix a = Matrix::Zero(d, d);
  for (int n = 0; n <= ext_spec.depth; ++n) {
    for (int p = 0; p < np; ++p) {
      const int q = np == 2 ? 1 - p : 0;
      const auto col = static_cast<Eigen::Index>(ext_spec.index(n, p));
      a(static_cast<Eigen::Index>(ext_spec.index(n, q)), col) += ext_spec.alpha;
      if (n > 0) a(static_cast<Eigen::Index>(ext_spec.index(n - 1, q)), col) += double(n);
    }
  }
  return a;
}

Matrix raising_action(const LadderBasisSpec& ext_spec) {
  const auto d = static_cast<Eigen::Index>(ext_spec.dim());
  const int np = ext_spec.parities();
  Matrix r = Matrix::Zero(d, d);
  for (int n = 0; n < ext_spec.depth; ++n) {
    for (int p = 0; p < np; ++p) {
      const int q = np == 2 ? 1 - p : 0;
      r(static_cast<Eigen::Index>(ext_spec.index(n + 1, q)),
        static_cast<Eigen::Index>(ext_spec.index(n, p))) = 1.0;
    }
  }
  return r;
}

}  // namespace

OperatorMatrix monomial_matrix(const ModePowers& powers, const OverlapMatrix& s, int row_shift) {
  const LadderBasisSpec& spec = s.spec();
  const int needed = spec.depth + std::max(powers.creation, row_shift);
  if (needed > s.extent()) {
    throw BasisError("operator a†^" + std::to_string(powers.creation) + " a^" +
                     std::to_string(powers.annihilation) + " with row shift " +
                     std::to_string(row_shift) + " needs overlap extent " + std::to_string(needed) +
                     ", built " + std::to_string(s.extent()));
  }
  LadderBasisSpec ext_spec = spec;
  ext_spec.depth = s.extent();
  const auto d = static_cast<Eigen::Index>(spec.dim());
  const auto np = static_cast<Eigen::Index>(spec.parities());

  // Expansion of a†^p a^q |phi_n> for the first d columns, then project with S.
  Matrix coeffs = Matrix::Identity(static_cast<Eigen::Index>(ext_spec.dim()), d);
  if (powers.annihilation > 0) {
    const Matrix low = lowering_action(ext_spec);
    for (int i = 0; i < powers.annihilation; ++i) coeffs = low * coeffs;
  }
  if (powers.creation > 0) {
    const Matrix up = raising_action(ext_spec);
    for (int i = 0; i < powers.creation; ++i) coeffs = up * coeffs;
  }
  return s.entries().middleRows(row_shift * np, d) * coeffs;
}

OperatorMatrix operator_matrix(const OperatorPolynomial& poly, const OverlapMatrix& s) {
  if (poly.modes() != 1) throw BasisError("single-mode operator_matrix needs a 1-mode polynomial");
  const auto d = static_cast<Eigen::Index>(s.spec().dim());
  Matrix out = Matrix::Zero(d, d);
  for (const auto& m : poly.monomials()) out += m.coeff * monomial_matrix(m.powers[0], s);
  return out;
}

KronOperator operator_kron(const OperatorPolynomial& poly, std::span<const OverlapMatrix> s,
                           std::optional<std::size_t> shift_mode) {
  if (poly.modes() != s.size()) {
    throw BasisError("polynomial has " + std::to_string(poly.modes()) + " modes, basis has " +
                     std::to_string(s.size()));
  }
  std::vector<std::size_t> dims;
  for (const auto& sk : s) dims.push_back(sk.spec().dim());
  KronOperator out(dims);
  for (const auto& m : poly.monomials()) {
    KronTerm t{m.coeff, {}};
    for (std::size_t k = 0; k < s.size(); ++k) {
      const int rs = (shift_mode && *shift_mode == k) ? 1 : 0;
      t.factors.emplace_back(monomial_matrix(m.powers[k], s[k], rs));
    }
    out.add(std::move(t));
  }
  return out;
}

OperatorMatrix operator_matrix(const OperatorPolynomial& poly, std::span<const OverlapMatrix> s) {
  return operator_kron(poly, s).dense();
}

OperatorMatrix tangent_overlap(const OverlapMatrix& s) { return s.shifted(0, 1); }

namespace {

// <beta, m || alpha, n> for plain Bargmann ladders, m, n = 0..depth.
Matrix plain_cross(Complex beta, Complex alpha, int depth) {
  const int d = depth + 1;
  Matrix x = Matrix::Zero(d, d);
  const Complex bc = std::conj(beta);
  x(0, 0) = std::exp(bc * alpha);
  for (int n = 1; n < d; ++n) x(0, n) = bc * x(0, n - 1);
  for (int m = 1; m < d; ++m) {
    for (int n = 0; n < d; ++n) {
      x(m, n) = alpha * x(m - 1, n) + (n > 0 ? double(n) * x(m - 1, n - 1) : Complex(0.0));
    }
  }
  return x;
}

// Ladder state as a combination of plain ladders: (sign, displacement sign).
struct Branch {
  double weight;
  double sign;
};

std::vector<Branch> branches(const LadderBasisSpec& spec, int n, int parity) {
  if (spec.sector == Sector::Plain) return {{1.0, 1.0}};
  // |C^mu_n> = a†^n (||alpha> + s ||-alpha>) with base sign s = mu * (-1)^n.
  const double mu = parity == 0 ? 1.0 : -1.0;
  const double s = mu * ((n % 2 == 0) ? 1.0 : -1.0);
  return {{1.0, 1.0}, {s, -1.0}};
}

}  // namespace

Matrix cross_overlap(const LadderBasisSpec& bra, const LadderBasisSpec& ket) {
  bra.validate();
  ket.validate();
  const int depth = std::max(bra.depth, ket.depth);
  const Matrix pp = plain_cross(bra.alpha, ket.alpha, depth);
  const Matrix pm = plain_cross(bra.alpha, -ket.alpha, depth);
  const Matrix mp = plain_cross(-bra.alpha, ket.alpha, depth);
  const Matrix mm = plain_cross(-bra.alpha, -ket.alpha, depth);
  auto pick = [&](double sb, double sk) -> const Matrix& {
    if (sb > 0) return sk > 0 ? pp : pm;
    return sk > 0 ? mp : mm;
  };
  Matrix out(static_cast<Eigen::Index>(bra.dim()), static_cast<Eigen::Index>(ket.dim()));
  for (int m = 0; m <= bra.depth; ++m) {
    for (int mu = 0; mu < bra.parities(); ++mu) {
      for (int n = 0; n <= ket.depth; ++n) {
        for (int nu = 0; nu < ket.parities(); ++nu) {
          Complex v = 0.0;
          for (const auto& b : branches(bra, m, mu)) {
            for (const auto& k : branches(ket, n, nu)) {
              v += b.weight * k.weight * pick(b.sign, k.sign)(m, n);
            }
          }
          out(static_cast<Eigen::Index>(bra.index(m, mu)), static_cast<Eigen::Index>(ket.index(n, nu))) = v;
        }
      }
    }
  }
  return out;
}

OperatorMatrix parity_matrix(const LadderBasisSpec& spec) {
  spec.validate();
  if (spec.sector == Sector::Z2Cat) {
    const OverlapMatrix s = build_overlap(spec, 0);
    Matrix out = s.restricted();
    for (int n = 0; n <= spec.depth; ++n) {
      out.col(static_cast<Eigen::Index>(spec.index(n, 1))) *= -1.0;
    }
    return out;
  }
  // Pi a†^n ||alpha> = (-1)^n a†^n ||-alpha>.
  LadderBasisSpec flipped = spec;
  flipped.alpha = -spec.alpha;
  Matrix out = cross_overlap(spec, flipped);
  for (int n = 1; n <= spec.depth; n += 2) out.col(n) *= -1.0;
  return out;
}

Matrix fock_amplitudes(const LadderBasisSpec& spec, int cutoff) {
  spec.validate();
  const Complex a = spec.alpha;
  const double abs_a = std::abs(a);
  const double arg_a = std::arg(a);
  Matrix v = Matrix::Zero(cutoff + 1, static_cast<Eigen::Index>(spec.dim()));
  for (int n = 0; n <= spec.depth; ++n) {
    for (int p = 0; p < spec.parities(); ++p) {
      const double base_sign =
          spec.sector == Sector::Plain ? 0.0 : (p == 0 ? 1.0 : -1.0) * (n % 2 == 0 ? 1.0 : -1.0);
      for (int j = n; j <= cutoff; ++j) {
        const int k = j - n;
        Complex c;
        if (k == 0) {
          c = std::exp(0.5 * std::lgamma(j + 1.0));
        } else if (abs_a == 0.0) {
          c = 0.0;
        } else {
          // alpha^k sqrt(j!) / k!
          const double logmag = k * std::log(abs_a) + 0.5 * std::lgamma(j + 1.0) - std::lgamma(k + 1.0);
          c = std::polar(std::exp(logmag), k * arg_a);
        }
        if (spec.sector == Sector::Z2Cat) c *= 1.0 + base_sign * ((k % 2 == 0) ? 1.0 : -1.0);
        v(j, static_cast<Eigen::Index>(spec.index(n, p))) = c;
      }
    }
  }
  return v;
}

}  // namespace catladder
