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

#include "catladder/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace catladder {

namespace {

std::vector<OverlapMatrix> overlaps_for(const std::vector<LadderBasisSpec>& specs, const OperatorPolynomial& poly) {
  std::vector<OverlapMatrix> out;
  for (std::size_t k = 0; k < specs.size(); ++k) out.push_back(build_overlap(specs[k], poly.max_creation(k)));
  return out;
}

Matrix scaled_coefficients(const VariationalState& state, const std::vector<LadderBasisSpec>& specs) {
  const RealVector lam = ladder_scale(specs);
  if (state.B.rows() != lam.size()) throw std::invalid_argument("coefficient matrix does not match the basis");
  return (lam.cast<Complex>().asDiagonal() * state.B) * lam.cast<Complex>().asDiagonal();
}

// Scaled factor L^-1 X L^-1 for one mode.
Matrix unscale_mode(const Matrix& x, const LadderBasisSpec& spec) {
  const RealVector inv = ladder_scale(spec).cwiseInverse();
  return (inv.cast<Complex>().asDiagonal() * x) * inv.cast<Complex>().asDiagonal();
}

}  // namespace

Complex expectation(const VariationalState& state, const std::vector<LadderBasisSpec>& specs_in,
                    const OperatorPolynomial& poly) {
  if (poly.modes() != specs_in.size()) throw std::invalid_argument("polynomial and basis mode counts differ");
  const auto specs = with_alphas(specs_in, state.alphas);
  const auto ov = overlaps_for(specs, poly);
  // Tr(M B) = Tr(M_hat B_hat) with both rescaled by the ladder norms.
  std::vector<std::size_t> dims;
  for (const auto& s : specs) dims.push_back(s.dim());
  KronOperator op(dims);
  for (const auto& m : poly.monomials()) {
    KronTerm t{m.coeff, {}};
    for (std::size_t k = 0; k < specs.size(); ++k) {
      t.factors.emplace_back(unscale_mode(monomial_matrix(m.powers[k], ov[k]), specs[k]));
    }
    op.add(std::move(t));
  }
  return op.apply_left(scaled_coefficients(state, specs)).trace();
}

Complex expectation(const FockDensityMatrix& rho, const OperatorPolynomial& poly) {
  if (poly.modes() != rho.modes) throw std::invalid_argument("polynomial and state mode counts differ");
  return fock_operator(poly, rho.cutoff).apply_left(rho.entries).trace();
}

double parity(const VariationalState& state, const std::vector<LadderBasisSpec>& specs_in,
              const std::vector<std::size_t>& modes) {
  const auto specs = with_alphas(specs_in, state.alphas);
  std::vector<bool> flip(specs.size(), false);
  for (std::size_t k : modes) {
    if (k >= specs.size()) throw std::invalid_argument("parity: mode index out of range");
    flip[k] = true;
  }
  Matrix y = scaled_coefficients(state, specs);
  std::vector<std::size_t> dims;
  for (const auto& s : specs) dims.push_back(s.dim());
  for (std::size_t k = 0; k < specs.size(); ++k) {
    const Matrix f = flip[k] ? parity_matrix(specs[k]) : build_overlap(specs[k], 0).restricted();
    y = apply_mode_factor(unscale_mode(f, specs[k]), dims, k, y);
  }
  return y.trace().real();
}

double parity(const FockDensityMatrix& rho, const std::vector<std::size_t>& modes) {
  KronOperator op(rho.dims());
  KronTerm t{1.0, std::vector<std::optional<Matrix>>(rho.modes)};
  const auto d = static_cast<Eigen::Index>(rho.local_dim());
  Matrix pi = Matrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) pi(j, j) = (j % 2 == 0) ? 1.0 : -1.0;
  for (std::size_t k : modes) {
    if (k >= rho.modes) throw std::invalid_argument("parity: mode index out of range");
    t.factors[k] = pi;
  }
  op.add(std::move(t));
  return op.apply_left(rho.entries).trace().real();
}

namespace {

struct ClippedSqrt {
  Matrix sqrt;
  double clipped = 0.0;
};

ClippedSqrt psd_sqrt(const Matrix& r) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (r + r.adjoint()));
  RealVector w = es.eigenvalues();
  double clipped = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) < 0.0) {
      clipped += -w(i);
      w(i) = 0.0;
    }
  }
  return {es.eigenvectors() * w.cwiseSqrt().cast<Complex>().asDiagonal() * es.eigenvectors().adjoint(),
          clipped};
}

}  // namespace

FidelityResult fidelity(const Matrix& rho1_in, const Matrix& rho2_in, bool normalize) {
  if (rho1_in.rows() != rho2_in.rows() || rho1_in.cols() != rho2_in.cols()) {
    throw std::invalid_argument("fidelity: dimension mismatch");
  }
  Matrix r1 = rho1_in, r2 = rho2_in;
  if (normalize) {
    r1 /= r1.trace().real();
    r2 /= r2.trace().real();
  }
  const ClippedSqrt s1 = psd_sqrt(r1), s2 = psd_sqrt(r2);
  // Nuclear norm of sqrt(r1) sqrt(r2): symmetric in the arguments and free of
  // the extra eigen-solve on the nested square root.
  const Eigen::JacobiSVD<Matrix> svd(s1.sqrt * s2.sqrt);
  const double root = svd.singularValues().sum();
  double f = root * root;
  if (normalize) f = std::min(f, 1.0);
  return {f, s1.clipped + s2.clipped};
}

FidelityResult fidelity(const FockDensityMatrix& rho1, const FockDensityMatrix& rho2, bool normalize) {
  return fidelity(rho1.entries, rho2.entries, normalize);
}

double purity(const FockDensityMatrix& rho) {
  const Complex tr = rho.trace();
  return (trace_of_product(rho.entries, rho.entries) / (tr * tr)).real();
}

double purity(const VariationalState& state, const std::vector<LadderBasisSpec>& specs_in) {
  const auto specs = with_alphas(specs_in, state.alphas);
  std::vector<Matrix> s;
  for (const auto& sp : specs) s.push_back(unscale_mode(build_overlap(sp, 0).restricted(), sp));
  const Matrix bs = scaled_coefficients(state, specs) * kron(s);
  const Complex tr = bs.trace();
  return (trace_of_product(bs, bs) / (tr * tr)).real();
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n < 2) throw std::invalid_argument("grid resolution must be >= 2");
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

WignerGrid wigner(const Matrix& rho, const std::vector<double>& x, const std::vector<double>& p) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("wigner: density matrix must be square");
  if (x.size() < 2 || p.size() < 2) throw std::invalid_argument("grid resolution must be >= 2");
  const Eigen::Index n = rho.rows();
  WignerGrid out{x, p, RealMatrix::Zero(static_cast<Eigen::Index>(p.size()), static_cast<Eigen::Index>(x.size()))};
  std::vector<Complex> w(static_cast<std::size_t>(n));
  for (std::size_t ip = 0; ip < p.size(); ++ip) {
    for (std::size_t ix = 0; ix < x.size(); ++ix) {
      // Iterative Laguerre recursion: w[n] holds the Wigner function of
      // |m><n| for the current row m (up to the 2/pi prefactor).
      const Complex A(x[ix], p[ip]);
      const Complex A2 = 2.0 * A;
      const Complex A2c = std::conj(A2);
      w[0] = std::exp(-2.0 * std::norm(A));
      double acc = rho(0, 0).real() * w[0].real();
      for (Eigen::Index k = 1; k < n; ++k) {
        w[k] = A2 * w[k - 1] / std::sqrt(static_cast<double>(k));
        acc += 2.0 * (rho(0, k) * w[k]).real();
      }
      for (Eigen::Index m = 1; m < n; ++m) {
        const double sm = std::sqrt(static_cast<double>(m));
        Complex temp = w[m];
        w[m] = (A2c * temp - sm * w[m - 1]) / sm;
        acc += (rho(m, m) * w[m]).real();
        for (Eigen::Index k = m + 1; k < n; ++k) {
          const Complex next = (A2 * w[k - 1] - sm * temp) / std::sqrt(static_cast<double>(k));
          temp = w[k];
          w[k] = next;
          acc += 2.0 * (rho(m, k) * w[k]).real();
        }
      }
      out.values(static_cast<Eigen::Index>(ip), static_cast<Eigen::Index>(ix)) = acc * 2.0 / std::numbers::pi;
    }
  }
  return out;
}

WignerGrid wigner(const FockDensityMatrix& rho, std::size_t mode, const std::vector<double>& x,
                  const std::vector<double>& p) {
  return wigner(rho.modes == 1 ? rho.entries : partial_trace(rho, mode), x, p);
}

double wigner_integral(const WignerGrid& w) {
  double acc = 0.0;
  const auto np = w.p.size(), nx = w.x.size();
  for (std::size_t i = 0; i + 1 < np; ++i) {
    for (std::size_t j = 0; j + 1 < nx; ++j) {
      const double cell = (w.p[i + 1] - w.p[i]) * (w.x[j + 1] - w.x[j]);
      const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
      acc += 0.25 * cell * (w.values(ii, jj) + w.values(ii + 1, jj) + w.values(ii, jj + 1) + w.values(ii + 1, jj + 1));
    }
  }
  return acc;
}

}  // namespace catladder
