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

#include "catladder/linalg.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

namespace catladder {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix kron(std::span<const Matrix> factors) {
  if (factors.empty()) return Matrix::Identity(1, 1);
  Matrix out = factors.front();
  for (std::size_t k = 1; k < factors.size(); ++k) out = kron(out, factors[k]);
  return out;
}

std::optional<SpectralInverse> spectral_inverse(const Matrix& hermitian, double relative_cutoff) {
  const Matrix sym = 0.5 * (hermitian + hermitian.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) return std::nullopt;
  const RealVector& w = solver.eigenvalues();
  const Matrix& u = solver.eigenvectors();
  const double lambda_max = w.size() > 0 ? w(w.size() - 1) : 0.0;
  if (!(lambda_max > 0.0) || !std::isfinite(lambda_max)) return std::nullopt;

  const double threshold = relative_cutoff * lambda_max;
  const Eigen::Index n = w.size();
  RealVector inv = RealVector::Zero(n), inv_sqrt = RealVector::Zero(n), sq = RealVector::Zero(n),
             keep = RealVector::Zero(n);
  std::size_t retained = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (w(i) > threshold) {
      inv(i) = 1.0 / w(i);
      inv_sqrt(i) = 1.0 / std::sqrt(w(i));
      sq(i) = std::sqrt(w(i));
      keep(i) = 1.0;
      ++retained;
    }
  }
  if (retained == 0) return std::nullopt;

  auto compose = [&](const RealVector& f) -> Matrix {
    return u * f.cast<Complex>().asDiagonal() * u.adjoint();
  };
  SpectralInverse out;
  out.inverse = compose(inv);
  out.inverse_sqrt = compose(inv_sqrt);
  out.sqrt = compose(sq);
  out.projector = compose(keep);
  out.eigenvalues = w;
  out.retained = retained;
  out.lambda_max = lambda_max;
  return out;
}

std::size_t KronOperator::dim() const {
  return std::accumulate(dims_.begin(), dims_.end(), std::size_t{1}, std::multiplies<>());
}

void KronOperator::add(KronTerm term) {
  if (term.factors.size() != dims_.size()) {
    throw std::invalid_argument("KronOperator::add: factor count does not match mode count");
  }
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    const auto& f = term.factors[k];
    if (f && (static_cast<std::size_t>(f->rows()) != dims_[k] ||
              static_cast<std::size_t>(f->cols()) != dims_[k])) {
      throw std::invalid_argument("KronOperator::add: factor shape does not match mode dimension");
    }
  }
  // Terms acting on at most one mode fold into a single matrix per mode, so
  // applying a sum of local operators costs one pass per mode.
  std::optional<std::size_t> local;
  int nontrivial = 0;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (term.factors[k]) {
      ++nontrivial;
      local = k;
    }
  }
  if (nontrivial <= 1) {
    for (auto& t : terms_) {
      int count = 0;
      std::optional<std::size_t> at;
      for (std::size_t k = 0; k < dims_.size(); ++k) {
        if (t.factors[k]) {
          ++count;
          at = k;
        }
      }
      if (count != nontrivial || at != local) continue;
      if (nontrivial == 0) {
        t.coeff += term.coeff;
      } else {
        Matrix& f = *t.factors[*local];
        f = t.coeff * f + term.coeff * *term.factors[*local];
        t.coeff = 1.0;
      }
      return;
    }
  }
  terms_.push_back(std::move(term));
}

void KronOperator::add(const KronOperator& other, Complex scale) {
  for (KronTerm t : other.terms_) {
    t.coeff *= scale;
    add(std::move(t));
  }
}

KronOperator KronOperator::transposed() const {
  KronOperator out(dims_);
  for (const auto& t : terms_) {
    KronTerm tt{t.coeff, {}};
    for (const auto& f : t.factors) {
      tt.factors.push_back(f ? std::optional<Matrix>(f->transpose()) : std::nullopt);
    }
    out.terms_.push_back(std::move(tt));
  }
  return out;
}

KronOperator KronOperator::adjoint() const {
  KronOperator out(dims_);
  for (const auto& t : terms_) {
    KronTerm tt{std::conj(t.coeff), {}};
    for (const auto& f : t.factors) {
      tt.factors.push_back(f ? std::optional<Matrix>(f->adjoint()) : std::nullopt);
    }
    out.terms_.push_back(std::move(tt));
  }
  return out;
}

Matrix apply_mode_factor(const Matrix& factor, std::span<const std::size_t> dims, std::size_t mode,
                         const Matrix& x) {
  const auto dk = static_cast<Eigen::Index>(dims[mode]);
  Eigen::Index inner = 1;
  for (std::size_t j = mode + 1; j < dims.size(); ++j) inner *= static_cast<Eigen::Index>(dims[j]);
  const Eigen::Index total = x.size();
  const Eigen::Index blocks = total / (inner * dk);

  Matrix out(x.rows(), x.cols());
  if (inner == 1) {
    Eigen::Map<const Matrix> xin(x.data(), dk, blocks);
    Eigen::Map<Matrix> xout(out.data(), dk, blocks);
    xout.noalias() = factor * xin;
    return out;
  }
  const Matrix ft = factor.transpose();
  for (Eigen::Index q = 0; q < blocks; ++q) {
    Eigen::Map<const Matrix> yin(x.data() + q * inner * dk, inner, dk);
    Eigen::Map<Matrix> yout(out.data() + q * inner * dk, inner, dk);
    yout.noalias() = yin * ft;
  }
  return out;
}

namespace {

// out = x * (I (x) F (x) I) with F on column mode `mode`; the column-major
// layout makes every block a contiguous (rows * inner) x dk slab.
void right_mode_product(const Matrix& factor, bool transpose_factor,
                        std::span<const std::size_t> dims, std::size_t mode, const Matrix& x,
                        Matrix& out) {
  const auto dk = static_cast<Eigen::Index>(dims[mode]);
  Eigen::Index inner = 1;
  for (std::size_t j = mode + 1; j < dims.size(); ++j) inner *= static_cast<Eigen::Index>(dims[j]);
  const Eigen::Index slab = x.rows() * inner;
  const Eigen::Index blocks = x.size() / (slab * dk);
  out.resize(x.rows(), x.cols());
  for (Eigen::Index q = 0; q < blocks; ++q) {
    Eigen::Map<const Matrix> in(x.data() + q * slab * dk, slab, dk);
    Eigen::Map<Matrix> res(out.data() + q * slab * dk, slab, dk);
    if (transpose_factor) {
      res.noalias() = in * factor.transpose();
    } else {
      res.noalias() = in * factor;
    }
  }
}

// Sum over terms of coeff * x * (F_0 (x) F_1 (x) ...), with F^T when requested.
Matrix apply_terms_right(const std::vector<KronTerm>& terms, std::span<const std::size_t> dims,
                         const Matrix& x, bool transpose_factors) {
  Matrix acc = Matrix::Zero(x.rows(), x.cols());
  Matrix ping, pong;
  for (const auto& t : terms) {
    if (t.coeff == Complex(0.0)) continue;
    const Matrix* src = &x;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      if (!t.factors[k]) continue;
      Matrix& dst = (src == &ping) ? pong : ping;
      right_mode_product(*t.factors[k], transpose_factors, dims, k, *src, dst);
      src = &dst;
    }
    acc += t.coeff * *src;
  }
  return acc;
}

}  // namespace

Matrix KronOperator::apply_left(const Matrix& x) const {
  if (static_cast<std::size_t>(x.rows()) != dim()) {
    throw std::invalid_argument("KronOperator::apply_left: dimension mismatch");
  }
  // (A x)^T = x^T A^T: one transpose each way buys large contiguous products.
  const Matrix xt = x.transpose();
  return apply_terms_right(terms_, dims_, xt, true).transpose();
}

Matrix KronOperator::apply_right(const Matrix& x) const {
  if (static_cast<std::size_t>(x.cols()) != dim()) {
    throw std::invalid_argument("KronOperator::apply_right: dimension mismatch");
  }
  return apply_terms_right(terms_, dims_, x, false);
}

Matrix KronOperator::dense() const {
  const auto d = static_cast<Eigen::Index>(dim());
  Matrix out = Matrix::Zero(d, d);
  for (const auto& t : terms_) {
    std::vector<Matrix> fs;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
      const auto n = static_cast<Eigen::Index>(dims_[k]);
      fs.push_back(t.factors[k] ? *t.factors[k] : Matrix(Matrix::Identity(n, n)));
    }
    out += t.coeff * kron(fs);
  }
  return out;
}

Complex trace_of_product(const Matrix& a, const Matrix& b) {
  return (a.array() * b.transpose().array()).sum();
}

void retain_large_allocations() {
#if defined(__GLIBC__)
  mallopt(M_MMAP_THRESHOLD, 256 << 20);
  mallopt(M_TRIM_THRESHOLD, 1 << 30);
#endif
}

}  // namespace catladder
