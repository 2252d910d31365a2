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

#include "catladder/fock.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "catladder/errors.hpp"

namespace catladder {

Matrix fock_monomial(const ModePowers& powers, int cutoff) {
  const int n = cutoff + 1;
  Matrix a = Matrix::Zero(n, n);
  for (int j = 1; j < n; ++j) a(j - 1, j) = std::sqrt(static_cast<double>(j));
  const Matrix ad = a.adjoint();
  Matrix out = Matrix::Identity(n, n);
  for (int i = 0; i < powers.annihilation; ++i) out = a * out;
  for (int i = 0; i < powers.creation; ++i) out = ad * out;
  return out;
}

KronOperator fock_operator(const OperatorPolynomial& poly, int cutoff) {
  KronOperator out(std::vector<std::size_t>(poly.modes(), static_cast<std::size_t>(cutoff + 1)));
  for (const auto& m : poly.monomials()) {
    KronTerm t{m.coeff, {}};
    for (const auto& pw : m.powers) {
      t.factors.push_back(pw.is_identity() ? std::nullopt : std::optional<Matrix>(fock_monomial(pw, cutoff)));
    }
    out.add(std::move(t));
  }
  return out;
}

FockEmbedding ladder_to_fock(const VariationalState& state, const std::vector<LadderBasisSpec>& specs,
                             int cutoff) {
  if (cutoff < 0) throw std::invalid_argument("Fock cutoff must be >= 0");
  const auto sp = with_alphas(specs, state.alphas);
  std::vector<Matrix> vs;
  for (const auto& s : sp) vs.push_back(fock_amplitudes(s, cutoff));
  const Matrix V = kron(vs);
  if (V.cols() != state.B.rows()) throw std::invalid_argument("coefficient matrix does not match the basis");
  FockEmbedding out;
  out.rho.cutoff = cutoff;
  out.rho.modes = specs.size();
  out.rho.entries = V * state.B * V.adjoint();
  const double full = physical_trace(state.B, sp).real();
  out.leakage = full != 0.0 ? 1.0 - out.rho.trace().real() / full : 0.0;
  out.truncated = std::abs(out.leakage) > 1e-10;
  return out;
}

Matrix reduced_fock(const VariationalState& state, const std::vector<LadderBasisSpec>& specs, std::size_t mode,
                    int cutoff) {
  if (mode >= specs.size()) throw std::invalid_argument("reduced_fock: mode out of range");
  const auto sp = with_alphas(specs, state.alphas);
  std::vector<std::size_t> dims;
  for (const auto& s : sp) dims.push_back(s.dim());
  // Y = B (S_1 x .. I_mode .. x S_M); S is Hermitian so Y† = (S x ..) B†.
  Matrix y = state.B.adjoint();
  for (std::size_t k = 0; k < sp.size(); ++k) {
    if (k != mode) y = apply_mode_factor(build_overlap(sp[k], 0).restricted(), dims, k, y);
  }
  y.adjointInPlace();
  const auto d = static_cast<Eigen::Index>(dims[mode]);
  Eigen::Index inner = 1, outer = 1;
  for (std::size_t j = mode + 1; j < dims.size(); ++j) inner *= static_cast<Eigen::Index>(dims[j]);
  for (std::size_t j = 0; j < mode; ++j) outer *= static_cast<Eigen::Index>(dims[j]);
  Matrix b = Matrix::Zero(d, d);
  for (Eigen::Index o = 0; o < outer; ++o) {
    for (Eigen::Index i = 0; i < inner; ++i) {
      for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index c = 0; c < d; ++c) b(a, c) += y((o * d + a) * inner + i, (o * d + c) * inner + i);
      }
    }
  }
  const Matrix v = fock_amplitudes(sp[mode], cutoff);
  return v * b * v.adjoint();
}

FockDensityMatrix fock_coherent(Complex beta, int cutoff) {
  return fock_product_state({ModeState{ModeState::Kind::Coherent, beta}}, cutoff);
}

FockDensityMatrix fock_product_state(const std::vector<ModeState>& states, int cutoff) {
  std::vector<Matrix> kets;
  for (const auto& st : states) {
    Vector v = Vector::Zero(cutoff + 1);
    for (int j = 0; j <= cutoff; ++j) {
      Complex c = j == 0 ? Complex(1.0)
                         : std::polar(std::exp(j * std::log(std::abs(st.amplitude)) - 0.5 * std::lgamma(j + 1.0)),
                                      j * std::arg(st.amplitude));
      if (st.amplitude == Complex(0.0) && j > 0) c = 0.0;
      if (st.kind == ModeState::Kind::EvenCat && j % 2 == 1) c = 0.0;
      if (st.kind == ModeState::Kind::OddCat && j % 2 == 0) c = 0.0;
      v(j) = c;
    }
    const double n = v.norm();
    if (n == 0.0) throw BasisError("initial Fock state vanishes (odd cat at zero amplitude?)");
    v /= n;
    kets.push_back(v);
  }
  Matrix psi = kron(kets);
  FockDensityMatrix out;
  out.cutoff = cutoff;
  out.modes = states.size();
  out.entries = psi * psi.adjoint();
  return out;
}

namespace {

// Generator split as left-only, right-only and sandwich Kraus terms.
struct FockGenerator {
  KronOperator left;
  KronOperator right;
  bool right_is_adjoint = false;
  std::vector<std::pair<KronOperator, KronOperator>> sandwich;
  std::vector<Complex> coeffs;

  FockGenerator(const ModelSpec& model, double t, int cutoff) {
    OperatorPolynomial lp(model.modes), rp(model.modes);
    const OperatorPolynomial one = OperatorPolynomial::identity(model.modes);
    std::vector<KrausTerm> rest;
    for (const auto& term : kraus_terms(model, t)) {
      if (term.right == one) {
        lp += term.coeff * term.left;
      } else if (term.left == one) {
        rp += term.coeff * term.right;
      } else {
        rest.push_back(term);
      }
    }
    left = fock_operator(lp, cutoff);
    right = fock_operator(rp, cutoff);
    right_is_adjoint = rp == lp.adjoint();
    for (const auto& term : rest) {
      sandwich.emplace_back(fock_operator(term.left, cutoff), fock_operator(term.right, cutoff));
      coeffs.push_back(term.coeff);
    }
  }

  Matrix apply(const Matrix& rho) const {
    Matrix out;
    if (right_is_adjoint) {
      // The shortcut is only the generator on Hermitian input, so roundoff
      // anti-Hermitian parts are projected out instead of amplified.
      const Matrix herm = 0.5 * (rho + rho.adjoint());
      const Matrix x = left.apply_left(herm);
      out = x + x.adjoint();
      for (std::size_t p = 0; p < sandwich.size(); ++p) {
        out += coeffs[p] * sandwich[p].second.apply_right(sandwich[p].first.apply_left(herm));
      }
      return out;
    } else {
      out = left.apply_left(rho) + right.apply_right(rho);
    }
    for (std::size_t p = 0; p < sandwich.size(); ++p) {
      out += coeffs[p] * sandwich[p].second.apply_right(sandwich[p].first.apply_left(rho));
    }
    return out;
  }
};

}  // namespace

Matrix apply_lindblad(const ModelSpec& model, double t, const FockDensityMatrix& rho) {
  model.validate();
  if (model.modes != rho.modes) throw std::invalid_argument("model and density matrix mode counts differ");
  // Literal sum over all terms, without the adjoint shortcut.
  Matrix out = Matrix::Zero(rho.entries.rows(), rho.entries.cols());
  for (const auto& term : kraus_terms(model, t)) {
    const KronOperator l = fock_operator(term.left, rho.cutoff);
    const KronOperator r = fock_operator(term.right, rho.cutoff);
    out += term.coeff * r.apply_right(l.apply_left(rho.entries));
  }
  return out;
}

FockTrajectory evolve_fock(const FockDensityMatrix& rho0, const ModelSpec& model, double t0, double t_end,
                           const std::vector<double>& sample_times, const FockTolerances& tol,
                           const FockEvolveOptions& options) {
  model.validate();
  if (model.modes != rho0.modes) throw std::invalid_argument("model and density matrix mode counts differ");
  const Eigen::Index D = rho0.entries.rows();
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    if (sample_times[i] < t0 || sample_times[i] > t_end) {
      throw std::invalid_argument("sample time outside the integration window");
    }
    if (i > 0 && !(sample_times[i] > sample_times[i - 1])) {
      throw std::invalid_argument("sample times must be strictly increasing");
    }
  }
  Dopri5 solver(IntegratorOptions{tol.rtol, tol.atol, tol.max_step, 5'000'000}, RealVector::Ones(D * D));
  FockTrajectory traj;
  const double tr0 = rho0.trace().real();

  auto record = [&](double t, const Vector& y) {
    FockDensityMatrix r{rho0.cutoff, rho0.modes, Eigen::Map<const Matrix>(y.data(), D, D)};
    traj.times.push_back(t);
    traj.trace_drift.push_back(std::abs(r.trace() - tr0));
    const double n = r.entries.norm();
    if (n > 0.0) {
      traj.max_hermiticity_defect =
          std::max(traj.max_hermiticity_defect, (r.entries - r.entries.adjoint()).norm() / n);
    }
    if (options.on_sample) options.on_sample(t, r);
    if (options.store_states) traj.states.push_back(std::move(r));
  };

  std::vector<double> stops(sample_times.begin(), sample_times.end());
  for (double b : model.breakpoints()) {
    if (b > t0 && b < t_end) stops.push_back(b);
  }
  stops.push_back(t_end);
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

  Vector y = Eigen::Map<const Vector>(rho0.entries.data(), D * D);
  double t = t0;
  std::size_t next = 0;
  if (!sample_times.empty() && sample_times.front() == t0) {
    record(t0, y);
    next = 1;
  }
  for (double stop : stops) {
    if (stop <= t) continue;
    const FockGenerator gen(model, 0.5 * (t + stop), rho0.cutoff);
    const Dopri5::Rhs f = [&](double, const Vector& yy, Vector& dy) {
      const Matrix out = gen.apply(Eigen::Map<const Matrix>(yy.data(), D, D));
      dy = Eigen::Map<const Vector>(out.data(), D * D);
    };
    solver.advance(f, y, t, stop);
    if (next < sample_times.size() && sample_times[next] == stop) {
      record(stop, y);
      ++next;
    }
  }
  traj.stats = solver.stats();
  return traj;
}

Matrix partial_trace(const FockDensityMatrix& rho, std::size_t keep) {
  if (keep >= rho.modes) throw std::invalid_argument("partial_trace: mode out of range");
  const auto d = static_cast<Eigen::Index>(rho.local_dim());
  Eigen::Index inner = 1, outer = 1;
  for (std::size_t j = keep + 1; j < rho.modes; ++j) inner *= d;
  for (std::size_t j = 0; j < keep; ++j) outer *= d;
  Matrix out = Matrix::Zero(d, d);
  for (Eigen::Index o = 0; o < outer; ++o) {
    for (Eigen::Index i = 0; i < inner; ++i) {
      for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = 0; b < d; ++b) {
          out(a, b) += rho.entries((o * d + a) * inner + i, (o * d + b) * inner + i);
        }
      }
    }
  }
  return out;
}

}  // namespace catladder
