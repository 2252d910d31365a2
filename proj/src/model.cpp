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

#include "catladder/model.hpp"

#include <algorithm>
#include <cmath>

#include "catladder/errors.hpp"

namespace catladder {

DriveSchedule DriveSchedule::constant(Complex value) {
  DriveSchedule s;
  s.kind_ = Kind::Constant;
  s.segments_ = {{0.0, value}};
  return s;
}

DriveSchedule DriveSchedule::piecewise(std::vector<std::pair<double, Complex>> segments) {
  if (segments.empty()) throw ModelError("drive schedule needs at least one segment");
  for (std::size_t i = 1; i < segments.size(); ++i) {
    if (!(segments[i].first > segments[i - 1].first)) {
      throw ModelError("drive schedule segment starts must be strictly increasing");
    }
  }
  DriveSchedule s;
  s.kind_ = segments.size() == 1 ? Kind::Constant : Kind::PiecewiseConstant;
  s.segments_ = std::move(segments);
  return s;
}

Complex DriveSchedule::at(double t) const {
  Complex v = segments_.front().second;
  for (const auto& [start, value] : segments_) {
    if (start <= t) v = value;
  }
  return v;
}

DriveSchedule DriveSchedule::conjugated() const {
  DriveSchedule s = *this;
  for (auto& seg : s.segments_) seg.second = std::conj(seg.second);
  return s;
}

DriveSchedule DriveSchedule::scaled(Complex f) const {
  DriveSchedule s = *this;
  for (auto& seg : s.segments_) seg.second *= f;
  return s;
}

std::vector<double> DriveSchedule::breakpoints() const {
  std::vector<double> out;
  for (std::size_t i = 1; i < segments_.size(); ++i) out.push_back(segments_[i].first);
  return out;
}

void ModelSpec::add_hamiltonian(OperatorPolynomial poly, DriveSchedule multiplier) {
  hamiltonian.push_back({std::move(poly), std::move(multiplier)});
}

void ModelSpec::add_dissipator(OperatorPolynomial jump, double rate) {
  dissipators.push_back({std::move(jump), rate});
}

void ModelSpec::validate() const {
  if (modes == 0) throw ModelError("model needs at least one mode");
  for (const auto& h : hamiltonian) {
    if (h.poly.modes() != modes) throw ModelError("Hamiltonian term has the wrong mode count");
  }
  for (std::size_t j = 0; j < dissipators.size(); ++j) {
    const auto& d = dissipators[j];
    if (d.jump.modes() != modes) throw ModelError("dissipator has the wrong mode count");
    if (!(d.rate >= 0.0) || !std::isfinite(d.rate)) {
      throw ModelError("dissipator " + std::to_string(j) + " has negative or non-finite rate " +
                       std::to_string(d.rate));
    }
  }
  // Probe one time inside every schedule segment.
  std::vector<double> probes{-1e300};
  for (double b : breakpoints()) probes.push_back(b);
  for (double t : probes) {
    if (!hamiltonian_at(t).is_hermitian(1e-12)) {
      throw ModelError("Hamiltonian is not Hermitian at t = " + std::to_string(t));
    }
  }
}

OperatorPolynomial ModelSpec::hamiltonian_at(double t) const {
  OperatorPolynomial h(modes);
  for (const auto& term : hamiltonian) h += term.multiplier.at(t) * term.poly;
  return h;
}

std::vector<double> ModelSpec::breakpoints() const {
  std::vector<double> out;
  for (const auto& term : hamiltonian) {
    for (double b : term.multiplier.breakpoints()) out.push_back(b);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

KrausTermList kraus_terms(const ModelSpec& model, double t) {
  const OperatorPolynomial one = OperatorPolynomial::identity(model.modes);
  KrausTermList out;
  const OperatorPolynomial h = model.hamiltonian_at(t);
  if (!h.is_zero()) {
    out.push_back({h, one, Complex(0.0, -1.0)});
    out.push_back({one, h, Complex(0.0, 1.0)});
  }
  for (const auto& d : model.dissipators) {
    if (d.rate == 0.0 || d.jump.is_zero()) continue;
    const OperatorPolynomial ld = d.jump.adjoint();
    const OperatorPolynomial ldl = ld * d.jump;
    out.push_back({d.jump, ld, d.rate});
    out.push_back({ldl, one, -0.5 * d.rate});
    out.push_back({one, ldl, -0.5 * d.rate});
  }
  return out;
}

int max_creation_power(const ModelSpec& model, std::size_t k) {
  int best = 0;
  for (const auto& h : model.hamiltonian) {
    best = std::max({best, h.poly.max_creation(k), h.poly.adjoint().max_creation(k)});
  }
  for (const auto& d : model.dissipators) {
    const OperatorPolynomial ld = d.jump.adjoint();
    best = std::max({best, d.jump.max_creation(k), ld.max_creation(k), (ld * d.jump).max_creation(k)});
  }
  return best;
}

ModelSpec build_zero_model(std::size_t modes) {
  ModelSpec m;
  m.modes = modes;
  m.name = "zero";
  return m;
}

namespace {

void require_rate(double r, const char* name) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw ModelError(std::string(name) + " must be a finite rate >= 0, got " + std::to_string(r));
  }
}

using P = OperatorPolynomial;

}  // namespace

ModelSpec build_kerr_driven(double U, double F, double kappa) {
  require_rate(kappa, "kappa");
  ModelSpec m;
  m.modes = 1;
  m.name = "kerr_driven";
  P h = (0.5 * U) * P::monomial(1, 0, 2, 2) + F * (P::annihilation(1, 0) + P::creation(1, 0));
  m.add_hamiltonian(h);
  m.add_dissipator(P::annihilation(1, 0), kappa);
  return m;
}

ModelSpec build_dimer(double U, double F, double J, double Delta, double kappa) {
  require_rate(kappa, "kappa");
  ModelSpec m;
  m.modes = 2;
  m.name = "dimer";
  P h(2);
  for (std::size_t k = 0; k < 2; ++k) {
    h += (-Delta) * P::number(2, k);
    h += (0.5 * U) * P::monomial(2, k, 2, 2);
  }
  h += (-J) * (P::creation(2, 0) * P::annihilation(2, 1) + P::annihilation(2, 0) * P::creation(2, 1));
  h += F * (P::creation(2, 0) + P::annihilation(2, 0));
  m.add_hamiltonian(h);
  m.add_dissipator(P::annihilation(2, 0), kappa);
  m.add_dissipator(P::annihilation(2, 1), kappa);
  return m;
}

namespace {

void add_two_photon_mode(ModelSpec& m, std::size_t k, const DriveSchedule& G, double U, double eta,
                         double F_x) {
  const std::size_t M = m.modes;
  m.add_hamiltonian(P::monomial(M, k, 0, 2, 0.5), G);
  m.add_hamiltonian(P::monomial(M, k, 2, 0, 0.5), G.conjugated());
  P rest = (0.5 * U) * P::monomial(M, k, 2, 2) + F_x * (P::annihilation(M, k) + P::creation(M, k));
  if (!rest.is_zero()) m.add_hamiltonian(rest);
  m.add_dissipator(P::monomial(M, k, 0, 2), eta);
}

}  // namespace

ModelSpec build_two_photon_kerr(const DriveSchedule& G, double U, double eta, double F_x) {
  require_rate(eta, "eta");
  ModelSpec m;
  m.modes = 1;
  m.name = "two_photon_kerr";
  add_two_photon_mode(m, 0, G, U, eta, F_x);
  return m;
}

ModelSpec build_cat_chain(std::size_t M, Complex G, double U, double eta, const std::vector<double>& J) {
  require_rate(eta, "eta");
  if (M < 2) throw ModelError("cat chain needs at least two modes");
  if (J.size() != M - 1) {
    throw ModelError("cat chain with " + std::to_string(M) + " modes needs " + std::to_string(M - 1) +
                     " hopping amplitudes, got " + std::to_string(J.size()));
  }
  ModelSpec m;
  m.modes = M;
  m.name = "cat_chain";
  const DriveSchedule g = DriveSchedule::constant(G);
  for (std::size_t k = 0; k < M; ++k) add_two_photon_mode(m, k, g, U, eta, 0.0);
  P hop(M);
  for (std::size_t i = 0; i + 1 < M; ++i) {
    hop += J[i] * (P::annihilation(M, i) * P::creation(M, i + 1) +
                   P::creation(M, i) * P::annihilation(M, i + 1));
  }
  if (!hop.is_zero()) m.add_hamiltonian(hop);
  return m;
}

}  // namespace catladder
