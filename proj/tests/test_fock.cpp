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

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"

#include "catladder/fock.hpp"
#include "catladder/observables.hpp"

using namespace catladder;

namespace {

VariationalState unit_state(const std::vector<LadderBasisSpec>& specs, double value, std::size_t index = 0) {
  std::size_t d = 1;
  std::vector<Complex> alphas;
  for (const auto& s : specs) {
    d *= s.dim();
    alphas.push_back(s.alpha);
  }
  Matrix B = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  B(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = value;
  return {0.0, alphas, B};
}

ModelSpec rotating(double omega) {
  ModelSpec m = build_zero_model(1);
  m.add_hamiltonian(omega * OperatorPolynomial::number(1, 0));
  return m;
}

ModelSpec damped(double kappa) {
  ModelSpec m = build_zero_model(1);
  m.add_dissipator(OperatorPolynomial::annihilation(1, 0), kappa);
  return m;
}

std::vector<double> grid(double t_end, int n) {
  std::vector<double> t;
  for (int i = 0; i <= n; ++i) t.push_back(t_end * i / n);
  return t;
}

}  // namespace

TEST_SUITE("fock_oracle") {

TEST_CASE("ladder embedding: vacuum, coherent and cat states") {
  const std::vector<LadderBasisSpec> vac{{Complex(0.0), 2, Sector::Plain}};
  const FockEmbedding e0 = ladder_to_fock(unit_state(vac, 1.0), vac, 5);
  Matrix proj = Matrix::Zero(6, 6);
  proj(0, 0) = 1.0;
  CHECK((e0.rho.entries - proj).norm() < 1e-15);

  const std::vector<LadderBasisSpec> coh{{Complex(2.0), 3, Sector::Plain}};
  const FockEmbedding e1 = ladder_to_fock(unit_state(coh, std::exp(-4.0)), coh, 30);
  CHECK(std::abs(expectation(e1.rho, OperatorPolynomial::number(1, 0)) - 4.0) < 1e-8);
  CHECK_FALSE(e1.truncated);

  const std::vector<LadderBasisSpec> cat{{Complex(2.0), 2, Sector::Z2Cat}};
  const FockEmbedding e2 = ladder_to_fock(unit_state(cat, 1.0 / (4.0 * std::cosh(4.0))), cat, 40);
  CHECK(parity(e2.rho, {0}) / e2.rho.trace().real() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("embedding reports leakage above a too-small cutoff") {
  const std::vector<LadderBasisSpec> coh{{Complex(3.0), 2, Sector::Plain}};
  const FockEmbedding e = ladder_to_fock(unit_state(coh, std::exp(-9.0)), coh, 8);
  CHECK(e.truncated);
  CHECK(e.leakage > 1e-3);
}

TEST_CASE("reduced Fock state equals the partial trace of the full embedding") {
  const std::vector<LadderBasisSpec> specs{{Complex(0.6, 0.2), 2, Sector::Plain}, {Complex(1.0, -0.5), 1, Sector::Z2Cat}};
  const auto st = embed_initial_state({{ModeState::Kind::Coherent, Complex(0.5, 0.3)}, {ModeState::Kind::OddCat, Complex(1.0, -0.5)}},
                                      specs);
  const FockEmbedding full = ladder_to_fock(st, specs, 20);
  for (std::size_t k = 0; k < 2; ++k) {
    const Matrix ref = partial_trace(full.rho, k);
    CHECK((reduced_fock(st, specs, k, 20) - ref).norm() < 1e-10 * ref.norm());
  }
}

TEST_CASE("closed-form rotation and damping") {
  const Complex a0(1.2, -0.7);
  const auto ts = grid(3.0, 30);
  const FockTolerances tol{1e-10, 1e-10};
  const auto rot = evolve_fock(fock_coherent(a0, 40), rotating(1.3), 0.0, 3.0, ts, tol);
  const auto dmp = evolve_fock(fock_coherent(a0, 40), damped(0.8), 0.0, 3.0, ts, tol);
  const auto a = OperatorPolynomial::annihilation(1, 0);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    CHECK(std::abs(expectation(rot.states[i], a) - a0 * std::exp(Complex(0, -1.3 * ts[i]))) < 1e-8);
    CHECK(std::abs(expectation(dmp.states[i], a) - a0 * std::exp(-0.4 * ts[i])) < 1e-8);
  }
}

TEST_CASE("two-photon drive from vacuum stays in the even sector") {
  const auto model = build_two_photon_kerr(DriveSchedule::constant(Complex(0.0, 4.0)), 0.0, 1.0, 0.0);
  const auto fr = evolve_fock(fock_coherent(Complex(0.0), 30), model, 0.0, 6.0, {0.0, 6.0});
  CHECK(parity(fr.states.back(), {0}) == doctest::Approx(1.0).epsilon(1e-9));
  // Steady state sits on the cat manifold with <a²> = -i G* / eta.
  CHECK(std::abs(expectation(fr.states.back(), OperatorPolynomial::monomial(1, 0, 0, 2)) - Complex(-4.0, 0.0)) < 0.05);
}

TEST_CASE("trace and hermiticity are conserved") {
  const auto model = build_kerr_driven(1.0, 1.5, 1.0);
  const auto fr = evolve_fock(fock_coherent(Complex(-1.0, -0.4), 30), model, 0.0, 5.0, grid(5.0, 10));
  for (double d : fr.trace_drift) CHECK(d < 1e-9);
  CHECK(fr.max_hermiticity_defect < 1e-9);
}

TEST_CASE("doubling the cutoff leaves Kerr observables unchanged") {
  const auto model = build_kerr_driven(1.0, 1.5, 1.0);
  const Complex a0(-1.036386386645, -0.415609268954);
  const auto ts = grid(5.0, 10);
  const FockTolerances tol{1e-10, 1e-12};
  const auto f1 = evolve_fock(fock_coherent(a0, 25), model, 0.0, 5.0, ts, tol);
  const auto f2 = evolve_fock(fock_coherent(a0, 50), model, 0.0, 5.0, ts, tol);
  const auto n = OperatorPolynomial::number(1, 0), a = OperatorPolynomial::annihilation(1, 0);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    CHECK(std::abs(expectation(f1.states[i], n) - expectation(f2.states[i], n)) < 1e-8);
    CHECK(std::abs(expectation(f1.states[i], a) - expectation(f2.states[i], a)) < 1e-8);
  }
}

TEST_CASE("schedule breakpoints are honored") {
  // Drive on for t < 1 only: the rotation stops at the breakpoint.
  ModelSpec m = build_zero_model(1);
  m.add_hamiltonian(OperatorPolynomial::number(1, 0), DriveSchedule::piecewise({{0.0, 2.0}, {1.0, 0.0}}));
  const Complex a0(1.0, 0.0);
  const auto fr = evolve_fock(fock_coherent(a0, 30), m, 0.0, 2.5, {0.0, 2.5}, {1e-10, 1e-10});
  CHECK(std::abs(expectation(fr.states.back(), OperatorPolynomial::annihilation(1, 0)) - a0 * std::exp(Complex(0, -2.0))) <
        1e-8);
}

}  // TEST_SUITE
