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
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "catladder/errors.hpp"
#include "catladder/fock.hpp"
#include "catladder/observables.hpp"

using namespace catladder;

namespace {

const double kTwoOverPi = 2.0 / std::numbers::pi;

Vector random_ket(Eigen::Index d, std::mt19937& rng) {
  std::normal_distribution<double> g;
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = Complex(g(rng), g(rng));
  return v.normalized();
}

Matrix random_mixed(Eigen::Index d, std::mt19937& rng) {
  Matrix r = Matrix::Zero(d, d);
  for (int k = 0; k < 3; ++k) {
    const Vector v = random_ket(d, rng);
    r += (0.2 + 0.3 * k) * v * v.adjoint();
  }
  return r / r.trace();
}

}  // namespace

TEST_SUITE("observables") {

TEST_CASE("moments of embedded coherent and cat states") {
  const Complex beta(0.8, -1.1);
  const std::vector<LadderBasisSpec> coh{{beta, 3, Sector::Plain}};
  const auto s = embed_initial_state({{ModeState::Kind::Coherent, beta}}, coh);
  CHECK(std::abs(expectation(s, coh, OperatorPolynomial::identity(1)) - 1.0) < 1e-12);
  CHECK(std::abs(expectation(s, coh, OperatorPolynomial::annihilation(1, 0)) - beta) < 1e-12);

  const std::vector<LadderBasisSpec> cat{{Complex(2.0), 3, Sector::Z2Cat}};
  const auto c = embed_initial_state({{ModeState::Kind::EvenCat, Complex(2.0)}}, cat);
  CHECK(std::abs(expectation(c, cat, OperatorPolynomial::number(1, 0)) - 4.0 * std::tanh(4.0)) < 1e-10);
  const auto o = embed_initial_state({{ModeState::Kind::OddCat, Complex(2.0)}}, cat);
  CHECK(std::abs(expectation(o, cat, OperatorPolynomial::number(1, 0)) - 4.0 / std::tanh(4.0)) < 1e-10);
}

TEST_CASE("embedding a state at a different displacement") {
  const Complex beta(0.5, 0.4);
  const std::vector<LadderBasisSpec> specs{{Complex(0.3, 0.1), 8, Sector::Plain}};
  const auto s = embed_initial_state({{ModeState::Kind::Coherent, beta}}, specs);
  CHECK(std::abs(physical_trace(s.B, specs) - 1.0) < 1e-8);
  CHECK(std::abs(expectation(s, specs, OperatorPolynomial::annihilation(1, 0)) - beta) < 1e-6);
}

TEST_CASE("parity of cat states, mixtures, and products") {
  const std::vector<LadderBasisSpec> cat{{Complex(1.5, 0.5), 2, Sector::Z2Cat}};
  const auto even = embed_initial_state({{ModeState::Kind::EvenCat, Complex(1.5, 0.5)}}, cat);
  const auto odd = embed_initial_state({{ModeState::Kind::OddCat, Complex(1.5, 0.5)}}, cat);
  CHECK(parity(even, cat, {0}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(parity(odd, cat, {0}) == doctest::Approx(-1.0).epsilon(1e-12));
  VariationalState mix = even;
  mix.B = 0.5 * (even.B + odd.B);
  CHECK(std::abs(parity(mix, cat, {0})) < 1e-12);

  const std::vector<LadderBasisSpec> two{{Complex(2.0), 1, Sector::Z2Cat}, {Complex(2.0), 1, Sector::Z2Cat}};
  const auto prod = embed_initial_state({{ModeState::Kind::EvenCat, Complex(2.0)}, {ModeState::Kind::EvenCat, Complex(2.0)}}, two);
  CHECK(parity(prod, two, {0, 1}) == doctest::Approx(1.0).epsilon(1e-12));
  const auto eo = embed_initial_state({{ModeState::Kind::EvenCat, Complex(2.0)}, {ModeState::Kind::OddCat, Complex(2.0)}}, two);
  CHECK(parity(eo, two, {0, 1}) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(parity(eo, two, {1}) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("plain-sector parity agrees with the Fock embedding") {
  const std::vector<LadderBasisSpec> specs{{Complex(0.9, -0.3), 3, Sector::Plain}};
  std::mt19937 rng(5);
  Matrix B = random_mixed(4, rng);
  B /= physical_trace(B, specs).real();
  const VariationalState s{0.0, {specs[0].alpha}, B};
  const auto e = ladder_to_fock(s, specs, 60);
  CHECK(std::abs(parity(s, specs, {0}) - parity(e.rho, {0})) < 1e-10);
}

TEST_CASE("Uhlmann fidelity properties") {
  std::mt19937 rng(9);
  const Matrix r = random_mixed(6, rng);
  CHECK(fidelity(r, r).fidelity == doctest::Approx(1.0).epsilon(1e-10));
  Matrix p0 = Matrix::Zero(3, 3), p1 = Matrix::Zero(3, 3);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  CHECK(std::abs(fidelity(p0, p1).fidelity) < 1e-14);
  for (int trial = 0; trial < 5; ++trial) {
    const Vector a = random_ket(5, rng), b = random_ket(5, rng);
    const double ref = std::norm(a.dot(b));
    CHECK(std::abs(fidelity(Matrix(a * a.adjoint()), Matrix(b * b.adjoint())).fidelity - ref) < 1e-8);
    const Matrix m1 = random_mixed(5, rng), m2 = random_mixed(5, rng);
    CHECK(std::abs(fidelity(m1, m2).fidelity - fidelity(m2, m1).fidelity) < 1e-10);
  }
  CHECK_THROWS(fidelity(p0, r));
}

TEST_CASE("negative eigenvalues are clipped and reported") {
  Matrix r = Matrix::Zero(2, 2);
  r(0, 0) = 1.1;
  r(1, 1) = -0.1;
  const auto raw = fidelity(r, r, false);
  CHECK(raw.clipped_mass == doctest::Approx(0.2));
  CHECK(raw.fidelity == doctest::Approx(1.21));
  const auto normalized = fidelity(r, r);
  CHECK(normalized.clipped_mass == doctest::Approx(0.2));
  CHECK(normalized.fidelity <= 1.0);
}

TEST_CASE("purity of pure and mixed states") {
  const std::vector<LadderBasisSpec> cat{{Complex(1.2), 2, Sector::Z2Cat}};
  const auto even = embed_initial_state({{ModeState::Kind::EvenCat, Complex(1.2)}}, cat);
  CHECK(purity(even, cat) == doctest::Approx(1.0).epsilon(1e-12));
  const auto odd = embed_initial_state({{ModeState::Kind::OddCat, Complex(1.2)}}, cat);
  VariationalState mix = even;
  mix.B = 0.5 * (even.B + odd.B);
  CHECK(purity(mix, cat) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(purity(fock_coherent(Complex(0.5), 20)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Wigner function reference values") {
  const std::vector<double> origin{-0.5, 0.0, 0.5};
  const auto vac = wigner(fock_coherent(Complex(0.0), 10), 0, origin, origin);
  CHECK(std::abs(vac.values(1, 1) - kTwoOverPi) < 1e-6);

  const auto odd = fock_product_state({{ModeState::Kind::OddCat, Complex(1.5, 0.5)}}, 40);
  CHECK(std::abs(wigner(odd, 0, origin, origin).values(1, 1) + kTwoOverPi) < 1e-6);

  // Coherent state: Gaussian (2/pi) exp(-2 |beta - gamma|^2) centred at gamma.
  const Complex gamma(1.0, -0.5);
  const auto xs = linspace(-2.0, 3.0, 11), ps = linspace(-2.5, 1.5, 9);
  const auto w = wigner(fock_coherent(gamma, 40), 0, xs, ps);
  double worst = 0.0;
  for (std::size_t ip = 0; ip < ps.size(); ++ip) {
    for (std::size_t ix = 0; ix < xs.size(); ++ix) {
      const double ref = kTwoOverPi * std::exp(-2.0 * std::norm(Complex(xs[ix], ps[ip]) - gamma));
      worst = std::max(worst, std::abs(w.values(Eigen::Index(ip), Eigen::Index(ix)) - ref));
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("Wigner grids integrate to one") {
  const auto xs = linspace(-6.0, 6.0, 121);
  for (const auto& st : std::vector<ModeState>{{ModeState::Kind::Coherent, Complex(1.0, 1.0)},
                                               {ModeState::Kind::EvenCat, Complex(2.0, 0.0)},
                                               {ModeState::Kind::OddCat, Complex(1.3, -1.7)}}) {
    const auto rho = fock_product_state({st}, 40);
    const double integral = wigner_integral(wigner(rho, 0, xs, xs));
    CHECK(integral >= 0.98);
    CHECK(integral <= 1.02);
  }
  CHECK_THROWS(linspace(0.0, 1.0, 1));
}

TEST_CASE("reduced Wigner function of a two-mode product") {
  const auto rho = fock_product_state({{ModeState::Kind::Coherent, Complex(0.0)}, {ModeState::Kind::OddCat, Complex(1.0)}}, 15);
  const std::vector<double> o{0.0, 1.0};
  CHECK(std::abs(wigner(rho, 0, o, o).values(0, 0) - kTwoOverPi) < 1e-6);
  CHECK(std::abs(wigner(rho, 1, o, o).values(0, 0) + kTwoOverPi) < 1e-6);
}

TEST_CASE("Hermitian expectations stay real along a trajectory") {
  const Complex a0(0.5, -0.5);
  const std::vector<LadderBasisSpec> specs{{a0, 4, Sector::Plain}};
  const auto st0 = embed_initial_state({{ModeState::Kind::Coherent, a0}}, specs);
  EvolveOptions eo;
  eo.store_states = false;
  const auto n = OperatorPolynomial::number(1, 0);
  const auto x = OperatorPolynomial::annihilation(1, 0) + OperatorPolynomial::creation(1, 0);
  double worst = 0.0;
  eo.on_sample = [&](const VariationalState& s, const SampleDiagnostics&) {
    worst = std::max({worst, std::abs(expectation(s, specs, n).imag()), std::abs(expectation(s, specs, x).imag())});
  };
  evolve(st0, build_kerr_driven(1.0, 1.0, 1.0), specs, EngineConfig{}, 3.0, linspace(0.0, 3.0, 16), eo);
  CHECK(worst <= 1e-9);
}

}  // TEST_SUITE
