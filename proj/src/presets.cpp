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

#include "catladder/presets.hpp"

#include "catladder/errors.hpp"

namespace catladder {

namespace {

using Kind = ObservableRequest::Kind;

ObservableRequest moment(std::size_t mode, int creation, int annihilation) {
  return {Kind::Moment, "mom" + std::to_string(mode) + "_" + std::to_string(creation) + "_" +
                            std::to_string(annihilation),
          mode, creation, annihilation, {}};
}

ObservableRequest parity_of(std::vector<std::size_t> modes) {
  std::string name = "parity";
  for (auto k : modes) name += "_" + std::to_string(k);
  return {Kind::Parity, name, 0, 0, 0, std::move(modes)};
}

ObservableRequest purity_obs() { return {Kind::Purity, "purity", 0, 0, 0, {}}; }

RunConfig base(const std::string& name, const std::string& description) {
  RunConfig c;
  c.name = name;
  c.description = description;
  c.output.directory = "out";
  return c;
}

// Driven Kerr resonator from its semiclassical fixed point alpha (U|alpha|^2 - i kappa/2) = -F.
RunConfig kerr_fig2() {
  RunConfig c = base("kerr_fig2",
                     "Driven-dissipative Kerr resonator, U = kappa = 1, F = 1.5 sqrt(kappa^3/U), started from the "
                     "semiclassical steady-state coherent state; infidelity sweep over N against a Fock oracle.");
  c.model.builder = "kerr_driven";
  c.model.modes = 1;
  c.model.U = 1.0;
  c.model.F = 1.5;
  c.model.kappa = 1.0;
  const Complex a0(-1.036386386645, -0.415609268954);
  c.basis = {{a0, 6, Sector::Plain}};
  c.initial_state = {{ModeState::Kind::Coherent, a0}};
  c.run = {0.0, 10.0, 101, {moment(0, 1, 1), moment(0, 0, 1), purity_obs()}};
  c.compare = CompareSection{30, {2, 4, 6, 8}};
  return c;
}

// Asymmetrically driven dimer; the drive and Kerr strengths are free choices.
RunConfig dimer_fig2c() {
  RunConfig c = base("dimer_fig2c",
                     "Nonlinear photonic dimer, J = 1.2 kappa, Delta = 2 kappa, drive on mode 0 only, coherent "
                     "initial state alpha = (-1.0 - 1.84i, 1.36 + 0.8i). U = 0.1 and F = 2 are chosen values.");
  c.model.builder = "dimer";
  c.model.modes = 2;
  c.model.U = 0.1;
  c.model.F = 2.0;
  c.model.J = 1.2;
  c.model.Delta = 2.0;
  c.model.kappa = 1.0;
  const Complex a1(-1.0, -1.84), a2(1.36, 0.8);
  c.basis = {{a1, 4, Sector::Plain}, {a2, 4, Sector::Plain}};
  c.initial_state = {{ModeState::Kind::Coherent, a1}, {ModeState::Kind::Coherent, a2}};
  c.run = {0.0, 5.0, 51, {moment(0, 1, 1), moment(1, 1, 1), moment(0, 0, 1), moment(1, 0, 1)}};
  c.compare = CompareSection{16, {2, 4, 6}};
  return c;
}

// Quench G0 = 5iU -> G1 = -5iU; the pre-quench steady state is approximated
// by the even cat on the G0 manifold alpha^2 = -G0* / (U - i eta).
RunConfig cat_quench_fig3ab() {
  RunConfig c = base("cat_quench_fig3ab",
                     "Quenched two-photon Kerr cat, U = 1, eta = U/4, G: 5iU -> -5iU at t = 0, starting from the "
                     "even cat on the pre-quench manifold; Wigner snapshots and infidelity sweep over N.");
  c.model.builder = "two_photon_kerr";
  c.model.modes = 1;
  c.model.U = 1.0;
  c.model.eta = 0.25;
  c.model.G = {{-1.0, Complex(0.0, 5.0)}, {0.0, Complex(0.0, -5.0)}};
  const Complex a0(1.355404351567, 1.735969914624);
  c.basis = {{a0, 6, Sector::Z2Cat}};
  c.initial_state = {{ModeState::Kind::EvenCat, a0}};
  c.run = {0.0, 3.0, 61, {moment(0, 0, 2), moment(0, 1, 1), parity_of({0}), purity_obs()}};
  // At the default gate threshold the N = 8 displacement equation turns stiff
  // once the corner population decays (Jacobian ~1e5); 1e-6 keeps it tractable.
  c.engine.epsilon_alpha = 1e-6;
  c.compare = CompareSection{30, {2, 4, 6, 8}};
  c.output.wigner = {{0, -4.0, 4.0, -4.0, 4.0, 81, 40, {0.0, 0.5, 1.0, 3.0}}};
  return c;
}

// Single-photon X rotation of the U = 0 cat qubit, F / eta = 0.5, G = 10 eta.
RunConfig xgate_fig3cd() {
  RunConfig c = base("xgate_fig3cd",
                     "X rotation of a two-photon-stabilized cat qubit: U = 0, eta = 1, G = 10 eta, F = 0.5 eta, "
                     "even cat at the steady-state amplitude; parity over two nominal Rabi periods.");
  c.model.builder = "two_photon_kerr";
  c.model.modes = 1;
  c.model.eta = 1.0;
  c.model.G = {{0.0, Complex(10.0, 0.0)}};
  c.model.F_x = 0.5;
  // Steady-state manifold alpha^2 = -i G* / eta.
  const Complex a0(2.236067977500, -2.236067977500);
  c.basis = {{a0, 6, Sector::Z2Cat}};
  c.initial_state = {{ModeState::Kind::EvenCat, a0}};
  c.run = {0.0, 2.81, 141, {parity_of({0}), moment(0, 0, 2), moment(0, 1, 1)}};
  return c;
}

RunConfig two_cat_fig4ab() {
  RunConfig c = base("two_cat_fig4ab",
                     "Two hopping-coupled two-photon Kerr cats, G = 5U, eta = 0.25U, J = U, even cats at alpha = 2.");
  c.model.builder = "cat_chain";
  c.model.modes = 2;
  c.model.U = 1.0;
  c.model.eta = 0.25;
  c.model.G = {{0.0, Complex(5.0, 0.0)}};
  c.model.hopping = {1.0};
  const Complex a0(2.0, 0.0);
  c.basis = {{a0, 4, Sector::Z2Cat}, {a0, 4, Sector::Z2Cat}};
  c.initial_state = {{ModeState::Kind::EvenCat, a0}, {ModeState::Kind::EvenCat, a0}};
  c.run = {0.0, 4.0, 81,
           {moment(0, 0, 2), moment(1, 0, 2), parity_of({0}), parity_of({1}), parity_of({0, 1})}};
  c.compare = CompareSection{20, {2, 4}};
  return c;
}

RunConfig three_cat_fig4cd() {
  RunConfig c = base("three_cat_fig4cd",
                     "Open chain of three two-photon Kerr cats, G = 5U, eta = 0.25U, J12 = J23 = 0.8U, even cats "
                     "at alpha = 2; convergence is checked against N + 2 rather than a Fock oracle.");
  c.model.builder = "cat_chain";
  c.model.modes = 3;
  c.model.U = 1.0;
  c.model.eta = 0.25;
  c.model.G = {{0.0, Complex(5.0, 0.0)}};
  c.model.hopping = {0.8, 0.8};
  const Complex a0(2.0, 0.0);
  c.basis = {{a0, 2, Sector::Z2Cat}, {a0, 2, Sector::Z2Cat}, {a0, 2, Sector::Z2Cat}};
  c.initial_state = {{ModeState::Kind::EvenCat, a0}, {ModeState::Kind::EvenCat, a0},
                     {ModeState::Kind::EvenCat, a0}};
  c.run = {0.0, 4.0, 81, {parity_of({0}), parity_of({0, 1}), parity_of({0, 1, 2})}};
  return c;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"kerr_fig2", "dimer_fig2c", "cat_quench_fig3ab", "xgate_fig3cd", "two_cat_fig4ab", "three_cat_fig4cd"};
}

RunConfig preset(const std::string& name) {
  if (name == "kerr_fig2") return kerr_fig2();
  if (name == "dimer_fig2c") return dimer_fig2c();
  if (name == "cat_quench_fig3ab") return cat_quench_fig3ab();
  if (name == "xgate_fig3cd") return xgate_fig3cd();
  if (name == "two_cat_fig4ab") return two_cat_fig4ab();
  if (name == "three_cat_fig4cd") return three_cat_fig4cd();
  throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace catladder
