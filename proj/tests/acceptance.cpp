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

// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion ids
// (AC1 ... AC8) as arguments to run a subset; --strict turns any FAIL into a
// nonzero exit status.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "catladder/config.hpp"
#include "catladder/fock.hpp"
#include "catladder/linalg.hpp"
#include "catladder/model.hpp"
#include "catladder/observables.hpp"
#include "catladder/presets.hpp"
#include "catladder/runner.hpp"
#include "catladder/tdvp.hpp"

using namespace catladder;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

struct TdvpRun {
  std::vector<LadderBasisSpec> specs;
  Trajectory traj;
};

TdvpRun run_tdvp(const RunConfig& c, const std::vector<double>& times) {
  const VariationalState s0 = embed_initial_state(c.initial_state, c.basis, c.run.t_start);
  return {c.basis, evolve(s0, build_model(c.model), c.basis, c.engine, times.back(), times)};
}

VariationalState state_at(const TdvpRun& r, std::size_t i) {
  return {r.traj.times[i], r.traj.alphas[i], r.traj.coefficients[i]};
}

std::vector<double> observable_series(const TdvpRun& r, const ObservableRequest& req) {
  std::vector<double> out;
  for (std::size_t i = 0; i < r.traj.times.size(); ++i) {
    out.push_back(evaluate_observables({req}, state_at(r, i), r.specs)[0].real());
  }
  return out;
}

ObservableRequest parity_request(std::vector<std::size_t> modes) {
  ObservableRequest o;
  o.kind = ObservableRequest::Kind::Parity;
  o.modes = std::move(modes);
  return o;
}

// Single-mode Fock state zero-padded (or cut) to another cutoff.
FockDensityMatrix resize_fock(const FockDensityMatrix& rho, int cutoff) {
  FockDensityMatrix out{cutoff, 1, Matrix::Zero(cutoff + 1, cutoff + 1)};
  const Eigen::Index n = std::min<Eigen::Index>(rho.entries.rows(), cutoff + 1);
  out.entries.topLeftCorner(n, n) = rho.entries.topLeftCorner(n, n);
  return out;
}

double min_fidelity(const std::vector<FockDensityMatrix>& a, const std::vector<FockDensityMatrix>& reference) {
  double worst = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::min(worst, fidelity(resize_fock(a[i], reference[i].cutoff), reference[i]).fidelity);
  }
  return worst;
}

std::vector<FockDensityMatrix> fock_series(const FockDensityMatrix& rho0, const ModelSpec& model,
                                           const std::vector<double>& times) {
  return evolve_fock(rho0, model, times.front(), times.back(), times, {1e-10, 1e-10}).states;
}

double moment_gap(const std::vector<FockDensityMatrix>& a, const std::vector<FockDensityMatrix>& b) {
  const auto number = OperatorPolynomial::number(1, 0);
  const auto lower = OperatorPolynomial::annihilation(1, 0);
  double gap = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    gap = std::max(gap, std::abs(expectation(a[i], number) - expectation(b[i], number)));
    gap = std::max(gap, std::abs(expectation(a[i], lower) - expectation(b[i], lower)));
  }
  return gap;
}

// ---------------------------------------------------------------------------

Verdict fock_limit_equivalence() {
  RunConfig c = preset("kerr_fig2");
  const int cutoff = 10;
  c.basis = {{Complex(0.0), cutoff, Sector::Plain}};
  c.engine.freeze_alpha = true;
  c.engine.rtol = c.engine.atol = 1e-11;
  const auto times = c.run.sample_times();
  const TdvpRun r = run_tdvp(c, times);
  const FockDensityMatrix rho0 = ladder_to_fock(state_at(r, 0), r.specs, cutoff).rho;
  const auto oracle = evolve_fock(rho0, build_model(c.model), times.front(), times.back(), times, {1e-11, 1e-11});
  const auto number = OperatorPolynomial::number(1, 0);
  const auto lower = OperatorPolynomial::annihilation(1, 0);
  double gap = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const VariationalState s = state_at(r, i);
    gap = std::max(gap, std::abs(expectation(s, r.specs, number) - expectation(oracle.states[i], number)));
    gap = std::max(gap, std::abs(expectation(s, r.specs, lower) - expectation(oracle.states[i], lower)));
  }
  return {gap <= 1e-6, "max |engine - oracle| over <n>, <a> = " + fmt(gap) + " (tol 1e-6)"};
}

// Semiclassical fixed point alpha (U|alpha|^2 - i kappa/2) = -F, by bisection
// on the monotone photon-number equation.
Complex kerr_fixed_point(double U, double F, double kappa) {
  double lo = 0.0, hi = F * F / (0.25 * kappa * kappa) + 1.0;
  for (int it = 0; it < 200; ++it) {
    const double n = 0.5 * (lo + hi);
    (n * (U * U * n * n + 0.25 * kappa * kappa) > F * F ? hi : lo) = n;
  }
  const double n = 0.5 * (lo + hi);
  return -F / Complex(U * n, -0.5 * kappa);
}

struct ScalingPoint {
  double ratio = 0.0;
  int oracle_cutoff = 0;
  int ladder_depth = -1;
  int fock_cutoff = -1;
};

ScalingPoint scaling_point(double ratio) {
  const double kappa = 1.0, U = ratio * kappa;
  const double F = 1.5 * std::sqrt(kappa * kappa * kappa / U);
  RunConfig c = preset("kerr_fig2");
  c.model.U = U;
  c.model.F = F;
  const Complex a0 = kerr_fixed_point(U, F, kappa);
  c.initial_state = {{ModeState::Kind::Coherent, a0}};
  c.run.samples = 51;
  const auto times = c.run.sample_times();
  const ModelSpec model = build_model(c.model);
  ScalingPoint out{ratio};

  // Doubling-stable oracle: observables at cutoff and 2*cutoff agree to 1e-8.
  int cut = 8;
  std::vector<FockDensityMatrix> coarse = fock_series(fock_coherent(a0, cut), model, times), fine;
  for (;; cut *= 2) {
    fine = fock_series(fock_coherent(a0, 2 * cut), model, times);
    if (moment_gap(coarse, fine) < 1e-8 || cut >= 256) break;
    coarse = std::move(fine);
  }
  out.oracle_cutoff = 2 * cut;
  const auto& oracle = fine;

  for (int depth = 1; depth <= 14 && out.ladder_depth < 0; ++depth) {
    c.basis = {{a0, depth, Sector::Plain}};
    try {
      const TdvpRun r = run_tdvp(c, times);
      std::vector<FockDensityMatrix> states;
      for (std::size_t i = 0; i < times.size(); ++i) {
        states.push_back(ladder_to_fock(state_at(r, i), r.specs, out.oracle_cutoff).rho);
      }
      if (min_fidelity(states, oracle) >= 0.99) out.ladder_depth = depth;
    } catch (const std::exception&) {
    }
  }
  for (int fc = 1; fc <= out.oracle_cutoff && out.fock_cutoff < 0; ++fc) {
    if (min_fidelity(fock_series(fock_coherent(a0, fc), model, times), oracle) >= 0.99) out.fock_cutoff = fc;
  }
  return out;
}

Verdict basis_size_scaling() {
  std::vector<ScalingPoint> pts;
  for (double ratio : {1.0, 0.25, 0.0625}) pts.push_back(scaling_point(ratio));
  std::ostringstream os;
  bool found = true;
  int lo = std::numeric_limits<int>::max(), hi = 0;
  bool monotone = true;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& p = pts[i];
    if (i > 0) os << "; ";
    os << "U/kappa=" << p.ratio << ": N=" << p.ladder_depth << " cutoff=" << p.fock_cutoff
       << " (oracle " << p.oracle_cutoff << ")";
    found = found && p.ladder_depth >= 0 && p.fock_cutoff >= 0;
    lo = std::min(lo, p.ladder_depth);
    hi = std::max(hi, p.ladder_depth);
    if (i > 0 && p.fock_cutoff < pts[i - 1].fock_cutoff) monotone = false;
  }
  const bool ladder_flat = hi - lo <= 4;  // within +-2 of the midpoint
  const bool fock_grows = monotone && pts.back().fock_cutoff >= 2 * pts.front().fock_cutoff;
  return {found && ladder_flat && fock_grows, os.str()};
}

Verdict convergence_shape() {
  std::ostringstream os;
  bool ok = true;
  const auto root = std::filesystem::temp_directory_path() / "catladder_acceptance";
  for (const char* name : {"kerr_fig2", "cat_quench_fig3ab"}) {
    RunConfig c = preset(name);
    c.compare->depths = {2, 4, 6, 8};
    const RunReport r = run(c, {root, nullptr});
    if (os.tellp() > 0) os << "; ";
    os << name << ":";
    if (r.exit_code != kExitOk || r.sweep.size() != 4) {
      os << " run failed (" << r.error << ")";
      ok = false;
      continue;
    }
    for (std::size_t i = 0; i < r.sweep.size(); ++i) {
      os << " N=" << r.sweep[i].depth << " " << fmt(r.sweep[i].max_infidelity);
      ok = ok && r.sweep[i].ok;
      if (i > 0 && r.sweep[i].max_infidelity > 1.1 * r.sweep[i - 1].max_infidelity) ok = false;
    }
    ok = ok && r.sweep.back().max_infidelity <= 1e-2;
  }
  return {ok, os.str()};
}

Verdict steady_cat_amplitude() {
  // Imaginary G: the two conjugation conventions for the manifold coincide.
  const Complex G(0.0, 4.0);
  const double eta = 1.0;
  RunConfig c;
  c.model.builder = "two_photon_kerr";
  c.model.G = {{0.0, G}};
  c.model.eta = eta;
  // Off-axis start: a real or purely imaginary cat amplitude would have to pass
  // through alpha = 0, where the cat basis degenerates.
  const Complex a0 = std::polar(1.0, 0.25 * std::numbers::pi);
  c.basis = {{a0, 4, Sector::Z2Cat}};
  c.initial_state = {{ModeState::Kind::EvenCat, a0}};
  const std::vector<double> times{0.0, 5.0, 10.0};
  const TdvpRun r = run_tdvp(c, times);
  const Complex a2 = expectation(state_at(r, times.size() - 1), r.specs, OperatorPolynomial::monomial(1, 0, 0, 2));
  const Complex target = Complex(0.0, 1.0) * G / eta;
  const double err = std::abs(a2 - target) / std::abs(G / eta);
  std::ostringstream os;
  os << "<a^2> = (" << a2.real() << ", " << a2.imag() << "), iG/eta = (" << target.real() << ", " << target.imag()
     << "), relative error " << fmt(err) << " (tol 1e-2)";
  return {err <= 1e-2, os.str()};
}

struct ParitySwing {
  double period = std::numeric_limits<double>::quiet_NaN();
  double minimum = 1.0;
};

// Quarter period from the first zero crossing to the following minimum.
ParitySwing parity_swing(const std::vector<double>& t, const std::vector<double>& p) {
  ParitySwing out;
  std::size_t zero = 0;
  double t_zero = 0.0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (p[i - 1] > 0.0 && p[i] <= 0.0) {
      t_zero = t[i - 1] + (t[i] - t[i - 1]) * p[i - 1] / (p[i - 1] - p[i]);
      zero = i;
      break;
    }
  }
  if (zero == 0) return out;
  for (std::size_t i = zero; i + 1 < p.size(); ++i) {
    if (p[i] <= p[i - 1] && p[i] <= p[i + 1]) {
      const double d = p[i - 1] - 2.0 * p[i] + p[i + 1];
      const double shift = d > 0.0 ? 0.5 * (p[i - 1] - p[i + 1]) / d : 0.0;
      const double t_min = t[i] + shift * (t[i + 1] - t[i]);
      out.period = 4.0 * (t_min - t_zero);
      out.minimum = p[i];
      return out;
    }
  }
  return out;
}

Verdict rabi_period() {
  RunConfig c = preset("xgate_fig3cd");
  const double eta = c.model.eta;
  const double alpha_abs = std::abs(c.initial_state[0].amplitude);
  std::ostringstream os;

  c.model.F_x = 0.5 * eta;
  const double predicted_slow = 2.0 * std::numbers::pi / (std::sqrt(2.0) * c.model.F_x * alpha_abs);
  auto times = c.run.sample_times();
  TdvpRun r = run_tdvp(c, times);
  const ParitySwing slow = parity_swing(times, observable_series(r, parity_request({0})));
  const double shift_slow = slow.period / predicted_slow - 1.0;
  const bool slow_ok = std::isfinite(slow.period) && std::abs(shift_slow) <= 0.05;
  os << "F/eta=0.5: period " << slow.period << " vs " << predicted_slow << " (shift " << fmt(shift_slow)
     << ", tol 5%); ";

  c.model.F_x = 4.0 * eta;
  const double predicted_fast = 2.0 * std::numbers::pi / (std::sqrt(2.0) * c.model.F_x * alpha_abs);
  c.run.t_end = 2.0 * predicted_fast;
  c.run.samples = 201;
  // The strong drive keeps the displacement gate chattering; 1e-7 holds the
  // final displacement to 1e-5 of the 1e-8 result at a fifth of the cost.
  c.engine.rtol = c.engine.atol = 1e-7;
  times = c.run.sample_times();
  r = run_tdvp(c, times);
  const ParitySwing fast = parity_swing(times, observable_series(r, parity_request({0})));
  const double shift_fast = fast.period / predicted_fast - 1.0;
  const bool amplitude_loss = -fast.minimum <= 0.9 * -slow.minimum;
  const bool deviates = !std::isfinite(fast.period) || std::abs(shift_fast) >= 0.1 || amplitude_loss;
  os << "F/eta=4: period " << fast.period << " vs " << predicted_fast << " (shift " << fmt(shift_fast)
     << "), minimum " << fast.minimum << " vs " << slow.minimum;
  return {slow_ok && deviates, os.str()};
}

Verdict two_mode_parity() {
  const RunConfig c = preset("two_cat_fig4ab");
  const auto times = c.run.sample_times();
  const TdvpRun r = run_tdvp(c, times);
  const auto joint = observable_series(r, parity_request({0, 1}));
  const auto single = observable_series(r, parity_request({0}));
  double drift = 0.0;
  for (double v : joint) drift = std::max(drift, std::abs(v - joint.front()));
  const auto [lo, hi] = std::minmax_element(single.begin(), single.end());
  int turns = 0;
  for (std::size_t i = 1; i + 1 < single.size(); ++i) {
    if ((single[i] - single[i - 1]) * (single[i + 1] - single[i]) < 0.0) ++turns;
  }
  const double swing = *hi - *lo;
  std::ostringstream os;
  os << "joint parity drift " << fmt(drift) << " (tol 1e-5); mode-0 parity swing " << swing << " with " << turns
     << " turning points";
  return {drift <= 1e-5 && swing >= 0.2 && turns >= 1, os.str()};
}

Verdict three_mode_self_convergence() {
  RunConfig c = preset("three_cat_fig4cd");
  const auto times = c.run.sample_times();
  // Largest depth whose N + 2 partner fits the budget on one core: N = 3
  // takes about 6 min, while N = 4 is over 30 min before t = 0.05.
  constexpr int depth = 1;
  c.basis = basis_with_depth(c.basis, depth);
  const TdvpRun coarse = run_tdvp(c, times);
  c.basis = basis_with_depth(c.basis, depth + 2);
  const TdvpRun fine = run_tdvp(c, times);
  double gap = 0.0;
  for (const auto& req : {parity_request({0}), parity_request({0, 1})}) {
    const auto a = observable_series(coarse, req), b = observable_series(fine, req);
    for (std::size_t i = 0; i < a.size(); ++i) gap = std::max(gap, std::abs(a[i] - b[i]));
  }
  double drift = 0.0;
  for (const TdvpRun* r : {&coarse, &fine}) {
    const auto total = observable_series(*r, parity_request({0, 1, 2}));
    for (double v : total) drift = std::max(drift, std::abs(v - total.front()));
  }
  std::ostringstream os;
  os << "N=" << depth << " vs N=" << depth + 2 << ": sup gap " << fmt(gap) << " (tol 5e-2); triple parity drift "
     << fmt(drift) << " (tol 1e-4)";
  return {gap <= 5e-2 && drift <= 1e-4, os.str()};
}

Verdict property_suites() {
  const std::string cmd = std::string(CATLADDER_UNIT_TESTS) + " --minimal > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return {rc == 0, "unit property suites exit status " + std::to_string(rc)};
}

struct Criterion {
  std::string id;
  double budget_seconds;
  std::function<Verdict()> check;
};

}  // namespace

int main(int argc, char** argv) {
  catladder::retain_large_allocations();
  bool strict = false;
  std::string report_path = "acceptance_report.txt";
  std::set<std::string> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--strict") {
      strict = true;
    } else if (a == "--report" && i + 1 < argc) {
      report_path = argv[++i];
    } else {
      only.insert(a);
    }
  }
  const std::vector<Criterion> criteria{
      {"AC1", 60.0, fock_limit_equivalence},   {"AC2", 600.0, basis_size_scaling},
      {"AC3", 600.0, convergence_shape},       {"AC4", 60.0, steady_cat_amplitude},
      {"AC5", 300.0, rabi_period},             {"AC6", 600.0, two_mode_parity},
      {"AC7", 1800.0, three_mode_self_convergence}, {"AC8", 600.0, property_suites},
  };
  // Verdicts also go to a file: ctest hides the output of a passing test.
  std::ofstream report(report_path);
  auto emit = [&](const std::string& line) {
    std::cout << line << std::endl;
    report << line << std::endl;
  };
  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto start = Clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    const bool in_budget = secs <= c.budget_seconds;
    const bool pass = v.pass && in_budget;
    if (!pass) ++failures;
    char head[128];
    std::snprintf(head, sizeof head, "%s %s [%.1fs / %.0fs budget%s] ", c.id.c_str(), pass ? "PASS" : "FAIL", secs,
                  c.budget_seconds, in_budget ? "" : ", over budget");
    emit(head + v.detail);
  }
  emit("summary: " + std::to_string(failures) + " criteria failed");
  return strict && failures > 0 ? 1 : 0;
}
