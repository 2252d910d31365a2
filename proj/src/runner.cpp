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

#include "catladder/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "catladder/errors.hpp"
#include "catladder/observables.hpp"

namespace catladder {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

fs::path resolve_output_dir(const RunConfig& config, const fs::path& fallback_root) {
  fs::path dir(config.output.directory);
  if (const char* env = std::getenv(kOutputRootEnv); env && *env) {
    // The override re-roots absolute directories too.
    return (fs::path(env) / dir.relative_path() / config.name).lexically_normal();
  }
  return (fallback_root / dir / config.name).lexically_normal();
}

std::vector<LadderBasisSpec> basis_with_depth(const std::vector<LadderBasisSpec>& basis, int depth) {
  auto out = basis;
  for (auto& s : out) s.depth = depth;
  return out;
}

namespace {

OperatorPolynomial moment_poly(const ObservableRequest& o, std::size_t modes) {
  return OperatorPolynomial::monomial(modes, o.mode, o.creation, o.annihilation, 1.0);
}

}  // namespace

std::vector<Complex> evaluate_observables(const std::vector<ObservableRequest>& requests,
                                          const VariationalState& state, const std::vector<LadderBasisSpec>& specs) {
  std::vector<Complex> out;
  for (const auto& o : requests) {
    switch (o.kind) {
      case ObservableRequest::Kind::Moment:
        out.push_back(expectation(state, specs, moment_poly(o, specs.size())));
        break;
      case ObservableRequest::Kind::Parity: out.emplace_back(parity(state, specs, o.modes)); break;
      case ObservableRequest::Kind::Purity: out.emplace_back(purity(state, specs)); break;
    }
  }
  return out;
}

std::vector<Complex> evaluate_observables(const std::vector<ObservableRequest>& requests,
                                          const FockDensityMatrix& rho) {
  std::vector<Complex> out;
  for (const auto& o : requests) {
    switch (o.kind) {
      case ObservableRequest::Kind::Moment: out.push_back(expectation(rho, moment_poly(o, rho.modes))); break;
      case ObservableRequest::Kind::Parity: out.emplace_back(parity(rho, o.modes)); break;
      case ObservableRequest::Kind::Purity: out.emplace_back(purity(rho)); break;
    }
  }
  return out;
}

std::vector<std::string> observable_columns(const std::vector<ObservableRequest>& requests) {
  std::vector<std::string> cols;
  for (const auto& o : requests) {
    if (o.kind == ObservableRequest::Kind::Moment) {
      cols.push_back("re_" + o.name);
      cols.push_back("im_" + o.name);
    } else {
      cols.push_back(o.name);
    }
  }
  return cols;
}

namespace {

void append_values(std::vector<std::string>& row, const std::vector<ObservableRequest>& requests,
                   const std::vector<Complex>& values) {
  for (std::size_t i = 0; i < requests.size(); ++i) {
    row.push_back(format_number(values[i].real()));
    if (requests[i].kind == ObservableRequest::Kind::Moment) row.push_back(format_number(values[i].imag()));
  }
}

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    write(header);
  }
  void write(const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) out_ << (i ? "," : "") << row[i];
    out_ << '\n';
    out_.flush();
  }

 private:
  std::ofstream out_;
};

void log_line(const RunOptions& o, const std::string& msg) {
  if (o.log) *o.log << "[catladder] " << msg << '\n';
}

std::string wigner_filename(std::size_t mode, double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "wigner_mode%zu_t%.6g.csv", mode, t);
  return buf;
}

void write_wigner(const fs::path& path, const WignerGrid& w) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  // Header row: corner label then x axis; each row starts with its p value.
  out << "p\\x";
  for (double x : w.x) out << ',' << format_number(x);
  out << '\n';
  for (std::size_t ip = 0; ip < w.p.size(); ++ip) {
    out << format_number(w.p[ip]);
    for (std::size_t ix = 0; ix < w.x.size(); ++ix) {
      out << ',' << format_number(w.values(static_cast<Eigen::Index>(ip), static_cast<Eigen::Index>(ix)));
    }
    out << '\n';
  }
}

std::string iso_now() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

std::string hex64(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Main TDVP run with streamed rows and Wigner snapshots.
void run_main(const RunConfig& c, const ModelSpec& model, const fs::path& dir, RunReport& report,
              const RunOptions& opts) {
  const auto grid = c.run.sample_times();
  std::vector<double> times = grid;
  for (const auto& w : c.output.wigner) times.insert(times.end(), w.times.begin(), w.times.end());
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  const std::size_t M = c.basis.size();
  std::vector<std::string> header{"t"};
  for (std::size_t k = 0; k < M; ++k) {
    header.push_back("re_alpha" + std::to_string(k));
    header.push_back("im_alpha" + std::to_string(k));
  }
  for (const auto& col : observable_columns(c.run.observables)) header.push_back(col);
  for (const char* d : {"trace", "hermiticity_defect", "min_eigenvalue", "orthogonality_defect"}) header.push_back(d);
  for (std::size_t k = 0; k < M; ++k) header.push_back("gate" + std::to_string(k));

  CsvWriter csv(dir / "timeseries.csv", header);
  report.files.push_back("timeseries.csv");
  std::size_t next = 0, next_grid = 0;

  EvolveOptions eo;
  eo.store_states = false;
  eo.on_sample = [&](const VariationalState& s, const SampleDiagnostics& d) {
    const double t = times[next++];
    if (next_grid < grid.size() && grid[next_grid] == t) {
      ++next_grid;
      std::vector<std::string> row{format_number(t)};
      for (const auto& a : s.alphas) {
        row.push_back(format_number(a.real()));
        row.push_back(format_number(a.imag()));
      }
      append_values(row, c.run.observables, evaluate_observables(c.run.observables, s, c.basis));
      row.push_back(format_number(d.trace));
      row.push_back(format_number(d.hermiticity_defect));
      row.push_back(std::isnan(d.min_eigenvalue) ? "nan" : format_number(d.min_eigenvalue));
      row.push_back(format_number(d.orthogonality_defect));
      for (std::size_t k = 0; k < M; ++k) row.push_back(k < d.gate_open.size() && d.gate_open[k] ? "1" : "0");
      csv.write(row);
    }
    for (const auto& w : c.output.wigner) {
      if (std::find(w.times.begin(), w.times.end(), t) == w.times.end()) continue;
      const Matrix rho = reduced_fock(s, c.basis, w.mode, w.cutoff);
      const auto grid_w = wigner(rho / rho.trace(), linspace(w.x_min, w.x_max, w.resolution),
                                 linspace(w.p_min, w.p_max, w.resolution));
      const std::string name = wigner_filename(w.mode, t);
      write_wigner(dir / name, grid_w);
      report.files.push_back(name);
    }
  };

  const VariationalState s0 = embed_initial_state(c.initial_state, c.basis, c.run.t_start);
  log_line(opts, "main run: D=" + std::to_string(s0.B.rows()) + ", t in [" + format_number(c.run.t_start) + ", " +
                     format_number(c.run.t_end) + "]");
  report.trajectory = evolve(s0, model, c.basis, c.engine, c.run.t_end, times, eo);
}

struct MemberRun {
  SweepMember summary;
  std::vector<LadderBasisSpec> specs;
  std::vector<VariationalState> states;
};

// One sweep member: an independent TDVP run writing only its own time series.
MemberRun run_member(const RunConfig& c, const ModelSpec& model, int depth, const fs::path& dir) {
  MemberRun m;
  m.summary.depth = depth;
  m.specs = basis_with_depth(c.basis, depth);
  try {
    std::vector<std::string> header{"t"};
    for (const auto& col : observable_columns(c.run.observables)) header.push_back(col);
    CsvWriter csv(dir / ("timeseries_N" + std::to_string(depth) + ".csv"), header);
    EvolveOptions eo;
    eo.store_states = false;
    eo.on_sample = [&](const VariationalState& s, const SampleDiagnostics&) {
      std::vector<std::string> row{format_number(s.t)};
      append_values(row, c.run.observables, evaluate_observables(c.run.observables, s, m.specs));
      csv.write(row);
      m.states.push_back(s);
    };
    evolve(embed_initial_state(c.initial_state, m.specs, c.run.t_start), model, m.specs, c.engine, c.run.t_end,
           c.run.sample_times(), eo);
    m.summary.ok = true;
  } catch (const std::exception& e) {
    m.summary.error = e.what();
  }
  return m;
}

// Sweep members run concurrently and keep their small coefficient matrices;
// the oracle then streams once and scores every member at each sample.
void run_compare(const RunConfig& c, const ModelSpec& model, const fs::path& dir, RunReport& report,
                 const RunOptions& opts) {
  std::vector<int> depths = c.compare->depths;
  if (depths.empty()) depths.push_back(c.basis.front().depth);
  log_line(opts, "sweep over " + std::to_string(depths.size()) + " depths");
  std::vector<std::future<MemberRun>> jobs;
  for (int n : depths) {
    jobs.push_back(std::async(std::launch::async, run_member, std::cref(c), std::cref(model), n, std::cref(dir)));
  }
  std::vector<MemberRun> members;
  for (auto& j : jobs) members.push_back(j.get());
  for (const auto& m : members) {
    report.files.push_back("timeseries_N" + std::to_string(m.summary.depth) + ".csv");
    if (!m.summary.ok) {
      throw std::runtime_error("sweep member N=" + std::to_string(m.summary.depth) + " failed: " + m.summary.error);
    }
  }

  const int cutoff = c.compare->oracle_cutoff;
  std::vector<std::string> header{"t"};
  for (const auto& col : observable_columns(c.run.observables)) header.push_back(col);
  header.push_back("trace_drift");
  CsvWriter oracle_csv(dir / "oracle.csv", header);
  report.files.push_back("oracle.csv");
  std::vector<CsvWriter> scores;
  for (auto& m : members) {
    const std::string name = "infidelity_N" + std::to_string(m.summary.depth) + ".csv";
    scores.emplace_back(dir / name, std::vector<std::string>{"t", "infidelity_raw", "infidelity", "leakage",
                                                             "clipped_mass"});
    report.files.push_back(name);
  }

  std::size_t i = 0;
  FockEvolveOptions fo;
  fo.store_states = false;
  fo.on_sample = [&](double t, const FockDensityMatrix& rho) {
    std::vector<std::string> row{format_number(t)};
    append_values(row, c.run.observables, evaluate_observables(c.run.observables, rho));
    row.push_back(format_number(std::abs(rho.trace() - 1.0)));
    oracle_csv.write(row);
    for (std::size_t j = 0; j < members.size(); ++j) {
      auto& m = members[j].summary;
      const FockEmbedding e = ladder_to_fock(members[j].states[i], members[j].specs, cutoff);
      const FidelityResult raw = fidelity(e.rho.entries, rho.entries, false);
      const FidelityResult ren = fidelity(e.rho.entries, rho.entries, true);
      const double inf_raw = 1.0 - raw.fidelity, inf = 1.0 - ren.fidelity;
      m.max_infidelity_raw = std::max(m.max_infidelity_raw, inf_raw);
      m.max_infidelity = std::max(m.max_infidelity, inf);
      m.max_leakage = std::max(m.max_leakage, std::abs(e.leakage));
      m.max_clipped_mass = std::max(m.max_clipped_mass, ren.clipped_mass);
      scores[j].write({format_number(t), format_number(inf_raw), format_number(inf), format_number(e.leakage),
                       format_number(ren.clipped_mass)});
    }
    ++i;
  };
  log_line(opts, "oracle: cutoff " + std::to_string(cutoff) + " per mode");
  FockTolerances tol{c.engine.rtol, c.engine.atol, c.engine.max_step};
  evolve_fock(fock_product_state(c.initial_state, cutoff), model, c.run.t_start, c.run.t_end, c.run.sample_times(),
              tol, fo);

  CsvWriter summary(dir / "sweep_summary.csv",
                    {"N", "max_infidelity_raw", "max_infidelity", "max_leakage", "max_clipped_mass"});
  for (const auto& m : members) {
    const auto& s = m.summary;
    summary.write({std::to_string(s.depth), format_number(s.max_infidelity_raw), format_number(s.max_infidelity),
                   format_number(s.max_leakage), format_number(s.max_clipped_mass)});
    report.sweep.push_back(s);
  }
  report.files.push_back("sweep_summary.csv");
}

void write_manifest(const RunConfig& c, const RunReport& r, const std::string& started) {
  json files = r.files;
  json gates = json::array();
  for (const auto& g : r.trajectory.gate_open_times) gates.push_back(g);
  json sweep = json::array();
  for (const auto& m : r.sweep) {
    sweep.push_back({{"N", m.depth},
                     {"ok", m.ok},
                     {"error", m.error},
                     {"max_infidelity_raw", m.max_infidelity_raw},
                     {"max_infidelity", m.max_infidelity},
                     {"max_leakage", m.max_leakage}});
  }
  const auto& st = r.trajectory.stats;
  json manifest = {{"name", c.name},
                   {"catladder_version", CATLADDER_VERSION},
                   {"eigen_version", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                         "." + std::to_string(EIGEN_MINOR_VERSION)},
                   {"config_hash", hex64(config_hash(c))},
                   {"config", json::parse(to_json(c))},
                   {"status", r.status},
                   {"partial", r.status != "ok"},
                   {"error", r.error},
                   {"started_at", started},
                   {"wall_seconds", r.wall_seconds},
                   {"files", files},
                   {"gate_open_times", gates},
                   {"max_step_trace_drift", r.trajectory.max_step_trace_drift},
                   {"integrator", {{"accepted", st.accepted}, {"rejected", st.rejected}, {"rhs_evaluations", st.rhs_evaluations}}},
                   {"sweep", sweep}};
  std::ofstream out(r.directory / "manifest.json");
  out << manifest.dump(2) << '\n';
}

}  // namespace

RunReport run(const RunConfig& config, const RunOptions& options) {
  RunReport report;
  const auto t0 = std::chrono::steady_clock::now();
  const std::string started = iso_now();
  report.directory = options.root ? resolve_output_dir(config, *options.root) : resolve_output_dir(config);
  try {
    validate(config);
  } catch (const ConfigError& e) {
    report.exit_code = kExitConfigError;
    report.status = "failed";
    report.error = e.what();
    return report;
  }
  try {
    fs::create_directories(report.directory);
  } catch (const std::exception& e) {
    report.exit_code = kExitRuntimeFailure;
    report.status = "failed";
    report.error = e.what();
    return report;
  }
  try {
    const ModelSpec model = build_model(config.model);
    run_main(config, model, report.directory, report, options);
    if (config.compare) run_compare(config, model, report.directory, report, options);
  } catch (const IntegrationError& e) {
    report.error = std::string(e.what()) + " (t reached " + format_number(e.t_reached()) + ")";
    report.exit_code = kExitRuntimeFailure;
  } catch (const std::exception& e) {
    report.error = e.what();
    report.exit_code = kExitRuntimeFailure;
  }
  if (report.exit_code != kExitOk) {
    report.status = "failed";
    log_line(options, "failed: " + report.error);
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report.files.push_back("manifest.json");
  write_manifest(config, report, started);
  return report;
}

}  // namespace catladder
