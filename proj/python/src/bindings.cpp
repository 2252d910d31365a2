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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "catladder/config.hpp"
#include "catladder/errors.hpp"
#include "catladder/observables.hpp"
#include "catladder/presets.hpp"
#include "catladder/runner.hpp"

namespace py = pybind11;
using namespace catladder;

namespace {

// Runs the main TDVP trajectory of a config and returns sampled observables.
py::dict trajectory(const std::string& config_json) {
  const RunConfig c = parse_config(config_json);
  const auto times = c.run.sample_times();
  const VariationalState s0 = embed_initial_state(c.initial_state, c.basis, c.run.t_start);
  Trajectory traj;
  {
    py::gil_scoped_release release;
    traj = evolve(s0, build_model(c.model), c.basis, c.engine, times.back(), times);
  }
  py::dict columns;
  for (const auto& req : c.run.observables) {
    std::vector<Complex> series;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      const VariationalState s{traj.times[i], traj.alphas[i], traj.coefficients[i]};
      series.push_back(evaluate_observables({req}, s, c.basis)[0]);
    }
    columns[py::str(req.name)] = series;
  }
  py::dict out;
  out["t"] = traj.times;
  out["alpha"] = traj.alphas;
  out["observables"] = columns;
  return out;
}

py::dict run_config(const std::string& config_json, const std::optional<std::string>& root) {
  const RunConfig c = parse_config(config_json);
  RunOptions options;
  if (root) options.root = *root;
  RunReport r;
  {
    py::gil_scoped_release release;
    r = run(c, options);
  }
  py::dict out;
  out["exit_code"] = r.exit_code;
  out["status"] = r.status;
  out["error"] = r.error;
  out["directory"] = r.directory.string();
  out["files"] = r.files;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Coherent-state ladder TDVP for driven-dissipative bosonic modes.";
  m.attr("__version__") = CATLADDER_VERSION;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("preset_names", &preset_names, "Names of the built-in scenarios.");
  m.def(
      "preset", [](const std::string& name) { return to_json(preset(name)); }, py::arg("name"),
      "Canonical JSON of a built-in scenario.");
  m.def(
      "canonicalize", [](const std::string& text) { return to_json(parse_config(text)); }, py::arg("config_json"),
      "Parses and validates a config; returns its canonical JSON.");
  m.def("trajectory", &trajectory, py::arg("config_json"),
        "Evolves the configured state and returns times, displacements and observables.");
  m.def("run", &run_config, py::arg("config_json"), py::arg("root") = py::none(),
        "Executes a full run and writes its artifacts; returns the run report.");
  m.def(
      "fidelity", [](const Matrix& a, const Matrix& b, bool normalize) { return fidelity(a, b, normalize).fidelity; },
      py::arg("rho1"), py::arg("rho2"), py::arg("normalize") = true, "Uhlmann fidelity of two density matrices.");
  m.def(
      "wigner",
      [](const Matrix& rho, const std::vector<double>& x, const std::vector<double>& p) {
        return wigner(rho, x, p).values;
      },
      py::arg("rho"), py::arg("x"), py::arg("p"), "Wigner function on a grid; rows follow p, columns follow x.");
}
