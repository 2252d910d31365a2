# Copyright 2026 The catladder Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import math
import pathlib

import numpy as np
import pytest

catladder = pytest.importorskip("catladder")

KERR = {
    "name": "py_kerr",
    "model": {"builder": "kerr_driven", "params": {"U": 1.0, "F": 0.5, "kappa": 1.0}},
    "basis": [{"depth": 3, "alpha": [0.2, -0.1]}],
    "initial_state": [{"kind": "coherent", "amplitude": [0.2, -0.1]}],
    "run": {
        "t_end": 0.5,
        "samples": 6,
        "observables": [{"kind": "moment", "mode": 0, "creation": 1, "annihilation": 1}, {"kind": "purity"}],
    },
}


def test_presets_round_trip():
    names = catladder.preset_names()
    assert "two_cat_fig4ab" in names
    for name in names:
        text = catladder.preset(name)
        assert catladder.canonicalize(text) == text


def test_bad_config_raises():
    bad = json.loads(json.dumps(KERR))
    bad["model"]["params"]["kappa"] = -1.0
    with pytest.raises(catladder.ConfigError, match="model.params.kappa"):
        catladder.canonicalize(json.dumps(bad))


def test_trajectory_keeps_purity_bounded():
    out = catladder.trajectory(json.dumps(KERR))
    assert len(out["t"]) == 6
    purity = np.real(out["observables"]["purity"])
    assert purity[0] == pytest.approx(1.0, abs=1e-10)
    assert np.all(purity <= 1.0 + 1e-9)
    number = np.asarray(out["observables"]["mom0_1_1"])
    assert number[0].real == pytest.approx(0.05, abs=1e-10)


def test_run_writes_artifacts(tmp_path: pathlib.Path):
    report = catladder.run(json.dumps(KERR), str(tmp_path))
    assert report["exit_code"] == 0
    directory = pathlib.Path(report["directory"])
    assert (directory / "timeseries.csv").exists()
    manifest = json.loads((directory / "manifest.json").read_text())
    assert manifest["status"] == "ok"


def test_fidelity_and_wigner():
    rho = np.zeros((8, 8), dtype=complex)
    rho[0, 0] = 1.0
    assert catladder.fidelity(rho, rho) == pytest.approx(1.0, abs=1e-12)
    x = np.linspace(-5, 5, 101)
    w = catladder.wigner(rho, x, x)
    assert w.shape == (101, 101)
    assert w.max() == pytest.approx(2.0 / math.pi, rel=1e-12)
    cell = (x[1] - x[0]) ** 2
    assert w.sum() * cell == pytest.approx(1.0, abs=1e-3)
