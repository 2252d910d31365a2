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

#include "catladder/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

#include "catladder/errors.hpp"

namespace catladder {

using json = nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string index_path(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key)) fail(join(path, key), "unknown key");
  }
}

const json* find(const json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const json& require(const json& obj, const std::string& path, const std::string& key) {
  const json* v = find(obj, key);
  if (!v) fail(join(path, key), "required key is missing");
  return *v;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(path, "expected a finite number");
  return d;
}

double number_or(const json& obj, const std::string& path, const std::string& key, double fallback) {
  const json* v = find(obj, key);
  return v ? as_number(*v, join(path, key)) : fallback;
}

double required_number(const json& obj, const std::string& path, const std::string& key) {
  return as_number(require(obj, path, key), join(path, key));
}

long long as_integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<long long>();
}

bool bool_or(const json& obj, const std::string& path, const std::string& key, bool fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_boolean()) fail(join(path, key), "expected true or false");
  return v->get<bool>();
}

std::string string_or(const json& obj, const std::string& path, const std::string& key,
                      const std::string& fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_string()) fail(join(path, key), "expected a string");
  return v->get<std::string>();
}

Complex as_complex(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) fail(path, "expected a complex number written as [re, im]");
  return {as_number(v[0], index_path(path, 0)), as_number(v[1], index_path(path, 1))};
}

json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

std::pair<double, double> as_range(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) fail(path, "expected [min, max]");
  const double lo = as_number(v[0], index_path(path, 0));
  const double hi = as_number(v[1], index_path(path, 1));
  if (!(hi > lo)) fail(path, "max must exceed min");
  return {lo, hi};
}

// --- model -----------------------------------------------------------------

const std::set<std::string> kBuilders{"zero", "kerr_driven", "dimer", "two_photon_kerr", "cat_chain"};

std::set<std::string> builder_params(const std::string& b) {
  if (b == "zero") return {"modes"};
  if (b == "kerr_driven") return {"U", "F", "kappa"};
  if (b == "dimer") return {"U", "F", "J", "Delta", "kappa"};
  if (b == "two_photon_kerr") return {"G", "U", "eta", "F_x"};
  return {"modes", "G", "U", "eta", "J"};
}

std::vector<std::pair<double, Complex>> parse_drive(const json& v, const std::string& path) {
  if (v.is_array()) return {{0.0, as_complex(v, path)}};
  check_keys(v, path, {"segments"});
  const json& segs = require(v, path, "segments");
  const std::string sp = join(path, "segments");
  if (!segs.is_array() || segs.empty()) fail(sp, "expected a non-empty list of [t_start, [re, im]]");
  std::vector<std::pair<double, Complex>> out;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const std::string ip = index_path(sp, i);
    if (!segs[i].is_array() || segs[i].size() != 2) fail(ip, "expected [t_start, [re, im]]");
    out.emplace_back(as_number(segs[i][0], index_path(ip, 0)), as_complex(segs[i][1], index_path(ip, 1)));
    if (i > 0 && !(out[i].first > out[i - 1].first)) fail(ip, "segment starts must be strictly increasing");
  }
  return out;
}

json drive_json(const std::vector<std::pair<double, Complex>>& segs) {
  if (segs.size() == 1 && segs[0].first == 0.0) return complex_json(segs[0].second);
  json arr = json::array();
  for (const auto& [t, v] : segs) arr.push_back(json::array({t, complex_json(v)}));
  return json{{"segments", arr}};
}

ModelConfig parse_model(const json& obj, const std::string& path) {
  check_keys(obj, path, {"builder", "params"});
  ModelConfig m;
  const json& b = require(obj, path, "builder");
  if (!b.is_string() || !kBuilders.count(b.get<std::string>())) {
    fail(join(path, "builder"), "expected one of zero, kerr_driven, dimer, two_photon_kerr, cat_chain");
  }
  m.builder = b.get<std::string>();
  const std::string pp = join(path, "params");
  const json empty = json::object();
  const json* params = find(obj, "params");
  const json& p = params ? *params : empty;
  check_keys(p, pp, builder_params(m.builder));

  auto rate = [&](const std::string& key) {
    const double r = required_number(p, pp, key);
    if (r < 0.0) fail(join(pp, key), "rate must be >= 0, got " + std::to_string(r));
    return r;
  };
  if (m.builder == "zero") {
    const long long M = as_integer(require(p, pp, "modes"), join(pp, "modes"));
    if (M < 1) fail(join(pp, "modes"), "must be >= 1");
    m.modes = static_cast<std::size_t>(M);
  } else if (m.builder == "kerr_driven") {
    m.modes = 1;
    m.U = required_number(p, pp, "U");
    m.F = required_number(p, pp, "F");
    m.kappa = rate("kappa");
  } else if (m.builder == "dimer") {
    m.modes = 2;
    m.U = required_number(p, pp, "U");
    m.F = required_number(p, pp, "F");
    m.J = required_number(p, pp, "J");
    m.Delta = required_number(p, pp, "Delta");
    m.kappa = rate("kappa");
  } else if (m.builder == "two_photon_kerr") {
    m.modes = 1;
    m.G = parse_drive(require(p, pp, "G"), join(pp, "G"));
    m.U = number_or(p, pp, "U", 0.0);
    m.eta = rate("eta");
    m.F_x = number_or(p, pp, "F_x", 0.0);
  } else {
    const long long M = as_integer(require(p, pp, "modes"), join(pp, "modes"));
    if (M < 2) fail(join(pp, "modes"), "cat chain needs at least two modes");
    m.modes = static_cast<std::size_t>(M);
    const std::string gp = join(pp, "G");
    m.G = {{0.0, as_complex(require(p, pp, "G"), gp)}};
    m.U = number_or(p, pp, "U", 0.0);
    m.eta = rate("eta");
    const json& J = require(p, pp, "J");
    const std::string jp = join(pp, "J");
    if (!J.is_array()) fail(jp, "expected a list of hopping amplitudes");
    if (J.size() != m.modes - 1) {
      fail(jp, "expected " + std::to_string(m.modes - 1) + " hopping amplitudes, got " + std::to_string(J.size()));
    }
    for (std::size_t i = 0; i < J.size(); ++i) m.hopping.push_back(as_number(J[i], index_path(jp, i)));
  }
  return m;
}

json model_json(const ModelConfig& m) {
  json p = json::object();
  if (m.builder == "zero") {
    p["modes"] = m.modes;
  } else if (m.builder == "kerr_driven") {
    p = {{"U", m.U}, {"F", m.F}, {"kappa", m.kappa}};
  } else if (m.builder == "dimer") {
    p = {{"U", m.U}, {"F", m.F}, {"J", m.J}, {"Delta", m.Delta}, {"kappa", m.kappa}};
  } else if (m.builder == "two_photon_kerr") {
    p = {{"G", drive_json(m.G)}, {"U", m.U}, {"eta", m.eta}, {"F_x", m.F_x}};
  } else {
    p = {{"modes", m.modes}, {"G", complex_json(m.G.front().second)}, {"U", m.U}, {"eta", m.eta}, {"J", m.hopping}};
  }
  return {{"builder", m.builder}, {"params", p}};
}

// --- basis and initial state -------------------------------------------------

std::vector<LadderBasisSpec> parse_basis(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail(path, "expected a non-empty list with one entry per mode");
  std::vector<LadderBasisSpec> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string ip = index_path(path, i);
    check_keys(v[i], ip, {"depth", "sector", "alpha"});
    LadderBasisSpec s;
    const long long depth = as_integer(require(v[i], ip, "depth"), join(ip, "depth"));
    if (depth < 0) fail(join(ip, "depth"), "must be >= 0");
    s.depth = static_cast<int>(depth);
    const std::string sector = string_or(v[i], ip, "sector", "plain");
    if (sector == "plain") {
      s.sector = Sector::Plain;
    } else if (sector == "z2cat") {
      s.sector = Sector::Z2Cat;
    } else {
      fail(join(ip, "sector"), "expected plain or z2cat");
    }
    s.alpha = as_complex(require(v[i], ip, "alpha"), join(ip, "alpha"));
    if (s.sector == Sector::Z2Cat && s.alpha == Complex(0.0)) {
      fail(join(ip, "alpha"), "a z2cat basis needs a nonzero displacement");
    }
    out.push_back(s);
  }
  return out;
}

std::string kind_name(ModeState::Kind k) {
  switch (k) {
    case ModeState::Kind::Coherent: return "coherent";
    case ModeState::Kind::EvenCat: return "even_cat";
    case ModeState::Kind::OddCat: return "odd_cat";
  }
  return "coherent";
}

std::vector<ModeState> parse_initial(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail(path, "expected a list with one entry per mode");
  std::vector<ModeState> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string ip = index_path(path, i);
    check_keys(v[i], ip, {"kind", "amplitude"});
    ModeState s;
    const std::string kind = string_or(v[i], ip, "kind", "coherent");
    if (kind == "coherent") {
      s.kind = ModeState::Kind::Coherent;
    } else if (kind == "even_cat") {
      s.kind = ModeState::Kind::EvenCat;
    } else if (kind == "odd_cat") {
      s.kind = ModeState::Kind::OddCat;
    } else {
      fail(join(ip, "kind"), "expected coherent, even_cat or odd_cat");
    }
    s.amplitude = as_complex(require(v[i], ip, "amplitude"), join(ip, "amplitude"));
    if (s.kind == ModeState::Kind::OddCat && s.amplitude == Complex(0.0)) {
      fail(join(ip, "amplitude"), "an odd cat needs a nonzero amplitude");
    }
    out.push_back(s);
  }
  return out;
}

// --- engine, run, compare, output ---------------------------------------------

EngineConfig parse_engine(const json& v, const std::string& path) {
  check_keys(v, path, {"rtol", "atol", "epsilon_alpha", "svd_cutoff", "renormalize_trace", "symmetrize_B",
                       "max_step", "freeze_alpha"});
  EngineConfig e;
  auto positive = [&](const std::string& key, double fallback) {
    const double x = number_or(v, path, key, fallback);
    if (!(x > 0.0)) fail(join(path, key), "must be > 0");
    return x;
  };
  e.rtol = positive("rtol", e.rtol);
  e.atol = positive("atol", e.atol);
  e.epsilon_alpha = positive("epsilon_alpha", e.epsilon_alpha);
  e.svd_cutoff = number_or(v, path, "svd_cutoff", e.svd_cutoff);
  if (!(e.svd_cutoff > 0.0 && e.svd_cutoff < 1.0)) fail(join(path, "svd_cutoff"), "must lie in (0, 1)");
  e.renormalize_trace = bool_or(v, path, "renormalize_trace", e.renormalize_trace);
  e.symmetrize_B = bool_or(v, path, "symmetrize_B", e.symmetrize_B);
  e.freeze_alpha = bool_or(v, path, "freeze_alpha", e.freeze_alpha);
  if (const json* ms = find(v, "max_step"); ms && !ms->is_null()) {
    e.max_step = as_number(*ms, join(path, "max_step"));
    if (!(e.max_step > 0.0)) fail(join(path, "max_step"), "must be > 0 (or null for unbounded)");
  }
  return e;
}

json engine_json(const EngineConfig& e) {
  json j = {{"rtol", e.rtol},
            {"atol", e.atol},
            {"epsilon_alpha", e.epsilon_alpha},
            {"svd_cutoff", e.svd_cutoff},
            {"renormalize_trace", e.renormalize_trace},
            {"symmetrize_B", e.symmetrize_B},
            {"freeze_alpha", e.freeze_alpha}};
  j["max_step"] = std::isfinite(e.max_step) ? json(e.max_step) : json(nullptr);
  return j;
}

std::vector<std::size_t> parse_modes(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail(path, "expected a non-empty list of mode indices");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const long long k = as_integer(v[i], index_path(path, i));
    if (k < 0) fail(index_path(path, i), "mode index must be >= 0");
    out.push_back(static_cast<std::size_t>(k));
  }
  return out;
}

std::string default_name(const ObservableRequest& o) {
  switch (o.kind) {
    case ObservableRequest::Kind::Moment:
      return "mom" + std::to_string(o.mode) + "_" + std::to_string(o.creation) + "_" + std::to_string(o.annihilation);
    case ObservableRequest::Kind::Parity: {
      std::string s = "parity";
      for (auto k : o.modes) s += "_" + std::to_string(k);
      return s;
    }
    case ObservableRequest::Kind::Purity: return "purity";
  }
  return "obs";
}

ObservableRequest parse_observable(const json& v, const std::string& path) {
  if (!v.is_object()) fail(path, "expected an object");
  ObservableRequest o;
  const std::string kind = string_or(v, path, "kind", "");
  if (kind == "moment") {
    check_keys(v, path, {"kind", "name", "mode", "creation", "annihilation"});
    o.kind = ObservableRequest::Kind::Moment;
    const long long k = as_integer(require(v, path, "mode"), join(path, "mode"));
    if (k < 0) fail(join(path, "mode"), "must be >= 0");
    o.mode = static_cast<std::size_t>(k);
    const json* c = find(v, "creation");
    const json* a = find(v, "annihilation");
    o.creation = c ? static_cast<int>(as_integer(*c, join(path, "creation"))) : 0;
    o.annihilation = a ? static_cast<int>(as_integer(*a, join(path, "annihilation"))) : 0;
    if (o.creation < 0) fail(join(path, "creation"), "must be >= 0");
    if (o.annihilation < 0) fail(join(path, "annihilation"), "must be >= 0");
  } else if (kind == "parity") {
    check_keys(v, path, {"kind", "name", "modes"});
    o.kind = ObservableRequest::Kind::Parity;
    o.modes = parse_modes(require(v, path, "modes"), join(path, "modes"));
  } else if (kind == "purity") {
    check_keys(v, path, {"kind", "name"});
    o.kind = ObservableRequest::Kind::Purity;
  } else {
    fail(join(path, "kind"), "expected moment, parity or purity");
  }
  o.name = string_or(v, path, "name", default_name(o));
  if (o.name.empty() || o.name.find_first_of(",\n\"") != std::string::npos) {
    fail(join(path, "name"), "must be non-empty without commas, quotes or newlines");
  }
  return o;
}

json observable_json(const ObservableRequest& o) {
  switch (o.kind) {
    case ObservableRequest::Kind::Moment:
      return {{"kind", "moment"}, {"name", o.name}, {"mode", o.mode}, {"creation", o.creation},
              {"annihilation", o.annihilation}};
    case ObservableRequest::Kind::Parity: return {{"kind", "parity"}, {"name", o.name}, {"modes", o.modes}};
    case ObservableRequest::Kind::Purity: return {{"kind", "purity"}, {"name", o.name}};
  }
  return {};
}

RunSection parse_run(const json& v, const std::string& path) {
  check_keys(v, path, {"t_start", "t_end", "samples", "observables"});
  RunSection r;
  r.t_start = number_or(v, path, "t_start", 0.0);
  r.t_end = required_number(v, path, "t_end");
  if (!(r.t_end > r.t_start)) fail(join(path, "t_end"), "must exceed t_start");
  if (const json* s = find(v, "samples")) {
    const long long n = as_integer(*s, join(path, "samples"));
    if (n < 2) fail(join(path, "samples"), "must be >= 2");
    r.samples = static_cast<std::size_t>(n);
  }
  if (const json* obs = find(v, "observables")) {
    const std::string op = join(path, "observables");
    if (!obs->is_array()) fail(op, "expected a list");
    std::set<std::string> names;
    for (std::size_t i = 0; i < obs->size(); ++i) {
      r.observables.push_back(parse_observable((*obs)[i], index_path(op, i)));
      if (!names.insert(r.observables.back().name).second) {
        fail(join(index_path(op, i), "name"), "duplicate observable name '" + r.observables.back().name + "'");
      }
    }
  }
  return r;
}

CompareSection parse_compare(const json& v, const std::string& path) {
  check_keys(v, path, {"oracle_cutoff", "depths"});
  CompareSection c;
  const long long cut = as_integer(require(v, path, "oracle_cutoff"), join(path, "oracle_cutoff"));
  if (cut < 1) fail(join(path, "oracle_cutoff"), "must be >= 1");
  c.oracle_cutoff = static_cast<int>(cut);
  if (const json* d = find(v, "depths")) {
    const std::string dp = join(path, "depths");
    if (!d->is_array()) fail(dp, "expected a list of positive ladder depths");
    for (std::size_t i = 0; i < d->size(); ++i) {
      const long long n = as_integer((*d)[i], index_path(dp, i));
      if (n <= 0) fail(index_path(dp, i), "sweep depths must be positive");
      c.depths.push_back(static_cast<int>(n));
    }
  }
  return c;
}

OutputSection parse_output(const json& v, const std::string& path) {
  check_keys(v, path, {"directory", "wigner"});
  OutputSection o;
  o.directory = string_or(v, path, "directory", o.directory);
  if (o.directory.empty()) fail(join(path, "directory"), "must be non-empty");
  if (const json* w = find(v, "wigner")) {
    const std::string wp = join(path, "wigner");
    if (!w->is_array()) fail(wp, "expected a list");
    for (std::size_t i = 0; i < w->size(); ++i) {
      const std::string ip = index_path(wp, i);
      const json& e = (*w)[i];
      check_keys(e, ip, {"mode", "x", "p", "resolution", "cutoff", "times"});
      WignerRequest r;
      if (const json* m = find(e, "mode")) {
        const long long k = as_integer(*m, join(ip, "mode"));
        if (k < 0) fail(join(ip, "mode"), "must be >= 0");
        r.mode = static_cast<std::size_t>(k);
      }
      if (const json* x = find(e, "x")) std::tie(r.x_min, r.x_max) = as_range(*x, join(ip, "x"));
      if (const json* p = find(e, "p")) std::tie(r.p_min, r.p_max) = as_range(*p, join(ip, "p"));
      if (const json* res = find(e, "resolution")) {
        const long long n = as_integer(*res, join(ip, "resolution"));
        if (n < 2) fail(join(ip, "resolution"), "must be >= 2");
        r.resolution = static_cast<std::size_t>(n);
      }
      if (const json* c = find(e, "cutoff")) {
        const long long n = as_integer(*c, join(ip, "cutoff"));
        if (n < 1) fail(join(ip, "cutoff"), "must be >= 1");
        r.cutoff = static_cast<int>(n);
      }
      const json& times = require(e, ip, "times");
      if (!times.is_array() || times.empty()) fail(join(ip, "times"), "expected a non-empty list of times");
      for (std::size_t j = 0; j < times.size(); ++j) r.times.push_back(as_number(times[j], index_path(join(ip, "times"), j)));
      o.wigner.push_back(r);
    }
  }
  return o;
}

json output_json(const OutputSection& o) {
  json w = json::array();
  for (const auto& r : o.wigner) {
    w.push_back({{"mode", r.mode},
                 {"x", {r.x_min, r.x_max}},
                 {"p", {r.p_min, r.p_max}},
                 {"resolution", r.resolution},
                 {"cutoff", r.cutoff},
                 {"times", r.times}});
  }
  return {{"directory", o.directory}, {"wigner", w}};
}

}  // namespace

std::vector<double> RunSection::sample_times() const {
  std::vector<double> t(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    t[i] = t_start + (t_end - t_start) * static_cast<double>(i) / static_cast<double>(samples - 1);
  }
  t.back() = t_end;
  return t;
}

bool operator==(const ModeState& a, const ModeState& b) { return a.kind == b.kind && a.amplitude == b.amplitude; }

bool operator==(const EngineConfig& a, const EngineConfig& b) {
  return a.rtol == b.rtol && a.atol == b.atol && a.epsilon_alpha == b.epsilon_alpha &&
         a.svd_cutoff == b.svd_cutoff && a.renormalize_trace == b.renormalize_trace &&
         a.symmetrize_B == b.symmetrize_B && a.max_step == b.max_step && a.freeze_alpha == b.freeze_alpha;
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  return a.name == b.name && a.description == b.description && a.model == b.model && a.basis == b.basis &&
         a.initial_state == b.initial_state && a.engine == b.engine && a.run == b.run && a.compare == b.compare &&
         a.output == b.output;
}

void validate(const RunConfig& c) {
  const std::size_t M = c.model.modes;
  if (c.basis.size() != M) {
    fail("basis", "expected " + std::to_string(M) + " entries (one per mode), got " + std::to_string(c.basis.size()));
  }
  if (c.initial_state.size() != M) {
    fail("initial_state",
         "expected exactly one entry per mode (" + std::to_string(M) + "), got " + std::to_string(c.initial_state.size()));
  }
  for (std::size_t i = 0; i < c.run.observables.size(); ++i) {
    const auto& o = c.run.observables[i];
    const std::string op = index_path("run.observables", i);
    if (o.kind == ObservableRequest::Kind::Moment && o.mode >= M) fail(join(op, "mode"), "mode index out of range");
    for (auto k : o.modes) {
      if (k >= M) fail(join(op, "modes"), "mode index " + std::to_string(k) + " out of range");
    }
  }
  for (std::size_t i = 0; i < c.output.wigner.size(); ++i) {
    const auto& w = c.output.wigner[i];
    const std::string wp = index_path("output.wigner", i);
    if (w.mode >= M) fail(join(wp, "mode"), "mode index out of range");
    for (double t : w.times) {
      if (t < c.run.t_start || t > c.run.t_end) fail(join(wp, "times"), "time outside the run window");
    }
  }
  try {
    c.engine.validate();
    build_model(c.model).validate();
  } catch (const ConfigError& e) {
    fail("engine", e.what());
  } catch (const ModelError& e) {
    fail("model", e.what());
  }
}

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("<root>: malformed JSON: ") + e.what());
  }
  check_keys(root, "<root>", {"name", "description", "model", "basis", "initial_state", "engine", "run", "compare",
                              "output"});
  RunConfig c;
  c.name = string_or(root, "", "name", c.name);
  c.description = string_or(root, "", "description", "");
  c.model = parse_model(require(root, "", "model"), "model");
  c.basis = parse_basis(require(root, "", "basis"), "basis");
  c.initial_state = parse_initial(require(root, "", "initial_state"), "initial_state");
  if (const json* e = find(root, "engine")) c.engine = parse_engine(*e, "engine");
  c.run = parse_run(require(root, "", "run"), "run");
  if (const json* cmp = find(root, "compare"); cmp && !cmp->is_null()) c.compare = parse_compare(*cmp, "compare");
  if (const json* o = find(root, "output")) c.output = parse_output(*o, "output");
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_json(const RunConfig& c, int indent) {
  json basis = json::array();
  for (const auto& b : c.basis) {
    basis.push_back({{"depth", b.depth}, {"sector", to_string(b.sector)}, {"alpha", complex_json(b.alpha)}});
  }
  json init = json::array();
  for (const auto& s : c.initial_state) {
    init.push_back({{"kind", kind_name(s.kind)}, {"amplitude", complex_json(s.amplitude)}});
  }
  json obs = json::array();
  for (const auto& o : c.run.observables) obs.push_back(observable_json(o));
  json root = {{"name", c.name},
               {"description", c.description},
               {"model", model_json(c.model)},
               {"basis", basis},
               {"initial_state", init},
               {"engine", engine_json(c.engine)},
               {"run", {{"t_start", c.run.t_start}, {"t_end", c.run.t_end}, {"samples", c.run.samples}, {"observables", obs}}},
               {"output", output_json(c.output)}};
  if (c.compare) root["compare"] = {{"oracle_cutoff", c.compare->oracle_cutoff}, {"depths", c.compare->depths}};
  return root.dump(indent);
}

ModelSpec build_model(const ModelConfig& m) {
  if (m.builder == "zero") return build_zero_model(m.modes);
  if (m.builder == "kerr_driven") return build_kerr_driven(m.U, m.F, m.kappa);
  if (m.builder == "dimer") return build_dimer(m.U, m.F, m.J, m.Delta, m.kappa);
  if (m.builder == "two_photon_kerr") return build_two_photon_kerr(DriveSchedule::piecewise(m.G), m.U, m.eta, m.F_x);
  if (m.builder == "cat_chain") return build_cat_chain(m.modes, m.G.front().second, m.U, m.eta, m.hopping);
  throw ConfigError("model.builder: unknown builder '" + m.builder + "'");
}

std::uint64_t config_hash(const RunConfig& c) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : to_json(c, -1)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace catladder
