// Copyright 2026 The wecopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "wecopt/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "wecopt/error.hpp"
#include "wecopt/io.hpp"

namespace wecopt {
namespace {

namespace fs = std::filesystem;

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  int line = 0;
};

class Reader {
 public:
  Reader(std::map<std::string, Entry> entries, std::string origin,
         fs::path base)
      : entries_(std::move(entries)),
        origin_(std::move(origin)),
        base_(std::move(base)) {}

  bool Has(const std::string& key) const { return entries_.count(key) > 0; }

  std::string Where(const std::string& key) const {
    const auto it = entries_.find(key);
    return origin_ + ":" + std::to_string(it->second.line) + ": " + key;
  }

  const std::string& Raw(const std::string& key) const {
    return entries_.at(key).value;
  }

  void Double(const std::string& key, double& out) const {
    if (Has(key)) out = ParseNumber(Raw(key), key);
  }

  void OptDouble(const std::string& key, std::optional<double>& out) const {
    if (Has(key)) out = ParseNumber(Raw(key), key);
  }

  void Int(const std::string& key, int& out) const {
    if (!Has(key)) return;
    const std::string t = Raw(key);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
      Fail(ErrorCode::kConfig, Where(key) + ": not an integer: '" + t + "'");
    }
    out = v;
  }

  void Bool(const std::string& key, bool& out) const {
    if (!Has(key)) return;
    const std::string& t = Raw(key);
    if (t == "true" || t == "1" || t == "yes" || t == "on") {
      out = true;
    } else if (t == "false" || t == "0" || t == "no" || t == "off") {
      out = false;
    } else {
      Fail(ErrorCode::kConfig, Where(key) + ": not a boolean: '" + t + "'");
    }
  }

  // Comma list, linspace(lo, hi, n) or logspace(e_lo, e_hi, n).
  void List(const std::string& key, std::vector<double>& out) const {
    if (!Has(key)) return;
    const std::string t = Raw(key);
    std::vector<double> v;
    for (const char* fn : {"linspace", "logspace"}) {
      const std::string head = std::string(fn) + "(";
      if (t.rfind(head, 0) == 0 && t.back() == ')') {
        const auto args =
            SplitCsvLine(t.substr(head.size(), t.size() - head.size() - 1));
        if (args.size() != 3) {
          Fail(ErrorCode::kConfig, Where(key) + ": " + fn + " takes 3 arguments");
        }
        const double lo = ParseNumber(args[0], key);
        const double hi = ParseNumber(args[1], key);
        const double n = ParseNumber(args[2], key);
        if (!(n >= 1 && n == std::floor(n))) {
          Fail(ErrorCode::kConfig, Where(key) + ": count must be a positive integer");
        }
        for (int i = 0; i < static_cast<int>(n); ++i) {
          const double t = n == 1 ? 0.0 : i / (n - 1);
          const double x = lo * (1.0 - t) + hi * t;
          v.push_back(std::string(fn) == "logspace" ? std::pow(10.0, x) : x);
        }
        out = v;
        return;
      }
    }
    for (const auto& f : SplitCsvLine(t)) v.push_back(ParseNumber(f, key));
    if (v.empty()) Fail(ErrorCode::kConfig, Where(key) + ": empty list");
    out = v;
  }

  fs::path Path(const std::string& key) const {
    fs::path p = Raw(key);
    if (p.is_relative()) p = base_ / p;
    return p.lexically_normal();
  }

  fs::path ExistingPath(const std::string& key) const {
    const fs::path p = Path(key);
    if (!fs::exists(p)) {
      Fail(ErrorCode::kConfig,
           Where(key) + ": file not found: '" + p.string() + "'");
    }
    return p;
  }

  std::vector<fs::path> PathList(const std::string& key) const {
    std::vector<fs::path> out;
    if (!Has(key)) return out;
    for (const auto& item : SplitCsvLine(Raw(key))) {
      fs::path p = item;
      if (p.is_relative()) p = base_ / p;
      p = p.lexically_normal();
      if (!fs::exists(p)) {
        Fail(ErrorCode::kConfig,
             Where(key) + ": file not found: '" + p.string() + "'");
      }
      out.push_back(p);
    }
    return out;
  }

 private:
  double ParseNumber(const std::string& text, const std::string& key) const {
    const std::string t = Trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() ||
        !std::isfinite(v)) {
      Fail(ErrorCode::kConfig, Where(key) + ": not a number: '" + text + "'");
    }
    return v;
  }

  std::map<std::string, Entry> entries_;
  std::string origin_;
  fs::path base_;
};

std::map<std::string, Entry> ParseSections(const std::string& text,
                                           const std::string& origin) {
  std::map<std::string, Entry> out;
  std::istringstream in(text);
  std::string line, section = "run";
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = origin + ":" + std::to_string(line_no);
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        Fail(ErrorCode::kConfig, where + ": malformed section header");
      }
      section = Trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      Fail(ErrorCode::kConfig, where + ": expected 'key = value'");
    }
    std::string key = Trim(line.substr(0, eq));
    if (key.empty()) Fail(ErrorCode::kConfig, where + ": empty key");
    if (key.find('.') == std::string::npos) key = section + "." + key;
    const auto& known = KnownConfigKeys();
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      Fail(ErrorCode::kConfig, where + ": unknown key '" + key + "'");
    }
    if (!out.emplace(key, Entry{Trim(line.substr(eq + 1)), line_no}).second) {
      Fail(ErrorCode::kConfig, where + ": duplicate key '" + key + "'");
    }
  }
  return out;
}

SimMode ParseMode(const Reader& r, const std::string& key) {
  const std::string& v = r.Raw(key);
  if (v == "discrete_exact") return SimMode::kDiscreteExact;
  if (v == "continuous_rk4" || v == "rk4") return SimMode::kContinuousRk4;
  Fail(ErrorCode::kConfig, r.Where(key) + ": expected discrete_exact or continuous_rk4");
}

InitialState ParseInitial(const Reader& r, const std::string& key) {
  const std::string& v = r.Raw(key);
  if (v == "free_float") return InitialState::kFreeFloat;
  if (v == "rest") return InitialState::kRest;
  Fail(ErrorCode::kConfig, r.Where(key) + ": expected free_float or rest");
}

// Rethrows validation failures as configuration errors.
template <typename F>
void Checked(const std::string& origin, const std::string& what, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    Fail(ErrorCode::kConfig, origin + ": " + what + ": " + e.what());
  }
}

}  // namespace

const std::vector<std::string>& KnownConfigKeys() {
  static const std::vector<std::string> keys = {
      "run.seed", "run.threads", "run.output",
      "wave.height", "wave.period", "wave.phase",
      "model.fixture",
      "ocp.gamma", "ocp.delta", "ocp.eta", "ocp.rho", "ocp.lambda1",
      "ocp.lambda2", "ocp.dt",
      "solver.kkt_tol", "solver.max_iter", "solver.barrier_init",
      "solver.barrier_shrink", "solver.regularization_floor",
      "solver.multistart", "solver.polish",
      "estimate.truth", "estimate.mode", "estimate.sample_dt",
      "estimate.decay_initial", "estimate.decay_duration",
      "estimate.float_duration", "estimate.control_duration",
      "estimate.control_amplitude", "estimate.control_period",
      "estimate.control_shift", "estimate.decay_csv", "estimate.float_csv",
      "estimate.control_csv",
      "sweep.mode", "sweep.values", "sweep.eta", "sweep.rho",
      "sweep.lambda_horizon_periods", "sweep.grid_horizon_periods",
      "sweep.t0", "sweep.initial_state", "sweep.period_tolerance",
      "mpc.t0", "mpc.horizon", "mpc.update_horizon", "mpc.periods",
      "mpc.spinup_periods", "mpc.plant_mode", "mpc.initial_state",
      "mpc.truth",
      "costfit.samples", "costfit.b_lo", "costfit.b_hi", "costfit.points",
  };
  return keys;
}

RunConfig ParseRunConfig(const std::string& text, const std::string& origin,
                         const fs::path& base_dir) {
  const Reader r(ParseSections(text, origin), origin, base_dir);
  RunConfig c;
  c.base_dir = base_dir;

  if (r.Has("run.seed")) {
    const std::string& t = r.Raw("run.seed");
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
      Fail(ErrorCode::kConfig, r.Where("run.seed") + ": not an unsigned integer");
    }
    c.seed = v;
  }
  r.Int("run.threads", c.threads);
  if (c.threads < 0) Fail(ErrorCode::kConfig, origin + ": run.threads must be >= 0");
  if (r.Has("run.output")) c.output = r.Path("run.output");

  r.Double("wave.height", c.wave.height);
  r.Double("wave.period", c.wave.period);
  r.Double("wave.phase", c.wave.phase);
  Checked(origin, "wave", [&] { c.wave.Validate(); });

  if (r.Has("model.fixture")) {
    c.model_path = r.ExistingPath("model.fixture");
    c.model = LoadModelFixture(*c.model_path);
  }

  r.Double("ocp.gamma", c.ocp.gamma);
  r.Double("ocp.delta", c.ocp.delta);
  r.Double("ocp.eta", c.ocp.eta);
  r.Double("ocp.rho", c.ocp.rho);
  r.Double("ocp.lambda1", c.ocp.lambda1);
  r.Double("ocp.lambda2", c.ocp.lambda2);
  c.ocp.dt = c.model.dt;
  r.Double("ocp.dt", c.ocp.dt);
  Checked(origin, "ocp", [&] { c.ocp.Validate(); });
  if (std::abs(c.ocp.dt - c.model.dt) > 1e-12 * c.model.dt) {
    Fail(ErrorCode::kConfig, origin + ": ocp.dt differs from the model dt");
  }

  r.Double("solver.kkt_tol", c.solver.kkt_tol);
  r.Int("solver.max_iter", c.solver.max_iter);
  r.Double("solver.barrier_init", c.solver.barrier_init);
  r.Double("solver.barrier_shrink", c.solver.barrier_shrink);
  r.Double("solver.regularization_floor", c.solver.regularization_floor);
  r.Int("solver.multistart", c.solver.multistart);
  r.Bool("solver.polish", c.solver.polish);
  c.solver.seed = c.seed;
  Checked(origin, "solver", [&] { c.solver.Validate(); });

  auto& e = c.estimate;
  if (r.Has("estimate.truth")) {
    e.truth_path = r.ExistingPath("estimate.truth");
    e.truth = LoadTruthModel(*e.truth_path);
  } else {
    e.truth = TruthModel::FromDiscrete(c.model);
  }
  if (r.Has("estimate.mode")) e.mode = ParseMode(r, "estimate.mode");
  r.Double("estimate.sample_dt", e.sample_dt);
  if (r.Has("estimate.decay_initial")) {
    // "v p; v p; ..."
    e.decay_initial.clear();
    std::istringstream in(r.Raw("estimate.decay_initial"));
    std::string pair;
    while (std::getline(in, pair, ';')) {
      std::istringstream ps(pair);
      State s;
      if (!(ps >> s.velocity >> s.position)) {
        Fail(ErrorCode::kConfig, r.Where("estimate.decay_initial") +
                                     ": expected 'velocity position; ...'");
      }
      e.decay_initial.push_back(s);
    }
  }
  r.Double("estimate.decay_duration", e.decay_duration);
  r.Double("estimate.float_duration", e.float_duration);
  r.Double("estimate.control_duration", e.control_duration);
  r.Double("estimate.control_amplitude", e.control_amplitude);
  r.OptDouble("estimate.control_period", e.control_period);
  r.Double("estimate.control_shift", e.control_shift);
  e.decay_csv = r.PathList("estimate.decay_csv");
  e.float_csv = r.PathList("estimate.float_csv");
  e.control_csv = r.PathList("estimate.control_csv");
  if (!(e.sample_dt > 0.0) || !(e.decay_duration > 0.0) ||
      !(e.float_duration > 0.0) || !(e.control_duration > 0.0)) {
    Fail(ErrorCode::kConfig, origin + ": estimate durations and sample_dt must be > 0");
  }

  auto& s = c.sweep;
  if (r.Has("sweep.mode")) {
    const std::string& m = r.Raw("sweep.mode");
    if (m == "lambda1") {
      s.mode = SweepMode::kLambda1;
    } else if (m == "lambda2") {
      s.mode = SweepMode::kLambda2;
    } else if (m == "grid") {
      s.mode = SweepMode::kGrid;
    } else {
      Fail(ErrorCode::kConfig, r.Where("sweep.mode") + ": expected lambda1, lambda2 or grid");
    }
  }
  r.List("sweep.values", s.values);
  s.eta = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  s.rho = s.eta;
  r.List("sweep.eta", s.eta);
  r.List("sweep.rho", s.rho);
  r.Double("sweep.lambda_horizon_periods", s.lambda_horizon_periods);
  r.Double("sweep.grid_horizon_periods", s.grid_horizon_periods);
  r.Double("sweep.t0", s.t0);
  if (r.Has("sweep.initial_state")) s.initial = ParseInitial(r, "sweep.initial_state");
  r.Double("sweep.period_tolerance", s.period_tolerance);
  if (!(s.lambda_horizon_periods > 0.0) || !(s.grid_horizon_periods > 0.0) ||
      !(s.t0 >= 0.0)) {
    Fail(ErrorCode::kConfig, origin + ": sweep horizons must be > 0 and t0 >= 0");
  }

  auto& m = c.mpc;
  m.model = c.model;
  m.wave = c.wave;
  m.ocp = c.ocp;
  m.solver = c.solver;
  m.dt = c.ocp.dt;
  m.horizon = c.wave.period;
  m.update_horizon = c.wave.period / 10.0;
  r.Double("mpc.t0", m.t0);
  r.Double("mpc.horizon", m.horizon);
  r.Double("mpc.update_horizon", m.update_horizon);
  r.Int("mpc.periods", m.periods);
  r.Int("mpc.spinup_periods", m.spinup_periods);
  if (r.Has("mpc.plant_mode")) m.plant_mode = ParseMode(r, "mpc.plant_mode");
  if (r.Has("mpc.initial_state")) c.mpc_initial = ParseInitial(r, "mpc.initial_state");
  if (r.Has("mpc.truth")) m.truth = LoadTruthModel(r.ExistingPath("mpc.truth"));
  if (c.mpc_initial == InitialState::kRest) m.x0 = State{};
  Checked(origin, "mpc", [&] { m.Validate(); });

  auto& f = c.costfit;
  if (r.Has("costfit.samples")) f.samples = r.ExistingPath("costfit.samples");
  r.Double("costfit.b_lo", f.b_lo);
  r.Double("costfit.b_hi", f.b_hi);
  r.Int("costfit.points", f.points);
  if (!(f.b_lo > 0.0 && f.b_hi > f.b_lo) || f.points < 2) {
    Fail(ErrorCode::kConfig, origin + ": costfit range must satisfy 0 < b_lo < b_hi");
  }
  return c;
}

RunConfig LoadRunConfig(const fs::path& path) {
  if (!fs::exists(path)) {
    Fail(ErrorCode::kConfig, "config file not found: '" + path.string() + "'");
  }
  const fs::path abs = fs::absolute(path);
  return ParseRunConfig(ReadFile(abs), path.string(), abs.parent_path());
}

}  // namespace wecopt
