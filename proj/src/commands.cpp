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


#include "wecopt/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "wecopt/error.hpp"
#include "wecopt/io.hpp"
#include "wecopt/mpc.hpp"

namespace wecopt::commands {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

int HorizonSteps(double periods, double wave_period, double dt) {
  const long long n = std::llround(periods * wave_period / dt);
  if (n < 2) Fail(ErrorCode::kConfig, "horizon is shorter than two time steps");
  return static_cast<int>(n);
}

State StartState(InitialState initial, const RunConfig& c, double t0) {
  return initial == InitialState::kRest ? State{}
                                        : mpc::FreeFloatState(c.model, c.wave, t0);
}

// Runs fn(i) for i in [0, n) on a small pool; each index is handled once.
template <typename F>
void ParallelFor(int n, int threads, F&& fn) {
  int workers = threads > 0 ? threads
                            : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, std::max(1, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = next++; i < n; i = next++) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

json ModelJson(const DiscreteModel& m) {
  return {{"a", {{m.a(0, 0), m.a(0, 1)}, {m.a(1, 0), m.a(1, 1)}}},
          {"b", {m.b(0), m.b(1)}},
          {"c", {m.c(0), m.c(1)}},
          {"dt", m.dt}};
}

void Write(CommandReport& rep, const fs::path& path, const std::string& text) {
  WriteFile(path, text);
  rep.files.push_back(path);
}

std::string Field(double v) {
  return std::isfinite(v) ? FormatDouble(v) : std::string("nan");
}

template <typename F>
auto Step(const char* name, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    Fail(e.code(), std::string("estimate ") + name + ": " + e.what());
  }
}

double RelError(const Eigen::MatrixXd& est, const Eigen::MatrixXd& ref) {
  const double denom = ref.cwiseAbs().maxCoeff();
  return (est - ref).cwiseAbs().maxCoeff() / (denom > 0.0 ? denom : 1.0);
}

}  // namespace

std::vector<LambdaRow> LambdaSweep(const RunConfig& c) {
  const auto& s = c.sweep;
  Require(s.mode != SweepMode::kGrid, "lambda sweep needs mode lambda1 or lambda2");
  const int n = HorizonSteps(s.lambda_horizon_periods, c.wave.period, c.ocp.dt);
  const State x0 = StartState(s.initial, c, s.t0);
  std::vector<LambdaRow> rows(s.values.size());
  ParallelFor(static_cast<int>(rows.size()), c.threads, [&](int i) {
    ocp::OcpConfig oc = c.ocp;
    oc.n_steps = n;
    if (s.mode == SweepMode::kLambda1) {
      oc.lambda1 = s.values[i];
    } else {
      oc.lambda2 = s.values[i];
    }
    const auto inst = ocp::Build(oc, c.model, x0, c.wave, s.t0);
    const auto res = qp::Solve(inst, c.solver);
    LambdaRow& row = rows[i];
    row.lambda1 = oc.lambda1;
    row.lambda2 = oc.lambda2;
    row.report = res.report;
    row.objective = res.report.objective;
    row.energy = ocp::Breakdown(inst, res.point).energy;
    const Eigen::VectorXd v = inst.layout.Velocities(res.point).head(n + 1);
    try {
      row.avg_velocity_period =
          mpc::AveragePeriod({v.data(), static_cast<std::size_t>(v.size())}, oc.dt);
    } catch (const Error&) {
      row.avg_velocity_period.reset();
    }
  });
  return rows;
}

std::vector<GridRow> GridSweep(const RunConfig& c) {
  const auto& s = c.sweep;
  const int n = HorizonSteps(s.grid_horizon_periods, c.wave.period, c.ocp.dt);
  const State x0 = StartState(s.initial, c, s.t0);
  std::vector<GridRow> rows;
  for (double eta : s.eta) {
    for (double rho : s.rho) rows.push_back({eta, rho, {}});
  }
  ParallelFor(static_cast<int>(rows.size()), c.threads, [&](int i) {
    ocp::OcpConfig oc = c.ocp;
    oc.n_steps = n;
    oc.eta = rows[i].eta;
    oc.rho = rows[i].rho;
    const auto inst = ocp::Build(oc, c.model, x0, c.wave, s.t0);
    rows[i].report = qp::Solve(inst, c.solver).report;
  });
  return rows;
}

std::optional<double> SelectLambda(const std::vector<LambdaRow>& rows,
                                   SweepMode mode, double wave_period,
                                   double tolerance) {
  std::optional<double> best;
  for (const auto& r : rows) {
    if (r.report.status != qp::SolveStatus::kOptimal || !r.avg_velocity_period) {
      continue;
    }
    if (std::abs(*r.avg_velocity_period - wave_period) > tolerance * wave_period) {
      continue;
    }
    const double lam = mode == SweepMode::kLambda2 ? r.lambda2 : r.lambda1;
    if (!best || lam < *best) best = lam;
  }
  return best;
}

std::string FormatLambdaSweepCsv(const std::vector<LambdaRow>& rows) {
  std::ostringstream out;
  out << "lambda1,lambda2,avg_velocity_period,objective,energy,status\n";
  for (const auto& r : rows) {
    out << FormatDouble(r.lambda1) << ',' << FormatDouble(r.lambda2) << ','
        << (r.avg_velocity_period ? FormatDouble(*r.avg_velocity_period) : "nan")
        << ',' << Field(r.objective) << ',' << Field(r.energy) << ','
        << qp::ToString(r.report.status) << '\n';
  }
  return out.str();
}

std::string FormatSafetyGridCsv(const std::vector<GridRow>& rows) {
  std::ostringstream out;
  out << "eta,rho,objective,solve_seconds,iterations,status\n";
  for (const auto& r : rows) {
    out << FormatDouble(r.eta) << ',' << FormatDouble(r.rho) << ','
        << Field(r.report.objective) << ',' << FormatDouble(r.report.solve_seconds)
        << ',' << r.report.iterations << ',' << qp::ToString(r.report.status)
        << '\n';
  }
  return out.str();
}

sysid::ControlFit EstimateModel(const RunConfig& c) {
  const auto& e = c.estimate;
  const double dt = e.sample_dt;

  sysid::DecayDataset decay;
  if (!e.decay_csv.empty()) {
    for (const auto& p : e.decay_csv) {
      decay.trajectories.push_back(sysid::DecayRun(LoadTrajectoryCsv(p)));
    }
  } else {
    for (const State& x0 : e.decay_initial) {
      decay.trajectories.push_back(sysid::DecayRun(
          TruthRollout(e.truth, e.mode, x0, ControlSignal::Zero(), std::nullopt,
                       e.decay_duration, dt)));
    }
  }

  sysid::FloatDataset floating;
  if (!e.float_csv.empty()) {
    for (const auto& p : e.float_csv) {
      floating.trajectories.push_back(sysid::FloatRun(LoadTrajectoryCsv(p)));
    }
  } else {
    floating.trajectories.push_back(sysid::FloatRun(
        TruthRollout(e.truth, e.mode, State{}, ControlSignal::Zero(), c.wave,
                     e.float_duration, dt)));
  }

  sysid::ControlDataset control;
  control.dt = dt;
  control.control.amplitude = e.control_amplitude;
  control.control.period = e.control_period.value_or(c.wave.period);
  if (!e.control_csv.empty()) {
    for (const auto& p : e.control_csv) {
      control.trajectories.push_back(sysid::ControlRun(LoadTrajectoryCsv(p)));
    }
  } else {
    control.trajectories.push_back(sysid::ControlRun(TruthRollout(
        e.truth, e.mode, State{},
        ControlSignal::Sinusoid(control.control.amplitude,
                                control.control.period, e.control_shift),
        c.wave, e.control_duration, dt)));
  }

  const auto a = Step("step 1 (drift)", [&] { return sysid::FitA(decay); });
  const auto w = Step("step 2 (wave)", [&] { return sysid::FitC(floating, a); });
  return Step("step 3 (control)", [&] { return sysid::FitB(control, w); });
}

CommandReport Estimate(const RunConfig& c, const fs::path& out) {
  fs::create_directories(out);
  const sysid::ControlFit fit = EstimateModel(c);
  const DiscreteModel model = fit.Model(c.estimate.sample_dt);

  CommandReport rep;
  Write(rep, out / "model_fitted.txt",
        FormatModelFixture(model, "fitted by wecctl estimate"));

  json j;
  j["steps"] = json::array(
      {{{"step", "drift"},
        {"residual", fit.wave.drift.residual},
        {"condition", fit.wave.drift.condition},
        {"transitions", fit.wave.drift.transitions}},
       {{"step", "wave"},
        {"residual", fit.wave.residual},
        {"condition", fit.wave.condition},
        {"transitions", fit.wave.transitions}},
       {{"step", "control"},
        {"residual", fit.residual},
        {"condition", fit.condition},
        {"transitions", fit.transitions}}});
  j["best_shift"] = fit.best_shift;
  j["mode"] = c.estimate.mode == SimMode::kDiscreteExact ? "discrete_exact"
                                                         : "continuous_rk4";
  j["model"] = ModelJson(model);
  if (c.model_path) {
    j["reference"] = {
        {"path", c.model_path->string()},
        {"a_rel_error", RelError(model.a, c.model.a)},
        {"b_rel_error", RelError(model.b, c.model.b)},
        {"c_rel_error", RelError(model.c, c.model.c)}};
  }
  rep.summary = j.dump(2);
  Write(rep, out / "estimate_report.json", rep.summary + "\n");
  return rep;
}

CommandReport Sweep(const RunConfig& c, const fs::path& out) {
  fs::create_directories(out);
  CommandReport rep;
  json j;
  bool all_ok = true;
  if (c.sweep.mode == SweepMode::kGrid) {
    const auto rows = GridSweep(c);
    Write(rep, out / "safety_grid.csv", FormatSafetyGridCsv(rows));
    int failed = 0;
    for (const auto& r : rows) failed += r.report.status != qp::SolveStatus::kOptimal;
    all_ok = failed == 0;
    j["mode"] = "grid";
    j["rows"] = rows.size();
    j["failed"] = failed;
  } else {
    const auto rows = LambdaSweep(c);
    Write(rep, out / "lambda_sweep.csv", FormatLambdaSweepCsv(rows));
    int failed = 0;
    for (const auto& r : rows) failed += r.report.status != qp::SolveStatus::kOptimal;
    all_ok = failed == 0;
    const auto sel = SelectLambda(rows, c.sweep.mode, c.wave.period,
                                  c.sweep.period_tolerance);
    j["mode"] = c.sweep.mode == SweepMode::kLambda1 ? "lambda1" : "lambda2";
    j["rows"] = rows.size();
    j["failed"] = failed;
    j["selected_lambda"] = sel ? json(*sel) : json(nullptr);
    j["period_tolerance"] = c.sweep.period_tolerance;
  }
  rep.outcome = all_ok ? Outcome::kSuccess : Outcome::kPartial;
  rep.summary = j.dump(2);
  Write(rep, out / "sweep_summary.json", rep.summary + "\n");
  return rep;
}

CommandReport Mpc(const RunConfig& c, const fs::path& out) {
  fs::create_directories(out);
  const mpc::RecedingLog log = mpc::Run(c.mpc);
  CommandReport rep;
  Write(rep, out / "receding_log.csv", mpc::FormatRecedingLogCsv(log));
  Write(rep, out / "applied_trajectory.csv", FormatTrajectoryCsv(log.applied));

  const double soft = c.mpc.ocp.gamma * c.mpc.ocp.eta;
  json j;
  j["periods"] = log.periods.size();
  j["complete"] = log.complete;
  j["failed_period"] = log.failed_period ? json(*log.failed_period) : json(nullptr);
  j["total_objective"] = log.TotalObjective();
  j["total_energy"] = log.TotalEnergy();
  j["realtime_fraction"] = log.RealtimeFraction();
  j["max_alpha"] = log.MaxAlpha();
  j["max_alpha_fraction_of_soft_bound"] = log.MaxAlpha() / soft;
  j["update_horizon"] = c.mpc.update_horizon;
  rep.outcome = log.complete ? Outcome::kSuccess : Outcome::kPartial;
  rep.summary = j.dump(2);
  Write(rep, out / "mpc_summary.json", rep.summary + "\n");
  return rep;
}

CommandReport Costfit(const RunConfig& c, const fs::path& out) {
  if (!c.costfit.samples) {
    Fail(ErrorCode::kConfig, "costfit: costfit.samples is not set");
  }
  fs::create_directories(out);
  const auto samples = costmodel::LoadSamplesCsv(*c.costfit.samples);
  const auto fits = costmodel::FitFamilies(samples);

  json j;
  j["samples"] = samples.size();
  j["families"] = json::array();
  for (const auto& f : fits) {
    j["families"].push_back({{"family", costmodel::ToString(f.family)},
                             {"parameters", f.parameters},
                             {"r_squared", f.r_squared}});
  }
  j["winner"] = costmodel::ToString(fits.front().family);
  for (const auto& f : fits) {
    if (f.family != costmodel::Family::kHyperbolic) continue;
    j["hyperbolic"] = {{"a", f.parameters[0]}, {"c", f.parameters[1]}};
    j["exponent"] = costmodel::PowerForceExponent(f, c.costfit.b_lo,
                                                  c.costfit.b_hi, c.costfit.points);
    j["b_range"] = {c.costfit.b_lo, c.costfit.b_hi};
  }
  CommandReport rep;
  rep.summary = j.dump(2);
  Write(rep, out / "costfit_report.json", rep.summary + "\n");
  return rep;
}

}  // namespace wecopt::commands
