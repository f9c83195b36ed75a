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


#include "wecopt/mpc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wecopt/error.hpp"
#include "wecopt/io.hpp"

namespace wecopt::mpc {
namespace {

int WholeSteps(double span, double dt, const char* what) {
  const double ratio = span / dt;
  const double steps = std::round(ratio);
  if (!(std::abs(ratio - steps) <= 1e-9 * std::max(1.0, ratio))) {
    Fail(ErrorCode::kConfig, std::string("mpc: ") + what +
                                 " is not a whole number of time steps");
  }
  return static_cast<int>(steps);
}

}  // namespace

void MpcConfig::Validate() const {
  std::ostringstream bad;
  if (!(std::isfinite(dt) && dt > 0.0)) bad << " dt";
  if (!(std::isfinite(horizon) && horizon > 0.0)) bad << " horizon";
  if (!(std::isfinite(update_horizon) && update_horizon > 0.0)) {
    bad << " update_horizon";
  }
  if (!std::isfinite(t0)) bad << " t0";
  if (periods < 1) bad << " periods";
  if (spinup_periods < 0) bad << " spinup_periods";
  if (!bad.str().empty()) {
    Fail(ErrorCode::kConfig, "mpc: invalid field(s):" + bad.str());
  }
  if (update_horizon > horizon * (1.0 + 1e-12)) {
    Fail(ErrorCode::kConfig, "mpc: update_horizon exceeds horizon");
  }
  WholeSteps(horizon, dt, "horizon");
  WholeSteps(update_horizon, dt, "update_horizon");
  if (std::abs(model.dt - dt) > 1e-12 * dt) {
    Fail(ErrorCode::kConfig, "mpc: model dt differs from the controller dt");
  }
  model.Validate();
  wave.Validate();
  PeriodConfig().Validate();
  solver.Validate();
  if (truth) truth->Validate();
  if (x0 && !x0->finite()) Fail(ErrorCode::kConfig, "mpc: x0 is not finite");
}

int MpcConfig::horizon_steps() const {
  return WholeSteps(horizon, dt, "horizon");
}

int MpcConfig::update_steps() const {
  return WholeSteps(update_horizon, dt, "update_horizon");
}

ocp::OcpConfig MpcConfig::PeriodConfig() const {
  ocp::OcpConfig c = ocp;
  c.n_steps = horizon_steps();
  c.dt = dt;
  c.u_init.reset();
  return c;
}

double RecedingLog::TotalObjective() const {
  double s = 0.0;
  for (const auto& p : periods) s += p.objective();
  return s;
}

double RecedingLog::TotalEnergy() const {
  double s = 0.0;
  for (const auto& p : periods) s += p.energy();
  return s;
}

double RecedingLog::MaxAlpha() const {
  double m = 0.0;
  for (const auto& p : periods) m = std::max(m, p.max_alpha);
  return m;
}

double RecedingLog::RealtimeFraction() const {
  if (periods.empty()) return 0.0;
  const auto ok = std::count_if(periods.begin(), periods.end(),
                                [](const PeriodRecord& p) { return p.realtime_ok; });
  return static_cast<double>(ok) / static_cast<double>(periods.size());
}

State FreeFloatState(const DiscreteModel& model, const WaveSpec& wave,
                     double t) {
  Require(std::isfinite(t) && t >= 0.0, "free-float time must be >= 0");
  const long long steps = std::llround(t / model.dt);
  State x;
  for (long long k = 0; k < steps; ++k) {
    x = DiscreteStep(model, x, 0.0,
                     WaveElevation(wave, static_cast<double>(k) * model.dt));
  }
  return x;
}

RecedingLog Run(const MpcConfig& config) {
  config.Validate();
  const int n = config.horizon_steps();
  const int m = config.update_steps();
  const double dt = config.dt;
  const ocp::OcpConfig base = config.PeriodConfig();
  const TruthPlant plant(
      config.truth ? *config.truth : TruthModel::FromDiscrete(config.model),
      config.plant_mode, dt);

  const int first = -config.spinup_periods;
  const double t_first = config.t0 + first * m * dt;
  State x = config.x0 ? *config.x0
                      : FreeFloatState(config.model, config.wave,
                                       std::max(0.0, t_first));

  RecedingLog log;
  std::optional<double> pin;
  Eigen::VectorXd previous;

  for (int j = first; j < config.periods; ++j) {
    const double t_start = config.t0 + static_cast<double>(j) * m * dt;
    ocp::OcpConfig oc = base;
    oc.u_init = pin;
    const ocp::OcpInstance inst =
        ocp::Build(oc, config.model, x, config.wave, t_start);

    Eigen::VectorXd warm;
    if (previous.size() > 0) {
      const Eigen::VectorXd u_prev = inst.layout.Controls(previous);
      std::vector<double> shifted(n + 1);
      for (int k = 0; k <= n; ++k) shifted[k] = u_prev(std::min(k + m, n));
      warm = inst.PointFromControls(shifted);
    }
    const qp::SolveResult res =
        qp::Solve(inst, config.solver, warm.size() > 0 ? &warm : nullptr);
    const bool ok = res.report.status == qp::SolveStatus::kOptimal;
    const bool logged = j >= 0;

    if (!ok && !logged) {
      // Spin-up failures are reported as a failed first period.
      PeriodRecord rec;
      rec.period = 0;
      rec.t_start = t_start;
      rec.report = res.report;
      rec.initial = x;
      rec.terminal = x;
      log.periods.push_back(rec);
      log.complete = false;
      log.failed_period = 0;
      return log;
    }

    const auto& L = inst.layout;
    const Eigen::VectorXd u = L.Controls(res.point);
    const Eigen::VectorXd alpha = L.Excess(res.point);

    std::vector<double> us(m + 1), vs(m + 1), as(m + 1);
    std::vector<State> xs(m + 1);
    xs[0] = x;
    for (int k = 0; k <= m; ++k) {
      us[k] = u(k);
      as[k] = alpha(k);
      if (k < m) {
        const double uk = u(k);
        xs[k + 1] = plant.Step(xs[k], t_start + k * dt,
                               ControlSignal{[uk](double) { return uk; },
                                             ControlHold::kZeroOrderHold},
                               config.wave);
        if (!xs[k + 1].finite()) {
          Fail(ErrorCode::kDiverged, "mpc: plant state diverged");
        }
      }
      vs[k] = xs[k].velocity;
    }

    if (logged) {
      PeriodRecord rec;
      rec.period = j;
      rec.t_start = t_start;
      rec.report = res.report;
      rec.realtime_ok = res.report.solve_seconds < config.update_horizon;
      rec.initial = x;
      rec.terminal = xs[m];
      if (ok) {
        rec.controls = us;
        rec.slice = ocp::SliceBreakdown(us, vs, as, base);
        rec.max_alpha = *std::max_element(as.begin(), as.end());
        auto& tr = log.applied;
        for (int k = tr.size() == 0 ? 0 : 1; k <= m; ++k) {
          const double t = t_start + k * dt;
          tr.Append(t, us[k], xs[k], WaveElevation(config.wave, t));
        }
      } else {
        rec.terminal = x;
      }
      log.periods.push_back(rec);
      if (!ok) {
        log.complete = false;
        log.failed_period = j;
        return log;
      }
    }

    x = xs[m];
    pin = u(m);
    previous = res.point;
  }
  return log;
}

double AveragePeriod(std::span<const double> signal, double dt) {
  Require(std::isfinite(dt) && dt > 0.0, "average period: dt must be > 0");
  std::vector<double> crossings;
  for (std::size_t k = 0; k + 1 < signal.size(); ++k) {
    const double a = signal[k], b = signal[k + 1];
    if (a < 0.0 && b >= 0.0) {
      crossings.push_back((static_cast<double>(k) + a / (a - b)) * dt);
    }
  }
  if (crossings.size() < 2) {
    Fail(ErrorCode::kInvalidArgument,
         "average period undefined: fewer than two upward zero crossings");
  }
  return (crossings.back() - crossings.front()) /
         static_cast<double>(crossings.size() - 1);
}

std::string FormatRecedingLogCsv(const RecedingLog& log) {
  std::ostringstream out;
  out << "period,objective,energy,solve_seconds,max_alpha,realtime_ok,status\n";
  for (const auto& p : log.periods) {
    out << p.period << ',' << FormatDouble(p.objective()) << ','
        << FormatDouble(p.energy()) << ','
        << FormatDouble(p.report.solve_seconds) << ','
        << FormatDouble(p.max_alpha) << ',' << (p.realtime_ok ? 1 : 0) << ','
        << qp::ToString(p.report.status) << '\n';
  }
  return out.str();
}

}  // namespace wecopt::mpc
