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

#include "wecopt/sysid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "wecopt/error.hpp"

namespace wecopt::sysid {

namespace {

std::string DescribeDirection(const Eigen::Vector2d& v) {
  std::ostringstream out;
  out << "[velocity " << v(0) << ", position " << v(1) << "]";
  return out.str();
}

void CheckTransitions(std::size_t states, std::size_t inputs,
                      const char* what) {
  if (states == 0 || inputs != states - 1) {
    std::ostringstream msg;
    msg << what << ": expected one input sample per transition (" << states
        << " states, " << inputs << " inputs)";
    Fail(ErrorCode::kInvalidArgument, msg.str());
  }
}

// Scalar least squares r ~ v * s over stacked transitions.
Eigen::Vector2d FitAlongSignal(const Eigen::Vector2d& cross, double energy) {
  return cross / (energy + kRidge);
}

}  // namespace

DriftFit FitA(const DecayDataset& data) {
  Eigen::Matrix2d gram = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d cross = Eigen::Matrix2d::Zero();
  std::size_t n = 0;
  for (const auto& traj : data.trajectories) {
    for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
      const Eigen::Vector2d x = traj[k].vec();
      gram += x * x.transpose();
      cross += traj[k + 1].vec() * x.transpose();
      ++n;
    }
  }

  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(gram);
  const double lo = eig.eigenvalues()(0), hi = eig.eigenvalues()(1);
  if (n < 2 || hi <= 0.0 || lo <= 1e-12 * hi) {
    std::ostringstream msg;
    msg << "fit_A: decay data does not excite direction "
        << DescribeDirection(eig.eigenvectors().col(0)) << " (" << n
        << " transitions, Gram eigenvalues " << lo << ", " << hi << ")";
    Fail(ErrorCode::kSingular, msg.str());
  }

  DriftFit fit;
  fit.a = cross * (gram + kRidge * Eigen::Matrix2d::Identity()).inverse();
  fit.condition = hi / lo;
  fit.transitions = n;
  for (const auto& traj : data.trajectories) {
    for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
      fit.residual +=
          (traj[k + 1].vec() - fit.a * traj[k].vec()).squaredNorm();
    }
  }
  return fit;
}

WaveFit FitC(const FloatDataset& data, const DriftFit& drift) {
  Eigen::Vector2d cross = Eigen::Vector2d::Zero();
  double energy = 0.0;
  std::size_t n = 0;
  for (const auto& traj : data.trajectories) {
    CheckTransitions(traj.states.size(), traj.wave.size(), "fit_c");
    for (std::size_t k = 0; k < traj.wave.size(); ++k) {
      const Eigen::Vector2d r =
          traj.states[k + 1].vec() - drift.a * traj.states[k].vec();
      cross += r * traj.wave[k];
      energy += traj.wave[k] * traj.wave[k];
      ++n;
    }
  }
  if (!(energy > 0.0)) {
    Fail(ErrorCode::kSingular,
         "fit_c: wave input is identically zero; c is not identifiable");
  }

  WaveFit fit;
  fit.drift = drift;
  fit.c = FitAlongSignal(cross, energy);
  fit.transitions = n;
  for (const auto& traj : data.trajectories) {
    for (std::size_t k = 0; k < traj.wave.size(); ++k) {
      fit.residual += (traj.states[k + 1].vec() -
                       drift.a * traj.states[k].vec() - fit.c * traj.wave[k])
                          .squaredNorm();
    }
  }
  return fit;
}

std::vector<double> DefaultShiftGrid(const ControlTemplate& tmpl, double dt) {
  Require(dt > 0.0 && tmpl.period > 0.0, "shift grid needs dt, period > 0");
  const auto count = static_cast<std::size_t>(std::llround(tmpl.period / dt));
  std::vector<double> grid(std::max<std::size_t>(count, 1));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = static_cast<double>(i) * dt;
  }
  return grid;
}

ControlFit FitB(const ControlDataset& data, const WaveFit& wave,
                const std::optional<std::vector<double>>& shifts) {
  if (!(std::abs(data.control.amplitude) > 0.0)) {
    Fail(ErrorCode::kSingular,
         "fit_b: control template amplitude is zero; b is not identifiable");
  }
  Require(data.control.period > 0.0, "fit_b: template period must be > 0");

  // Residual after removing the drift and wave parts, stacked over runs.
  std::vector<Eigen::Vector2d> r;
  std::vector<double> times;
  for (const auto& traj : data.trajectories) {
    CheckTransitions(traj.states.size(), traj.wave.size(), "fit_b");
    CheckTransitions(traj.states.size(), traj.times.size(), "fit_b");
    for (std::size_t k = 0; k < traj.wave.size(); ++k) {
      r.push_back(traj.states[k + 1].vec() -
                  wave.drift.a * traj.states[k].vec() - wave.c * traj.wave[k]);
      times.push_back(traj.times[k]);
    }
  }
  if (r.empty()) {
    Fail(ErrorCode::kSingular, "fit_b: control dataset has no transitions");
  }

  ControlFit fit;
  fit.wave = wave;
  fit.transitions = r.size();
  fit.shifts = shifts ? *shifts : DefaultShiftGrid(data.control, data.dt);
  Require(!fit.shifts.empty(), "fit_b: empty shift grid");
  fit.shift_residuals.resize(fit.shifts.size());

  const double omega = 2.0 * std::numbers::pi / data.control.period;
  std::vector<double> u(r.size());
  bool have_best = false;
  for (std::size_t i = 0; i < fit.shifts.size(); ++i) {
    const double s = fit.shifts[i];
    Eigen::Vector2d cross = Eigen::Vector2d::Zero();
    double energy = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) {
      u[k] = data.control.amplitude * std::sin(omega * (times[k] + s));
      cross += r[k] * u[k];
      energy += u[k] * u[k];
    }
    if (!(energy > 0.0)) {
      Fail(ErrorCode::kSingular, "fit_b: hypothesized control is zero");
    }
    const Eigen::Vector2d b = FitAlongSignal(cross, energy);
    double residual = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) {
      residual += (r[k] - b * u[k]).squaredNorm();
    }
    fit.shift_residuals[i] = residual;

    // Ties go to the smallest shift.
    const bool better =
        !have_best || residual < fit.residual ||
        (residual == fit.residual && s < fit.best_shift);
    if (better) {
      have_best = true;
      fit.b = b;
      fit.best_shift = s;
      fit.residual = residual;
    }
  }
  return fit;
}

DiscreteModel ControlFit::Model(double dt) const {
  DiscreteModel m;
  m.a = wave.drift.a;
  m.b = b;
  m.c = wave.c;
  m.dt = dt;
  return m;
}

std::vector<State> DecayRun(const Trajectory& traj) { return traj.states(); }

FloatTrajectory FloatRun(const Trajectory& traj) {
  FloatTrajectory out;
  out.states = traj.states();
  if (!traj.w.empty()) out.wave.assign(traj.w.begin(), traj.w.end() - 1);
  return out;
}

ControlTrajectory ControlRun(const Trajectory& traj) {
  ControlTrajectory out;
  out.states = traj.states();
  if (!traj.w.empty()) {
    out.wave.assign(traj.w.begin(), traj.w.end() - 1);
    out.times.assign(traj.t.begin(), traj.t.end() - 1);
  }
  return out;
}

}  // namespace wecopt::sysid
