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

#ifndef WECOPT_SYSID_HPP_
#define WECOPT_SYSID_HPP_

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "wecopt/plant.hpp"

namespace wecopt::sysid {

// Free-decay runs: no wave, no control.
struct DecayDataset {
  std::vector<std::vector<State>> trajectories;
};

struct FloatTrajectory {
  std::vector<State> states;
  std::vector<double> wave;  // one sample per transition
};

// Free-floating runs: wave input, zero control.
struct FloatDataset {
  std::vector<FloatTrajectory> trajectories;
};

struct ControlTrajectory {
  std::vector<State> states;
  std::vector<double> wave;   // one sample per transition
  std::vector<double> times;  // sample time of each transition start
};

// The control actually applied is treated as unknown; fit_b regresses
// against amplitude * sin(2 pi (t + s) / period) over candidate shifts s.
struct ControlTemplate {
  double amplitude = 1e6;  // N
  double period = 4.0;     // s
};

struct ControlDataset {
  std::vector<ControlTrajectory> trajectories;
  ControlTemplate control;
  double dt = 0.01;
};

// Step 1 result. Steps 2 and 3 only accept the previous step's result type,
// so the estimation order is fixed at compile time.
struct DriftFit {
  Eigen::Matrix2d a;
  double residual = 0.0;   // sum of squared one-step errors
  double condition = 0.0;  // of the state Gram matrix
  std::size_t transitions = 0;
};

struct WaveFit {
  DriftFit drift;
  Eigen::Vector2d c;
  double residual = 0.0;
  double condition = 1.0;
  std::size_t transitions = 0;
};

struct ControlFit {
  WaveFit wave;
  Eigen::Vector2d b;
  double best_shift = 0.0;  // s
  double residual = 0.0;
  double condition = 1.0;
  std::size_t transitions = 0;
  std::vector<double> shifts;           // candidate grid
  std::vector<double> shift_residuals;  // residual per candidate

  DiscreteModel Model(double dt) const;
};

inline constexpr double kRidge = 1e-12;

DriftFit FitA(const DecayDataset& data);
WaveFit FitC(const FloatDataset& data, const DriftFit& drift);

// Default grid is {0, dt, ..., period - dt}.
ControlFit FitB(const ControlDataset& data, const WaveFit& wave,
                const std::optional<std::vector<double>>& shifts = std::nullopt);

std::vector<double> DefaultShiftGrid(const ControlTemplate& tmpl, double dt);

// Dataset adapters from sampled trajectories (CSV or truth simulator).
std::vector<State> DecayRun(const Trajectory& traj);
FloatTrajectory FloatRun(const Trajectory& traj);
ControlTrajectory ControlRun(const Trajectory& traj);

}  // namespace wecopt::sysid

#endif  // WECOPT_SYSID_HPP_
