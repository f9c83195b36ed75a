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


#ifndef WECOPT_MPC_HPP_
#define WECOPT_MPC_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wecopt/ocp.hpp"
#include "wecopt/plant.hpp"
#include "wecopt/qp_solver.hpp"

namespace wecopt::mpc {

struct MpcConfig {
  double t0 = 200.0;             // s, start of the first logged period
  double horizon = 4.0;          // s
  double update_horizon = 0.4;   // s
  double dt = 0.01;              // s
  int periods = 20;              // K
  int spinup_periods = 0;        // run before t0, not logged
  ocp::OcpConfig ocp;            // n_steps and dt are taken from above
  DiscreteModel model;
  WaveSpec wave;
  SimMode plant_mode = SimMode::kDiscreteExact;
  // Plant used for the applied controls; defaults to the continuous model
  // whose Euler map is `model`.
  std::optional<TruthModel> truth;
  // Plant state at the first solved period; defaults to the free-floating
  // state there.
  std::optional<State> x0;
  qp::SolveSettings solver;

  void Validate() const;
  int horizon_steps() const;
  int update_steps() const;
  // The OCP configuration of one period (u_init left free).
  ocp::OcpConfig PeriodConfig() const;
};

struct PeriodRecord {
  int period = 0;
  double t_start = 0.0;
  ocp::ObjectiveBreakdown slice;  // implemented nodes 0..M
  qp::SolveReport report;
  double max_alpha = 0.0;  // N
  bool realtime_ok = false;
  State initial;                  // plant state when the period starts
  State terminal;
  std::vector<double> controls;   // implemented u_0..u_M

  double objective() const { return slice.total; }
  double energy() const { return slice.energy; }
};

struct RecedingLog {
  std::vector<PeriodRecord> periods;
  // Applied trajectory over the logged periods; consecutive slices share
  // their boundary node.
  Trajectory applied;
  bool complete = true;
  // Set when a solve did not reach optimality; that period is the last
  // record and carries the failing report.
  std::optional<int> failed_period;

  double TotalObjective() const;
  double TotalEnergy() const;
  double MaxAlpha() const;
  double RealtimeFraction() const;
};

RecedingLog Run(const MpcConfig& config);

// Mean spacing of upward zero crossings, each refined by linear
// interpolation. Partial cycles at either end are ignored.
double AveragePeriod(std::span<const double> signal, double dt);

// State at time t of the device floating freely (u = 0) from rest at t = 0.
State FreeFloatState(const DiscreteModel& model, const WaveSpec& wave,
                     double t);

// receding_log.csv body.
std::string FormatRecedingLogCsv(const RecedingLog& log);

}  // namespace wecopt::mpc

#endif  // WECOPT_MPC_HPP_
