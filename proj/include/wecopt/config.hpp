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


#ifndef WECOPT_CONFIG_HPP_
#define WECOPT_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wecopt/mpc.hpp"
#include "wecopt/ocp.hpp"
#include "wecopt/plant.hpp"
#include "wecopt/qp_solver.hpp"

namespace wecopt {

enum class InitialState { kFreeFloat, kRest };

enum class SweepMode { kLambda1, kLambda2, kGrid };

struct EstimateSettings {
  std::optional<std::filesystem::path> truth_path;
  TruthModel truth;  // loaded from truth_path
  SimMode mode = SimMode::kDiscreteExact;
  double sample_dt = 0.01;
  std::vector<State> decay_initial = {{1.0, 0.5}, {-0.5, 1.0}};
  double decay_duration = 60.0;
  double float_duration = 200.0;
  double control_duration = 200.0;
  double control_amplitude = 1e6;
  std::optional<double> control_period;  // defaults to the wave period
  double control_shift = 0.0;
  // Recorded trajectories used instead of simulation when given.
  std::vector<std::filesystem::path> decay_csv, float_csv, control_csv;
};

struct SweepSettings {
  SweepMode mode = SweepMode::kGrid;
  std::vector<double> values = {1e-10, 1e-9, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4};
  std::vector<double> eta, rho;
  double lambda_horizon_periods = 7.0;
  double grid_horizon_periods = 1.0;
  double t0 = 200.0;
  InitialState initial = InitialState::kFreeFloat;
  double period_tolerance = 0.05;  // for the lambda selection rule
};

struct CostfitSettings {
  std::optional<std::filesystem::path> samples;
  double b_lo = 1e5;
  double b_hi = 1e8;
  int points = 200;
};

// Sectioned `key = value` configuration. Relative paths resolve against the
// directory holding the config file.
struct RunConfig {
  std::filesystem::path base_dir;
  std::uint64_t seed = 0;
  int threads = 0;  // 0: hardware concurrency
  std::optional<std::filesystem::path> output;

  WaveSpec wave;
  std::optional<std::filesystem::path> model_path;
  DiscreteModel model = ReferenceModelH6T4();
  ocp::OcpConfig ocp;  // n_steps is derived per command
  qp::SolveSettings solver;

  EstimateSettings estimate;
  SweepSettings sweep;
  mpc::MpcConfig mpc;  // ocp, model, wave and solver copied from above
  InitialState mpc_initial = InitialState::kFreeFloat;
  CostfitSettings costfit;
};

RunConfig ParseRunConfig(const std::string& text, const std::string& origin,
                         const std::filesystem::path& base_dir);
RunConfig LoadRunConfig(const std::filesystem::path& path);

// Every key the parser accepts, as section.key.
const std::vector<std::string>& KnownConfigKeys();

}  // namespace wecopt

#endif  // WECOPT_CONFIG_HPP_
