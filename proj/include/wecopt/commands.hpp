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


#ifndef WECOPT_COMMANDS_HPP_
#define WECOPT_COMMANDS_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wecopt/config.hpp"
#include "wecopt/cost_model.hpp"
#include "wecopt/sysid.hpp"

namespace wecopt::commands {

enum class Outcome { kSuccess, kPartial };

struct CommandReport {
  Outcome outcome = Outcome::kSuccess;
  std::vector<std::filesystem::path> files;
  std::string summary;  // JSON
};

struct LambdaRow {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  std::optional<double> avg_velocity_period;  // s
  double objective = 0.0;
  double energy = 0.0;
  qp::SolveReport report;
};

struct GridRow {
  double eta = 0.0;
  double rho = 0.0;
  qp::SolveReport report;
};

// Rows come back in input order whatever the thread count.
std::vector<LambdaRow> LambdaSweep(const RunConfig& config);
std::vector<GridRow> GridSweep(const RunConfig& config);

// Smallest lambda whose average velocity period is within `tolerance`
// (relative) of the wave period.
std::optional<double> SelectLambda(const std::vector<LambdaRow>& rows,
                                   SweepMode mode, double wave_period,
                                   double tolerance);

std::string FormatLambdaSweepCsv(const std::vector<LambdaRow>& rows);
std::string FormatSafetyGridCsv(const std::vector<GridRow>& rows);

sysid::ControlFit EstimateModel(const RunConfig& config);

CommandReport Estimate(const RunConfig& config,
                       const std::filesystem::path& out_dir);
CommandReport Sweep(const RunConfig& config,
                    const std::filesystem::path& out_dir);
CommandReport Mpc(const RunConfig& config,
                  const std::filesystem::path& out_dir);
CommandReport Costfit(const RunConfig& config,
                      const std::filesystem::path& out_dir);

}  // namespace wecopt::commands

#endif  // WECOPT_COMMANDS_HPP_
