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

#ifndef WECOPT_IO_HPP_
#define WECOPT_IO_HPP_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "wecopt/plant.hpp"

namespace wecopt {

// `key = value` lines; '#' starts a comment. Duplicate keys are an error.
std::map<std::string, std::string> ParseKeyValues(const std::string& text,
                                                  const std::string& origin);
std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, const std::string& contents);

// Shortest text that parses back to the same double.
std::string FormatDouble(double v);

// Discrete model fixture: a11 a12 a21 a22 b1 b2 c1 c2 dt.
DiscreteModel LoadModelFixture(const std::filesystem::path& path);
DiscreteModel ParseModelFixture(const std::string& text,
                                const std::string& origin = "<string>");
std::string FormatModelFixture(const DiscreteModel& model,
                               const std::string& comment = "");
void SaveModelFixture(const std::filesystem::path& path,
                      const DiscreteModel& model,
                      const std::string& comment = "");

// Truth model file: ac11 ac12 ac21 ac22 bc1 bc2 cc1 cc2 k_es z_es.
TruthModel LoadTruthModel(const std::filesystem::path& path);
std::string FormatTruthModel(const TruthModel& model);

// Trajectory CSV with header t,u,zdot,z,w.
std::string FormatTrajectoryCsv(const Trajectory& traj);
void SaveTrajectoryCsv(const std::filesystem::path& path,
                       const Trajectory& traj);
Trajectory ParseTrajectoryCsv(const std::string& text,
                              const std::string& origin = "<string>");
Trajectory LoadTrajectoryCsv(const std::filesystem::path& path);

// Splits a CSV line on commas and trims whitespace around fields.
std::vector<std::string> SplitCsvLine(const std::string& line);
double ParseDouble(const std::string& text, const std::string& context);

}  // namespace wecopt

#endif  // WECOPT_IO_HPP_
