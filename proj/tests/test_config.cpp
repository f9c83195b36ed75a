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


#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "test_util.hpp"
#include "wecopt/commands.hpp"
#include "wecopt/config.hpp"
#include "wecopt/io.hpp"

namespace wecopt {
namespace {

namespace fs = std::filesystem;
using testing::ErrorCodeOf;
using testing::ErrorMessageOf;

constexpr int kConfigError = static_cast<int>(ErrorCode::kConfig);

RunConfig Parse(const std::string& text, const fs::path& base = WECOPT_DATA_DIR) {
  return ParseRunConfig(text, "test.ini", base);
}

// Drops the solve_seconds column so runs can be compared byte for byte.
std::string WithoutTiming(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    const auto fields = SplitCsvLine(line);
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i == 3) continue;
      out << fields[i] << ',';
    }
    out << '\n';
  }
  return out.str();
}

TEST_SUITE("config") {

TEST_CASE("sections and defaults") {
  const RunConfig c = Parse(
      "seed = 7\n"
      "[wave]\nheight = 6\nperiod = 5\n"
      "[ocp]\neta = 0.5\nrho = 2  # trailing comment\n"
      "[mpc]\nperiods = 3\n");
  CHECK(c.seed == 7);
  CHECK(c.wave.period == 5.0);
  CHECK(c.ocp.eta == 0.5);
  CHECK(c.ocp.rho == 2.0);
  CHECK(c.mpc.periods == 3);
  CHECK(c.mpc.horizon == 5.0);
  CHECK(c.mpc.update_horizon == doctest::Approx(0.5));
  CHECK(c.mpc.ocp.eta == 0.5);
  CHECK(c.mpc.wave.period == 5.0);
  CHECK_FALSE(c.mpc.x0.has_value());
}

TEST_CASE("dotted keys need no section") {
  const RunConfig c = Parse("ocp.lambda1 = 1e-6\n[solver]\nmax_iter = 50\n");
  CHECK(c.ocp.lambda1 == 1e-6);
  CHECK(c.solver.max_iter == 50);
}

TEST_CASE("list forms") {
  const RunConfig c = Parse(
      "[sweep]\nvalues = logspace(-10, -4, 7)\neta = linspace(0.1, 1, 10)\n"
      "rho = 0.1, 0.5 , 1\n");
  REQUIRE(c.sweep.values.size() == 7);
  CHECK(c.sweep.values.front() == doctest::Approx(1e-10));
  CHECK(c.sweep.values.back() == doctest::Approx(1e-4));
  REQUIRE(c.sweep.eta.size() == 10);
  CHECK(c.sweep.eta[2] == doctest::Approx(0.3));
  CHECK(c.sweep.eta.back() == 1.0);
  CHECK(c.sweep.rho == std::vector<double>{0.1, 0.5, 1.0});
}

TEST_CASE("unknown keys are rejected") {
  const std::string msg = ErrorMessageOf([] { Parse("[ocp]\nlamda1 = 1\n"); });
  CHECK(msg.find("ocp.lamda1") != std::string::npos);
  CHECK(msg.find("test.ini:2") != std::string::npos);
  CHECK(ErrorCodeOf([] { Parse("[bogus]\nx = 1\n"); }) == kConfigError);
}

TEST_CASE("malformed input") {
  CHECK(ErrorCodeOf([] { Parse("[ocp]\neta 0.5\n"); }) == kConfigError);
  CHECK(ErrorCodeOf([] { Parse("[ocp\n"); }) == kConfigError);
  CHECK(ErrorCodeOf([] { Parse("[ocp]\neta = 0.5\neta = 0.6\n"); }) == kConfigError);
  CHECK(ErrorCodeOf([] { Parse("[ocp]\neta = half\n"); }) == kConfigError);
  CHECK(ErrorCodeOf([] { Parse("[ocp]\neta = 1.5\n"); }) == kConfigError);
  CHECK(ErrorCodeOf([] { Parse("[mpc]\nupdate_horizon = 0.333\n"); }) == kConfigError);
  CHECK(ErrorCodeOf([] { Parse("[solver]\npolish = maybe\n"); }) == kConfigError);
}

TEST_CASE("referenced files must exist") {
  const std::string msg =
      ErrorMessageOf([] { Parse("[estimate]\ntruth = no_such_truth.txt\n"); });
  CHECK(msg.find("no_such_truth.txt") != std::string::npos);
  CHECK(ErrorCodeOf([] { Parse("[model]\nfixture = missing.txt\n"); }) ==
        kConfigError);
  CHECK(ErrorCodeOf([] { LoadRunConfig("/no/such/config.ini"); }) == kConfigError);
}

TEST_CASE("paths resolve against the config directory") {
  const RunConfig c = Parse(
      "[model]\nfixture = model_h6t5.txt\n"
      "[estimate]\ntruth = truth_h6t4.txt\n"
      "[costfit]\nsamples = damping_samples.csv\n");
  CHECK(c.model.b == ReferenceModelH6T5().b);
  CHECK(c.mpc.model.b == ReferenceModelH6T5().b);
  CHECK(c.estimate.truth.k_es == 1000.0);
  CHECK(c.costfit.samples->filename() == "damping_samples.csv");
}

TEST_CASE("initial state options") {
  CHECK(Parse("[mpc]\ninitial_state = rest\n").mpc.x0 == State{});
  CHECK(Parse("[sweep]\ninitial_state = rest\n").sweep.initial ==
        InitialState::kRest);
  CHECK(ErrorCodeOf([] { Parse("[mpc]\ninitial_state = moving\n"); }) ==
        kConfigError);
}

TEST_CASE("every known key is section qualified") {
  const auto& keys = KnownConfigKeys();
  CHECK(keys.size() > 40);
  for (const auto& k : keys) CHECK(k.find('.') != std::string::npos);
}

}  // TEST_SUITE

TEST_SUITE("commands") {

TEST_CASE("csv headers") {
  CHECK(commands::FormatLambdaSweepCsv({}) ==
        "lambda1,lambda2,avg_velocity_period,objective,energy,status\n");
  CHECK(commands::FormatSafetyGridCsv({}) ==
        "eta,rho,objective,solve_seconds,iterations,status\n");
}

TEST_CASE("lambda selection rule") {
  std::vector<commands::LambdaRow> rows(4);
  const double lams[] = {1e-8, 1e-7, 1e-6, 1e-5};
  const double periods[] = {3.2, 3.85, 3.95, 4.0};
  for (int i = 0; i < 4; ++i) {
    rows[i].lambda1 = lams[i];
    rows[i].avg_velocity_period = periods[i];
    rows[i].report.status = qp::SolveStatus::kOptimal;
  }
  CHECK(commands::SelectLambda(rows, SweepMode::kLambda1, 4.0, 0.05) == 1e-7);
  rows[1].report.status = qp::SolveStatus::kIterLimit;
  CHECK(commands::SelectLambda(rows, SweepMode::kLambda1, 4.0, 0.05) == 1e-6);
  CHECK(commands::SelectLambda(rows, SweepMode::kLambda1, 4.0, 0.001) == 1e-5);
  CHECK_FALSE(commands::SelectLambda(rows, SweepMode::kLambda1, 5.0, 0.05));
}

TEST_CASE("grid sweep is reproducible") {
  RunConfig c = Parse(
      "[sweep]\nmode = grid\neta = 0.2, 1\nrho = 0.1, 1\n"
      "grid_horizon_periods = 0.5\n"
      "[ocp]\nlambda1 = 1e-6\nlambda2 = 1e-6\n");
  c.threads = 1;
  const std::string a = commands::FormatSafetyGridCsv(commands::GridSweep(c));
  c.threads = 3;
  const std::string b = commands::FormatSafetyGridCsv(commands::GridSweep(c));
  CHECK(WithoutTiming(a) == WithoutTiming(b));
  CHECK(std::count(a.begin(), a.end(), '\n') == 5);
  CHECK(a.find("0.2,0.1,") != std::string::npos);
}

TEST_CASE("estimate command round trip") {
  const fs::path out = testing::ScratchDir("estimate");
  const RunConfig c = Parse(
      "[model]\nfixture = model_h6t4.txt\n"
      "[estimate]\ntruth = truth_h6t4.txt\nmode = discrete_exact\n"
      "decay_duration = 20\nfloat_duration = 40\ncontrol_duration = 40\n");
  const auto rep = commands::Estimate(c, out);
  CHECK(rep.outcome == commands::Outcome::kSuccess);
  const DiscreteModel fitted = LoadModelFixture(out / "model_fitted.txt");
  CHECK(testing::RelErr(fitted.a, c.model.a) <= 1e-6);
  CHECK(testing::RelErr(fitted.b, c.model.b) <= 1e-6);
  CHECK(testing::RelErr(fitted.c, c.model.c) <= 1e-6);
  const auto j = nlohmann::json::parse(ReadFile(out / "estimate_report.json"));
  CHECK(j["steps"].size() == 3);
  CHECK(j["best_shift"].get<double>() == 0.0);
  CHECK(j["reference"]["b_rel_error"].get<double>() <= 1e-6);
}

TEST_CASE("estimate errors name the step") {
  RunConfig c = Parse("[estimate]\ntruth = truth_h6t4.txt\n");
  c.estimate.decay_initial = {State{}};
  const std::string msg = ErrorMessageOf([&] { commands::EstimateModel(c); });
  CHECK(msg.find("step 1") != std::string::npos);
  c = Parse("[estimate]\ntruth = truth_h6t4.txt\ncontrol_amplitude = 0\n");
  CHECK(ErrorMessageOf([&] { commands::EstimateModel(c); }).find("step 3") !=
        std::string::npos);
}

TEST_CASE("costfit command") {
  const fs::path dir = testing::ScratchDir("costfit");
  std::ostringstream csv;
  csv << "damping,mean_sq_velocity\n";
  for (int i = 0; i < 12; ++i) {
    const double b = 500.0 * (i + 1);
    csv << b << ',' << 0.3 * std::exp(-2e-4 * b) << '\n';
  }
  WriteFile(dir / "expo.csv", csv.str());
  WriteFile(dir / "empty.csv", "");
  RunConfig c = Parse("[costfit]\nsamples = expo.csv\nb_lo = 1e3\nb_hi = 1e6\n", dir);
  const auto rep = commands::Costfit(c, dir / "out");
  const auto j = nlohmann::json::parse(rep.summary);
  CHECK(j["winner"] == "exponential");
  CHECK(j["families"].size() == 4);
  CHECK(fs::exists(dir / "out" / "costfit_report.json"));

  c = Parse("[costfit]\nsamples = empty.csv\n", dir);
  CHECK(ErrorCodeOf([&] { commands::Costfit(c, dir / "out2"); }) != 0);

  c = Parse("", dir);
  CHECK(ErrorCodeOf([&] { commands::Costfit(c, dir / "out3"); }) == kConfigError);
}

TEST_CASE("mpc command writes its files") {
  const fs::path out = testing::ScratchDir("mpc");
  const RunConfig c = Parse(
      "[wave]\nperiod = 4\n[ocp]\nlambda1 = 1e-6\nlambda2 = 1e-6\n"
      "[mpc]\nt0 = 20\nhorizon = 1\nupdate_horizon = 0.2\nperiods = 3\n");
  const auto rep = commands::Mpc(c, out);
  CHECK(rep.outcome == commands::Outcome::kSuccess);
  CHECK(rep.files.size() == 3);
  const auto j = nlohmann::json::parse(rep.summary);
  CHECK(j["periods"] == 3);
  CHECK(j["complete"] == true);
  CHECK(j.contains("realtime_fraction"));
  CHECK(j.contains("total_energy"));
  const std::string log = ReadFile(out / "receding_log.csv");
  CHECK(log.rfind("period,objective,energy,solve_seconds,max_alpha,realtime_ok,status\n", 0) == 0);
  const Trajectory applied = LoadTrajectoryCsv(out / "applied_trajectory.csv");
  CHECK(applied.size() == 3 * 20 + 1);
}

TEST_CASE("sweep command reports partial outcomes") {
  const fs::path out = testing::ScratchDir("sweep_partial");
  RunConfig c = Parse(
      "[sweep]\nmode = lambda1\nvalues = 1e-6, 1e-5\nlambda_horizon_periods = 0.5\n"
      "[solver]\nmax_iter = 2\n");
  const auto rep = commands::Sweep(c, out);
  CHECK(rep.outcome == commands::Outcome::kPartial);
  const auto j = nlohmann::json::parse(rep.summary);
  CHECK(j["failed"].get<int>() > 0);
  CHECK(fs::exists(out / "lambda_sweep.csv"));
}

}  // TEST_SUITE

}  // namespace
}  // namespace wecopt
