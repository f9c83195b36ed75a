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

#ifndef WECOPT_QP_SOLVER_HPP_
#define WECOPT_QP_SOLVER_HPP_

#include <cstdint>
#include <string>

#include <Eigen/Core>

#include "wecopt/ocp.hpp"

namespace wecopt::qp {

struct SolveSettings {
  double kkt_tol = 1e-6;
  int max_iter = 200;
  double barrier_init = 1.0;
  double barrier_shrink = 0.2;
  double regularization_floor = 1e-8;
  int multistart = 1;
  std::uint64_t seed = 0;
  bool polish = true;
  bool verbose = false;  // one line per iteration on stderr

  void Validate() const;
};

enum class SolveStatus { kOptimal, kIterLimit, kInfeasible, kNumericalFailure };

const char* ToString(SolveStatus status);

struct SolveReport {
  SolveStatus status = SolveStatus::kNumericalFailure;
  int iterations = 0;        // of the returned start
  double kkt_residual = 0.0;
  double solve_seconds = 0.0;  // thread CPU time, all starts
  double objective = 0.0;      // J, maximization sense
  double multistart_spread = 0.0;
  int starts = 0;
  int best_start = 0;
  bool polished = false;
  double max_regularization = 0.0;
};

// Physical-unit multipliers of the minimization form
//   minimize -(0.5 x'Hx + q'x)  s.t.  E x = e (eq),  G x <= h (ineq >= 0).
struct Multipliers {
  Eigen::VectorXd eq;
  Eigen::VectorXd ineq;
};

struct SolveResult {
  Eigen::VectorXd point;
  Multipliers multipliers;
  SolveReport report;
};

// warm_start, when given, is a full point whose controls seed start 0.
SolveResult Solve(const ocp::OcpInstance& instance,
                  const SolveSettings& settings,
                  const Eigen::VectorXd* warm_start = nullptr);

// Largest of the stationarity, feasibility and complementarity residuals,
// measured in the solver's scaled units.
double KktResidual(const ocp::OcpInstance& instance,
                   const Eigen::VectorXd& point, const Multipliers& mult);

// Best objective over u_k on a uniform grid of `levels` values in
// [-gamma, gamma] (levels == 1 means u = 0); -inf if every grid point
// violates the displacement bound.
double BruteForceBest(const ocp::OcpInstance& instance, int levels);

}  // namespace wecopt::qp

#endif  // WECOPT_QP_SOLVER_HPP_
