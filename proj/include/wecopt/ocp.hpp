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

#ifndef WECOPT_OCP_HPP_
#define WECOPT_OCP_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "wecopt/plant.hpp"

namespace wecopt::ocp {

struct OcpConfig {
  double gamma = 1e6;    // hard force bound, N
  double delta = 3.0;    // displacement bound, m
  double eta = 1.0;      // soft bound as a fraction of gamma
  double rho = 0.0;      // penalty per N of excess per s
  double lambda1 = 0.0;  // control cost per N^2 per s
  double lambda2 = 0.0;  // smoothness cost
  int n_steps = 400;     // N
  double dt = 0.01;      // s
  std::optional<double> u_init;  // pins u_0 when set

  void Validate() const;
};

// Position of every decision variable in the instance vector:
// [u_0..u_N, zdot_0..zdot_{N+1}, z_0..z_{N+1}, alpha_0..alpha_N].
struct VariableLayout {
  int n_steps = 0;

  int size() const { return 4 * n_steps + 6; }
  int u(int k) const { return k; }
  int zdot(int k) const { return n_steps + 1 + k; }
  int z(int k) const { return 2 * n_steps + 3 + k; }
  int alpha(int k) const { return 3 * n_steps + 5 + k; }

  Eigen::VectorXd Controls(const Eigen::VectorXd& x) const;
  Eigen::VectorXd Velocities(const Eigen::VectorXd& x) const;
  Eigen::VectorXd Positions(const Eigen::VectorXd& x) const;
  Eigen::VectorXd Excess(const Eigen::VectorXd& x) const;
};

enum class EqualityKind { kInitialState, kDynamics, kControlPin };

enum class InequalityKind {
  kForceUpper,         //  u_k <= gamma
  kForceLower,         // -u_k <= gamma
  kDisplacementUpper,  //  z_k <= delta
  kDisplacementLower,  // -z_k <= delta
  kSoftUpper,          //  u_k - alpha_k <= gamma eta
  kSoftLower,          // -u_k - alpha_k <= gamma eta
  kExcessNonNegative,  // -alpha_k <= 0
  kExcessCap,          //  alpha_k <= gamma
};

const char* ToString(InequalityKind kind);

// Quadratic program in maximization form:
//   maximize  0.5 x'Hx + q'x + constant
//   s.t.      E x = e,  G x <= h.
struct OcpInstance {
  OcpConfig config;
  DiscreteModel model;
  State x0;
  double t0 = 0.0;
  std::vector<double> wave;  // w_0..w_N
  VariableLayout layout;

  Eigen::SparseMatrix<double> hessian;
  Eigen::VectorXd linear;
  double constant = 0.0;

  Eigen::SparseMatrix<double> eq;
  Eigen::VectorXd eq_rhs;
  std::vector<EqualityKind> eq_kind;
  std::vector<int> eq_stage;

  Eigen::SparseMatrix<double> ineq;
  Eigen::VectorXd ineq_rhs;
  std::vector<InequalityKind> ineq_kind;
  std::vector<int> ineq_stage;

  // Typical magnitude of each variable; the solver works in units of these.
  Eigen::VectorXd variable_scale;

  int num_variables() const { return layout.size(); }
  double Objective(const Eigen::VectorXd& x) const;
  Eigen::VectorXd Gradient(const Eigen::VectorXd& x) const;

  // Full point from a control sequence: states by rollout, minimal excess.
  Eigen::VectorXd PointFromControls(std::span<const double> u) const;

  // u = 0 (or the pin), states from the zero-control rollout, alpha = 0.
  Eigen::VectorXd InitialPoint() const;

  double MaxEqualityViolation(const Eigen::VectorXd& x) const;
  double MaxInequalityViolation(const Eigen::VectorXd& x) const;
};

struct ObjectiveBreakdown {
  double energy = 0.0;
  double control_cost = 0.0;
  double smoothness_cost = 0.0;
  double penalty_cost = 0.0;
  double total = 0.0;
};

// Wave samples w_k = wave(t0 + k dt), k = 0..N.
OcpInstance Build(const OcpConfig& config, const DiscreteModel& model,
                  const State& x0, const WaveSpec& wave, double t0);

// Same, from explicit samples (N + 1 of them).
OcpInstance BuildFromSamples(const OcpConfig& config,
                             const DiscreteModel& model, const State& x0,
                             std::vector<double> wave, double t0);

ObjectiveBreakdown Breakdown(const OcpInstance& instance,
                             const Eigen::VectorXd& point);

// The terms evaluated on raw trajectories over nodes 0..M (M >= 1).
ObjectiveBreakdown SliceBreakdown(std::span<const double> u,
                                  std::span<const double> zdot,
                                  std::span<const double> alpha,
                                  const OcpConfig& config);

// Trapezoidal -sum u zdot dt.
double EnergyAbsorbed(std::span<const double> u, std::span<const double> zdot,
                      double dt);

// Text dump of the instance (triplet form) for external readers.
std::string DumpInstance(const OcpInstance& instance);

}  // namespace wecopt::ocp

#endif  // WECOPT_OCP_HPP_
