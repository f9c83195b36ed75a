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

#include "wecopt/ocp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wecopt/error.hpp"
#include "wecopt/io.hpp"

namespace wecopt::ocp {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// Trapezoid weight of node k on nodes 0..n.
double TrapWeight(int k, int n) { return (k == 0 || k == n) ? 0.5 : 1.0; }

Eigen::SparseMatrix<double> FromTriplets(int rows, int cols,
                                         const Triplets& t) {
  Eigen::SparseMatrix<double> m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

void AppendTriplets(std::ostringstream& out,
                    const Eigen::SparseMatrix<double>& m) {
  for (int col = 0; col < m.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, col); it; ++it) {
      out << it.row() << ' ' << it.col() << ' ' << FormatDouble(it.value())
          << '\n';
    }
  }
}

}  // namespace

void OcpConfig::Validate() const {
  std::vector<std::string> bad;
  if (!(gamma > 0.0) || !std::isfinite(gamma)) bad.push_back("gamma");
  if (!(delta > 0.0) || !std::isfinite(delta)) bad.push_back("delta");
  if (!(eta > 0.0 && eta <= 1.0)) bad.push_back("eta");
  if (!(rho >= 0.0) || !std::isfinite(rho)) bad.push_back("rho");
  if (!(lambda1 >= 0.0) || !std::isfinite(lambda1)) bad.push_back("lambda1");
  if (!(lambda2 >= 0.0) || !std::isfinite(lambda2)) bad.push_back("lambda2");
  if (n_steps < 2) bad.push_back("n_steps");
  if (!(dt > 0.0) || !std::isfinite(dt)) bad.push_back("dt");
  if (u_init && !std::isfinite(*u_init)) bad.push_back("u_init");
  if (!bad.empty()) {
    std::string msg = "invalid OCP config field(s):";
    for (const auto& f : bad) msg += " " + f;
    Fail(ErrorCode::kInvalidArgument, msg);
  }
}

const char* ToString(InequalityKind kind) {
  switch (kind) {
    case InequalityKind::kForceUpper: return "force_upper";
    case InequalityKind::kForceLower: return "force_lower";
    case InequalityKind::kDisplacementUpper: return "displacement_upper";
    case InequalityKind::kDisplacementLower: return "displacement_lower";
    case InequalityKind::kSoftUpper: return "soft_upper";
    case InequalityKind::kSoftLower: return "soft_lower";
    case InequalityKind::kExcessNonNegative: return "excess_nonnegative";
    case InequalityKind::kExcessCap: return "excess_cap";
  }
  return "unknown";
}

Eigen::VectorXd VariableLayout::Controls(const Eigen::VectorXd& x) const {
  return x.segment(u(0), n_steps + 1);
}
Eigen::VectorXd VariableLayout::Velocities(const Eigen::VectorXd& x) const {
  return x.segment(zdot(0), n_steps + 2);
}
Eigen::VectorXd VariableLayout::Positions(const Eigen::VectorXd& x) const {
  return x.segment(z(0), n_steps + 2);
}
Eigen::VectorXd VariableLayout::Excess(const Eigen::VectorXd& x) const {
  return x.segment(alpha(0), n_steps + 1);
}

OcpInstance Build(const OcpConfig& config, const DiscreteModel& model,
                  const State& x0, const WaveSpec& wave, double t0) {
  config.Validate();
  wave.Validate();
  std::vector<double> w(config.n_steps + 1);
  for (int k = 0; k <= config.n_steps; ++k) {
    w[k] = WaveElevation(wave, t0 + k * config.dt);
  }
  return BuildFromSamples(config, model, x0, std::move(w), t0);
}

OcpInstance BuildFromSamples(const OcpConfig& config,
                             const DiscreteModel& model, const State& x0,
                             std::vector<double> wave, double t0) {
  config.Validate();
  model.Validate();
  Require(x0.finite(), "initial state must be finite");
  const int n = config.n_steps;
  Require(static_cast<int>(wave.size()) == n + 1,
          "OCP needs N + 1 wave samples");
  Require(std::abs(model.dt - config.dt) <= 1e-9 * config.dt,
          "OCP dt does not match the model's dt");

  OcpInstance inst;
  inst.config = config;
  inst.model = model;
  inst.x0 = x0;
  inst.t0 = t0;
  inst.wave = std::move(wave);
  inst.layout.n_steps = n;
  const VariableLayout& L = inst.layout;
  const int nv = L.size();
  const double dt = config.dt;

  // Objective.
  Triplets h;
  inst.linear = Eigen::VectorXd::Zero(nv);
  for (int k = 0; k <= n; ++k) {
    const double wk = TrapWeight(k, n);
    h.emplace_back(L.u(k), L.zdot(k), -dt * wk);
    h.emplace_back(L.zdot(k), L.u(k), -dt * wk);
    if (config.lambda1 > 0.0) {
      h.emplace_back(L.u(k), L.u(k), -2.0 * config.lambda1 * dt * wk);
    }
    inst.linear(L.alpha(k)) = -config.rho * dt * wk;
  }
  if (config.lambda2 > 0.0) {
    const double s = 2.0 * config.lambda2 / dt;
    for (int k = 1; k <= n; ++k) {
      h.emplace_back(L.u(k), L.u(k), -s);
      h.emplace_back(L.u(k - 1), L.u(k - 1), -s);
      h.emplace_back(L.u(k), L.u(k - 1), s);
      h.emplace_back(L.u(k - 1), L.u(k), s);
    }
  }
  inst.hessian = FromTriplets(nv, nv, h);

  // Equalities.
  Triplets e;
  std::vector<double> rhs;
  auto add_eq = [&](EqualityKind kind, int stage, double value) {
    inst.eq_kind.push_back(kind);
    inst.eq_stage.push_back(stage);
    rhs.push_back(value);
    return static_cast<int>(rhs.size()) - 1;
  };
  int r = add_eq(EqualityKind::kInitialState, 0, x0.velocity);
  e.emplace_back(r, L.zdot(0), 1.0);
  r = add_eq(EqualityKind::kInitialState, 0, x0.position);
  e.emplace_back(r, L.z(0), 1.0);
  for (int k = 0; k <= n; ++k) {
    const int idx[2] = {L.zdot(k + 1), L.z(k + 1)};
    for (int i = 0; i < 2; ++i) {
      r = add_eq(EqualityKind::kDynamics, k + 1, model.c(i) * inst.wave[k]);
      e.emplace_back(r, idx[i], 1.0);
      e.emplace_back(r, L.zdot(k), -model.a(i, 0));
      e.emplace_back(r, L.z(k), -model.a(i, 1));
      e.emplace_back(r, L.u(k), -model.b(i));
    }
  }
  if (config.u_init) {
    r = add_eq(EqualityKind::kControlPin, 0, *config.u_init);
    e.emplace_back(r, L.u(0), 1.0);
  }
  inst.eq = FromTriplets(static_cast<int>(rhs.size()), nv, e);
  inst.eq_rhs = Eigen::Map<Eigen::VectorXd>(rhs.data(), rhs.size());

  // Inequalities, grouped by family.
  Triplets g;
  rhs.clear();
  auto add_ineq = [&](InequalityKind kind, int stage, double bound) {
    inst.ineq_kind.push_back(kind);
    inst.ineq_stage.push_back(stage);
    rhs.push_back(bound);
    return static_cast<int>(rhs.size()) - 1;
  };
  const double soft = config.gamma * config.eta;
  for (int k = 0; k <= n; ++k) {
    g.emplace_back(add_ineq(InequalityKind::kForceUpper, k, config.gamma),
                   L.u(k), 1.0);
  }
  for (int k = 0; k <= n; ++k) {
    g.emplace_back(add_ineq(InequalityKind::kForceLower, k, config.gamma),
                   L.u(k), -1.0);
  }
  for (int k = 0; k <= n + 1; ++k) {
    g.emplace_back(
        add_ineq(InequalityKind::kDisplacementUpper, k, config.delta), L.z(k),
        1.0);
  }
  for (int k = 0; k <= n + 1; ++k) {
    g.emplace_back(
        add_ineq(InequalityKind::kDisplacementLower, k, config.delta), L.z(k),
        -1.0);
  }
  for (int k = 0; k <= n; ++k) {
    r = add_ineq(InequalityKind::kSoftUpper, k, soft);
    g.emplace_back(r, L.u(k), 1.0);
    g.emplace_back(r, L.alpha(k), -1.0);
  }
  for (int k = 0; k <= n; ++k) {
    r = add_ineq(InequalityKind::kSoftLower, k, soft);
    g.emplace_back(r, L.u(k), -1.0);
    g.emplace_back(r, L.alpha(k), -1.0);
  }
  for (int k = 0; k <= n; ++k) {
    g.emplace_back(add_ineq(InequalityKind::kExcessNonNegative, k, 0.0),
                   L.alpha(k), -1.0);
  }
  for (int k = 0; k <= n; ++k) {
    g.emplace_back(add_ineq(InequalityKind::kExcessCap, k, config.gamma),
                   L.alpha(k), 1.0);
  }
  inst.ineq = FromTriplets(static_cast<int>(rhs.size()), nv, g);
  inst.ineq_rhs = Eigen::Map<Eigen::VectorXd>(rhs.data(), rhs.size());

  inst.variable_scale = Eigen::VectorXd::Ones(nv);
  for (int k = 0; k <= n; ++k) {
    inst.variable_scale(L.u(k)) = config.gamma;
    inst.variable_scale(L.alpha(k)) = config.gamma;
  }
  for (int k = 0; k <= n + 1; ++k) inst.variable_scale(L.z(k)) = config.delta;
  return inst;
}

double OcpInstance::Objective(const Eigen::VectorXd& x) const {
  Require(x.size() == num_variables(), "point dimension mismatch");
  return 0.5 * x.dot(hessian * x) + linear.dot(x) + constant;
}

Eigen::VectorXd OcpInstance::Gradient(const Eigen::VectorXd& x) const {
  Require(x.size() == num_variables(), "point dimension mismatch");
  return hessian * x + linear;
}

Eigen::VectorXd OcpInstance::PointFromControls(
    std::span<const double> u) const {
  const int n = layout.n_steps;
  Require(static_cast<int>(u.size()) == n + 1, "need N + 1 controls");
  const auto states = DiscreteRollout(model, x0, u, wave);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(num_variables());
  const double soft = config.gamma * config.eta;
  for (int k = 0; k <= n; ++k) {
    x(layout.u(k)) = u[k];
    x(layout.alpha(k)) = std::max(std::abs(u[k]) - soft, 0.0);
  }
  for (int k = 0; k <= n + 1; ++k) {
    x(layout.zdot(k)) = states[k].velocity;
    x(layout.z(k)) = states[k].position;
  }
  return x;
}

Eigen::VectorXd OcpInstance::InitialPoint() const {
  std::vector<double> u(layout.n_steps + 1, 0.0);
  if (config.u_init) u[0] = *config.u_init;
  return PointFromControls(u);
}

double OcpInstance::MaxEqualityViolation(const Eigen::VectorXd& x) const {
  return (eq * x - eq_rhs).cwiseAbs().maxCoeff();
}

double OcpInstance::MaxInequalityViolation(const Eigen::VectorXd& x) const {
  return std::max(0.0, (ineq * x - ineq_rhs).maxCoeff());
}

double EnergyAbsorbed(std::span<const double> u, std::span<const double> zdot,
                      double dt) {
  Require(u.size() == zdot.size(), "energy: length mismatch");
  Require(u.size() >= 2, "energy: need at least two nodes");
  const int n = static_cast<int>(u.size()) - 1;
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) sum += TrapWeight(k, n) * u[k] * zdot[k];
  return -dt * sum;
}

ObjectiveBreakdown SliceBreakdown(std::span<const double> u,
                                  std::span<const double> zdot,
                                  std::span<const double> alpha,
                                  const OcpConfig& config) {
  Require(u.size() == zdot.size() && u.size() == alpha.size(),
          "breakdown: length mismatch");
  const int n = static_cast<int>(u.size()) - 1;
  const double dt = config.dt;
  ObjectiveBreakdown out;
  out.energy = EnergyAbsorbed(u, zdot, dt);
  double sq = 0.0, excess = 0.0, diff = 0.0;
  for (int k = 0; k <= n; ++k) {
    sq += TrapWeight(k, n) * u[k] * u[k];
    excess += TrapWeight(k, n) * alpha[k];
    if (k > 0) diff += (u[k] - u[k - 1]) * (u[k] - u[k - 1]);
  }
  out.control_cost = config.lambda1 * dt * sq;
  out.smoothness_cost = config.lambda2 / dt * diff;
  out.penalty_cost = config.rho * dt * excess;
  out.total =
      out.energy - out.control_cost - out.smoothness_cost - out.penalty_cost;
  return out;
}

ObjectiveBreakdown Breakdown(const OcpInstance& instance,
                             const Eigen::VectorXd& point) {
  Require(point.size() == instance.num_variables(),
          "breakdown: point dimension does not match the layout");
  const auto& L = instance.layout;
  const Eigen::VectorXd u = L.Controls(point);
  const Eigen::VectorXd v = point.segment(L.zdot(0), L.n_steps + 1);
  const Eigen::VectorXd a = L.Excess(point);
  ObjectiveBreakdown out = SliceBreakdown(
      {u.data(), static_cast<std::size_t>(u.size())},
      {v.data(), static_cast<std::size_t>(v.size())},
      {a.data(), static_cast<std::size_t>(a.size())}, instance.config);
  out.total += instance.constant;
  return out;
}

std::string DumpInstance(const OcpInstance& inst) {
  std::ostringstream out;
  out << "# wecopt OCP instance: maximize 0.5 x'Hx + q'x + constant"
         " s.t. E x = e, G x <= h\n";
  out << "variables " << inst.num_variables() << "\n";
  out << "constant " << FormatDouble(inst.constant) << "\n";
  out << "hessian " << inst.hessian.nonZeros() << "\n";
  AppendTriplets(out, inst.hessian);
  out << "linear " << inst.linear.size() << "\n";
  for (int i = 0; i < inst.linear.size(); ++i) {
    out << FormatDouble(inst.linear(i)) << "\n";
  }
  out << "equalities " << inst.eq.rows() << " " << inst.eq.nonZeros() << "\n";
  AppendTriplets(out, inst.eq);
  for (int i = 0; i < inst.eq_rhs.size(); ++i) {
    out << FormatDouble(inst.eq_rhs(i)) << "\n";
  }
  out << "inequalities " << inst.ineq.rows() << " " << inst.ineq.nonZeros()
      << "\n";
  AppendTriplets(out, inst.ineq);
  for (int i = 0; i < inst.ineq_rhs.size(); ++i) {
    out << FormatDouble(inst.ineq_rhs(i)) << "\n";
  }
  return out.str();
}

}  // namespace wecopt::ocp
