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

#include "wecopt/plant.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "wecopt/error.hpp"

namespace wecopt {

void WaveSpec::Validate() const {
  Require(std::isfinite(height) && height > 0.0, "wave height must be > 0");
  Require(std::isfinite(period) && period > 0.0, "wave period must be > 0");
  Require(std::isfinite(phase), "wave phase must be finite");
}

bool State::finite() const {
  return std::isfinite(velocity) && std::isfinite(position);
}

void DiscreteModel::Validate() const {
  Require(a.allFinite() && b.allFinite() && c.allFinite(),
          "model coefficients must be finite");
  Require(std::isfinite(dt) && dt > 0.0, "model dt must be > 0");
  const double radius = SpectralRadius();
  if (radius > 1.0 + 1e-6) {
    std::ostringstream msg;
    msg << "model is unstable: spectral radius of A is " << radius;
    Fail(ErrorCode::kInvalidArgument, msg.str());
  }
}

double DiscreteModel::SpectralRadius() const {
  return a.eigenvalues().cwiseAbs().maxCoeff();
}

namespace {

DiscreteModel MakeReference(double b1, double b2, double c1, double c2) {
  DiscreteModel m;
  m.a << 0.9939, -0.0378, 0.00997, 0.9998;
  m.b << b1, b2;
  m.c << c1, c2;
  m.dt = 0.01;
  return m;
}

}  // namespace

DiscreteModel ReferenceModelH6T4() {
  return MakeReference(0.0123e-6, 6.1785e-11, 0.0045, 2.2480e-5);
}

DiscreteModel ReferenceModelH6T5() {
  return MakeReference(0.0325e-6, 1.6256e-10, 0.0142, 7.0887e-5);
}

DiscreteModel ReferenceModelH6T6() {
  return MakeReference(0.0429e-6, 2.1485e-10, 0.0204, 1.0219e-4);
}

void TruthModel::Validate() const {
  Require(a_c.allFinite() && b_c.allFinite() && c_c.allFinite(),
          "truth model coefficients must be finite");
  const double max_real = a_c.eigenvalues().real().maxCoeff();
  Require(max_real <= 1e-12,
          "truth model drift has an eigenvalue with positive real part");
  Require(std::isfinite(k_es) && k_es >= 0.0, "end-stop gain must be >= 0");
  Require(std::isfinite(z_es) && z_es > 0.0, "stroke limit must be > 0");
}

double TruthModel::EndStop(double z) const {
  if (z < -z_es) return -k_es * (z + z_es);
  if (z > z_es) return -k_es * (z - z_es);
  return 0.0;
}

DiscreteModel TruthModel::EulerMap(double dt) const {
  DiscreteModel m;
  m.a = Eigen::Matrix2d::Identity() + dt * a_c;
  m.b = dt * b_c;
  m.c = dt * c_c;
  m.dt = dt;
  return m;
}

TruthModel TruthModel::FromDiscrete(const DiscreteModel& model, double k_es,
                                    double z_es) {
  TruthModel t;
  t.a_c = (model.a - Eigen::Matrix2d::Identity()) / model.dt;
  t.b_c = model.b / model.dt;
  t.c_c = model.c / model.dt;
  t.k_es = k_es;
  t.z_es = z_es;
  return t;
}

double WaveElevation(const WaveSpec& spec, double t) {
  return 0.5 * spec.height *
         std::sin(2.0 * std::numbers::pi * t / spec.period + spec.phase);
}

State DiscreteStep(const DiscreteModel& model, const State& x, double u,
                   double w) {
  return State::FromVec(model.a * x.vec() + model.b * u + model.c * w);
}

std::vector<State> DiscreteRollout(const DiscreteModel& model, const State& x0,
                                   std::span<const double> u,
                                   std::span<const double> w) {
  Require(u.size() == w.size(),
          "rollout needs as many wave samples as controls");
  std::vector<State> out;
  out.reserve(u.size() + 1);
  out.push_back(x0);
  for (std::size_t k = 0; k < u.size(); ++k) {
    out.push_back(DiscreteStep(model, out.back(), u[k], w[k]));
  }
  return out;
}

ControlSignal ControlSignal::Zero() {
  return {[](double) { return 0.0; }, ControlHold::kZeroOrderHold};
}

ControlSignal ControlSignal::Sinusoid(double amplitude, double period,
                                      double shift) {
  return {[=](double t) {
            return amplitude *
                   std::sin(2.0 * std::numbers::pi * (t + shift) / period);
          },
          ControlHold::kContinuous};
}

std::vector<State> Trajectory::states() const {
  std::vector<State> out(size());
  for (std::size_t k = 0; k < size(); ++k) out[k] = state(k);
  return out;
}

void Trajectory::Append(double time, double control, const State& x,
                        double wave) {
  t.push_back(time);
  u.push_back(control);
  zdot.push_back(x.velocity);
  z.push_back(x.position);
  w.push_back(wave);
}

TruthPlant::TruthPlant(TruthModel model, SimMode mode, double dt)
    : model_(std::move(model)), mode_(mode), dt_(dt) {
  model_.Validate();
  Require(std::isfinite(dt) && dt > 0.0, "sample_dt must be > 0");
  euler_ = model_.EulerMap(dt);
}

Eigen::Vector2d TruthPlant::Derivative(const Eigen::Vector2d& x, double u,
                                       double w) const {
  Eigen::Vector2d dx = model_.a_c * x + model_.b_c * u + model_.c_c * w;
  dx(0) += model_.EndStop(x(1));
  return dx;
}

State TruthPlant::Step(const State& x, double t, const ControlSignal& u,
                       const std::optional<WaveSpec>& wave) const {
  auto wave_at = [&](double s) { return wave ? WaveElevation(*wave, s) : 0.0; };

  if (mode_ == SimMode::kDiscreteExact) {
    State next = DiscreteStep(euler_, x, u.fn(t), wave_at(t));
    const double push = model_.EndStop(x.position);
    if (push != 0.0) next.velocity += dt_ * push;
    return next;
  }

  const double h = dt_ / kRk4Substeps;
  const double held = u.fn(t);
  auto control_at = [&](double s) {
    return u.hold == ControlHold::kZeroOrderHold ? held : u.fn(s);
  };
  Eigen::Vector2d y = x.vec();
  for (int i = 0; i < kRk4Substeps; ++i) {
    const double s = t + i * h;
    const double u0 = control_at(s), um = control_at(s + 0.5 * h),
                 u1 = control_at(s + h);
    const double w0 = wave_at(s), wm = wave_at(s + 0.5 * h), w1 = wave_at(s + h);
    const Eigen::Vector2d k1 = Derivative(y, u0, w0);
    const Eigen::Vector2d k2 = Derivative(y + 0.5 * h * k1, um, wm);
    const Eigen::Vector2d k3 = Derivative(y + 0.5 * h * k2, um, wm);
    const Eigen::Vector2d k4 = Derivative(y + h * k3, u1, w1);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return State::FromVec(y);
}

Trajectory TruthRollout(const TruthModel& model, SimMode mode, const State& x0,
                        const ControlSignal& u,
                        const std::optional<WaveSpec>& wave, double duration,
                        double sample_dt, double t0) {
  Require(std::isfinite(duration) && duration >= 0.0,
          "rollout duration must be >= 0");
  if (wave) wave->Validate();
  const TruthPlant plant(model, mode, sample_dt);
  const auto steps = static_cast<std::size_t>(std::llround(duration / sample_dt));

  Trajectory traj;
  State x = x0;
  for (std::size_t k = 0;; ++k) {
    const double t = t0 + static_cast<double>(k) * sample_dt;
    if (!x.finite()) {
      std::ostringstream msg;
      msg << "truth simulation diverged at step " << k << " (t = " << t << ")";
      Fail(ErrorCode::kDiverged, msg.str());
    }
    traj.Append(t, u.fn(t), x, wave ? WaveElevation(*wave, t) : 0.0);
    if (k == steps) break;
    x = plant.Step(x, t, u, wave);
  }
  return traj;
}

}  // namespace wecopt
