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

#ifndef WECOPT_PLANT_HPP_
#define WECOPT_PLANT_HPP_

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace wecopt {

// A single regular wave. `height` is crest-to-trough, so the surface
// amplitude is height / 2.
struct WaveSpec {
  double height = 6.0;  // m
  double period = 4.0;  // s
  double phase = 0.0;   // rad

  void Validate() const;
};

// Heave state of the device: velocity first, matching the model's row order.
struct State {
  double velocity = 0.0;  // m/s
  double position = 0.0;  // m

  Eigen::Vector2d vec() const { return {velocity, position}; }
  static State FromVec(const Eigen::Vector2d& v) { return {v(0), v(1)}; }
  bool finite() const;

  friend bool operator==(const State&, const State&) = default;
};

// One-step linear map x+ = A x + b u + c w used by the controller.
struct DiscreteModel {
  Eigen::Matrix2d a = Eigen::Matrix2d::Identity();
  Eigen::Vector2d b = Eigen::Vector2d::Zero();  // per N
  Eigen::Vector2d c = Eigen::Vector2d::Zero();  // per m of wave elevation
  double dt = 0.01;                             // s

  void Validate() const;
  double SpectralRadius() const;
};

// The identified model for H = 6 m, T = 4 s.
DiscreteModel ReferenceModelH6T4();
DiscreteModel ReferenceModelH6T5();
DiscreteModel ReferenceModelH6T6();

// Continuous reduced heave dynamics plus an end-stop spring acting on the
// velocity derivative once |z| exceeds z_es. Stands in for a hydrodynamic
// time-domain simulator when generating identification data.
struct TruthModel {
  Eigen::Matrix2d a_c = Eigen::Matrix2d::Zero();
  Eigen::Vector2d b_c = Eigen::Vector2d::Zero();
  Eigen::Vector2d c_c = Eigen::Vector2d::Zero();
  double k_es = 1e3;  // 1/s^2 per m beyond the stroke limit
  double z_es = 3.0;  // m

  void Validate() const;

  // Velocity-derivative contribution of the end stop at position z.
  double EndStop(double z) const;

  // Forward-Euler map (I + dt a_c, dt b_c, dt c_c).
  DiscreteModel EulerMap(double dt) const;

  // Inverse of EulerMap: the continuous model whose Euler map at model.dt is
  // `model`.
  static TruthModel FromDiscrete(const DiscreteModel& model, double k_es = 1e3,
                                 double z_es = 3.0);
};

enum class SimMode { kDiscreteExact, kContinuousRk4 };

// RK4 substeps per sample interval.
inline constexpr int kRk4Substeps = 10;

double WaveElevation(const WaveSpec& spec, double t);

State DiscreteStep(const DiscreteModel& model, const State& x, double u,
                   double w);

// Returns u.size() + 1 states, the first being x0.
std::vector<State> DiscreteRollout(const DiscreteModel& model, const State& x0,
                                   std::span<const double> u,
                                   std::span<const double> w);

// How the truth simulator reads the control signal between samples.
enum class ControlHold {
  kContinuous,     // evaluated at every integration stage
  kZeroOrderHold,  // evaluated once per sample and held
};

struct ControlSignal {
  std::function<double(double t)> fn;
  ControlHold hold = ControlHold::kZeroOrderHold;

  static ControlSignal Zero();
  static ControlSignal Sinusoid(double amplitude, double period,
                                double shift = 0.0);
};

// Sampled trajectory; column layout matches the trajectory CSV
// (t,u,zdot,z,w). u[k] is the control in effect at t[k].
struct Trajectory {
  std::vector<double> t, u, zdot, z, w;

  std::size_t size() const { return t.size(); }
  State state(std::size_t k) const { return {zdot[k], z[k]}; }
  std::vector<State> states() const;
  void Append(double time, double control, const State& x, double wave);
};

// Advances the truth plant over one sample interval [t, t + dt].
class TruthPlant {
 public:
  TruthPlant(TruthModel model, SimMode mode, double dt);

  State Step(const State& x, double t, const ControlSignal& u,
             const std::optional<WaveSpec>& wave) const;

  const TruthModel& model() const { return model_; }
  SimMode mode() const { return mode_; }
  double dt() const { return dt_; }

 private:
  Eigen::Vector2d Derivative(const Eigen::Vector2d& x, double u,
                             double w) const;

  TruthModel model_;
  SimMode mode_;
  double dt_;
  DiscreteModel euler_;
};

// Samples the truth plant every sample_dt from t0 for `duration` seconds.
// Throws ErrorCode::kDiverged if the state stops being finite.
Trajectory TruthRollout(const TruthModel& model, SimMode mode, const State& x0,
                        const ControlSignal& u,
                        const std::optional<WaveSpec>& wave, double duration,
                        double sample_dt, double t0 = 0.0);

}  // namespace wecopt

#endif  // WECOPT_PLANT_HPP_
