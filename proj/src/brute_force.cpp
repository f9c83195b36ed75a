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
#include <limits>
#include <vector>

#include "wecopt/error.hpp"
#include "wecopt/qp_solver.hpp"

namespace wecopt::qp {

// Enumerates the grid with its own recurrence and sums so that it shares no
// code path with the quadratic form the solver sees.
double BruteForceBest(const ocp::OcpInstance& inst, int levels) {
  const auto& cfg = inst.config;
  const int n = inst.layout.n_steps;
  Require(n + 1 <= 5, "brute force: at most 5 controls");
  Require(levels >= 1 && levels <= 11, "brute force: levels must be 1..11");
  const double gamma = cfg.gamma;
  std::vector<double> grid(levels, 0.0);
  if (levels > 1) {
    for (int i = 0; i < levels; ++i) {
      grid[i] = -gamma + 2.0 * gamma * i / (levels - 1);
    }
  }
  const auto& A = inst.model.a;
  const auto& b = inst.model.b;
  const auto& c = inst.model.c;
  const double dt = cfg.dt;
  const double soft = gamma * cfg.eta;

  std::vector<int> idx(n + 1, 0);
  std::vector<double> u(n + 1), v(n + 2), z(n + 2);
  double best = -std::numeric_limits<double>::infinity();
  while (true) {
    for (int k = 0; k <= n; ++k) u[k] = grid[idx[k]];
    if (cfg.u_init) u[0] = *cfg.u_init;
    v[0] = inst.x0.velocity;
    z[0] = inst.x0.position;
    bool ok = std::abs(z[0]) <= cfg.delta;
    for (int k = 0; k <= n && ok; ++k) {
      v[k + 1] = A(0, 0) * v[k] + A(0, 1) * z[k] + b(0) * u[k] + c(0) * inst.wave[k];
      z[k + 1] = A(1, 0) * v[k] + A(1, 1) * z[k] + b(1) * u[k] + c(1) * inst.wave[k];
      ok = std::abs(z[k + 1]) <= cfg.delta;
    }
    if (ok) {
      double energy = 0.0, effort = 0.0, excess = 0.0, rough = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double a0 = std::max(std::abs(u[k - 1]) - soft, 0.0);
        const double a1 = std::max(std::abs(u[k]) - soft, 0.0);
        energy -= 0.5 * (u[k - 1] * v[k - 1] + u[k] * v[k]) * dt;
        effort += 0.5 * (u[k - 1] * u[k - 1] + u[k] * u[k]) * dt;
        excess += 0.5 * (a0 + a1) * dt;
        rough += (u[k] - u[k - 1]) * (u[k] - u[k - 1]);
      }
      const double total = energy - cfg.lambda1 * effort -
                           cfg.lambda2 / dt * rough - cfg.rho * excess +
                           inst.constant;
      best = std::max(best, total);
    }
    int k = 0;
    while (k <= n && ++idx[k] == levels) idx[k++] = 0;
    if (k > n) break;
  }
  return best;
}

}  // namespace wecopt::qp
