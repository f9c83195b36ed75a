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


#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <doctest.h>
#include <Eigen/Dense>

#include "test_util.hpp"
#include "wecopt/banded_ldlt.hpp"
#include "wecopt/qp_solver.hpp"

namespace wecopt::qp {
namespace {

using testing::ErrorCodeOf;

// Random symmetric band matrix shaped like a KKT system: positive or
// negative diagonal blocks with coupling in the band.
Eigen::MatrixXd RandomBand(int n, int p, std::mt19937_64& rng, double zero_diag) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> pick(0.0, 1.0);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = std::max(0, i - p); j < i; ++j) m(i, j) = m(j, i) = u(rng);
    m(i, i) = pick(rng) < zero_diag ? 0.0 : 3.0 * u(rng);
  }
  return m;
}

BandedLdlt FromDense(const Eigen::MatrixXd& m, int p) {
  BandedLdlt f(static_cast<int>(m.rows()), p);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = std::max(0, i - p); j <= i; ++j) f.Add(i, j, m(i, j));
  }
  return f;
}

Inertia DenseInertia(const Eigen::MatrixXd& m) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  Inertia in;
  const double tol = 1e-10 * eig.eigenvalues().cwiseAbs().maxCoeff();
  for (int i = 0; i < m.rows(); ++i) {
    const double l = eig.eigenvalues()(i);
    if (l > tol) ++in.positive;
    else if (l < -tol) ++in.negative;
    else ++in.zero;
  }
  return in;
}

TEST_SUITE("ldlt") {

TEST_CASE("solve and inertia match dense reference") {
  std::mt19937_64 rng(42);
  int with_two_by_two = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 5 + trial % 23, p = 1 + trial % 5;
    const Eigen::MatrixXd m = RandomBand(n, p, rng, trial % 2 ? 0.5 : 0.0);
    BandedLdlt f = FromDense(m, p);
    const Inertia ref = DenseInertia(m);
    if (ref.zero > 0) continue;
    REQUIRE(f.Factorize());
    CHECK(f.inertia().positive == ref.positive);
    CHECK(f.inertia().negative == ref.negative);
    CHECK(f.inertia().zero == 0);
    with_two_by_two += f.num_two_by_two() > 0;

    Eigen::VectorXd b = Eigen::VectorXd::Random(n);
    const Eigen::VectorXd x_ref = m.fullPivLu().solve(b);
    Eigen::VectorXd x = b;
    f.Solve(x);
    CHECK((x - x_ref).norm() <= 1e-8 * (1.0 + x_ref.norm()));
    CHECK((f.Multiply(x) - b).norm() <= 1e-8 * (1.0 + b.norm()));
  }
  CHECK(with_two_by_two > 0);
}

TEST_CASE("zero diagonal forces a 2x2 pivot") {
  BandedLdlt f(2, 1);
  f.Add(1, 0, 1.0);
  REQUIRE(f.Factorize());
  CHECK(f.num_two_by_two() == 1);
  CHECK(f.inertia().positive == 1);
  CHECK(f.inertia().negative == 1);
  Eigen::VectorXd b(2);
  b << 3.0, -2.0;
  f.Solve(b);
  CHECK(b(0) == doctest::Approx(-2.0));
  CHECK(b(1) == doctest::Approx(3.0));
}

TEST_CASE("singular matrix is reported") {
  BandedLdlt f(3, 1);
  CHECK_FALSE(f.Factorize());
  f.Add(0, 0, 1.0);
  f.Add(1, 0, 1.0);
  f.Add(1, 1, 1.0);
  f.Add(2, 2, 1.0);
  CHECK_FALSE(f.Factorize());
}

TEST_CASE("rows of very different size factor cleanly") {
  // A barrier-like diagonal entry far above the rest must not make the
  // small pivots look singular.
  BandedLdlt f(4, 1);
  f.Add(0, 0, 1e14);
  f.Add(1, 0, 1.0);
  f.Add(1, 1, -1e-6);
  f.Add(2, 1, 1e-6);
  f.Add(2, 2, 2e-6);
  f.Add(3, 3, -1.0);
  REQUIRE(f.Factorize());
  CHECK(f.inertia().zero == 0);
  CHECK(f.inertia().positive + f.inertia().negative == 4);
}

TEST_CASE("band access") {
  BandedLdlt f(4, 2);
  f.Add(0, 2, 5.0);
  CHECK(f.Get(2, 0) == 5.0);
  CHECK(f.Get(0, 2) == 5.0);
  CHECK(f.Get(3, 0) == 0.0);
  CHECK(ErrorCodeOf([&] { f.Add(3, 0, 1.0); }) != 0);
}

}  // TEST_SUITE

const DiscreteModel kModel = ReferenceModelH6T4();

ocp::OcpInstance ZeroWaveInstance(double lambda1) {
  ocp::OcpConfig c;
  c.n_steps = 400;
  c.lambda1 = lambda1;
  return ocp::BuildFromSamples(c, kModel, {}, std::vector<double>(401, 0.0), 0.0);
}

ocp::OcpInstance RandomTiny(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ocp::OcpConfig c;
  c.n_steps = 4;
  c.lambda1 = u(rng) < 0.5 ? 0.0 : 1e-6 * u(rng);
  c.lambda2 = u(rng) < 0.5 ? 0.0 : 1e-6 * u(rng);
  c.eta = 0.1 + 0.9 * u(rng);
  c.rho = u(rng) < 0.3 ? 0.0 : u(rng);
  const State x0{2.0 * u(rng) - 1.0, 2.0 * u(rng) - 1.0};
  WaveSpec w;
  w.phase = 6.28 * u(rng);
  return ocp::Build(c, kModel, x0, w, 10.0 * u(rng));
}

ocp::OcpInstance WaveInstance(double eta, double rho, int n = 400) {
  ocp::OcpConfig c;
  c.n_steps = n;
  c.eta = eta;
  c.rho = rho;
  c.lambda1 = 1e-6;
  c.lambda2 = 1e-6;
  return ocp::Build(c, kModel, {0.3, -0.2}, WaveSpec{}, 0.0);
}

// Worst inequality violation with each row measured in its variable's unit.
double ScaledInequalityViolation(const ocp::OcpInstance& inst,
                                 const Eigen::VectorXd& x) {
  const Eigen::VectorXd r = inst.ineq * x - inst.ineq_rhs;
  double worst = 0.0;
  for (int i = 0; i < r.size(); ++i) {
    const auto kind = inst.ineq_kind[i];
    const bool disp = kind == ocp::InequalityKind::kDisplacementUpper ||
                      kind == ocp::InequalityKind::kDisplacementLower;
    worst = std::max(worst, r(i) / (disp ? inst.config.delta : inst.config.gamma));
  }
  return worst;
}

TEST_SUITE("qpsolver") {

TEST_CASE("settings validation") {
  SolveSettings s;
  CHECK(ErrorCodeOf([&] { s.Validate(); }) == 0);
  s.barrier_shrink = 1.0;
  CHECK(ErrorCodeOf([&] { s.Validate(); }) != 0);
  s = {};
  s.kkt_tol = 0.0;
  CHECK(ErrorCodeOf([&] { s.Validate(); }) != 0);
  s = {};
  s.multistart = 0;
  CHECK(ErrorCodeOf([&] { s.Validate(); }) != 0);
}

TEST_CASE("zero wave gives a positive objective without control cost") {
  SolveSettings s;
  s.multistart = 3;
  const SolveResult free = Solve(ZeroWaveInstance(0.0), s);
  REQUIRE(free.report.status == SolveStatus::kOptimal);
  CHECK(free.report.objective > 1e4);
  CHECK(free.report.objective < 1e6);
  const double peak = free.point.head(401).cwiseAbs().maxCoeff();
  CHECK(peak > 0.0);

  const SolveResult costly = Solve(ZeroWaveInstance(1e-6), s);
  REQUIRE(costly.report.status == SolveStatus::kOptimal);
  CHECK(costly.report.objective <= 0.01 * free.report.objective);
  CHECK(costly.point.head(401).cwiseAbs().maxCoeff() * 100.0 <= peak);
}

TEST_CASE("tiny instances meet the brute-force oracle") {
  std::mt19937_64 rng(1);
  SolveSettings s;
  s.multistart = 4;
  for (int trial = 0; trial < 8; ++trial) {
    const ocp::OcpInstance inst = RandomTiny(rng);
    const SolveResult r = Solve(inst, s);
    CHECK(r.report.status == SolveStatus::kOptimal);
    CHECK(r.report.objective >= BruteForceBest(inst, 9) - 1e-6);
  }
}

TEST_CASE("optimal point is feasible and complementary") {
  for (auto [eta, rho] : {std::pair{1.0, 0.0}, {0.2, 0.5}, {0.1, 1.0}}) {
    const ocp::OcpInstance inst = WaveInstance(eta, rho);
    const SolveResult r = Solve(inst, SolveSettings{});
    REQUIRE(r.report.status == SolveStatus::kOptimal);
    CHECK(r.report.kkt_residual <= SolveSettings{}.kkt_tol);
    CHECK(inst.MaxEqualityViolation(r.point) <= 1e-8);
    CHECK(ScaledInequalityViolation(inst, r.point) <= 1e-8);
    if (rho > 0.0) {
      const Eigen::VectorXd u = inst.layout.Controls(r.point);
      const Eigen::VectorXd a = inst.layout.Excess(r.point);
      for (int k = 0; k < u.size(); ++k) {
        const double want = std::max(std::abs(u(k)) - inst.config.gamma * eta, 0.0);
        CHECK(std::abs(a(k) - want) <= 1e-6 * inst.config.gamma);
      }
    }
    CHECK(r.report.objective == doctest::Approx(inst.Objective(r.point)));
  }
}

TEST_CASE("kkt residual examples") {
  const ocp::OcpInstance inst = WaveInstance(0.5, 0.3, 100);
  const SolveResult r = Solve(inst, SolveSettings{});
  REQUIRE(r.report.status == SolveStatus::kOptimal);
  const double at_opt = KktResidual(inst, r.point, r.multipliers);
  CHECK(at_opt <= SolveSettings{}.kkt_tol);

  Multipliers zero{Eigen::VectorXd::Zero(inst.eq.rows()),
                   Eigen::VectorXd::Zero(inst.ineq.rows())};
  CHECK(KktResidual(inst, inst.InitialPoint(), zero) > 0.0);

  Eigen::VectorXd moved = r.point;
  moved(inst.layout.z(37)) += 1e-3;
  CHECK(KktResidual(inst, moved, r.multipliers) > at_opt);
}

TEST_CASE("same seed gives the same answer") {
  const ocp::OcpInstance inst = WaveInstance(0.3, 0.2, 200);
  SolveSettings s;
  s.multistart = 3;
  s.seed = 99;
  const SolveResult a = Solve(inst, s), b = Solve(inst, s);
  CHECK(a.point == b.point);
  CHECK(a.report.objective == b.report.objective);
  CHECK(a.report.iterations == b.report.iterations);
  CHECK(a.report.kkt_residual == b.report.kkt_residual);
  CHECK(a.report.status == b.report.status);
  CHECK(a.report.multistart_spread == b.report.multistart_spread);
  CHECK(a.report.best_start == b.report.best_start);
}

TEST_CASE("multistart reports the best start") {
  const ocp::OcpInstance inst = ZeroWaveInstance(0.0);
  SolveSettings one;
  SolveSettings many;
  many.multistart = 4;
  const SolveResult a = Solve(inst, one), b = Solve(inst, many);
  CHECK(b.report.objective >= a.report.objective);
  CHECK(b.report.starts == 4);
  CHECK(b.report.multistart_spread >= 0.0);
}

TEST_CASE("warm start reaches the same optimum") {
  const ocp::OcpInstance inst = WaveInstance(1.0, 0.0, 200);
  const SolveResult cold = Solve(inst, SolveSettings{});
  const SolveResult warm = Solve(inst, SolveSettings{}, &cold.point);
  REQUIRE(warm.report.status == SolveStatus::kOptimal);
  CHECK(warm.report.objective ==
        doctest::Approx(cold.report.objective).epsilon(1e-6));
}

TEST_CASE("brute force examples") {
  std::mt19937_64 rng(8);
  const ocp::OcpInstance inst = RandomTiny(rng);
  const double baseline = inst.Objective(inst.InitialPoint());
  CHECK(BruteForceBest(inst, 1) == baseline);
  CHECK(BruteForceBest(inst, 9) >= baseline);
  CHECK(ErrorCodeOf([&] { BruteForceBest(WaveInstance(1, 0, 5), 3); }) != 0);
  CHECK(ErrorCodeOf([&] { BruteForceBest(inst, 12); }) != 0);
}

TEST_CASE("brute force with no feasible grid point") {
  ocp::OcpConfig c;
  c.n_steps = 3;
  c.delta = 0.1;
  const ocp::OcpInstance inst = ocp::Build(c, kModel, {0.0, 0.5}, WaveSpec{}, 0.0);
  CHECK(BruteForceBest(inst, 5) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("infeasible start state") {
  ocp::OcpConfig c;
  c.n_steps = 50;
  const ocp::OcpInstance inst = ocp::Build(c, kModel, {0.0, 5.0}, WaveSpec{}, 0.0);
  const SolveResult r = Solve(inst, SolveSettings{});
  CHECK(r.report.status != SolveStatus::kOptimal);
}

}  // TEST_SUITE

}  // namespace
}  // namespace wecopt::qp
