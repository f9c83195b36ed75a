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
#include <random>
#include <string>
#include <vector>

#include <doctest.h>

#include "test_util.hpp"
#include "wecopt/cost_model.hpp"

namespace wecopt::costmodel {
namespace {

using testing::ErrorCodeOf;
using testing::RelDiff;

std::vector<DampingSample> Hyperbolic(double a, double c, int n = 30) {
  std::vector<DampingSample> s;
  for (int i = 0; i < n; ++i) {
    const double b = 200.0 * std::pow(500.0, i / (n - 1.0));
    s.push_back({b, a / (b + c)});
  }
  return s;
}

FitResult ByFamily(const std::vector<FitResult>& fits, Family f) {
  for (const auto& r : fits) {
    if (r.family == f) return r;
  }
  FAIL("family missing");
  return {};
}

TEST_SUITE("costmodel") {

TEST_CASE("hyperbolic data is recovered and wins") {
  const auto fits = FitFamilies(Hyperbolic(1330.2, 9158.7));
  REQUIRE(fits.size() == 4);
  CHECK(fits.front().family == Family::kHyperbolic);
  CHECK(RelDiff(fits.front().parameters[0], 1330.2) <= 1e-9);
  CHECK(RelDiff(fits.front().parameters[1], 9158.7) <= 1e-9);
  for (std::size_t i = 0; i < fits.size(); ++i) {
    CHECK(fits[i].r_squared <= 1.0);
    if (i > 0) CHECK(fits[i - 1].r_squared >= fits[i].r_squared);
  }
}

TEST_CASE("exponential data picks the exponential family") {
  std::vector<DampingSample> s;
  for (int i = 0; i < 25; ++i) {
    const double b = 1000.0 + 1200.0 * i;
    s.push_back({b, 0.2 * std::exp(-1.3e-4 * b)});
  }
  const auto fits = FitFamilies(s);
  CHECK(fits.front().family == Family::kExponential);
  CHECK(RelDiff(fits.front().parameters[1], 1.3e-4) <= 1e-9);
}

TEST_CASE("sample checks") {
  auto two = Hyperbolic(1.0, 1.0, 2);
  CHECK(ErrorCodeOf([&] { FitFamilies(two); }) != 0);
  auto dup = Hyperbolic(1.0, 1.0, 5);
  dup[3].damping = dup[2].damping;
  CHECK(ErrorCodeOf([&] { FitFamilies(dup); }) != 0);
  auto neg = Hyperbolic(1.0, 1.0, 5);
  neg[1].mean_sq_velocity = -1.0;
  CHECK(ErrorCodeOf([&] { FitFamilies(neg); }) != 0);
}

TEST_CASE("fitted hyperbolic model has the four properties") {
  const FitResult fit = FitFamily(Family::kHyperbolic, Hyperbolic(1330.2, 9158.7));
  const double a = fit.parameters[0], c = fit.parameters[1];
  double prev_v = INFINITY, prev_p = 0.0;
  for (int i = 0; i <= 60; ++i) {
    const double b = std::pow(10.0, -2.0 + 0.2 * i);
    const double v = fit.Predict(b);
    CHECK(v < prev_v);
    CHECK(b * v > prev_p);
    prev_v = v;
    prev_p = b * v;
  }
  CHECK(fit.Predict(1e12) < 1e-8 * a / c);
  CHECK(RelDiff(fit.Predict(1e-9), a / c) <= 1e-9);
}

TEST_CASE("r squared ignores sample order") {
  std::vector<DampingSample> s = Hyperbolic(1330.2, 9158.7, 20);
  std::mt19937_64 rng(4);
  std::lognormal_distribution<double> noise(0.0, 0.02);
  for (auto& p : s) p.mean_sq_velocity *= noise(rng);
  const auto base = FitFamilies(s);
  std::shuffle(s.begin(), s.end(), rng);
  const auto shuffled = FitFamilies(s);
  for (Family f : {Family::kHyperbolic, Family::kExponential,
                   Family::kLogarithmic, Family::kPolynomial}) {
    CHECK(RelDiff(ByFamily(base, f).r_squared, ByFamily(shuffled, f).r_squared) <=
          1e-10);
  }
}

TEST_CASE("power force exponent") {
  const FitResult paper = FitFamily(Family::kHyperbolic, Hyperbolic(1330.2, 9158.7));
  CHECK(std::abs(PowerForceExponent(paper, 1e5, 1e8) - 2.0) <= 0.05);

  const FitResult unit = FitFamily(Family::kHyperbolic, Hyperbolic(3.0, 1.0));
  CHECK(std::abs(PowerForceExponent(unit, 1e3, 1e6) - 2.0) <= 0.05);

  // Below c the curve is far from the asymptote.
  const double low = PowerForceExponent(paper, 1.0, 100.0);
  CHECK(std::isfinite(low));
  CHECK(std::abs(low - 2.0) > 0.05);

  CHECK(ErrorCodeOf([&] { PowerForceExponent(paper, 1e8, 1e5); }) != 0);
  CHECK(ErrorCodeOf([&] { PowerForceExponent(paper, 0.0, 1e5); }) != 0);
  const FitResult expo = FitFamily(Family::kExponential, Hyperbolic(3.0, 1.0));
  CHECK(ErrorCodeOf([&] { PowerForceExponent(expo, 1e3, 1e6); }) != 0);
}

TEST_CASE("samples csv") {
  const auto s = ParseSamplesCsv("damping,mean_sq_velocity\n100,0.5\n200, 0.25\n\n");
  REQUIRE(s.size() == 2);
  CHECK(s[1].damping == 200.0);
  CHECK(s[1].mean_sq_velocity == 0.25);

  const std::string msg = testing::ErrorMessageOf([] {
    ParseSamplesCsv("damping,mean_sq_velocity\n1,2\n3,abc\n", "f.csv");
  });
  CHECK(msg.find("f.csv:3") != std::string::npos);
  CHECK(ErrorCodeOf([] { ParseSamplesCsv(""); }) != 0);
  CHECK(ErrorCodeOf([] { ParseSamplesCsv("damping,mean_sq_velocity\n"); }) != 0);
  CHECK(ErrorCodeOf([] { ParseSamplesCsv("b,v\n1,2\n"); }) != 0);
  CHECK(ErrorCodeOf([] { ParseSamplesCsv("damping,mean_sq_velocity\n1,2,3\n"); }) != 0);
}

TEST_CASE("shipped dataset") {
  const auto s = LoadSamplesCsv(WECOPT_DATA_DIR "/damping_samples.csv");
  CHECK(s.size() == 40);
  const auto fits = FitFamilies(s);
  CHECK(fits.front().family == Family::kHyperbolic);
}

}  // TEST_SUITE

}  // namespace
}  // namespace wecopt::costmodel
