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


#ifndef WECOPT_COST_MODEL_HPP_
#define WECOPT_COST_MODEL_HPP_

#include <filesystem>
#include <string>
#include <vector>

namespace wecopt::costmodel {

struct DampingSample {
  double damping = 0.0;           // N s/m
  double mean_sq_velocity = 0.0;  // m^2/s^2
};

enum class Family { kHyperbolic, kExponential, kLogarithmic, kPolynomial };

const char* ToString(Family family);

// Parameters per family:
//   hyperbolic   v2 = a / (b + c)        {a, c}
//   exponential  v2 = p exp(-q b)        {p, q}
//   logarithmic  v2 = p - q log(b)       {p, q}
//   polynomial   v2 = c0 + c1 b + c2 b^2 {c0, c1, c2}
struct FitResult {
  Family family = Family::kHyperbolic;
  std::vector<double> parameters;
  double r_squared = 0.0;  // on v2 itself; -inf if the fit is unusable

  double Predict(double damping) const;
};

// All four families, best R^2 first.
std::vector<FitResult> FitFamilies(const std::vector<DampingSample>& samples);

FitResult FitFamily(Family family, const std::vector<DampingSample>& samples);

// Slope of log P against log |F| over a log-spaced damping grid, taking the
// consumed power P proportional to b and the damping force |F| = b |zdot|.
double PowerForceExponent(const FitResult& hyperbolic, double b_lo, double b_hi,
                          int points = 200);

// CSV with header damping,mean_sq_velocity.
std::vector<DampingSample> ParseSamplesCsv(const std::string& text,
                                           const std::string& origin = "<string>");
std::vector<DampingSample> LoadSamplesCsv(const std::filesystem::path& path);

}  // namespace wecopt::costmodel

#endif  // WECOPT_COST_MODEL_HPP_
