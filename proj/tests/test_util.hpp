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


// Shared helpers for the unit tests.

#ifndef WECOPT_TESTS_TEST_UTIL_HPP_
#define WECOPT_TESTS_TEST_UTIL_HPP_

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include <Eigen/Core>

#include "wecopt/error.hpp"

namespace wecopt::testing {

// Normwise relative error of an estimate against a reference.
template <typename A, typename B>
double RelErr(const A& est, const B& ref) {
  return (est - ref).norm() / ref.norm();
}

inline double RelDiff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

// Runs fn and returns the error code it threw, or 0 if it did not throw.
template <typename Fn>
int ErrorCodeOf(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return static_cast<int>(e.code());
  }
  return 0;
}

template <typename Fn>
std::string ErrorMessageOf(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

// Fresh directory under the system temp dir.
inline std::filesystem::path ScratchDir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("wecopt_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace wecopt::testing

#endif  // WECOPT_TESTS_TEST_UTIL_HPP_
