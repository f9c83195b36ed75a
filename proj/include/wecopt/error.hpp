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

#ifndef WECOPT_ERROR_HPP_
#define WECOPT_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace wecopt {

enum class ErrorCode {
  kInvalidArgument = 1,
  kConfig,
  kIo,
  kSingular,
  kDiverged,
  kSolver,
  kInternal,
};

// All library failures are reported as wecopt::Error. The code survives the
// trip through the C API; the message is meant for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void Require(bool condition, const std::string& what) {
  if (!condition) Fail(ErrorCode::kInvalidArgument, what);
}

}  // namespace wecopt

#endif  // WECOPT_ERROR_HPP_
