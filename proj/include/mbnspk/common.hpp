// mbnspk/common.hpp

// Copyright 2026  The mbnspk Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef MBNSPK_COMMON_HPP_
#define MBNSPK_COMMON_HPP_

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace mbnspk {

/// Row-major so that one frame / one supervector / one embedding row is
/// contiguous in memory.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Bad input: malformed files, inconsistent dimensions, infeasible configs.
/// The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical or I/O failure at run time. The CLI maps this to exit code 2.
class RuntimeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes "WARNING (where): message" to stderr unless warnings are muted.
void Warn(std::string_view where, std::string_view message);

/// Mutes warnings for the lifetime of the guard (tests and sweeps use this).
class ScopedWarningMute {
 public:
  ScopedWarningMute();
  ~ScopedWarningMute();
  ScopedWarningMute(const ScopedWarningMute &) = delete;
  ScopedWarningMute &operator=(const ScopedWarningMute &) = delete;

 private:
  bool previous_;
};

/// Number of warnings emitted since process start (muted ones included).
std::size_t WarningCount();

}  // namespace mbnspk

#endif  // MBNSPK_COMMON_HPP_
