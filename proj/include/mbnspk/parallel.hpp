// mbnspk/parallel.hpp

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

#ifndef MBNSPK_PARALLEL_HPP_
#define MBNSPK_PARALLEL_HPP_

namespace mbnspk {

/// Environment variable that overrides the worker count.
inline constexpr const char *kWorkersEnvVar = "MBNSPK_WORKERS";

/// Current OpenMP worker count.
int Workers();

/// Sets the OpenMP worker count; values < 1 select available parallelism.
void SetWorkers(int n);

/// Applies MBNSPK_WORKERS if set; otherwise leaves the OpenMP default.
/// Returns the effective worker count.
int ApplyWorkersFromEnv();

/// Restores the previous worker count on destruction.
class ScopedWorkers {
 public:
  explicit ScopedWorkers(int n);
  ~ScopedWorkers();
  ScopedWorkers(const ScopedWorkers &) = delete;
  ScopedWorkers &operator=(const ScopedWorkers &) = delete;

 private:
  int previous_;
};

}  // namespace mbnspk

#endif  // MBNSPK_PARALLEL_HPP_
