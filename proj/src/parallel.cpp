// src/parallel.cpp

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

#include "mbnspk/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace mbnspk {

int Workers() { return omp_get_max_threads(); }

void SetWorkers(int n) { omp_set_num_threads(n < 1 ? omp_get_num_procs() : n); }

int ApplyWorkersFromEnv() {
  if (const char *value = std::getenv(kWorkersEnvVar); value != nullptr && *value != '\0') {
    try {
      SetWorkers(std::stoi(value));
    } catch (const std::exception &) {
      SetWorkers(0);
    }
  }
  return Workers();
}

ScopedWorkers::ScopedWorkers(int n) : previous_(Workers()) { SetWorkers(n); }
ScopedWorkers::~ScopedWorkers() { SetWorkers(previous_); }

}  // namespace mbnspk
