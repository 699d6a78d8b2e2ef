// src/common.cpp

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

#include "mbnspk/common.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace mbnspk {

namespace {
std::atomic<bool> g_muted{false};
std::atomic<std::size_t> g_warnings{0};
std::mutex g_warn_mutex;
}  // namespace

void Warn(std::string_view where, std::string_view message) {
  ++g_warnings;
  if (g_muted.load()) return;
  std::lock_guard<std::mutex> lock(g_warn_mutex);
  std::cerr << "WARNING (" << where << "): " << message << '\n';
}

ScopedWarningMute::ScopedWarningMute() : previous_(g_muted.exchange(true)) {}
ScopedWarningMute::~ScopedWarningMute() { g_muted.store(previous_); }

std::size_t WarningCount() { return g_warnings.load(); }

}  // namespace mbnspk
