// src/rng.cpp

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

#include "mbnspk/rng.hpp"


namespace mbnspk {

std::vector<std::uint32_t> SampleSorted(Rng &rng, std::size_t n, std::size_t k) {
  // Selection sampling (Knuth's Algorithm S): one pass, output in order.
  std::vector<std::uint32_t> out;
  if (k > n) k = n;
  out.reserve(k);
  // Item i is taken with probability needed / remaining, tested exactly on a
  // 64-bit draw: u * remaining < needed * 2^64.
  static_assert(Rng::min() == 0 && Rng::max() == ~std::uint64_t{0});
  std::size_t needed = k;
  for (std::size_t i = 0; i < n && needed > 0; ++i) {
    const std::size_t remaining = n - i;
    const unsigned __int128 lhs = static_cast<unsigned __int128>(rng()) * remaining;
    if (lhs < (static_cast<unsigned __int128>(needed) << 64)) {
      out.push_back(static_cast<std::uint32_t>(i));
      --needed;
    }
  }
  return out;
}

}  // namespace mbnspk
