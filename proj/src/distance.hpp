// src/distance.hpp (internal)

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

#ifndef MBNSPK_SRC_DISTANCE_HPP_
#define MBNSPK_SRC_DISTANCE_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>

namespace mbnspk::detail {

/// Squared Euclidean distance with four interleaved partial sums. Every
/// caller goes through this so that encodings agree bit for bit.
inline double SquaredDistance(const double *a, const double *b, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const double d0 = a[i] - b[i];
    const double d1 = a[i + 1] - b[i + 1];
    const double d2 = a[i + 2] - b[i + 2];
    const double d3 = a[i + 3] - b[i + 3];
    s0 += d0 * d0;
    s1 += d1 * d1;
    s2 += d2 * d2;
    s3 += d3 * d3;
  }
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s0 += d * d;
  }
  return (s0 + s1) + (s2 + s3);
}

/// Index of the nearest of `k` contiguous rows of width `n`; the first
/// minimum wins. The squared distance goes to `best_distance` if given.
/// Kept out of line: once inlined, gcc vectorizes across centers and the
/// loop runs about twice as slow.
[[gnu::noinline]] inline std::int32_t NearestRow(const double *x, const double *rows,
                                                 std::size_t k, std::size_t n,
                                                 double *best_distance = nullptr) {
  std::int32_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < k; ++m) {
    const double d = SquaredDistance(x, rows + m * n, n);
    if (d < best_d) {
      best_d = d;
      best = static_cast<std::int32_t>(m);
    }
  }
  if (best_distance != nullptr) *best_distance = best_d;
  return best;
}

}  // namespace mbnspk::detail

#endif  // MBNSPK_SRC_DISTANCE_HPP_
