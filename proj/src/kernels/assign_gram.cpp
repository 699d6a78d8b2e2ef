// src/kernels/assign_gram.cpp

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

#include <limits>

#include "../distance.hpp"
#include "mbnspk/kernels.hpp"

namespace mbnspk::kernels {

double AssignNearest(const Matrix &points, const Matrix &centers, std::span<std::int32_t> labels,
                     std::span<double> distances) {
  const auto n = points.rows();
  const auto dim = static_cast<std::size_t>(points.cols());
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    double best_d = 0.0;
    const std::int32_t best = detail::NearestRow(points.row(i).data(), centers.data(),
                                                 static_cast<std::size_t>(centers.rows()), dim, &best_d);
    labels[static_cast<std::size_t>(i)] = best;
    distances[static_cast<std::size_t>(i)] = best_d;
  }
  // Summed serially so the total is independent of the worker count.
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) total += distances[static_cast<std::size_t>(i)];
  return total;
}

Matrix SharedUnitGram(const SparseCodes &codes) {
  const auto n = static_cast<Eigen::Index>(codes.rows);
  Matrix gram(n, n);
#pragma omp parallel for schedule(dynamic, 8)
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto a = codes.Row(static_cast<std::size_t>(i));
    for (Eigen::Index j = i; j < n; ++j) {
      const auto b = codes.Row(static_cast<std::size_t>(j));
      long shared = 0;
      for (std::size_t v = 0; v < codes.blocks; ++v) shared += a[v] == b[v];
      gram(i, j) = static_cast<double>(shared);
      gram(j, i) = static_cast<double>(shared);
    }
  }
  return gram;
}

}  // namespace mbnspk::kernels
