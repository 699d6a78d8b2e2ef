// src/reference/assign_gram_serial.cpp

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

#include "mbnspk/kernels.hpp"

namespace mbnspk::kernels {

double AssignNearestSerial(const Matrix &points, const Matrix &centers,
                           std::span<std::int32_t> labels, std::span<double> distances) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    std::int32_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < centers.rows(); ++c) {
      const double d = (points.row(i) - centers.row(c)).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = static_cast<std::int32_t>(c);
      }
    }
    labels[static_cast<std::size_t>(i)] = best;
    distances[static_cast<std::size_t>(i)] = best_d;
    total += best_d;
  }
  return total;
}

Matrix SharedUnitGramSerial(const SparseCodes &codes) {
  const Matrix dense = codes.ToDense();
  return dense * dense.transpose();
}

}  // namespace mbnspk::kernels
