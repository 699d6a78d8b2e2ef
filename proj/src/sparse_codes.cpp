// src/sparse_codes.cpp

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

#include "mbnspk/sparse_codes.hpp"

namespace mbnspk {

Matrix SparseCodes::ToDense() const {
  Matrix dense = Matrix::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(Width()));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t v = 0; v < blocks; ++v)
      dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(Column(i, v))) = 1.0;
  return dense;
}

Vector SparseCodes::DenseRow(std::size_t i) const {
  Vector row = Vector::Zero(static_cast<Eigen::Index>(Width()));
  for (std::size_t v = 0; v < blocks; ++v) row(static_cast<Eigen::Index>(Column(i, v))) = 1.0;
  return row;
}

}  // namespace mbnspk
