// mbnspk/sparse_codes.hpp

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

#ifndef MBNSPK_SPARSE_CODES_HPP_
#define MBNSPK_SPARSE_CODES_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "mbnspk/common.hpp"

namespace mbnspk {

/// Output of one hidden layer: for every input row, the winning unit of each
/// of the V clusterings. The nominal dense width is V*k; the dense form has a
/// 1 at column v*k + active(i, v) and 0 elsewhere.
struct SparseCodes {
  std::size_t rows = 0;
  std::size_t blocks = 0;       // V
  std::size_t block_width = 0;  // k
  std::vector<std::int32_t> active;  // rows x blocks, row-major

  SparseCodes() = default;
  SparseCodes(std::size_t rows, std::size_t blocks, std::size_t block_width)
      : rows(rows), blocks(blocks), block_width(block_width), active(rows * blocks, 0) {}

  std::size_t Width() const { return blocks * block_width; }

  std::span<const std::int32_t> Row(std::size_t i) const {
    return {active.data() + i * blocks, blocks};
  }
  std::span<std::int32_t> Row(std::size_t i) { return {active.data() + i * blocks, blocks}; }

  /// Dense column index of block v's active unit in row i.
  std::size_t Column(std::size_t i, std::size_t v) const {
    return v * block_width + static_cast<std::size_t>(active[i * blocks + v]);
  }

  Matrix ToDense() const;
  Vector DenseRow(std::size_t i) const;

  bool operator==(const SparseCodes &) const = default;
};

}  // namespace mbnspk

#endif  // MBNSPK_SPARSE_CODES_HPP_
