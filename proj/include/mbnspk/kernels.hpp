// mbnspk/kernels.hpp

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

// Hot loops of the pipeline. Each kernel has an OpenMP version, used by the
// library, and a plain serial reference kept for tests and benchmarks. The
// OpenMP versions produce bit-identical output for any worker count.

#ifndef MBNSPK_KERNELS_HPP_
#define MBNSPK_KERNELS_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "mbnspk/common.hpp"
#include "mbnspk/gmm.hpp"
#include "mbnspk/mbn.hpp"
#include "mbnspk/sparse_codes.hpp"

namespace mbnspk::kernels {

/// Frames per accumulation block. The partition depends only on the frame
/// count, and block partials are combined in block order.
inline constexpr std::size_t kGmmBlockFrames = 2048;

GmmAccumulators GmmAccumulate(const GmmModel &model, const Matrix &frames);
GmmAccumulators GmmAccumulateSerial(const GmmModel &model, const Matrix &frames);

/// Bottom-layer encoding (nearest center over the selected dims).
SparseCodes EncodeBottom(const MbnLayer &layer, const Matrix &input);
SparseCodes EncodeBottomSerial(const MbnLayer &layer, const Matrix &input);

/// Upper-layer encoding (largest count of shared active units). The OpenMP
/// version walks the inverted index; the reference scans every center.
SparseCodes EncodeUpper(const MbnLayer &layer, const SparseCodes &input);
SparseCodes EncodeUpperSerial(const MbnLayer &layer, const SparseCodes &input);

/// Nearest center per row; returns the summed squared distance.
double AssignNearest(const Matrix &points, const Matrix &centers, std::span<std::int32_t> labels,
                     std::span<double> distances);
double AssignNearestSerial(const Matrix &points, const Matrix &centers,
                           std::span<std::int32_t> labels, std::span<double> distances);

/// Gram matrix of the dense materialization: entry (i, j) counts blocks in
/// which rows i and j share the active unit.
Matrix SharedUnitGram(const SparseCodes &codes);
Matrix SharedUnitGramSerial(const SparseCodes &codes);

}  // namespace mbnspk::kernels

#endif  // MBNSPK_KERNELS_HPP_
