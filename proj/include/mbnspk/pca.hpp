// mbnspk/pca.hpp

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

#ifndef MBNSPK_PCA_HPP_
#define MBNSPK_PCA_HPP_

#include "mbnspk/common.hpp"
#include "mbnspk/sparse_codes.hpp"

namespace mbnspk {

/// Mean-centering followed by projection onto the leading eigenvectors of the
/// sample covariance. Columns of `projection` are unit-norm, mutually
/// orthogonal, in descending eigenvalue order, and each column's
/// largest-magnitude entry is positive.
struct PcaModel {
  Vector mean;        // D
  Matrix projection;  // D x d
  Vector eigenvalues; // d, sample-covariance eigenvalues (divisor n-1)

  std::size_t InputDim() const { return static_cast<std::size_t>(mean.size()); }
  std::size_t OutputDim() const { return static_cast<std::size_t>(projection.cols()); }

  /// Keeps the leading `dim` components.
  PcaModel Truncated(std::size_t dim) const;
};

/// Fits on the rows of data. The requested dimension is clamped (with a
/// warning) to the numerical rank, which never exceeds min(n-1, D). Uses the
/// D x D covariance when D <= n and the n x n Gram matrix otherwise.
PcaModel PcaFit(const Matrix &data, std::size_t output_dim);

/// Same contract for the dense materialization of sparse codes, without
/// materializing it when the code width exceeds the row count.
PcaModel PcaFit(const SparseCodes &codes, std::size_t output_dim);

Matrix PcaTransform(const PcaModel &model, const Matrix &data);
Matrix PcaTransform(const PcaModel &model, const SparseCodes &codes);

/// Relative eigenvalue cutoff used to decide numerical rank.
inline constexpr double kPcaRankTolerance = 1e-10;

}  // namespace mbnspk

#endif  // MBNSPK_PCA_HPP_
