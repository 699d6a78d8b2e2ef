// src/supervector.cpp

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

#include "mbnspk/supervector.hpp"

#include <algorithm>
#include <cmath>

#include "mbnspk/kernels.hpp"

namespace mbnspk {

Vector Supervector::Combined() const {
  Vector x(n.size() + f.size());
  x << n, f;
  return x;
}

Supervector ExtractSupervector(const GmmModel &model, const FrameMatrix &utterance,
                               const SupervectorOptions &options) {
  if (utterance.Dim() != model.Dim())
    throw ValidationError("supervector: utterance '" + utterance.utterance_id + "' has dim " +
                          std::to_string(utterance.Dim()) + ", model has " +
                          std::to_string(model.Dim()));
  const GmmAccumulators acc = kernels::GmmAccumulateSerial(model, utterance.frames);
  const auto c = model.means.rows();
  const auto dim = model.means.cols();
  Supervector sv;
  sv.n = acc.occupancy;
  sv.f.resize(c * dim);
  for (Eigen::Index i = 0; i < c; ++i)
    for (Eigen::Index k = 0; k < dim; ++k)
      sv.f(i * dim + k) = acc.first(i, k) - acc.occupancy(i) * model.means(i, k);
  if (options.normalize) {
    for (Eigen::Index i = 0; i < c; ++i) {
      const double denom = std::max(acc.occupancy(i), 1e-10);
      for (Eigen::Index k = 0; k < dim; ++k)
        sv.f(i * dim + k) /= denom * std::sqrt(model.variances(i, k));
    }
  }
  return sv;
}

Matrix ExtractSupervectors(const GmmModel &model, std::span<const FrameMatrix> utterances,
                           const SupervectorOptions &options) {
  const auto c = static_cast<Eigen::Index>(model.NumMixtures());
  const auto dim = static_cast<Eigen::Index>(model.Dim());
  Matrix out(static_cast<Eigen::Index>(utterances.size()), c + c * dim);
  for (const auto &u : utterances)
    if (u.Dim() != model.Dim())
      throw ValidationError("supervector: utterance '" + u.utterance_id + "' has dim " +
                            std::to_string(u.Dim()) + ", model has " + std::to_string(model.Dim()));
  // One utterance per task; each row is computed serially, so the result
  // does not depend on the worker count.
#pragma omp parallel for schedule(dynamic, 4)
  for (std::size_t i = 0; i < utterances.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = ExtractSupervector(model, utterances[i], options).Combined().transpose();
  return out;
}

}  // namespace mbnspk
