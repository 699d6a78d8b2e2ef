// src/reference/gmm_accumulate_serial.cpp

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

#include <cmath>
#include <vector>

#include "mbnspk/kernels.hpp"

namespace mbnspk::kernels {

GmmAccumulators GmmAccumulateSerial(const GmmModel &model, const Matrix &frames) {
  const GmmEvaluator eval(model);
  const auto c = model.means.rows();
  GmmAccumulators acc;
  acc.Resize(model.NumMixtures(), model.Dim());
  std::vector<double> log_post(static_cast<std::size_t>(c));
  for (Eigen::Index t = 0; t < frames.rows(); ++t) {
    acc.log_likelihood += eval.Posteriors(frames.row(t).data(), log_post.data());
    for (Eigen::Index i = 0; i < c; ++i) {
      const double g = std::exp(log_post[static_cast<std::size_t>(i)]);
      acc.occupancy(i) += g;
      acc.first.row(i) += g * frames.row(t);
      acc.second.row(i) += g * frames.row(t).cwiseProduct(frames.row(t));
    }
  }
  return acc;
}

}  // namespace mbnspk::kernels
