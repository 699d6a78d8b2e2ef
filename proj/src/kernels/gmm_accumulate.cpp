// src/kernels/gmm_accumulate.cpp

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

#include <omp.h>

#include <cmath>
#include <vector>

#include "mbnspk/kernels.hpp"

namespace mbnspk::kernels {

namespace {

void AccumulateRange(const GmmEvaluator &eval, const Matrix &frames, Eigen::Index begin,
                     Eigen::Index end, GmmAccumulators *acc) {
  const auto c = eval.model.means.rows();
  const auto dim = frames.cols();
  std::vector<double> log_post(static_cast<std::size_t>(c));
  for (Eigen::Index t = begin; t < end; ++t) {
    const double *o = frames.row(t).data();
    acc->log_likelihood += eval.Posteriors(o, log_post.data());
    for (Eigen::Index i = 0; i < c; ++i) {
      const double g = std::exp(log_post[static_cast<std::size_t>(i)]);
      if (g == 0.0) continue;
      acc->occupancy(i) += g;
      double *first = acc->first.row(i).data();
      double *second = acc->second.row(i).data();
      for (Eigen::Index f = 0; f < dim; ++f) {
        first[f] += g * o[f];
        second[f] += g * o[f] * o[f];
      }
    }
  }
}

}  // namespace

GmmAccumulators GmmAccumulate(const GmmModel &model, const Matrix &frames) {
  const GmmEvaluator eval(model);
  const auto n = frames.rows();
  const auto block = static_cast<Eigen::Index>(kGmmBlockFrames);
  const Eigen::Index num_blocks = (n + block - 1) / block;
  std::vector<GmmAccumulators> partial(static_cast<std::size_t>(num_blocks));

#pragma omp parallel for schedule(dynamic, 1)
  for (Eigen::Index b = 0; b < num_blocks; ++b) {
    auto &acc = partial[static_cast<std::size_t>(b)];
    acc.Resize(model.NumMixtures(), model.Dim());
    AccumulateRange(eval, frames, b * block, std::min(n, (b + 1) * block), &acc);
  }

  GmmAccumulators total;
  total.Resize(model.NumMixtures(), model.Dim());
  for (const auto &p : partial) total.Add(p);
  return total;
}

}  // namespace mbnspk::kernels
