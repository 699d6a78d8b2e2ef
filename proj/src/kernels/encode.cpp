// src/kernels/encode.cpp

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

#include <algorithm>
#include <limits>
#include <vector>

#include "../distance.hpp"
#include "mbnspk/kernels.hpp"

namespace mbnspk::kernels {

SparseCodes EncodeBottom(const MbnLayer &layer, const Matrix &input) {
  const auto n = static_cast<std::size_t>(input.rows());
  const std::size_t v_count = layer.clusterings.size();
  SparseCodes codes(n, v_count, layer.k);
  // Rows are independent; each task fills one row of `codes`.
#pragma omp parallel
  {
    std::vector<double> xs;
#pragma omp for schedule(static)
    for (std::size_t i = 0; i < n; ++i) {
      const double *row = input.row(static_cast<Eigen::Index>(i)).data();
      for (std::size_t v = 0; v < v_count; ++v) {
        const KCentersClustering &c = layer.clusterings[v];
        const std::size_t d_hat = c.selected_dims.size();
        const std::size_t k = c.NumCenters();
        xs.resize(d_hat);
        for (std::size_t j = 0; j < d_hat; ++j) xs[j] = row[c.selected_dims[j]];
        codes.active[i * v_count + v] = detail::NearestRow(xs.data(), c.centers.data(), k, d_hat);
      }
    }
  }
  return codes;
}

SparseCodes EncodeUpper(const MbnLayer &layer, const SparseCodes &input) {
  const std::size_t n = input.rows;
  const std::size_t v_count = layer.clusterings.size();
  SparseCodes codes(n, v_count, layer.k);
#pragma omp parallel
  {
    std::vector<std::uint32_t> counts;
    // Input column -> slot in the clustering's inverted index, or -1.
    std::vector<std::int32_t> slot_of(input.Width(), -1);
#pragma omp for schedule(dynamic, 1)
    for (std::size_t v = 0; v < v_count; ++v) {
      const KCentersClustering &c = layer.clusterings[v];
      const auto &index = c.index;
      for (std::size_t s = 0; s < index.columns.size(); ++s)
        if (index.columns[s] < slot_of.size()) slot_of[index.columns[s]] = static_cast<std::int32_t>(s);
      counts.assign(c.NumCenters(), 0);
      for (std::size_t i = 0; i < n; ++i) {
        std::fill(counts.begin(), counts.end(), 0u);
        for (std::size_t b = 0; b < input.blocks; ++b) {
          const std::int32_t slot = slot_of[input.Column(i, b)];
          if (slot < 0) continue;
          const auto s = static_cast<std::size_t>(slot);
          for (std::uint32_t p = index.offsets[s]; p < index.offsets[s + 1]; ++p)
            ++counts[index.centers[p]];
        }
        const auto best = std::max_element(counts.begin(), counts.end());  // first maximum
        codes.active[i * v_count + v] = static_cast<std::int32_t>(best - counts.begin());
      }
      for (std::uint32_t col : index.columns)
        if (col < slot_of.size()) slot_of[col] = -1;
    }
  }
  return codes;
}

}  // namespace mbnspk::kernels
