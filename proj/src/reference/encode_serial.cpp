// src/reference/encode_serial.cpp

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
#include <vector>

#include "../distance.hpp"
#include "mbnspk/kernels.hpp"

namespace mbnspk::kernels {

SparseCodes EncodeBottomSerial(const MbnLayer &layer, const Matrix &input) {
  const auto n = static_cast<std::size_t>(input.rows());
  const std::size_t v_count = layer.clusterings.size();
  SparseCodes codes(n, v_count, layer.k);
  std::vector<double> xs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t v = 0; v < v_count; ++v) {
      const KCentersClustering &c = layer.clusterings[v];
      xs.resize(c.selected_dims.size());
      for (std::size_t j = 0; j < xs.size(); ++j)
        xs[j] = input(static_cast<Eigen::Index>(i), c.selected_dims[j]);
      std::int32_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t m = 0; m < c.NumCenters(); ++m) {
        const double d = detail::SquaredDistance(
            xs.data(), c.centers.row(static_cast<Eigen::Index>(m)).data(), xs.size());
        if (d < best_d) {
          best_d = d;
          best = static_cast<std::int32_t>(m);
        }
      }
      codes.active[i * v_count + v] = best;
    }
  }
  return codes;
}

SparseCodes EncodeUpperSerial(const MbnLayer &layer, const SparseCodes &input) {
  const std::size_t n = input.rows;
  const std::size_t v_count = layer.clusterings.size();
  const std::size_t width = input.block_width;
  SparseCodes codes(n, v_count, layer.k);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = input.Row(i);
    for (std::size_t v = 0; v < v_count; ++v) {
      const KCentersClustering &c = layer.clusterings[v];
      std::int32_t best = 0;
      long best_count = -1;
      for (std::size_t m = 0; m < c.NumCenters(); ++m) {
        long count = 0;
        for (std::uint32_t col : c.center_ones.Row(m))
          if (static_cast<std::size_t>(row[col / width]) == col % width) ++count;
        if (count > best_count) {
          best_count = count;
          best = static_cast<std::int32_t>(m);
        }
      }
      codes.active[i * v_count + v] = best;
    }
  }
  return codes;
}

}  // namespace mbnspk::kernels
