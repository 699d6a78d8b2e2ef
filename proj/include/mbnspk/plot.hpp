// mbnspk/plot.hpp

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

#ifndef MBNSPK_PLOT_HPP_
#define MBNSPK_PLOT_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mbnspk/common.hpp"
#include "mbnspk/sweep.hpp"

namespace mbnspk {

enum class PlotKind { kScatter, kSensitivity, kDepth };

PlotKind ParsePlotKind(const std::string &name);

/// Writes <prefix>.csv (utterance_id,dim1,dim2,true_label) and <prefix>.svg
/// with one color per label. Needs at least two embedding columns.
void WriteScatterPlot(const std::filesystem::path &prefix, const Matrix &embedding,
                      const std::vector<std::string> &ids,
                      const std::optional<std::vector<std::string>> &labels);

/// Sensitivity: long CSV (method,mixtures,em_iters,output_dim,seed,nmi) of
/// the full-depth rows, and an SVG of median best-over-dims NMI against the
/// mixture count, one line per (method, em_iters).
/// Depth: long CSV (method,mixtures,em_iters,depth,seed,nmi) of best-over-dims
/// NMI, and an SVG of the median against depth, one line per
/// (method, mixtures, em_iters).
void WriteResultsPlot(const std::filesystem::path &prefix, const std::vector<SweepRow> &rows,
                      PlotKind kind);

}  // namespace mbnspk

#endif  // MBNSPK_PLOT_HPP_
