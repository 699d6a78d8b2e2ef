// mbnspk/sweep.hpp

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

#ifndef MBNSPK_SWEEP_HPP_
#define MBNSPK_SWEEP_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mbnspk/pipeline.hpp"

namespace mbnspk {

struct SweepSpec {
  std::vector<std::size_t> mixture_counts{1, 2, 4, 8, 16, 32, 64};
  std::vector<std::size_t> em_iteration_options{0, 20};
  std::vector<std::size_t> output_dims{2, 3, 5, 10, 30, 50};
  std::vector<std::uint64_t> seeds{0};
  /// MBN depths to evaluate besides the full network (PCA refit on the
  /// codes of each layer). Empty: full network only.
  std::vector<std::size_t> layer_truncations;

  void Validate() const;
};

/// One row of the results table. Failed cells keep `nmi` unset and carry
/// the error message.
struct SweepRow {
  Method method = Method::kMbn;
  std::size_t mixtures = 0;
  std::size_t em_iters = 0;
  std::optional<std::size_t> output_dim;
  std::optional<std::size_t> depth;
  std::uint64_t seed = 0;
  std::optional<double> nmi;
  double wall_seconds = 0.0;
  std::string error;
};

struct SweepResults {
  std::vector<SweepRow> rows;

  std::size_t Failures() const;
};

/// Runs the Cartesian grid seeds x mixtures x em_iters x methods x dims.
/// Each seed is a master seed, so a single-cell sweep reproduces
/// RunPipeline with the same settings. One UBM per (seed, mixtures, em_iters)
/// is shared by all methods. When base.output_dir is set, each UBM cell
/// persists its supervectors under cells/seed_<s>/C<m>_em<e>/.
SweepResults RunSweep(const SweepSpec &sweep, const PipelineConfig &base);

/// Max NMI over output dims, per (method, mixtures, em_iters, depth, seed).
std::vector<SweepRow> BestOverDims(const std::vector<SweepRow> &rows);
/// Max NMI over mixture counts, per (method, em_iters, output_dim, depth, seed).
std::vector<SweepRow> BestOverUbms(const std::vector<SweepRow> &rows);
/// Median over seeds of the NMI of each (method, mixtures, em_iters,
/// output_dim, depth) group; the seed field of the result rows is 0.
std::vector<SweepRow> MedianOverSeeds(const std::vector<SweepRow> &rows);

double Median(std::vector<double> values);

/// CSV header: method,mixtures,em_iters,output_dim,depth,seed,nmi,wall_seconds.
void WriteSweepCsv(const std::filesystem::path &path, const std::vector<SweepRow> &rows);
std::vector<SweepRow> ReadSweepCsv(const std::filesystem::path &path);

nlohmann::json SweepSpecToJson(const SweepSpec &spec);
SweepSpec SweepSpecFromJson(const nlohmann::json &j, SweepSpec base = {});

}  // namespace mbnspk

#endif  // MBNSPK_SWEEP_HPP_
