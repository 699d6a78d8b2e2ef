// mbnspk/mbn.hpp

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

// Multilayer bootstrap network: every hidden layer is an ensemble of V
// independently randomized k-centers clusterings whose one-hot outputs are
// concatenated into the next layer's input; PCA maps the top layer to the
// output dimension.

#ifndef MBNSPK_MBN_HPP_
#define MBNSPK_MBN_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "mbnspk/common.hpp"
#include "mbnspk/pca.hpp"
#include "mbnspk/rng.hpp"
#include "mbnspk/sparse_codes.hpp"

namespace mbnspk {

enum class SimilarityMode {
  kBottom,  // arg min squared distance, dense real-valued input
  kUpper,   // arg max inner product, one-hot input
};

struct MbnConfig {
  std::size_t clusterings_per_layer = 400;  // V
  double feature_fraction = 0.5;            // a
  /// r; when unset, 0.5 if k_1 > 0.8 n, else 0.
  std::optional<double> reconstruction_fraction;
  /// Explicit k per layer; when empty the schedule is derived from
  /// (n, k_max, c_hint, k_decay).
  std::vector<std::size_t> k_schedule;
  std::size_t k_max = 10000;
  std::optional<std::size_t> c_hint;
  double k_decay = 0.5;
  std::size_t output_dim = 2;
  /// z-score the bottom-layer input per dimension before training.
  bool standardize_input = false;
  std::uint64_t seed = 0;

  void Validate() const;
};

/// k_1 = min(floor(0.9 n), k_max); k_l = floor(decay k_{l-1}); keep every
/// k_l >= ceil(1.5 c_hint) (30 without a hint). Never empty.
std::vector<std::size_t> ComputeKSchedule(std::size_t n, std::size_t k_max,
                                          std::optional<std::size_t> c_hint,
                                          double decay = 0.5);

/// Copy of config with the schedule and r filled in for a dataset of n rows.
MbnConfig ResolveMbnConfig(const MbnConfig &config, std::size_t n);

/// Sorted lists of column indices, one list per row.
struct BinaryRows {
  std::vector<std::uint32_t> offsets{0};
  std::vector<std::uint32_t> columns;

  std::size_t Rows() const { return offsets.size() - 1; }
  std::span<const std::uint32_t> Row(std::size_t i) const {
    return {columns.data() + offsets[i], columns.data() + offsets[i + 1]};
  }
  void AppendRow(std::span<const std::uint32_t> row);
  bool operator==(const BinaryRows &) const = default;
};

struct KCentersClustering {
  /// Sorted, distinct input columns this clustering looks at.
  std::vector<std::uint32_t> selected_dims;
  /// Input rows the centers were sampled from, center i <- source_rows[i].
  std::vector<std::uint32_t> source_rows;
  /// Positions into selected_dims whose values were rotated among centers.
  std::vector<std::uint32_t> shifted_positions;
  /// Bottom layer: k x selected_dims.size() center values.
  Matrix centers;
  /// Upper layers: binary centers, each row the input columns holding a 1.
  BinaryRows center_ones;

  std::size_t NumCenters() const {
    return centers.rows() > 0 ? static_cast<std::size_t>(centers.rows()) : center_ones.Rows();
  }

  /// Inverted index column -> centers with a 1 there (upper layers only).
  struct Index {
    std::vector<std::uint32_t> columns;  // sorted distinct
    std::vector<std::uint32_t> offsets;  // columns.size() + 1
    std::vector<std::uint32_t> centers;
  };
  Index index;
  void BuildIndex();
};

struct MbnLayer {
  int layer_index = 1;  // 1-based
  std::size_t k = 0;
  SimilarityMode mode = SimilarityMode::kBottom;
  std::vector<KCentersClustering> clusterings;
};

struct MbnModel {
  MbnConfig config;  // resolved
  std::size_t input_dim = 0;
  Vector input_mean;   // standardization (empty when disabled)
  Vector input_scale;
  std::vector<MbnLayer> layers;
  PcaModel pca;

  std::size_t Depth() const { return layers.size(); }
};

/// d_hat = max(1, ceil(a d)).
std::size_t SelectedDimCount(std::size_t input_dim, double feature_fraction);
/// d' = floor(r d_hat).
std::size_t ShiftedDimCount(std::size_t selected, double reconstruction_fraction);

/// Random feature selection, random sampling, random reconstruction on a
/// dense layer input. Throws ValidationError if k > rows.
KCentersClustering TrainClustering(const Matrix &input, std::size_t k, double feature_fraction,
                                   double reconstruction_fraction, Rng &rng);

/// Same three steps on a one-hot layer input.
KCentersClustering TrainClustering(const SparseCodes &input, std::size_t k,
                                   double feature_fraction, double reconstruction_fraction,
                                   Rng &rng);

/// Winning center for one dense input vector (upper mode expects the dense
/// one-hot materialization). Ties go to the lowest index.
std::size_t EncodeOne(const KCentersClustering &clustering, std::span<const double> x,
                      SimilarityMode mode);

SparseCodes EncodeLayer(const MbnLayer &layer, const Matrix &input);
SparseCodes EncodeLayer(const MbnLayer &layer, const SparseCodes &input);

/// Rng stream for clustering v (0-based) of layer l (1-based).
Rng ClusteringRng(std::uint64_t mbn_seed, int layer_index, std::size_t clustering);

struct MbnFit {
  MbnModel model;
  Matrix embedding;                      // n x output_dim
  std::vector<SparseCodes> layer_codes;  // filled when requested
};

/// Trains all layers bottom-up, then PCA on the top-layer codes.
MbnFit TrainMbn(const Matrix &supervectors, const MbnConfig &config,
                bool keep_layer_codes = false);

/// Sparse codes of `input` after the first `depth` layers (0 = all layers).
SparseCodes EncodeThrough(const MbnModel &model, const Matrix &input, std::size_t depth = 0);

/// Applies the stored layers and PCA to new rows.
Matrix Transform(const MbnModel &model, const Matrix &input);

/// Model truncated to its first `depth` layers with a PCA refit on the
/// layer-`depth` codes. Returns the refit model and its embedding.
MbnFit TruncateMbn(const MbnModel &model, const SparseCodes &codes_at_depth, std::size_t depth,
                   std::size_t output_dim);

/// Directory layout: config.json, layer_<l>_centers.bin (MBNMAT1),
/// layer_<l>_dims.idx, layer_<l>_rows.idx, layer_<l>_shifts.idx, pca_mean.bin,
/// pca_projection.bin, pca_eigenvalues.bin, input_standardization.bin.
void SaveMbnModel(const std::filesystem::path &dir, const MbnModel &model);
MbnModel LoadMbnModel(const std::filesystem::path &dir);

}  // namespace mbnspk

#endif  // MBNSPK_MBN_HPP_
