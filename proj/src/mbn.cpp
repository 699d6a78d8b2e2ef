// src/mbn.cpp

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

#include "mbnspk/mbn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "distance.hpp"
#include "json.hpp"
#include "mbnspk/dataset.hpp"
#include "mbnspk/kernels.hpp"
#include "mbnspk/matrix_io.hpp"

namespace mbnspk {

void MbnConfig::Validate() const {
  if (clusterings_per_layer == 0) throw ValidationError("mbn: V must be positive");
  if (!(feature_fraction > 0.0 && feature_fraction <= 1.0))
    throw ValidationError("mbn: a must lie in (0, 1]");
  if (reconstruction_fraction &&
      !(*reconstruction_fraction >= 0.0 && *reconstruction_fraction <= 0.5))
    throw ValidationError("mbn: r must lie in [0, 0.5]");
  if (!(k_decay > 0.0 && k_decay < 1.0)) throw ValidationError("mbn: k decay must lie in (0, 1)");
  if (output_dim == 0) throw ValidationError("mbn: output dimension must be positive");
  if (k_schedule.empty() && k_max == 0) throw ValidationError("mbn: k_max must be positive");
  if (c_hint && *c_hint == 0) throw ValidationError("mbn: c_hint must be positive");
  for (std::size_t l = 0; l < k_schedule.size(); ++l) {
    if (k_schedule[l] == 0) throw ValidationError("mbn: k must be positive");
    if (k_schedule.size() > 1) {
      if (k_schedule[l] < 2) throw ValidationError("mbn: multi-layer schedules need every k >= 2");
      if (l > 0 && k_schedule[l] >= k_schedule[l - 1])
        throw ValidationError("mbn: k schedule must be strictly decreasing");
    }
  }
}

std::vector<std::size_t> ComputeKSchedule(std::size_t n, std::size_t k_max,
                                          std::optional<std::size_t> c_hint, double decay) {
  if (n < 4) throw ValidationError("k schedule: need at least 4 data points");
  if (k_max == 0) throw ValidationError("k schedule: k_max must be positive");
  const std::size_t k1 = std::min(n * 9 / 10, k_max);
  const std::size_t stop = c_hint ? (3 * *c_hint + 1) / 2 : 30;
  std::vector<std::size_t> schedule;
  if (k1 < stop) return {k1};
  for (std::size_t k = k1; k >= stop && k > 0;
       k = static_cast<std::size_t>(std::floor(decay * static_cast<double>(k)))) {
    if (!schedule.empty() && k >= schedule.back()) break;
    schedule.push_back(k);
  }
  return schedule;
}

MbnConfig ResolveMbnConfig(const MbnConfig &config, std::size_t n) {
  config.Validate();
  MbnConfig out = config;
  if (out.k_schedule.empty())
    out.k_schedule = ComputeKSchedule(n, config.k_max, config.c_hint, config.k_decay);
  if (!out.reconstruction_fraction) {
    const bool small_scale = static_cast<double>(out.k_schedule.front()) > 0.8 * static_cast<double>(n);
    out.reconstruction_fraction = small_scale ? 0.5 : 0.0;
  }
  if (out.k_schedule.front() > n)
    throw ValidationError("mbn: k_1 = " + std::to_string(out.k_schedule.front()) +
                          " exceeds the " + std::to_string(n) + " training points");
  return out;
}

void BinaryRows::AppendRow(std::span<const std::uint32_t> row) {
  columns.insert(columns.end(), row.begin(), row.end());
  offsets.push_back(static_cast<std::uint32_t>(columns.size()));
}

void KCentersClustering::BuildIndex() {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;  // (column, center)
  pairs.reserve(center_ones.columns.size());
  for (std::size_t i = 0; i < center_ones.Rows(); ++i)
    for (std::uint32_t col : center_ones.Row(i)) pairs.emplace_back(col, static_cast<std::uint32_t>(i));
  std::sort(pairs.begin(), pairs.end());
  index = {};
  index.offsets.push_back(0);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    if (p == 0 || pairs[p].first != pairs[p - 1].first) {
      if (p > 0) index.offsets.push_back(static_cast<std::uint32_t>(p));
      index.columns.push_back(pairs[p].first);
    }
    index.centers.push_back(pairs[p].second);
  }
  if (!pairs.empty()) index.offsets.push_back(static_cast<std::uint32_t>(pairs.size()));
}

std::size_t SelectedDimCount(std::size_t input_dim, double feature_fraction) {
  const auto d = static_cast<std::size_t>(std::ceil(feature_fraction * static_cast<double>(input_dim) - 1e-9));
  return std::clamp<std::size_t>(d, 1, input_dim);
}

std::size_t ShiftedDimCount(std::size_t selected, double reconstruction_fraction) {
  return static_cast<std::size_t>(std::floor(reconstruction_fraction * static_cast<double>(selected) + 1e-9));
}

namespace {

void CheckClusteringArgs(std::size_t n, std::size_t d, std::size_t k) {
  if (k == 0) throw ValidationError("k-centers: k must be positive");
  if (k > n)
    throw ValidationError("k-centers: k = " + std::to_string(k) + " exceeds " + std::to_string(n) +
                          " input rows");
  if (d == 0) throw ValidationError("k-centers: zero-width input");
}

}  // namespace

KCentersClustering TrainClustering(const Matrix &input, std::size_t k, double feature_fraction,
                                   double reconstruction_fraction, Rng &rng) {
  const auto n = static_cast<std::size_t>(input.rows());
  const auto d = static_cast<std::size_t>(input.cols());
  CheckClusteringArgs(n, d, k);
  KCentersClustering c;
  const std::size_t d_hat = SelectedDimCount(d, feature_fraction);
  c.selected_dims = SampleSorted(rng, d, d_hat);
  c.source_rows = SampleSorted(rng, n, k);
  c.shifted_positions = SampleSorted(rng, d_hat, ShiftedDimCount(d_hat, reconstruction_fraction));

  c.centers.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d_hat));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < d_hat; ++j)
      c.centers(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          input(c.source_rows[i], c.selected_dims[j]);

  // One-step cyclic shift: center i takes center (i+1) mod k's value.
  for (std::uint32_t pos : c.shifted_positions) {
    const auto col = static_cast<Eigen::Index>(pos);
    const double first = c.centers(0, col);
    for (std::size_t i = 0; i + 1 < k; ++i)
      c.centers(static_cast<Eigen::Index>(i), col) = c.centers(static_cast<Eigen::Index>(i + 1), col);
    c.centers(static_cast<Eigen::Index>(k - 1), col) = first;
  }
  return c;
}

KCentersClustering TrainClustering(const SparseCodes &input, std::size_t k,
                                   double feature_fraction, double reconstruction_fraction,
                                   Rng &rng) {
  const std::size_t n = input.rows;
  const std::size_t width = input.Width();
  CheckClusteringArgs(n, width, k);
  KCentersClustering c;
  const std::size_t d_hat = SelectedDimCount(width, feature_fraction);
  c.selected_dims = SampleSorted(rng, width, d_hat);
  c.source_rows = SampleSorted(rng, n, k);
  c.shifted_positions = SampleSorted(rng, d_hat, ShiftedDimCount(d_hat, reconstruction_fraction));

  // 0 = not selected, 1 = selected, 2 = selected and rotated.
  std::vector<std::uint8_t> state(width, 0);
  for (std::uint32_t col : c.selected_dims) state[col] = 1;
  for (std::uint32_t pos : c.shifted_positions) state[c.selected_dims[pos]] = 2;

  auto restricted_ones = [&](std::size_t i) {
    std::vector<std::uint32_t> ones;
    const std::size_t row = c.source_rows[i];
    for (std::size_t v = 0; v < input.blocks; ++v) {
      const auto col = static_cast<std::uint32_t>(input.Column(row, v));
      if (state[col] != 0) ones.push_back(col);
    }
    return ones;  // increasing, since blocks are laid out in order
  };

  std::vector<std::vector<std::uint32_t>> sampled(k);
  for (std::size_t i = 0; i < k; ++i) sampled[i] = restricted_ones(i);
  std::vector<std::uint32_t> merged;
  for (std::size_t i = 0; i < k; ++i) {
    const auto &own = sampled[i];
    const auto &next = sampled[(i + 1) % k];
    merged.clear();
    auto a = own.begin();
    auto b = next.begin();
    // Keep own ones on unrotated columns, take the neighbour's on rotated ones.
    while (a != own.end() || b != next.end()) {
      while (a != own.end() && state[*a] != 1) ++a;
      while (b != next.end() && state[*b] != 2) ++b;
      if (a == own.end() && b == next.end()) break;
      if (b == next.end() || (a != own.end() && *a < *b)) {
        merged.push_back(*a++);
      } else {
        merged.push_back(*b++);
      }
    }
    c.center_ones.AppendRow(merged);
  }
  c.BuildIndex();
  return c;
}

std::size_t EncodeOne(const KCentersClustering &clustering, std::span<const double> x,
                      SimilarityMode mode) {
  const std::size_t k = clustering.NumCenters();
  if (mode == SimilarityMode::kBottom) {
    if (clustering.centers.rows() == 0)
      throw ValidationError("encode: bottom mode needs dense centers");
    const std::size_t d_hat = clustering.selected_dims.size();
    std::vector<double> xs(d_hat);
    for (std::size_t j = 0; j < d_hat; ++j) {
      if (clustering.selected_dims[j] >= x.size())
        throw ValidationError("encode: input narrower than the selected dims");
      xs[j] = x[clustering.selected_dims[j]];
    }
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
      const double d = detail::SquaredDistance(xs.data(), clustering.centers.row(static_cast<Eigen::Index>(i)).data(), d_hat);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    return best;
  }
  std::size_t best = 0;
  double best_dot = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i) {
    double dot = 0.0;
    for (std::uint32_t col : clustering.center_ones.Row(i)) {
      if (col >= x.size()) throw ValidationError("encode: input narrower than the selected dims");
      dot += x[col];
    }
    if (dot > best_dot) {
      best_dot = dot;
      best = i;
    }
  }
  return best;
}

SparseCodes EncodeLayer(const MbnLayer &layer, const Matrix &input) {
  if (layer.mode != SimilarityMode::kBottom)
    throw ValidationError("encode: dense input given to an upper layer");
  return kernels::EncodeBottom(layer, input);
}

SparseCodes EncodeLayer(const MbnLayer &layer, const SparseCodes &input) {
  if (layer.mode != SimilarityMode::kUpper)
    throw ValidationError("encode: one-hot input given to the bottom layer");
  return kernels::EncodeUpper(layer, input);
}

Rng ClusteringRng(std::uint64_t mbn_seed, int layer_index, std::size_t clustering) {
  return Rng(StreamSeed(mbn_seed, {HashName("mbn-clustering"),
                                   static_cast<std::uint64_t>(layer_index), clustering}));
}

namespace {

Matrix Standardize(const Matrix &x, const Vector &mean, const Vector &scale) {
  return (x.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array();
}

template <typename Input>
MbnLayer TrainLayer(const Input &input, int layer_index, std::size_t k, const MbnConfig &config) {
  MbnLayer layer;
  layer.layer_index = layer_index;
  layer.k = k;
  layer.mode = layer_index == 1 ? SimilarityMode::kBottom : SimilarityMode::kUpper;
  layer.clusterings.resize(config.clusterings_per_layer);
  const double a = config.feature_fraction;
  const double r = *config.reconstruction_fraction;
  // Each clustering owns its RNG stream and output slot.
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t v = 0; v < config.clusterings_per_layer; ++v) {
    Rng rng = ClusteringRng(config.seed, layer_index, v);
    layer.clusterings[v] = TrainClustering(input, k, a, r, rng);
  }
  return layer;
}

}  // namespace

MbnFit TrainMbn(const Matrix &supervectors, const MbnConfig &config, bool keep_layer_codes) {
  CheckFinite(supervectors, "mbn input");
  const auto n = static_cast<std::size_t>(supervectors.rows());
  MbnFit fit;
  MbnModel &model = fit.model;
  model.config = ResolveMbnConfig(config, n);
  model.input_dim = static_cast<std::size_t>(supervectors.cols());

  Matrix bottom_input;
  if (model.config.standardize_input) {
    model.input_mean = supervectors.colwise().mean().transpose();
    model.input_scale = ((supervectors.rowwise() - model.input_mean.transpose())
                             .array().square().colwise().sum() / static_cast<double>(n))
                            .sqrt().transpose();
    for (Eigen::Index j = 0; j < model.input_scale.size(); ++j)
      if (!(model.input_scale(j) > 0.0)) model.input_scale(j) = 1.0;
    bottom_input = Standardize(supervectors, model.input_mean, model.input_scale);
  }
  const Matrix &x = model.config.standardize_input ? bottom_input : supervectors;

  SparseCodes codes;
  const auto &schedule = model.config.k_schedule;
  for (std::size_t l = 0; l < schedule.size(); ++l) {
    const int index = static_cast<int>(l + 1);
    if (l == 0) {
      model.layers.push_back(TrainLayer(x, index, schedule[l], model.config));
      codes = EncodeLayer(model.layers.back(), x);
    } else {
      model.layers.push_back(TrainLayer(codes, index, schedule[l], model.config));
      codes = EncodeLayer(model.layers.back(), codes);
    }
    if (keep_layer_codes) fit.layer_codes.push_back(codes);
  }
  model.pca = PcaFit(codes, model.config.output_dim);
  fit.embedding = PcaTransform(model.pca, codes);
  return fit;
}

SparseCodes EncodeThrough(const MbnModel &model, const Matrix &input, std::size_t depth) {
  if (static_cast<std::size_t>(input.cols()) != model.input_dim)
    throw ValidationError("mbn: input has " + std::to_string(input.cols()) +
                          " columns, model was trained on " + std::to_string(model.input_dim));
  if (depth == 0 || depth > model.layers.size()) depth = model.layers.size();
  SparseCodes codes;
  if (model.input_mean.size() > 0) {
    codes = EncodeLayer(model.layers[0], Standardize(input, model.input_mean, model.input_scale));
  } else {
    codes = EncodeLayer(model.layers[0], input);
  }
  for (std::size_t l = 1; l < depth; ++l) codes = EncodeLayer(model.layers[l], codes);
  return codes;
}

Matrix Transform(const MbnModel &model, const Matrix &input) {
  return PcaTransform(model.pca, EncodeThrough(model, input));
}

MbnFit TruncateMbn(const MbnModel &model, const SparseCodes &codes_at_depth, std::size_t depth,
                   std::size_t output_dim) {
  if (depth == 0 || depth > model.layers.size())
    throw ValidationError("mbn: truncation depth out of range");
  MbnFit fit;
  fit.model.config = model.config;
  fit.model.config.k_schedule.resize(depth);
  fit.model.config.output_dim = output_dim;
  fit.model.input_dim = model.input_dim;
  fit.model.input_mean = model.input_mean;
  fit.model.input_scale = model.input_scale;
  fit.model.layers.assign(model.layers.begin(), model.layers.begin() + static_cast<std::ptrdiff_t>(depth));
  fit.model.pca = PcaFit(codes_at_depth, output_dim);
  fit.embedding = PcaTransform(fit.model.pca, codes_at_depth);
  return fit;
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

std::string LayerFile(int l, const char *what) {
  return "layer_" + std::to_string(l) + "_" + what;
}

Matrix RowMatrix(const Vector &v) { return v.transpose(); }

}  // namespace

void SaveMbnModel(const std::filesystem::path &dir, const MbnModel &model) {
  std::filesystem::create_directories(dir);
  const MbnConfig &cfg = model.config;
  nlohmann::json j;
  j["clusterings_per_layer"] = cfg.clusterings_per_layer;
  j["feature_fraction"] = cfg.feature_fraction;
  j["reconstruction_fraction"] = cfg.reconstruction_fraction.value_or(0.0);
  j["k_schedule"] = cfg.k_schedule;
  j["k_max"] = cfg.k_max;
  j["c_hint"] = cfg.c_hint ? nlohmann::json(*cfg.c_hint) : nlohmann::json(nullptr);
  j["k_decay"] = cfg.k_decay;
  j["output_dim"] = cfg.output_dim;
  j["pca_output_dim"] = model.pca.OutputDim();
  j["standardize_input"] = cfg.standardize_input;
  j["seed"] = cfg.seed;
  j["input_dim"] = model.input_dim;
  nlohmann::json layers = nlohmann::json::array();

  for (const MbnLayer &layer : model.layers) {
    const int l = layer.layer_index;
    const std::size_t v_count = layer.clusterings.size();
    const std::size_t d_hat = v_count ? layer.clusterings[0].selected_dims.size() : 0;
    const std::size_t d_shift = v_count ? layer.clusterings[0].shifted_positions.size() : 0;
    std::vector<std::uint32_t> dims, rows, shifts;
    for (const auto &c : layer.clusterings) {
      dims.insert(dims.end(), c.selected_dims.begin(), c.selected_dims.end());
      rows.insert(rows.end(), c.source_rows.begin(), c.source_rows.end());
      shifts.insert(shifts.end(), c.shifted_positions.begin(), c.shifted_positions.end());
    }
    SaveIndexMatrix(dir / LayerFile(l, "dims.idx"), v_count, d_hat, dims);
    SaveIndexMatrix(dir / LayerFile(l, "rows.idx"), v_count, layer.k, rows);
    SaveIndexMatrix(dir / LayerFile(l, "shifts.idx"), v_count, d_shift, shifts);
    if (layer.mode == SimilarityMode::kBottom) {
      Matrix centers(static_cast<Eigen::Index>(v_count * layer.k), static_cast<Eigen::Index>(d_hat));
      for (std::size_t v = 0; v < v_count; ++v)
        centers.middleRows(static_cast<Eigen::Index>(v * layer.k), static_cast<Eigen::Index>(layer.k)) =
            layer.clusterings[v].centers;
      SaveMatrixBinary(dir / LayerFile(l, "centers.bin"), centers);
    } else {
      // Binary centers as CSR: offsets over all (clustering, center) rows, then columns.
      std::vector<std::uint32_t> offsets{0}, columns;
      for (const auto &c : layer.clusterings)
        for (std::size_t i = 0; i < c.center_ones.Rows(); ++i) {
          const auto row = c.center_ones.Row(i);
          columns.insert(columns.end(), row.begin(), row.end());
          offsets.push_back(static_cast<std::uint32_t>(columns.size()));
        }
      SaveIndexMatrix(dir / LayerFile(l, "center_offsets.idx"), 1, offsets.size(), offsets);
      SaveIndexMatrix(dir / LayerFile(l, "center_columns.idx"), 1, columns.size(), columns);
    }
    layers.push_back({{"layer_index", l},
                      {"k", layer.k},
                      {"mode", layer.mode == SimilarityMode::kBottom ? "bottom" : "upper"},
                      {"clusterings", v_count},
                      {"selected_dims", d_hat},
                      {"shifted_dims", d_shift}});
  }
  j["layers"] = layers;
  SaveMatrixBinary(dir / "pca_mean.bin", RowMatrix(model.pca.mean));
  SaveMatrixBinary(dir / "pca_projection.bin", model.pca.projection);
  SaveMatrixBinary(dir / "pca_eigenvalues.bin", RowMatrix(model.pca.eigenvalues));
  if (model.input_mean.size() > 0) {
    Matrix st(2, model.input_mean.size());
    st.row(0) = model.input_mean.transpose();
    st.row(1) = model.input_scale.transpose();
    SaveMatrixBinary(dir / "input_standardization.bin", st);
  }
  std::ofstream os(dir / "config.json");
  if (!os) throw RuntimeFailure("cannot write " + (dir / "config.json").string());
  os << j.dump(2) << '\n';
}

MbnModel LoadMbnModel(const std::filesystem::path &dir) {
  std::ifstream is(dir / "config.json");
  if (!is) throw ValidationError("mbn model not found in " + dir.string());
  MbnModel model;
  try {
    nlohmann::json j;
    is >> j;
    MbnConfig &cfg = model.config;
    cfg.clusterings_per_layer = j.at("clusterings_per_layer").get<std::size_t>();
    cfg.feature_fraction = j.at("feature_fraction").get<double>();
    cfg.reconstruction_fraction = j.at("reconstruction_fraction").get<double>();
    cfg.k_schedule = j.at("k_schedule").get<std::vector<std::size_t>>();
    cfg.k_max = j.at("k_max").get<std::size_t>();
    if (!j.at("c_hint").is_null()) cfg.c_hint = j.at("c_hint").get<std::size_t>();
    cfg.k_decay = j.at("k_decay").get<double>();
    cfg.output_dim = j.at("output_dim").get<std::size_t>();
    cfg.standardize_input = j.at("standardize_input").get<bool>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    model.input_dim = j.at("input_dim").get<std::size_t>();
    for (const auto &lj : j.at("layers")) {
      MbnLayer layer;
      layer.layer_index = lj.at("layer_index").get<int>();
      layer.k = lj.at("k").get<std::size_t>();
      layer.mode = lj.at("mode").get<std::string>() == "bottom" ? SimilarityMode::kBottom
                                                                 : SimilarityMode::kUpper;
      const int l = layer.layer_index;
      std::size_t v_count = 0, d_hat = 0, k = 0, d_shift = 0;
      const auto dims = LoadIndexMatrix(dir / LayerFile(l, "dims.idx"), &v_count, &d_hat);
      std::size_t v2 = 0, v3 = 0;
      const auto rows = LoadIndexMatrix(dir / LayerFile(l, "rows.idx"), &v2, &k);
      const auto shifts = LoadIndexMatrix(dir / LayerFile(l, "shifts.idx"), &v3, &d_shift);
      if (v2 != v_count || v3 != v_count || k != layer.k)
        throw ValidationError("mbn model: inconsistent index files for layer " + std::to_string(l));
      layer.clusterings.resize(v_count);
      for (std::size_t v = 0; v < v_count; ++v) {
        auto &c = layer.clusterings[v];
        c.selected_dims.assign(dims.begin() + static_cast<std::ptrdiff_t>(v * d_hat),
                               dims.begin() + static_cast<std::ptrdiff_t>((v + 1) * d_hat));
        c.source_rows.assign(rows.begin() + static_cast<std::ptrdiff_t>(v * k),
                             rows.begin() + static_cast<std::ptrdiff_t>((v + 1) * k));
        c.shifted_positions.assign(shifts.begin() + static_cast<std::ptrdiff_t>(v * d_shift),
                                   shifts.begin() + static_cast<std::ptrdiff_t>((v + 1) * d_shift));
      }
      if (layer.mode == SimilarityMode::kBottom) {
        const Matrix centers = LoadMatrixBinary(dir / LayerFile(l, "centers.bin"));
        if (static_cast<std::size_t>(centers.rows()) != v_count * k ||
            static_cast<std::size_t>(centers.cols()) != d_hat)
          throw ValidationError("mbn model: bad center matrix for layer " + std::to_string(l));
        for (std::size_t v = 0; v < v_count; ++v)
          layer.clusterings[v].centers =
              centers.middleRows(static_cast<Eigen::Index>(v * k), static_cast<Eigen::Index>(k));
      } else {
        std::size_t r = 0, c = 0;
        const auto offsets = LoadIndexMatrix(dir / LayerFile(l, "center_offsets.idx"), &r, &c);
        const auto columns = LoadIndexMatrix(dir / LayerFile(l, "center_columns.idx"), &r, &c);
        if (offsets.size() != v_count * k + 1 || offsets.back() != columns.size())
          throw ValidationError("mbn model: bad binary centers for layer " + std::to_string(l));
        std::size_t row = 0;
        for (auto &cl : layer.clusterings) {
          for (std::size_t i = 0; i < k; ++i, ++row)
            cl.center_ones.AppendRow(std::span<const std::uint32_t>(
                columns.data() + offsets[row], columns.data() + offsets[row + 1]));
          cl.BuildIndex();
        }
      }
      model.layers.push_back(std::move(layer));
    }
  } catch (const nlohmann::json::exception &e) {
    throw ValidationError("mbn model " + dir.string() + ": " + e.what());
  }
  model.pca.mean = LoadMatrixBinary(dir / "pca_mean.bin").row(0).transpose();
  model.pca.projection = LoadMatrixBinary(dir / "pca_projection.bin");
  const Matrix ev = LoadMatrixBinary(dir / "pca_eigenvalues.bin");
  model.pca.eigenvalues = ev.cols() > 0 ? Vector(ev.row(0).transpose()) : Vector();
  if (std::filesystem::exists(dir / "input_standardization.bin")) {
    const Matrix st = LoadMatrixBinary(dir / "input_standardization.bin");
    model.input_mean = st.row(0).transpose();
    model.input_scale = st.row(1).transpose();
  }
  return model;
}

}  // namespace mbnspk
