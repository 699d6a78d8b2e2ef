// src/sweep.cpp

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

#include "mbnspk/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "mbnspk/matrix_io.hpp"
#include "mbnspk/pca.hpp"

namespace mbnspk {

using nlohmann::json;

void SweepSpec::Validate() const {
  if (mixture_counts.empty() || em_iteration_options.empty() || output_dims.empty() ||
      seeds.empty())
    throw ValidationError("sweep: mixture, EM-iteration, output-dim and seed lists must be nonempty");
  for (auto m : mixture_counts)
    if (m == 0) throw ValidationError("sweep: mixture counts must be positive");
  for (auto d : output_dims)
    if (d == 0) throw ValidationError("sweep: output dims must be positive");
  for (auto l : layer_truncations)
    if (l == 0) throw ValidationError("sweep: layer truncations start at 1");
}

std::size_t SweepResults::Failures() const {
  return std::count_if(rows.begin(), rows.end(), [](const SweepRow &r) { return !r.error.empty(); });
}

namespace {

using Clock = std::chrono::steady_clock;

double Since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct CellContext {
  const PipelineConfig *base;
  std::uint64_t seed;
  std::size_t mixtures, em_iters;
  std::optional<std::size_t> known_c;
  const std::vector<int> *truth;
  StageSeeds seeds;
};

SweepRow MakeRow(const CellContext &cell, Method method, std::optional<std::size_t> dim,
                 std::optional<std::size_t> depth) {
  SweepRow row;
  row.method = method;
  row.mixtures = cell.mixtures;
  row.em_iters = cell.em_iters;
  row.output_dim = dim;
  row.depth = depth;
  row.seed = cell.seed;
  return row;
}

// Clusters the leading `dim` columns of an embedding fit at the largest dim.
SweepRow ScoreEmbedding(const CellContext &cell, Method method, const Matrix &embedding,
                        std::optional<std::size_t> dim, std::optional<std::size_t> depth,
                        double fit_seconds) {
  SweepRow row = MakeRow(cell, method, dim, depth);
  const auto t0 = Clock::now();
  try {
    const std::size_t cols =
        dim ? std::min<std::size_t>(*dim, embedding.cols()) : embedding.cols();
    const Matrix view = embedding.leftCols(cols);
    const ClusterAssignment a =
        ClusterEmbedding(view, cell.base->cluster, cell.known_c, cell.seeds.kmeans);
    if (cell.truth) row.nmi = Nmi(a.labels, *cell.truth);
  } catch (const std::exception &e) {
    row.error = std::string("cluster: ") + e.what();
  }
  row.wall_seconds = fit_seconds + Since(t0);
  return row;
}

void FailRows(const CellContext &cell, Method method, const SweepSpec &sweep,
              const std::string &error, std::vector<SweepRow> *rows) {
  auto push = [&](std::optional<std::size_t> dim, std::optional<std::size_t> depth) {
    SweepRow row = MakeRow(cell, method, dim, depth);
    row.error = error;
    rows->push_back(row);
  };
  if (method == Method::kRawKMeans) {
    push(std::nullopt, std::nullopt);
    return;
  }
  for (auto d : sweep.output_dims) {
    push(d, std::nullopt);
    if (method == Method::kMbn)
      for (auto l : sweep.layer_truncations) push(d, l);
  }
}

void RunMethod(const CellContext &cell, Method method, const SweepSpec &sweep,
               const Matrix &supervectors, std::vector<SweepRow> *rows) {
  const std::size_t max_dim = *std::max_element(sweep.output_dims.begin(), sweep.output_dims.end());
  const auto t0 = Clock::now();
  if (method == Method::kRawKMeans) {
    rows->push_back(ScoreEmbedding(cell, method, supervectors, std::nullopt, std::nullopt, 0.0));
    return;
  }
  if (method == Method::kPca) {
    Matrix embedding;
    try {
      embedding = PcaTransform(PcaFit(supervectors, max_dim), supervectors);
    } catch (const std::exception &e) {
      FailRows(cell, method, sweep, std::string("pca: ") + e.what(), rows);
      return;
    }
    const double fit = Since(t0);
    for (auto d : sweep.output_dims)
      rows->push_back(ScoreEmbedding(cell, method, embedding, d, std::nullopt, fit));
    return;
  }

  MbnConfig config = cell.base->mbn;
  config.seed = cell.seeds.mbn;
  config.output_dim = max_dim;
  if (!config.c_hint && cell.known_c) config.c_hint = cell.known_c;
  MbnFit fit;
  try {
    fit = TrainMbn(supervectors, config, !sweep.layer_truncations.empty());
  } catch (const std::exception &e) {
    FailRows(cell, method, sweep, std::string("mbn: ") + e.what(), rows);
    return;
  }
  const double fit_seconds = Since(t0);
  const std::size_t depth = fit.model.Depth();
  for (auto d : sweep.output_dims)
    rows->push_back(ScoreEmbedding(cell, method, fit.embedding, d, depth, fit_seconds));
  for (auto l : sweep.layer_truncations) {
    if (l == depth) continue;  // already scored above
    const auto t1 = Clock::now();
    Matrix embedding;
    std::string error;
    if (l > depth) {
      error = "mbn: network has only " + std::to_string(depth) + " layers";
    } else {
      try {
        embedding = TruncateMbn(fit.model, fit.layer_codes[l - 1], l, max_dim).embedding;
      } catch (const std::exception &e) {
        error = std::string("mbn: ") + e.what();
      }
    }
    for (auto d : sweep.output_dims) {
      if (!error.empty()) {
        SweepRow row = MakeRow(cell, method, d, l);
        row.error = error;
        rows->push_back(row);
      } else {
        rows->push_back(ScoreEmbedding(cell, method, embedding, d, l, Since(t1)));
      }
    }
  }
}

}  // namespace

SweepResults RunSweep(const SweepSpec &sweep, const PipelineConfig &base) {
  sweep.Validate();
  base.Validate();
  SweepResults results;
  for (std::uint64_t seed : sweep.seeds) {
    PipelineConfig config = base;
    config.master_seed = seed;
    const Dataset dataset = LoadPipelineDataset(config);
    if (dataset.Size() == 0) throw ValidationError("sweep: dataset has no utterances");
    std::optional<std::size_t> known_c = base.cluster.num_clusters;
    if (!known_c && dataset.labels)
      known_c = std::set<int>(dataset.labels->begin(), dataset.labels->end()).size();
    const std::vector<std::string> ids = dataset.Ids();

    for (std::size_t mixtures : sweep.mixture_counts) {
      for (std::size_t em : sweep.em_iteration_options) {
        CellContext cell{&base, seed, mixtures, em, known_c,
                         dataset.labels ? &*dataset.labels : nullptr, DeriveSeeds(seed)};
        Matrix supervectors;
        const auto t0 = Clock::now();
        try {
          UbmConfig ubm = base.ubm;
          ubm.num_mixtures = mixtures;
          ubm.em_iterations = em;
          ubm.seed = cell.seeds.ubm;
          const GmmModel model = TrainUbm(dataset.utterances, ubm);
          supervectors = ExtractSupervectors(model, dataset.utterances, base.supervector);
          if (base.output_dir) {
            const auto dir = *base.output_dir / "cells" / ("seed_" + std::to_string(seed)) /
                             ("C" + std::to_string(mixtures) + "_em" + std::to_string(em));
            SaveGmmJson(dir / "ubm.json", model);
            SaveMatrixBinary(dir / "supervectors.bin", supervectors);
            WriteLines(dir / "utterance_ids.txt", ids);
          }
        } catch (const std::exception &e) {
          for (Method m : base.methods)
            FailRows(cell, m, sweep, std::string("ubm: ") + e.what(), &results.rows);
          continue;
        }
        const double ubm_seconds = Since(t0);
        const std::size_t first = results.rows.size();
        for (Method m : base.methods) RunMethod(cell, m, sweep, supervectors, &results.rows);
        for (std::size_t i = first; i < results.rows.size(); ++i)
          results.rows[i].wall_seconds += ubm_seconds;
      }
    }
  }
  if (base.output_dir) WriteSweepCsv(*base.output_dir / "results.csv", results.rows);
  return results;
}

// ---------------------------------------------------------------------------
// Aggregation

namespace {

template <typename KeyFn>
std::vector<SweepRow> BestBy(const std::vector<SweepRow> &rows, KeyFn key, bool drop_dim,
                             bool drop_mixtures) {
  using Key = decltype(key(rows.front()));
  std::map<Key, SweepRow> best;
  std::vector<Key> order;
  for (const auto &r : rows) {
    if (!r.nmi) continue;
    const Key k = key(r);
    auto it = best.find(k);
    if (it == best.end()) {
      SweepRow b = r;
      if (drop_dim) b.output_dim.reset();
      if (drop_mixtures) b.mixtures = 0;
      b.wall_seconds = 0.0;
      best.emplace(k, b);
      order.push_back(k);
      it = best.find(k);
    }
    if (*r.nmi > *it->second.nmi) it->second.nmi = r.nmi;
  }
  std::vector<SweepRow> out;
  for (const auto &k : order) out.push_back(best.at(k));
  return out;
}

}  // namespace

std::vector<SweepRow> BestOverDims(const std::vector<SweepRow> &rows) {
  if (rows.empty()) return {};
  return BestBy(
      rows,
      [](const SweepRow &r) {
        return std::make_tuple(static_cast<int>(r.method), r.mixtures, r.em_iters,
                               r.depth.value_or(0), r.seed);
      },
      true, false);
}

std::vector<SweepRow> BestOverUbms(const std::vector<SweepRow> &rows) {
  if (rows.empty()) return {};
  return BestBy(
      rows,
      [](const SweepRow &r) {
        return std::make_tuple(static_cast<int>(r.method), r.em_iters, r.output_dim.value_or(0),
                               r.depth.value_or(0), r.seed);
      },
      false, true);
}

double Median(std::vector<double> values) {
  if (values.empty()) throw ValidationError("median of an empty list");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<SweepRow> MedianOverSeeds(const std::vector<SweepRow> &rows) {
  using Key = std::tuple<int, std::size_t, std::size_t, std::size_t, std::size_t>;
  std::map<Key, std::vector<double>> values;
  std::map<Key, SweepRow> proto;
  std::vector<Key> order;
  for (const auto &r : rows) {
    if (!r.nmi) continue;
    const Key k{static_cast<int>(r.method), r.mixtures, r.em_iters, r.output_dim.value_or(0),
                r.depth.value_or(0)};
    if (!proto.count(k)) {
      SweepRow p = r;
      p.seed = 0;
      p.wall_seconds = 0.0;
      proto.emplace(k, p);
      order.push_back(k);
    }
    values[k].push_back(*r.nmi);
  }
  std::vector<SweepRow> out;
  for (const auto &k : order) {
    SweepRow r = proto.at(k);
    r.nmi = Median(values.at(k));
    out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV

void WriteSweepCsv(const std::filesystem::path &path, const std::vector<SweepRow> &rows) {
  std::string text = "method,mixtures,em_iters,output_dim,depth,seed,nmi,wall_seconds\n";
  char buf[64];
  for (const auto &r : rows) {
    text += MethodName(r.method) + ',' + std::to_string(r.mixtures) + ',' +
            std::to_string(r.em_iters) + ',' +
            (r.output_dim ? std::to_string(*r.output_dim) : "") + ',' +
            (r.depth ? std::to_string(*r.depth) : "") + ',' + std::to_string(r.seed) + ',';
    if (r.nmi) {
      std::snprintf(buf, sizeof(buf), "%.17g", *r.nmi);
      text += buf;
    }
    std::snprintf(buf, sizeof(buf), ",%.6f\n", r.wall_seconds);
    text += buf;
  }
  WriteTextFile(path, text);
}

std::vector<SweepRow> ReadSweepCsv(const std::filesystem::path &path) {
  const auto lines = ReadLines(path);
  if (lines.empty() || lines[0].rfind("method,mixtures,em_iters,output_dim,depth,seed,nmi", 0) != 0)
    throw ValidationError(path.string() + ": not a sweep results table");
  std::vector<SweepRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::vector<std::string> f;
    std::stringstream ss(lines[i]);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (!lines[i].empty() && lines[i].back() == ',') f.emplace_back();
    if (f.size() < 7)
      throw ValidationError(path.string() + ": line " + std::to_string(i + 1) + ": expected 8 fields");
    try {
      SweepRow r;
      r.method = ParseMethod(f[0]);
      r.mixtures = std::stoull(f[1]);
      r.em_iters = std::stoull(f[2]);
      if (!f[3].empty()) r.output_dim = std::stoull(f[3]);
      if (!f[4].empty()) r.depth = std::stoull(f[4]);
      r.seed = std::stoull(f[5]);
      if (!f[6].empty()) r.nmi = std::stod(f[6]);
      if (f.size() > 7 && !f[7].empty()) r.wall_seconds = std::stod(f[7]);
      rows.push_back(r);
    } catch (const std::logic_error &e) {
      throw ValidationError(path.string() + ": line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return rows;
}

json SweepSpecToJson(const SweepSpec &s) {
  return {{"mixtures", s.mixture_counts},
          {"em_iterations", s.em_iteration_options},
          {"output_dims", s.output_dims},
          {"seeds", s.seeds},
          {"layer_truncations", s.layer_truncations}};
}

SweepSpec SweepSpecFromJson(const json &j, SweepSpec s) {
  try {
    if (!j.is_object()) throw ValidationError("sweep: expected a JSON object");
    for (const auto &[key, value] : j.items()) {
      if (key == "mixtures") {
        s.mixture_counts = value.get<std::vector<std::size_t>>();
      } else if (key == "em_iterations") {
        s.em_iteration_options = value.get<std::vector<std::size_t>>();
      } else if (key == "output_dims") {
        s.output_dims = value.get<std::vector<std::size_t>>();
      } else if (key == "seeds") {
        s.seeds = value.get<std::vector<std::uint64_t>>();
      } else if (key == "layer_truncations") {
        s.layer_truncations = value.get<std::vector<std::size_t>>();
      } else {
        throw ValidationError("sweep: unknown key '" + key + "'");
      }
    }
  } catch (const json::exception &e) {
    throw ValidationError(std::string("sweep: ") + e.what());
  }
  return s;
}

}  // namespace mbnspk
