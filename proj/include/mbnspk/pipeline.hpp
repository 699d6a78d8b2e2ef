// mbnspk/pipeline.hpp

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

#ifndef MBNSPK_PIPELINE_HPP_
#define MBNSPK_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mbnspk/cluster.hpp"
#include "mbnspk/dataset.hpp"
#include "mbnspk/gmm.hpp"
#include "mbnspk/mbn.hpp"
#include "mbnspk/supervector.hpp"
#include "mbnspk/synthetic.hpp"

namespace mbnspk {

enum class Method { kMbn, kPca, kRawKMeans };

std::string MethodName(Method m);  // "mbn", "pca", "raw-kmeans"
Method ParseMethod(const std::string &name);

struct ClusterSpec {
  enum class Algorithm { kKMeans, kAgglomerative };
  Algorithm algorithm = Algorithm::kKMeans;
  /// k-means: defaults to the number of ground-truth speakers when unset.
  std::optional<std::size_t> num_clusters;
  std::optional<double> distance_threshold;  // agglomerative only
  std::size_t restarts = 10;
  std::size_t max_iters = 300;
  double tol = 1e-10;
};

struct PipelineConfig {
  std::optional<std::filesystem::path> manifest_path;
  std::optional<SyntheticCorpusSpec> synthetic;
  UbmConfig ubm;
  SupervectorOptions supervector;
  MbnConfig mbn;
  ClusterSpec cluster;
  std::vector<Method> methods{Method::kMbn};
  std::optional<std::filesystem::path> output_dir;  // nothing persisted when unset
  std::uint64_t master_seed = 0;

  void Validate() const;
};

/// Named sub-streams of the master seed.
struct StageSeeds {
  std::uint64_t corpus, ubm, mbn, kmeans;
};
StageSeeds DeriveSeeds(std::uint64_t master_seed);

struct MethodResult {
  Method method = Method::kMbn;
  std::optional<std::size_t> output_dim;  // unset for raw-kmeans
  std::optional<std::size_t> depth;       // hidden layers used (mbn only)
  std::optional<double> nmi;
  ClusterAssignment assignment;
  Matrix embedding;
};

struct PipelineReport {
  nlohmann::json effective_config;
  std::vector<MethodResult> results;

  nlohmann::json ToJson() const;
};

/// Evaluation report of one method: {"nmi", "num_clusters", "objective"}.
nlohmann::json EvaluationJson(const MethodResult &result);

/// Loads or generates the corpus described by config (synthetic corpora use
/// the corpus sub-seed of the master seed).
Dataset LoadPipelineDataset(const PipelineConfig &config);

/// UBM -> supervectors -> (MBN | PCA | identity) -> clustering -> NMI.
PipelineReport RunPipeline(const PipelineConfig &config);

/// Clusters an embedding as `spec` says; c falls back to `known_c`.
ClusterAssignment ClusterEmbedding(const Matrix &embedding, const ClusterSpec &spec,
                                   std::optional<std::size_t> known_c, std::uint64_t seed);

/// JSON <-> config. Unknown keys are rejected; missing keys keep defaults.
PipelineConfig PipelineConfigFromJson(const nlohmann::json &j);
nlohmann::json PipelineConfigToJson(const PipelineConfig &config);
nlohmann::json MbnConfigToJson(const MbnConfig &config);
MbnConfig MbnConfigFromJson(const nlohmann::json &j, MbnConfig base = {});
nlohmann::json SyntheticSpecToJson(const SyntheticCorpusSpec &spec);
SyntheticCorpusSpec SyntheticSpecFromJson(const nlohmann::json &j, SyntheticCorpusSpec base = {});

/// Writes a string to a file, creating parent directories.
void WriteTextFile(const std::filesystem::path &path, const std::string &text);
void WriteLines(const std::filesystem::path &path, const std::vector<std::string> &lines);
std::vector<std::string> ReadLines(const std::filesystem::path &path);

}  // namespace mbnspk

#endif  // MBNSPK_PIPELINE_HPP_
