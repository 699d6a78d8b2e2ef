// src/pipeline.cpp

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

#include "mbnspk/pipeline.hpp"

#include <fstream>
#include <set>

#include "mbnspk/matrix_io.hpp"
#include "mbnspk/pca.hpp"
#include "mbnspk/rng.hpp"

namespace mbnspk {

using nlohmann::json;

std::string MethodName(Method m) {
  switch (m) {
    case Method::kMbn: return "mbn";
    case Method::kPca: return "pca";
    case Method::kRawKMeans: return "raw-kmeans";
  }
  return "?";
}

Method ParseMethod(const std::string &name) {
  if (name == "mbn") return Method::kMbn;
  if (name == "pca") return Method::kPca;
  if (name == "raw-kmeans" || name == "raw" || name == "kmeans") return Method::kRawKMeans;
  throw ValidationError("unknown method '" + name + "' (expected mbn, pca or raw-kmeans)");
}

StageSeeds DeriveSeeds(std::uint64_t master_seed) {
  return {StreamSeed(master_seed, "corpus"), StreamSeed(master_seed, "ubm"),
          StreamSeed(master_seed, "mbn"), StreamSeed(master_seed, "kmeans")};
}

void PipelineConfig::Validate() const {
  if (manifest_path.has_value() == synthetic.has_value())
    throw ValidationError("pipeline: give exactly one dataset source (manifest or synthetic)");
  if (synthetic) synthetic->Validate();
  ubm.Validate();
  mbn.Validate();
  if (methods.empty()) throw ValidationError("pipeline: no methods selected");
  if (cluster.num_clusters && *cluster.num_clusters == 0)
    throw ValidationError("pipeline: num_clusters must be positive");
  if (cluster.restarts == 0 || cluster.max_iters == 0 || !(cluster.tol > 0.0))
    throw ValidationError("pipeline: invalid k-means settings");
}

namespace {

template <typename Fn>
auto Stage(const char *name, Fn &&fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ValidationError &e) {
    throw ValidationError(std::string(name) + ": " + e.what());
  } catch (const RuntimeFailure &e) {
    throw RuntimeFailure(std::string(name) + ": " + e.what());
  } catch (const std::bad_alloc &) {
    throw RuntimeFailure(std::string(name) + ": out of memory");
  }
}

std::optional<std::size_t> KnownClusters(const ClusterSpec &spec, const Dataset &dataset) {
  if (spec.num_clusters) return spec.num_clusters;
  if (dataset.labels) return std::set<int>(dataset.labels->begin(), dataset.labels->end()).size();
  return std::nullopt;
}

template <typename T>
json OptionalJson(const std::optional<T> &v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

Dataset LoadPipelineDataset(const PipelineConfig &config) {
  if (config.synthetic) {
    SyntheticCorpusSpec spec = *config.synthetic;
    spec.seed = DeriveSeeds(config.master_seed).corpus;
    return GenerateSyntheticCorpus(spec);
  }
  return LoadDataset(*config.manifest_path);
}

ClusterAssignment ClusterEmbedding(const Matrix &embedding, const ClusterSpec &spec,
                                   std::optional<std::size_t> known_c, std::uint64_t seed) {
  const auto c = spec.num_clusters ? spec.num_clusters : known_c;
  if (spec.algorithm == ClusterSpec::Algorithm::kKMeans) {
    if (!c) throw ValidationError("k-means needs the number of speakers (num_clusters)");
    KMeansConfig km;
    km.num_clusters = *c;
    km.restarts = spec.restarts;
    km.max_iters = spec.max_iters;
    km.tol = spec.tol;
    km.seed = seed;
    return KMeans(embedding, km);
  }
  AgglomerativeStop stop;
  stop.distance_threshold = spec.distance_threshold;
  if (!spec.distance_threshold) stop.num_clusters = c;
  if (spec.num_clusters) stop.num_clusters = spec.num_clusters;
  if (!stop.num_clusters && !stop.distance_threshold)
    throw ValidationError("agglomerative clustering needs num_clusters or distance_threshold");
  return Agglomerative(embedding, stop).assignment;
}

json EvaluationJson(const MethodResult &result) {
  return {{"nmi", OptionalJson(result.nmi)},
          {"num_clusters", result.assignment.OccupiedClusters()},
          {"objective", OptionalJson(result.assignment.objective)}};
}

json PipelineReport::ToJson() const {
  json results_json = json::array();
  for (const auto &r : results) {
    json j = EvaluationJson(r);
    j["method"] = MethodName(r.method);
    j["output_dim"] = OptionalJson(r.output_dim);
    j["depth"] = OptionalJson(r.depth);
    j["requested_clusters"] = r.assignment.num_clusters;
    results_json.push_back(std::move(j));
  }
  return {{"config", effective_config}, {"results", results_json}};
}

PipelineReport RunPipeline(const PipelineConfig &config) {
  config.Validate();
  const StageSeeds seeds = DeriveSeeds(config.master_seed);
  const auto &out = config.output_dir;

  const Dataset dataset = Stage("dataset", [&] { return LoadPipelineDataset(config); });
  if (dataset.Size() == 0) throw ValidationError("dataset: no utterances");
  const auto known_c = KnownClusters(config.cluster, dataset);
  const std::vector<std::string> ids = dataset.Ids();

  UbmConfig ubm_cfg = config.ubm;
  ubm_cfg.seed = seeds.ubm;
  const GmmModel ubm = Stage("ubm", [&] { return TrainUbm(dataset.utterances, ubm_cfg); });
  const Matrix supervectors = Stage("supervector", [&] {
    return ExtractSupervectors(ubm, dataset.utterances, config.supervector);
  });

  PipelineReport report;
  json &eff = report.effective_config;
  eff = PipelineConfigToJson(config);
  eff["seeds"] = {{"master", config.master_seed}, {"corpus", seeds.corpus}, {"ubm", seeds.ubm},
                  {"mbn", seeds.mbn}, {"kmeans", seeds.kmeans}};
  eff["num_utterances"] = dataset.Size();
  eff["feature_dim"] = dataset.Dim();
  eff["supervector_dim"] = supervectors.cols();
  eff["num_clusters"] = OptionalJson(known_c);
  if (config.output_dir.has_value()) eff.erase("output_dir");

  if (out) {
    Stage("persist", [&] {
      if (config.synthetic) SaveDataset(*out / "corpus", dataset);
      SaveGmmJson(*out / "ubm.json", ubm);
      SaveMatrixBinary(*out / "supervectors.bin", supervectors);
      WriteLines(*out / "utterance_ids.txt", ids);
      return 0;
    });
  }

  for (Method method : config.methods) {
    MethodResult result;
    result.method = method;
    const std::string name = MethodName(method);
    if (method == Method::kMbn) {
      MbnConfig mcfg = config.mbn;
      mcfg.seed = seeds.mbn;
      if (!mcfg.c_hint && known_c) mcfg.c_hint = known_c;
      MbnFit fit = Stage("mbn", [&] { return TrainMbn(supervectors, mcfg); });
      result.depth = fit.model.Depth();
      result.output_dim = fit.model.pca.OutputDim();
      eff["mbn_resolved"] = MbnConfigToJson(fit.model.config);
      if (out) {
        SaveMbnModel(*out / "mbn_model", fit.model);
        SaveMatrixBinary(*out / "embedding_mbn.bin", fit.embedding);
      }
      result.embedding = std::move(fit.embedding);
    } else if (method == Method::kPca) {
      const PcaModel pca = Stage("pca", [&] { return PcaFit(supervectors, config.mbn.output_dim); });
      result.output_dim = pca.OutputDim();
      result.embedding = PcaTransform(pca, supervectors);
      if (out) {
        SaveMatrixBinary(*out / "pca_model" / "mean.bin", Matrix(pca.mean.transpose()));
        SaveMatrixBinary(*out / "pca_model" / "projection.bin", pca.projection);
        SaveMatrixBinary(*out / "embedding_pca.bin", result.embedding);
      }
    } else {
      result.embedding = supervectors;
    }
    result.assignment = Stage("cluster", [&] {
      return ClusterEmbedding(result.embedding, config.cluster, known_c, seeds.kmeans);
    });
    if (dataset.labels) result.nmi = Nmi(result.assignment.labels, *dataset.labels);
    if (out) {
      WriteAssignmentsCsv(*out / ("assignments_" + name + ".csv"), ids, result.assignment.labels);
      WriteTextFile(*out / ("evaluation_" + name + ".json"), EvaluationJson(result).dump(2) + "\n");
    }
    report.results.push_back(std::move(result));
  }
  if (out) WriteTextFile(*out / "report.json", report.ToJson().dump(2) + "\n");
  return report;
}

// ---------------------------------------------------------------------------
// JSON configuration

namespace {

void RejectUnknown(const json &j, std::initializer_list<const char *> known, const char *where) {
  if (!j.is_object()) throw ValidationError(std::string(where) + ": expected a JSON object");
  for (const auto &[key, value] : j.items()) {
    bool ok = false;
    for (const char *k : known) ok = ok || key == k;
    if (!ok) throw ValidationError(std::string(where) + ": unknown key '" + key + "'");
  }
}

template <typename T>
void Read(const json &j, const char *key, T *out) {
  if (j.contains(key) && !j.at(key).is_null()) *out = j.at(key).get<T>();
}

template <typename T>
void ReadOptional(const json &j, const char *key, std::optional<T> *out) {
  if (!j.contains(key)) return;
  if (j.at(key).is_null()) {
    out->reset();
  } else {
    *out = j.at(key).get<T>();
  }
}

}  // namespace

json SyntheticSpecToJson(const SyntheticCorpusSpec &s) {
  return {{"num_speakers", s.num_speakers},
          {"utterances_per_speaker", s.utterances_per_speaker},
          {"min_frames", s.min_frames},
          {"max_frames", s.max_frames},
          {"feature_dim", s.feature_dim},
          {"mixtures_per_speaker", s.mixtures_per_speaker},
          {"speaker_separation", s.speaker_separation},
          {"seed", s.seed}};
}

SyntheticCorpusSpec SyntheticSpecFromJson(const json &j, SyntheticCorpusSpec s) {
  RejectUnknown(j, {"num_speakers", "utterances_per_speaker", "min_frames", "max_frames",
                    "feature_dim", "mixtures_per_speaker", "speaker_separation", "seed"},
                "synthetic");
  Read(j, "num_speakers", &s.num_speakers);
  Read(j, "utterances_per_speaker", &s.utterances_per_speaker);
  Read(j, "min_frames", &s.min_frames);
  Read(j, "max_frames", &s.max_frames);
  Read(j, "feature_dim", &s.feature_dim);
  Read(j, "mixtures_per_speaker", &s.mixtures_per_speaker);
  Read(j, "speaker_separation", &s.speaker_separation);
  Read(j, "seed", &s.seed);
  return s;
}

json MbnConfigToJson(const MbnConfig &c) {
  return {{"V", c.clusterings_per_layer},
          {"a", c.feature_fraction},
          {"r", OptionalJson(c.reconstruction_fraction)},
          {"k_schedule", c.k_schedule},
          {"k_max", c.k_max},
          {"c_hint", OptionalJson(c.c_hint)},
          {"k_decay", c.k_decay},
          {"output_dim", c.output_dim},
          {"standardize_input", c.standardize_input},
          {"seed", c.seed}};
}

MbnConfig MbnConfigFromJson(const json &j, MbnConfig c) {
  RejectUnknown(j, {"V", "a", "r", "k_schedule", "k_max", "c_hint", "k_decay", "output_dim",
                    "standardize_input", "seed"},
                "mbn");
  Read(j, "V", &c.clusterings_per_layer);
  Read(j, "a", &c.feature_fraction);
  ReadOptional(j, "r", &c.reconstruction_fraction);
  Read(j, "k_schedule", &c.k_schedule);
  Read(j, "k_max", &c.k_max);
  ReadOptional(j, "c_hint", &c.c_hint);
  Read(j, "k_decay", &c.k_decay);
  Read(j, "output_dim", &c.output_dim);
  Read(j, "standardize_input", &c.standardize_input);
  Read(j, "seed", &c.seed);
  return c;
}

json PipelineConfigToJson(const PipelineConfig &config) {
  json dataset;
  if (config.manifest_path) dataset["manifest"] = config.manifest_path->string();
  if (config.synthetic) {
    json s = SyntheticSpecToJson(*config.synthetic);
    s.erase("seed");  // derived from the master seed
    dataset["synthetic"] = s;
  }
  json methods = json::array();
  for (Method m : config.methods) methods.push_back(MethodName(m));
  json mbn = MbnConfigToJson(config.mbn);
  mbn.erase("seed");
  const auto &cl = config.cluster;
  json j = {
      {"seed", config.master_seed},
      {"dataset", dataset},
      {"methods", methods},
      {"ubm",
       {{"mixtures", config.ubm.num_mixtures},
        {"em_iterations", config.ubm.em_iterations},
        {"variance_floor_factor", config.ubm.variance_floor_factor},
        {"normalize_supervectors", config.supervector.normalize}}},
      {"mbn", mbn},
      {"cluster",
       {{"algorithm", cl.algorithm == ClusterSpec::Algorithm::kKMeans ? "kmeans" : "agglomerative"},
        {"num_clusters", OptionalJson(cl.num_clusters)},
        {"distance_threshold", OptionalJson(cl.distance_threshold)},
        {"restarts", cl.restarts},
        {"max_iters", cl.max_iters},
        {"tol", cl.tol}}}};
  if (config.output_dir) j["output_dir"] = config.output_dir->string();
  return j;
}

PipelineConfig PipelineConfigFromJson(const json &j) {
  PipelineConfig c;
  try {
    RejectUnknown(j, {"seed", "dataset", "methods", "ubm", "mbn", "cluster", "output_dir"},
                  "pipeline config");
    Read(j, "seed", &c.master_seed);
    if (j.contains("output_dir") && !j.at("output_dir").is_null())
      c.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("dataset")) {
      const json &d = j.at("dataset");
      RejectUnknown(d, {"manifest", "synthetic"}, "dataset");
      if (d.contains("manifest") && !d.at("manifest").is_null())
        c.manifest_path = d.at("manifest").get<std::string>();
      if (d.contains("synthetic") && !d.at("synthetic").is_null())
        c.synthetic = SyntheticSpecFromJson(d.at("synthetic"));
    }
    if (j.contains("methods")) {
      c.methods.clear();
      for (const auto &m : j.at("methods")) c.methods.push_back(ParseMethod(m.get<std::string>()));
    }
    if (j.contains("ubm")) {
      const json &u = j.at("ubm");
      RejectUnknown(u, {"mixtures", "em_iterations", "variance_floor_factor", "normalize_supervectors"},
                    "ubm");
      Read(u, "mixtures", &c.ubm.num_mixtures);
      Read(u, "em_iterations", &c.ubm.em_iterations);
      Read(u, "variance_floor_factor", &c.ubm.variance_floor_factor);
      Read(u, "normalize_supervectors", &c.supervector.normalize);
    }
    if (j.contains("mbn")) c.mbn = MbnConfigFromJson(j.at("mbn"), c.mbn);
    if (j.contains("cluster")) {
      const json &cl = j.at("cluster");
      RejectUnknown(cl, {"algorithm", "num_clusters", "distance_threshold", "restarts", "max_iters", "tol"},
                    "cluster");
      if (cl.contains("algorithm")) {
        const auto a = cl.at("algorithm").get<std::string>();
        if (a == "kmeans") {
          c.cluster.algorithm = ClusterSpec::Algorithm::kKMeans;
        } else if (a == "agglomerative") {
          c.cluster.algorithm = ClusterSpec::Algorithm::kAgglomerative;
        } else {
          throw ValidationError("cluster: unknown algorithm '" + a + "'");
        }
      }
      ReadOptional(cl, "num_clusters", &c.cluster.num_clusters);
      ReadOptional(cl, "distance_threshold", &c.cluster.distance_threshold);
      Read(cl, "restarts", &c.cluster.restarts);
      Read(cl, "max_iters", &c.cluster.max_iters);
      Read(cl, "tol", &c.cluster.tol);
    }
  } catch (const json::exception &e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  return c;
}

void WriteTextFile(const std::filesystem::path &path, const std::string &text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw RuntimeFailure("cannot write " + path.string());
  os << text;
}

void WriteLines(const std::filesystem::path &path, const std::vector<std::string> &lines) {
  std::string text;
  for (const auto &l : lines) text += l + '\n';
  WriteTextFile(path, text);
}

std::vector<std::string> ReadLines(const std::filesystem::path &path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("file not found: " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace mbnspk
