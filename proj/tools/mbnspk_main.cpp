// tools/mbnspk_main.cpp

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

// Command-line front end. Every subcommand takes an optional --config JSON
// file in the pipeline schema; flags override the values read from it.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include "CLI11.hpp"
#include "json.hpp"
#include "mbnspk/cluster.hpp"
#include "mbnspk/dataset.hpp"
#include "mbnspk/gmm.hpp"
#include "mbnspk/matrix_io.hpp"
#include "mbnspk/mbn.hpp"
#include "mbnspk/parallel.hpp"
#include "mbnspk/pca.hpp"
#include "mbnspk/pipeline.hpp"
#include "mbnspk/plot.hpp"
#include "mbnspk/supervector.hpp"
#include "mbnspk/sweep.hpp"
#include "mbnspk/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mbnspk;

namespace {

// Optional flag: stored only when given on the command line.
template <typename T>
CLI::Option *Flag(CLI::App *app, const std::string &name, std::optional<T> *dst,
                  const std::string &help) {
  return app->add_option_function<T>(name, [dst](const T &v) { *dst = v; }, help);
}

json ReadJsonFile(const fs::path &path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("config file not found: " + path.string());
  try {
    return json::parse(is);
  } catch (const json::exception &e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void PrintJson(const json &j) { std::cout << j.dump(2) << "\n"; }

template <typename T>
void Set(const std::optional<T> &src, T *dst) {
  if (src) *dst = *src;
}

// Flags shared by every stage that touches a pipeline config section.
struct Overrides {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> manifest, output_dir;
  bool synthetic = false;
  std::vector<std::string> methods;
  // dataset.synthetic
  std::optional<std::size_t> speakers, utterances, min_frames, max_frames, feature_dim,
      speaker_mixtures;
  std::optional<double> separation;
  // ubm
  std::optional<std::size_t> mixtures;
  std::optional<int> em_iterations;
  std::optional<double> variance_floor_factor;
  bool normalize = false;
  // mbn
  std::optional<std::size_t> V, k_max, c_hint, output_dim;
  std::optional<double> a, r, k_decay;
  std::vector<std::size_t> k_schedule;
  bool standardize = false;
  // cluster
  std::optional<std::string> algorithm;
  std::optional<std::size_t> num_clusters, restarts, max_iters;
  std::optional<double> distance_threshold, tol;

  void AddConfig(CLI::App *app) {
    Flag(app, "--config", &config, "JSON config file (pipeline schema)")->check(CLI::ExistingFile);
    Flag(app, "--seed", &seed, "master seed");
  }
  void AddDataset(CLI::App *app) {
    Flag(app, "--manifest", &manifest, "dataset manifest (dataset.manifest)");
    app->add_flag("--synthetic", synthetic, "use the synthetic corpus (dataset.synthetic)");
    AddSynthetic(app);
  }
  void AddSynthetic(CLI::App *app) {
    Flag(app, "--speakers", &speakers, "dataset.synthetic.num_speakers");
    Flag(app, "--utterances", &utterances, "dataset.synthetic.utterances_per_speaker");
    Flag(app, "--min-frames", &min_frames, "dataset.synthetic.min_frames");
    Flag(app, "--max-frames", &max_frames, "dataset.synthetic.max_frames");
    Flag(app, "--feature-dim", &feature_dim, "dataset.synthetic.feature_dim");
    Flag(app, "--speaker-mixtures", &speaker_mixtures, "dataset.synthetic.mixtures_per_speaker");
    Flag(app, "--separation", &separation, "dataset.synthetic.speaker_separation");
  }
  void AddUbm(CLI::App *app) {
    Flag(app, "--mixtures", &mixtures, "ubm.mixtures");
    Flag(app, "--em-iterations", &em_iterations, "ubm.em_iterations");
    Flag(app, "--variance-floor-factor", &variance_floor_factor, "ubm.variance_floor_factor");
  }
  void AddSupervector(CLI::App *app) {
    app->add_flag("--normalize-supervectors", normalize, "ubm.normalize_supervectors");
  }
  void AddMbn(CLI::App *app) {
    Flag(app, "--V", &V, "mbn.V: clusterings per layer");
    Flag(app, "--a", &a, "mbn.a: feature fraction");
    Flag(app, "--r", &r, "mbn.r: reconstruction fraction (default: automatic)");
    app->add_option("--k-schedule", k_schedule, "mbn.k_schedule (default: automatic)");
    Flag(app, "--k-max", &k_max, "mbn.k_max");
    Flag(app, "--c-hint", &c_hint, "mbn.c_hint");
    Flag(app, "--k-decay", &k_decay, "mbn.k_decay");
    Flag(app, "--output-dim", &output_dim, "mbn.output_dim (also the PCA output dim)");
    app->add_flag("--standardize-input", standardize, "mbn.standardize_input");
  }
  void AddCluster(CLI::App *app) {
    Flag(app, "--algorithm", &algorithm, "cluster.algorithm")
        ->check(CLI::IsMember({"kmeans", "agglomerative"}));
    Flag(app, "--num-clusters", &num_clusters, "cluster.num_clusters");
    Flag(app, "--distance-threshold", &distance_threshold, "cluster.distance_threshold");
    Flag(app, "--restarts", &restarts, "cluster.restarts");
    Flag(app, "--max-iters", &max_iters, "cluster.max_iters");
    Flag(app, "--tol", &tol, "cluster.tol");
  }

  // The config file, if any, then the flags.
  PipelineConfig Resolve(json *extra = nullptr) const {
    json j = json::object();
    if (config) j = ReadJsonFile(*config);
    if (extra && j.contains("sweep")) {
      *extra = j.at("sweep");
      j.erase("sweep");
    }
    PipelineConfig c = PipelineConfigFromJson(j);
    Set(seed, &c.master_seed);
    if (output_dir) c.output_dir = *output_dir;
    if (manifest) {
      c.manifest_path = *manifest;
      c.synthetic.reset();
    }
    if (synthetic) {
      if (!c.synthetic) c.synthetic = SyntheticCorpusSpec{};
      c.manifest_path.reset();
    }
    if (c.synthetic) {
      Set(speakers, &c.synthetic->num_speakers);
      Set(utterances, &c.synthetic->utterances_per_speaker);
      Set(min_frames, &c.synthetic->min_frames);
      Set(max_frames, &c.synthetic->max_frames);
      Set(feature_dim, &c.synthetic->feature_dim);
      Set(speaker_mixtures, &c.synthetic->mixtures_per_speaker);
      Set(separation, &c.synthetic->speaker_separation);
    }
    if (!methods.empty()) {
      c.methods.clear();
      for (const auto &m : methods) c.methods.push_back(ParseMethod(m));
    }
    Set(mixtures, &c.ubm.num_mixtures);
    Set(em_iterations, &c.ubm.em_iterations);
    Set(variance_floor_factor, &c.ubm.variance_floor_factor);
    if (normalize) c.supervector.normalize = true;
    Set(V, &c.mbn.clusterings_per_layer);
    Set(a, &c.mbn.feature_fraction);
    if (r) c.mbn.reconstruction_fraction = r;
    if (!k_schedule.empty()) c.mbn.k_schedule = k_schedule;
    Set(k_max, &c.mbn.k_max);
    if (c_hint) c.mbn.c_hint = c_hint;
    Set(k_decay, &c.mbn.k_decay);
    Set(output_dim, &c.mbn.output_dim);
    if (standardize) c.mbn.standardize_input = true;
    if (algorithm)
      c.cluster.algorithm = *algorithm == "kmeans" ? ClusterSpec::Algorithm::kKMeans
                                                   : ClusterSpec::Algorithm::kAgglomerative;
    if (num_clusters) c.cluster.num_clusters = num_clusters;
    if (distance_threshold) c.cluster.distance_threshold = distance_threshold;
    Set(restarts, &c.cluster.restarts);
    Set(max_iters, &c.cluster.max_iters);
    Set(tol, &c.cluster.tol);
    return c;
  }
};

// Per-utterance ids aligned with a matrix: explicit file, else <input>.ids.txt
// next to it, else utterance_<i>.
std::vector<std::string> IdsFor(const std::optional<std::string> &ids_path, const fs::path &input,
                                std::size_t rows) {
  std::vector<std::string> ids;
  fs::path p = ids_path ? fs::path(*ids_path) : fs::path(input.string() + ".ids.txt");
  if (!ids_path && !fs::exists(p)) p = input.parent_path() / "utterance_ids.txt";
  if (ids_path || fs::exists(p)) {
    ids = ReadLines(p);
    if (ids.size() != rows)
      throw ValidationError(p.string() + ": " + std::to_string(ids.size()) + " ids for " +
                            std::to_string(rows) + " rows");
    return ids;
  }
  for (std::size_t i = 0; i < rows; ++i) ids.push_back("utterance_" + std::to_string(i));
  return ids;
}

std::map<std::string, std::string> TruthById(const fs::path &manifest) {
  const Dataset d = LoadDataset(manifest);
  if (!d.labels) throw ValidationError(manifest.string() + ": manifest has no labels");
  std::map<std::string, std::string> truth;
  const auto ids = d.Ids();
  for (std::size_t i = 0; i < ids.size(); ++i) truth[ids[i]] = d.label_names[(*d.labels)[i]];
  return truth;
}

std::vector<int> Encode(const std::vector<std::string> &names) {
  std::map<std::string, int> id;
  std::vector<int> out;
  for (const auto &n : names) out.push_back(id.emplace(n, static_cast<int>(id.size())).first->second);
  return out;
}

// Carries the id list of an input matrix over to a derived matrix.
void PropagateIds(const fs::path &input, const std::string &output, std::size_t rows) {
  const fs::path ids = input.string() + ".ids.txt";
  if (fs::exists(ids)) WriteLines(output + ".ids.txt", IdsFor(ids.string(), input, rows));
}

void PcaSave(const fs::path &dir, const PcaModel &m) {
  SaveMatrixBinary(dir / "mean.bin", Matrix(m.mean.transpose()));
  SaveMatrixBinary(dir / "projection.bin", m.projection);
  SaveMatrixBinary(dir / "eigenvalues.bin", Matrix(m.eigenvalues.transpose()));
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Speaker clustering with GMM/UBM supervectors and multilayer bootstrap networks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "mbnspk 1.0");
  Overrides o;

  // synth
  auto *synth = app.add_subcommand("synth", "generate a synthetic speaker corpus");
  std::string synth_out, synth_format = "bin";
  o.AddConfig(synth);
  o.AddSynthetic(synth);
  synth->add_option("--out", synth_out, "output directory")->required();
  synth->add_option("--format", synth_format, "feature file format")
      ->check(CLI::IsMember({"bin", "csv"}));

  // ubm-train
  auto *ubm_train = app.add_subcommand("ubm-train", "train a diagonal-covariance UBM");
  std::string ubm_out;
  o.AddConfig(ubm_train);
  o.AddDataset(ubm_train);
  o.AddUbm(ubm_train);
  ubm_train->add_option("--out", ubm_out, "UBM JSON file")->required();

  // svec
  auto *svec = app.add_subcommand("svec", "extract Baum-Welch supervectors");
  std::string svec_ubm, svec_out;
  o.AddConfig(svec);
  o.AddDataset(svec);
  o.AddSupervector(svec);
  svec->add_option("--ubm", svec_ubm, "UBM JSON file")->required()->check(CLI::ExistingFile);
  svec->add_option("--out", svec_out, "supervector matrix (.bin or .csv)")->required();

  // mbn-fit
  auto *mbn_fit = app.add_subcommand("mbn-fit", "train an MBN and embed its input");
  std::string mbn_input, mbn_model_out, mbn_embedding_out;
  o.AddConfig(mbn_fit);
  o.AddMbn(mbn_fit);
  mbn_fit->add_option("--input", mbn_input, "supervector matrix")->required()->check(CLI::ExistingFile);
  mbn_fit->add_option("--model-out", mbn_model_out, "model directory");
  mbn_fit->add_option("--embedding-out", mbn_embedding_out, "embedding matrix")->required();

  // pca-fit
  auto *pca_fit = app.add_subcommand("pca-fit", "PCA baseline embedding");
  std::string pca_input, pca_model_out, pca_embedding_out;
  o.AddConfig(pca_fit);
  Flag(pca_fit, "--output-dim", &o.output_dim, "mbn.output_dim");
  pca_fit->add_option("--input", pca_input, "input matrix")->required()->check(CLI::ExistingFile);
  pca_fit->add_option("--model-out", pca_model_out, "model directory");
  pca_fit->add_option("--embedding-out", pca_embedding_out, "embedding matrix")->required();

  // cluster
  auto *cluster = app.add_subcommand("cluster", "cluster an embedding");
  std::string cluster_input, cluster_out;
  std::optional<std::string> cluster_ids;
  o.AddConfig(cluster);
  o.AddCluster(cluster);
  cluster->add_option("--input", cluster_input, "embedding matrix")->required()->check(CLI::ExistingFile);
  Flag(cluster, "--ids", &cluster_ids, "utterance ids, one per line");
  cluster->add_option("--out", cluster_out, "assignments CSV")->required();

  // evaluate
  auto *evaluate = app.add_subcommand("evaluate", "NMI of predicted against true labels");
  std::string eval_assignments, eval_manifest;
  std::optional<std::string> eval_out;
  evaluate->add_option("--assignments", eval_assignments, "assignments CSV")
      ->required()->check(CLI::ExistingFile);
  evaluate->add_option("--manifest", eval_manifest, "labelled manifest")
      ->required()->check(CLI::ExistingFile);
  Flag(evaluate, "--out", &eval_out, "write the report JSON here");

  // pipeline
  auto *pipeline = app.add_subcommand("pipeline", "UBM -> supervectors -> embedding -> clustering");
  for (CLI::App *sub : {pipeline}) {
    o.AddConfig(sub);
    o.AddDataset(sub);
    o.AddUbm(sub);
    o.AddSupervector(sub);
    o.AddMbn(sub);
    o.AddCluster(sub);
    sub->add_option("--methods", o.methods, "methods: mbn, pca, raw-kmeans");
    Flag(sub, "--output-dir", &o.output_dir, "output_dir");
  }

  // sweep
  auto *sweep = app.add_subcommand("sweep", "run the mixture x EM-iteration x output-dim grid");
  std::vector<std::size_t> sw_mixtures, sw_em, sw_dims, sw_layers;
  std::vector<std::uint64_t> sw_seeds;
  o.AddConfig(sweep);
  o.AddDataset(sweep);
  Flag(sweep, "--variance-floor-factor", &o.variance_floor_factor, "ubm.variance_floor_factor");
  o.AddSupervector(sweep);
  o.AddCluster(sweep);
  sweep->add_option("--methods", o.methods, "methods: mbn, pca, raw-kmeans");
  Flag(sweep, "--V", &o.V, "mbn.V");
  Flag(sweep, "--a", &o.a, "mbn.a");
  Flag(sweep, "--r", &o.r, "mbn.r");
  Flag(sweep, "--k-max", &o.k_max, "mbn.k_max");
  Flag(sweep, "--k-decay", &o.k_decay, "mbn.k_decay");
  sweep->add_option("--sweep-mixtures", sw_mixtures, "sweep.mixtures");
  sweep->add_option("--sweep-em-iterations", sw_em, "sweep.em_iterations");
  sweep->add_option("--sweep-output-dims", sw_dims, "sweep.output_dims");
  sweep->add_option("--sweep-seeds", sw_seeds, "sweep.seeds");
  sweep->add_option("--sweep-layer-truncations", sw_layers, "sweep.layer_truncations");
  Flag(sweep, "--output-dir", &o.output_dir, "output_dir")->required();

  // plot
  auto *plot = app.add_subcommand("plot", "write plot data (CSV) and a static SVG");
  std::string plot_kind, plot_input, plot_out;
  std::optional<std::string> plot_ids, plot_manifest;
  plot->add_option("--kind", plot_kind, "scatter, sensitivity or depth")
      ->required()->check(CLI::IsMember({"scatter", "sensitivity", "depth"}));
  plot->add_option("--input", plot_input, "embedding matrix (scatter) or sweep results CSV")
      ->required()->check(CLI::ExistingFile);
  Flag(plot, "--ids", &plot_ids, "utterance ids (scatter)");
  Flag(plot, "--manifest", &plot_manifest, "labelled manifest for colors (scatter)");
  plot->add_option("--out", plot_out, "output prefix (writes <prefix>.csv and <prefix>.svg)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    ApplyWorkersFromEnv();
    if (*synth) {
      o.synthetic = true;
      const PipelineConfig c = o.Resolve();
      SyntheticCorpusSpec spec = *c.synthetic;
      spec.seed = DeriveSeeds(c.master_seed).corpus;
      const Dataset d = GenerateSyntheticCorpus(spec);
      const auto manifest = SaveDataset(
          synth_out, d, synth_format == "csv" ? MatrixFormat::kCsv : MatrixFormat::kBinary);
      PrintJson({{"manifest", manifest.string()}, {"utterances", d.Size()},
                 {"speakers", spec.num_speakers}, {"feature_dim", spec.feature_dim}});
    } else if (*ubm_train) {
      const PipelineConfig c = o.Resolve();
      if (!c.manifest_path && !c.synthetic) throw ValidationError("give --manifest or --synthetic");
      const Dataset d = LoadPipelineDataset(c);
      UbmConfig u = c.ubm;
      u.seed = DeriveSeeds(c.master_seed).ubm;
      std::vector<double> ll;
      const GmmModel m = TrainUbm(d.utterances, u, &ll);
      SaveGmmJson(ubm_out, m);
      PrintJson({{"ubm", ubm_out}, {"mixtures", m.NumMixtures()}, {"log_likelihood", ll}});
    } else if (*svec) {
      const PipelineConfig c = o.Resolve();
      if (!c.manifest_path && !c.synthetic) throw ValidationError("give --manifest or --synthetic");
      const Dataset d = LoadPipelineDataset(c);
      const GmmModel m = LoadGmmJson(svec_ubm);
      const Matrix x = ExtractSupervectors(m, d.utterances, c.supervector);
      SaveMatrix(svec_out, x, FormatForPath(svec_out));
      WriteLines(svec_out + ".ids.txt", d.Ids());
      PrintJson({{"supervectors", svec_out}, {"rows", x.rows()}, {"cols", x.cols()}});
    } else if (*mbn_fit) {
      const PipelineConfig c = o.Resolve();
      MbnConfig mc = c.mbn;
      mc.seed = DeriveSeeds(c.master_seed).mbn;
      const Matrix x = LoadMatrix(mbn_input);
      const MbnFit fit = TrainMbn(x, mc);
      SaveMatrix(mbn_embedding_out, fit.embedding, FormatForPath(mbn_embedding_out));
      PropagateIds(mbn_input, mbn_embedding_out, x.rows());
      if (!mbn_model_out.empty()) SaveMbnModel(mbn_model_out, fit.model);
      PrintJson({{"embedding", mbn_embedding_out}, {"depth", fit.model.Depth()},
                 {"output_dim", fit.model.pca.OutputDim()},
                 {"config", MbnConfigToJson(fit.model.config)}});
    } else if (*pca_fit) {
      const PipelineConfig c = o.Resolve();
      const Matrix x = LoadMatrix(pca_input);
      const PcaModel m = PcaFit(x, c.mbn.output_dim);
      const Matrix e = PcaTransform(m, x);
      SaveMatrix(pca_embedding_out, e, FormatForPath(pca_embedding_out));
      PropagateIds(pca_input, pca_embedding_out, x.rows());
      if (!pca_model_out.empty()) PcaSave(pca_model_out, m);
      PrintJson({{"embedding", pca_embedding_out}, {"output_dim", m.OutputDim()}});
    } else if (*cluster) {
      const PipelineConfig c = o.Resolve();
      if (c.cluster.algorithm == ClusterSpec::Algorithm::kKMeans && !c.cluster.num_clusters)
        throw ValidationError("k-means needs --num-clusters");
      const Matrix x = LoadMatrix(cluster_input);
      const auto ids = IdsFor(cluster_ids, cluster_input, x.rows());
      const ClusterAssignment a =
          ClusterEmbedding(x, c.cluster, std::nullopt, DeriveSeeds(c.master_seed).kmeans);
      WriteAssignmentsCsv(cluster_out, ids, a.labels);
      json j = {{"assignments", cluster_out}, {"num_clusters", a.OccupiedClusters()}};
      if (a.objective) j["objective"] = *a.objective;
      PrintJson(j);
    } else if (*evaluate) {
      std::vector<std::string> ids;
      std::vector<int> predicted;
      ReadAssignmentsCsv(eval_assignments, &ids, &predicted);
      const auto truth = TruthById(eval_manifest);
      std::vector<std::string> names;
      for (const auto &id : ids) {
        auto it = truth.find(id);
        if (it == truth.end()) throw ValidationError("utterance '" + id + "' is not in the manifest");
        names.push_back(it->second);
      }
      if (ids.size() != truth.size())
        throw ValidationError("assignments cover " + std::to_string(ids.size()) + " of " +
                              std::to_string(truth.size()) + " manifest utterances");
      const json j = {{"nmi", Nmi(predicted, Encode(names))},
                      {"num_clusters", std::set<int>(predicted.begin(), predicted.end()).size()},
                      {"utterances", ids.size()}};
      if (eval_out) WriteTextFile(*eval_out, j.dump(2) + "\n");
      PrintJson(j);
    } else if (*pipeline) {
      const PipelineReport r = RunPipeline(o.Resolve());
      PrintJson(r.ToJson());
    } else if (*sweep) {
      json sweep_json = json::object();
      const PipelineConfig c = o.Resolve(&sweep_json);
      SweepSpec s = SweepSpecFromJson(sweep_json);
      if (!sw_mixtures.empty()) s.mixture_counts = sw_mixtures;
      if (!sw_em.empty()) s.em_iteration_options = sw_em;
      if (!sw_dims.empty()) s.output_dims = sw_dims;
      if (!sw_seeds.empty()) s.seeds = sw_seeds;
      if (!sw_layers.empty()) s.layer_truncations = sw_layers;
      const SweepResults res = RunSweep(s, c);
      const fs::path out = *c.output_dir;
      WriteSweepCsv(out / "best_over_dims.csv", BestOverDims(res.rows));
      WriteSweepCsv(out / "best_over_ubms.csv", BestOverUbms(res.rows));
      json failures = json::array();
      for (const auto &row : res.rows)
        if (!row.error.empty())
          failures.push_back({{"method", MethodName(row.method)}, {"mixtures", row.mixtures},
                              {"em_iters", row.em_iters}, {"seed", row.seed}, {"error", row.error}});
      WriteTextFile(out / "failures.json", failures.dump(2) + "\n");
      json spec = PipelineConfigToJson(c);
      spec["sweep"] = SweepSpecToJson(s);
      WriteTextFile(out / "sweep_config.json", spec.dump(2) + "\n");
      PrintJson({{"results", (out / "results.csv").string()}, {"rows", res.rows.size()},
                 {"failures", res.Failures()}});
    } else if (*plot) {
      const PlotKind kind = ParsePlotKind(plot_kind);
      if (kind == PlotKind::kScatter) {
        const Matrix e = LoadMatrix(plot_input);
        const auto ids = IdsFor(plot_ids, plot_input, e.rows());
        std::optional<std::vector<std::string>> labels;
        if (plot_manifest) {
          const auto truth = TruthById(*plot_manifest);
          labels.emplace();
          for (const auto &id : ids) {
            auto it = truth.find(id);
            if (it == truth.end()) throw ValidationError("utterance '" + id + "' is not in the manifest");
            labels->push_back(it->second);
          }
        }
        WriteScatterPlot(plot_out, e, ids, labels);
      } else {
        WriteResultsPlot(plot_out, ReadSweepCsv(plot_input), kind);
      }
      PrintJson({{"csv", plot_out + ".csv"}, {"svg", plot_out + ".svg"}});
    }
  } catch (const ValidationError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const RuntimeFailure &e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 2;
  } catch (const std::bad_alloc &) {
    std::cerr << "failure: out of memory\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
