// tests/acceptance.cpp

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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>

#include "mbnspk/cluster.hpp"
#include "mbnspk/gmm.hpp"
#include "mbnspk/matrix_io.hpp"
#include "mbnspk/mbn.hpp"
#include "mbnspk/parallel.hpp"
#include "mbnspk/pca.hpp"
#include "mbnspk/pipeline.hpp"
#include "mbnspk/rng.hpp"
#include "mbnspk/supervector.hpp"
#include "mbnspk/sweep.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace mbnspk;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void Require(bool ok, const std::string &what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

int failures = 0;

void Report(int id, const std::string &name, Outcome &o, double seconds) {
  std::printf("%s [%d] %s: %s(%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(),
              o.detail.str().c_str(), seconds);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

void Run(int id, const std::string &name, const std::function<void(Outcome &)> &body) {
  Outcome o;
  const auto t0 = Clock::now();
  try {
    body(o);
  } catch (const std::exception &e) {
    o.pass = false;
    o.detail << "exception: " << e.what() << " ";
  }
  Report(id, name, o, Seconds(t0));
}

// ---------------------------------------------------------------------------

void EmOracle(Outcome &o) {
  const auto t0 = Clock::now();
  Rng rng(2024);
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix x(200, 1);
  for (int i = 0; i < 200; ++i) x(i, 0) = (i < 100 ? -40.0 : 40.0) + g(rng);
  const double left = x.topRows(100).mean(), right = x.bottomRows(100).mean();

  GmmModel m;
  m.weights = Vector::Constant(2, 0.5);
  m.means = Matrix(2, 1);
  m.means << x(0, 0), x(150, 0);
  m.variances = Matrix::Constant(2, 1, GlobalVariance(x)(0));
  m.variance_floor = Vector::Constant(1, 1e-3 * GlobalVariance(x)(0));
  for (int i = 0; i < 20; ++i) m = EmStep(m, x).model;
  const double err = std::max(std::abs(m.means(0, 0) - left), std::abs(m.means(1, 0) - right));
  o.Require(err <= 1e-6, "converged means differ from blob means");
  o.detail << "max |mean - blob mean| = " << err << "; ";

  const std::vector<FrameMatrix> utts{{"blobs", x}};
  double worst = 0.0;
  for (std::size_t c : {1, 2, 4, 8, 16, 32, 64}) {
    UbmConfig cfg;
    cfg.num_mixtures = c;
    cfg.em_iterations = 20;
    cfg.seed = 7;
    std::vector<double> ll;
    TrainUbm(utts, cfg, &ll);
    o.Require(ll.size() == 20, "expected 20 log-likelihoods");
    for (std::size_t i = 1; i < ll.size(); ++i) {
      const double drop = ll[i - 1] - ll[i];
      worst = std::max(worst, drop);
      o.Require(drop <= 1e-8 * std::abs(ll[i - 1]), "log-likelihood decreased at C=" + std::to_string(c));
    }
  }
  o.detail << "largest LL decrease over C in {1..64} = " << worst << "; ";
  o.Require(Seconds(t0) < 5.0, "runtime >= 5 s");
}

void PcaOracle(Outcome &o) {
  const auto t0 = Clock::now();
  Rng rng(99);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const std::size_t rows = t == 0 ? 50 : 3 + rng() % 48;
    const std::size_t cols = t == 0 ? 40 : 1 + rng() % 40;
    const Matrix x = oracle::RandomMatrix(rows, cols, rng());
    const std::size_t dim = std::min<std::size_t>({5, cols, rows - 1});
    const Matrix expected = oracle::PcaProjection(x, dim);
    const PcaModel m = PcaFit(x, dim);
    o.Require(m.OutputDim() == dim, "unexpected output dim");
    const double err = (m.projection - expected).cwiseAbs().maxCoeff();
    worst = std::max(worst, err);
    o.Require(err <= 1e-8, "projection differs from the Jacobi oracle for " + std::to_string(rows) +
                               "x" + std::to_string(cols));
  }
  o.detail << "20 matrices up to 50x40, max |P - P_oracle| = " << worst << "; ";
  o.Require(Seconds(t0) < 5.0, "runtime >= 5 s");
}

void NmiOracle(Outcome &o) {
  struct Case {
    std::vector<int> a, b;
    double expected;
  };
  const double ln2 = std::log(2.0), ln3 = std::log(3.0);
  const double h_b6 = -(1.0 / 3 * std::log(1.0 / 3) + 2.0 / 3 * std::log(2.0 / 3));
  const double i4 = 0.5 * std::log(4.0 / 3) + 0.25 * std::log(2.0 / 3) + 0.25 * ln2;
  const double h_a4 = -(0.75 * std::log(0.75) + 0.25 * std::log(0.25));
  const std::vector<Case> cases = {
      {{0, 0, 1, 1}, {0, 0, 1, 2}, 1.0 / std::sqrt(1.5)},
      {{0, 0, 1, 1}, {0, 0, 1, 1}, 1.0},
      {{0, 0, 1, 1}, {7, 7, 3, 3}, 1.0},
      {{0, 0, 1, 1}, {0, 1, 0, 1}, 0.0},
      {{0, 0, 0, 1}, {0, 0, 1, 1}, i4 / std::sqrt(h_a4 * ln2)},
      {{0, 0, 1, 1, 2, 2}, {0, 0, 1, 1, 1, 1}, h_b6 / std::sqrt(ln3 * h_b6)},
      {{0, 0, 0}, {4, 4, 4}, 1.0},
      {{0, 0, 0}, {0, 1, 1}, 0.0},
  };
  double worst = 0.0;
  for (const auto &c : cases) {
    const double err = std::abs(Nmi(c.a, c.b) - c.expected);
    worst = std::max(worst, err);
    o.Require(err <= 1e-12, "hand-computed case mismatch");
  }
  o.detail << cases.size() << " hand cases, max error " << worst << "; ";
  Rng rng(5);
  double asym = 0.0, perm_err = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng() % 60;
    const int ka = 1 + rng() % 6, kb = 1 + rng() % 6;
    std::vector<int> a(n), b(n);
    for (auto &v : a) v = static_cast<int>(rng() % ka);
    for (auto &v : b) v = static_cast<int>(rng() % kb);
    std::vector<int> perm(6);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> pa(n), pb(n);
    for (std::size_t i = 0; i < n; ++i) {
      pa[i] = perm[a[i]] + 10;
      pb[i] = perm[b[i]];
    }
    const double ab = Nmi(a, b);
    asym = std::max(asym, std::abs(ab - Nmi(b, a)));
    perm_err = std::max(perm_err, std::abs(ab - Nmi(pa, pb)));
  }
  o.Require(asym <= 1e-12, "NMI not symmetric");
  o.Require(perm_err <= 1e-12, "NMI not permutation invariant");
  o.detail << "100 random pairs: max asymmetry " << asym << ", max permutation change " << perm_err << "; ";
}

void KMeansOracle(Outcome &o) {
  Rng rng(31);
  int matched = 0;
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 3 + rng() % 8;  // 3..10
    const std::size_t d = 1 + rng() % 2;
    const std::size_t c = std::min<std::size_t>(n, 1 + rng() % 3);
    const Matrix x = oracle::RandomMatrix(n, d, rng());
    KMeansConfig cfg;
    cfg.num_clusters = c;
    cfg.restarts = 10;
    cfg.seed = rng();
    const double got = *KMeans(x, cfg).objective;
    const double opt = oracle::ExhaustiveKMeansOptimum(x, c);
    const double gap = got - opt;
    worst = std::max(worst, gap);
    if (gap <= 1e-9 * std::max(1.0, opt)) ++matched;
  }
  o.Require(matched == 50, "k-means missed the optimum");
  o.detail << matched << "/50 instances at the exhaustive optimum, worst gap " << worst << "; ";
}

void ScheduleReproduction(Outcome &o) {
  const auto s = ComputeKSchedule(3400, 10000, 34);
  const std::vector<std::size_t> expected{3060, 1530, 765, 382, 191, 95};
  o.Require(s == expected, "schedule mismatch");
  for (auto k : s) o.detail << k << " ";
}

// ---------------------------------------------------------------------------
// Encoding invariants on trained networks.

struct EncodingAudit {
  std::size_t layers = 0, clusterings = 0, rows = 0;
  bool ok = true;
  std::string first_error;

  void Fail(const std::string &e) {
    if (ok) first_error = e;
    ok = false;
  }
};

// Re-derives every center of every clustering from the layer input and
// checks the active-unit count of every encoded row.
void AuditNetwork(const MbnFit &fit, const Matrix &input, EncodingAudit *audit) {
  const MbnModel &model = fit.model;
  const double r = *model.config.reconstruction_fraction;
  const std::size_t V = model.config.clusterings_per_layer;
  for (std::size_t l = 0; l < model.Depth(); ++l) {
    const MbnLayer &layer = model.layers[l];
    const SparseCodes &out = fit.layer_codes[l];
    ++audit->layers;
    // Exactly V active units per row: count ones in the dense expansion.
    for (std::size_t i = 0; i < out.rows; ++i) {
      std::size_t active = 0;
      for (std::size_t v = 0; v < out.blocks; ++v)
        active += out.Row(i)[v] >= 0 && static_cast<std::size_t>(out.Row(i)[v]) < layer.k;
      if (out.blocks != V || active != V) audit->Fail("row without exactly V active units");
      ++audit->rows;
    }
    for (const auto &c : layer.clusterings) {
      ++audit->clusterings;
      const std::size_t k = c.NumCenters();
      const std::size_t d_hat = c.selected_dims.size();
      if (c.shifted_positions.size() != ShiftedDimCount(d_hat, r)) audit->Fail("wrong number of rotated columns");
      std::vector<char> rotated(d_hat, 0);
      for (auto p : c.shifted_positions) rotated[p] = 1;
      if (l == 0) {
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < d_hat; ++j) {
            const std::size_t src = c.source_rows[rotated[j] ? (i + 1) % k : i];
            if (c.centers(i, j) != input(src, c.selected_dims[j])) audit->Fail("bottom center mismatch");
          }
      } else {
        const SparseCodes &prev = fit.layer_codes[l - 1];
        std::vector<int> pos_of(prev.Width(), -1);
        for (std::size_t j = 0; j < d_hat; ++j) pos_of[c.selected_dims[j]] = static_cast<int>(j);
        for (std::size_t i = 0; i < k; ++i) {
          std::vector<std::uint32_t> expected;
          // Non-rotated columns come from row i, rotated ones from row i + 1.
          for (int part = 0; part < 2; ++part) {
            const std::size_t src = c.source_rows[part ? (i + 1) % k : i];
            for (std::size_t v = 0; v < prev.blocks; ++v) {
              const auto col = prev.Column(src, v);
              const int p = pos_of[col];
              if (p >= 0 && rotated[p] == part) expected.push_back(static_cast<std::uint32_t>(col));
            }
          }
          std::sort(expected.begin(), expected.end());
          const auto row = c.center_ones.Row(i);
          if (!std::equal(row.begin(), row.end(), expected.begin(), expected.end()))
            audit->Fail("upper center mismatch");
        }
      }
    }
  }
}

// ---------------------------------------------------------------------------
// End-to-end runs on the reference corpus.

struct ReferenceRun {
  std::uint64_t seed;
  double nmi;
  std::vector<double> depth_nmi;
  double seconds;
};

PipelineConfig ReferenceConfig(std::uint64_t seed) {
  PipelineConfig c;
  c.synthetic = SyntheticCorpusSpec{};  // 10 speakers x 50 utterances, F = 10, separation 5
  c.ubm.num_mixtures = 16;
  c.ubm.em_iterations = 20;
  c.mbn.clusterings_per_layer = 400;
  c.mbn.feature_fraction = 0.5;
  c.mbn.reconstruction_fraction = 0.5;
  c.mbn.output_dim = 2;
  c.methods = {Method::kMbn};
  c.master_seed = seed;
  return c;
}

std::vector<ReferenceRun> reference_runs;
EncodingAudit encoding_audit;

void EndToEnd(Outcome &o) {
  const auto t0 = Clock::now();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto ts = Clock::now();
    const PipelineConfig c = ReferenceConfig(seed);
    const StageSeeds seeds = DeriveSeeds(seed);
    const Dataset d = LoadPipelineDataset(c);
    UbmConfig u = c.ubm;
    u.seed = seeds.ubm;
    const Matrix sv = ExtractSupervectors(TrainUbm(d.utterances, u), d.utterances);
    MbnConfig m = c.mbn;
    m.seed = seeds.mbn;
    m.c_hint = 10;
    const MbnFit fit = TrainMbn(sv, m, true);
    AuditNetwork(fit, sv, &encoding_audit);
    ReferenceRun run{seed, 0.0, {}, 0.0};
    run.nmi = Nmi(ClusterEmbedding(fit.embedding, c.cluster, 10, seeds.kmeans).labels, *d.labels);
    for (std::size_t l = 1; l <= fit.model.Depth(); ++l) {
      const Matrix e = l == fit.model.Depth()
                           ? fit.embedding
                           : TruncateMbn(fit.model, fit.layer_codes[l - 1], l, 2).embedding;
      run.depth_nmi.push_back(Nmi(ClusterEmbedding(e, c.cluster, 10, seeds.kmeans).labels, *d.labels));
    }
    run.seconds = Seconds(ts);
    reference_runs.push_back(run);
    std::printf("  seed %llu: NMI %.4f, schedule", static_cast<unsigned long long>(seed), run.nmi);
    for (auto k : fit.model.config.k_schedule) std::printf(" %zu", k);
    std::printf(" (%.1f s)\n", run.seconds);
  }
  std::vector<double> nmis;
  for (const auto &r : reference_runs) nmis.push_back(r.nmi);
  const double med = Median(nmis);
  o.Require(med >= 0.9, "median NMI below 0.9");
  o.detail << "median NMI over 5 seeds = " << med << "; ";
  o.Require(Seconds(t0) < 600.0, "runtime >= 10 min");
}

void EncodingInvariants(Outcome &o) {
  // r = 0 networks: every center must be a verbatim dim-restricted row.
  const PipelineConfig c = ReferenceConfig(11);
  const Dataset d = LoadPipelineDataset(c);
  UbmConfig u = c.ubm;
  const Matrix sv = ExtractSupervectors(TrainUbm(d.utterances, u), d.utterances);
  MbnConfig m = c.mbn;
  m.clusterings_per_layer = 50;
  m.reconstruction_fraction = 0.0;
  m.c_hint = 10;
  const MbnFit fit = TrainMbn(sv, m, true);
  EncodingAudit zero;
  AuditNetwork(fit, sv, &zero);
  for (const auto &layer : fit.model.layers)
    for (const auto &cl : layer.clusterings)
      if (!cl.shifted_positions.empty()) zero.Fail("r = 0 clustering has rotated columns");
  o.Require(zero.ok, "r = 0: " + zero.first_error);
  o.Require(encoding_audit.ok, "r = 0.5: " + encoding_audit.first_error);
  o.Require(encoding_audit.layers > 0, "no reference networks were audited");
  o.detail << "r=0.5: " << encoding_audit.layers << " layers, " << encoding_audit.clusterings
           << " clusterings, " << encoding_audit.rows << " encoded rows; r=0: " << zero.layers
           << " layers, " << zero.clusterings << " clusterings; ";
}

void DepthTrend(Outcome &o) {
  o.Require(!reference_runs.empty(), "no reference runs");
  std::size_t depth = reference_runs.front().depth_nmi.size();
  for (const auto &r : reference_runs) depth = std::min(depth, r.depth_nmi.size());
  std::vector<double> medians;
  for (std::size_t l = 0; l < depth; ++l) {
    std::vector<double> v;
    for (const auto &r : reference_runs) v.push_back(r.depth_nmi[l]);
    medians.push_back(Median(v));
  }
  o.detail << "median NMI by depth:";
  for (std::size_t l = 0; l < medians.size(); ++l) {
    o.detail << " " << medians[l];
    if (l > 0) o.Require(medians[l] >= medians[l - 1] - 0.05, "drop larger than 0.05 at depth " + std::to_string(l + 1));
  }
  o.detail << "; ";
}

void RobustnessTrend(Outcome &o) {
  PipelineConfig base = ReferenceConfig(0);
  base.mbn.clusterings_per_layer = 100;
  base.mbn.reconstruction_fraction.reset();  // automatic rule
  base.methods = {Method::kMbn, Method::kPca};
  SweepSpec s;  // 7 x 2 grid, dims {2, 3, 5, 10, 30, 50}
  s.seeds = {1, 2, 3};
  ScopedWarningMute mute;
  const auto t0 = Clock::now();
  const SweepResults res = RunSweep(s, base);
  const double per_grid = Seconds(t0) / static_cast<double>(s.seeds.size());
  o.Require(res.Failures() == 0, "sweep cells failed");
  const auto medians = MedianOverSeeds(BestOverDims(res.rows));
  auto median_of = [&](Method m, std::size_t mixtures, std::size_t em) {
    for (const auto &r : medians)
      if (r.method == m && r.mixtures == mixtures && r.em_iters == em) return *r.nmi;
    return -1.0;
  };
  std::size_t cells = 0;
  for (std::size_t mixtures : s.mixture_counts)
    for (std::size_t em : s.em_iteration_options) {
      if (mixtures != 1 && em != 0) continue;
      const double mbn = median_of(Method::kMbn, mixtures, em), pca = median_of(Method::kPca, mixtures, em);
      ++cells;
      o.Require(mbn >= pca, "MBN below PCA at C=" + std::to_string(mixtures) + ", em=" + std::to_string(em));
      if (mixtures == 1 || (em == 0 && mixtures <= 2))
        o.detail << "C=" << mixtures << "/em=" << em << ": MBN " << mbn << " vs PCA " << pca << "; ";
    }
  o.detail << cells << " worst-case cells checked; grid time " << per_grid << " s per seed; ";
  o.Require(per_grid < 1800.0, "grid runtime >= 30 min");
}

void Determinism(Outcome &o) {
  testutil::TempDir a("det1"), b("det4");
  PipelineConfig c = ReferenceConfig(17);
  c.methods = {Method::kMbn, Method::kPca, Method::kRawKMeans};
  {
    ScopedWorkers w(1);
    c.output_dir = a.path();
    RunPipeline(c);
  }
  {
    ScopedWorkers w(4);
    c.output_dir = b.path();
    RunPipeline(c);
  }
  std::vector<std::string> fa, fb;
  for (const auto &e : fs::recursive_directory_iterator(a.path()))
    if (e.is_regular_file()) fa.push_back(fs::relative(e.path(), a.path()).string());
  for (const auto &e : fs::recursive_directory_iterator(b.path()))
    if (e.is_regular_file()) fb.push_back(fs::relative(e.path(), b.path()).string());
  std::sort(fa.begin(), fa.end());
  std::sort(fb.begin(), fb.end());
  o.Require(fa == fb, "different file sets");
  std::size_t same = 0;
  for (const auto &f : fa) {
    const bool eq = testutil::ReadFile(a / f) == testutil::ReadFile(b / f);
    same += eq;
    o.Require(eq, f + " differs");
  }
  for (const char *key : {"supervectors.bin", "mbn_model/config.json", "embedding_mbn.bin", "report.json"})
    o.Require(std::find(fa.begin(), fa.end(), key) != fa.end(), std::string(key) + " missing");
  o.detail << same << "/" << fa.size() << " files byte-identical (1 vs 4 workers); ";
}

}  // namespace

int main() {
  ApplyWorkersFromEnv();
  std::printf("acceptance suite (%d worker%s)\n", Workers(), Workers() == 1 ? "" : "s");
  Run(1, "EM oracle", EmOracle);
  Run(2, "PCA oracle", PcaOracle);
  Run(3, "NMI oracle", NmiOracle);
  Run(4, "k-means oracle", KMeansOracle);
  Run(6, "schedule reproduction", ScheduleReproduction);
  Run(7, "end-to-end quality", EndToEnd);
  Run(5, "encoding invariants", EncodingInvariants);
  Run(9, "depth trend", DepthTrend);
  Run(8, "robustness trend", RobustnessTrend);
  Run(10, "determinism", Determinism);
  std::printf("%s: %d of 10 criteria failed\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures == 0 ? 0 : 1;
}
