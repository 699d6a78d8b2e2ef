// bench/bench_kernels.cpp

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

// OpenMP kernels against their serial references. Run with
// MBNSPK_WORKERS=<n> to pick the worker count of the parallel variants.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "mbnspk/gmm.hpp"
#include "mbnspk/kernels.hpp"
#include "mbnspk/mbn.hpp"
#include "mbnspk/parallel.hpp"
#include "mbnspk/rng.hpp"

using namespace mbnspk;

namespace {

Matrix Gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> g;
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  return m;
}

struct Layers {
  Matrix input;
  MbnLayer bottom, upper;
  SparseCodes bottom_codes;
};

const Layers &SharedLayers() {
  static const Layers l = [] {
    Layers out;
    out.input = Gaussian(500, 160, 1);
    out.bottom.layer_index = 1;
    out.bottom.k = 250;
    out.bottom.mode = SimilarityMode::kBottom;
    out.upper.layer_index = 2;
    out.upper.k = 120;
    out.upper.mode = SimilarityMode::kUpper;
    for (std::size_t v = 0; v < 100; ++v) {
      Rng rng(v);
      out.bottom.clusterings.push_back(TrainClustering(out.input, 250, 0.5, 0.5, rng));
    }
    out.bottom_codes = kernels::EncodeBottom(out.bottom, out.input);
    for (std::size_t v = 0; v < 100; ++v) {
      Rng rng(1000 + v);
      out.upper.clusterings.push_back(TrainClustering(out.bottom_codes, 120, 0.5, 0.5, rng));
    }
    return out;
  }();
  return l;
}

void BM_GmmAccumulate(benchmark::State &state, bool parallel) {
  const Matrix x = Gaussian(20000, 10, 2);
  UbmConfig cfg;
  cfg.num_mixtures = 32;
  const GmmModel m = InitUbm(x, cfg);
  for (auto _ : state) {
    auto acc = parallel ? kernels::GmmAccumulate(m, x) : kernels::GmmAccumulateSerial(m, x);
    benchmark::DoNotOptimize(acc.log_likelihood);
  }
  state.SetItemsProcessed(state.iterations() * x.rows());
}

void BM_EncodeBottom(benchmark::State &state, bool parallel) {
  const Layers &l = SharedLayers();
  for (auto _ : state) {
    auto codes = parallel ? kernels::EncodeBottom(l.bottom, l.input)
                          : kernels::EncodeBottomSerial(l.bottom, l.input);
    benchmark::DoNotOptimize(codes.rows);
  }
}

void BM_EncodeUpper(benchmark::State &state, bool parallel) {
  const Layers &l = SharedLayers();
  for (auto _ : state) {
    auto codes = parallel ? kernels::EncodeUpper(l.upper, l.bottom_codes)
                          : kernels::EncodeUpperSerial(l.upper, l.bottom_codes);
    benchmark::DoNotOptimize(codes.rows);
  }
}

void BM_AssignNearest(benchmark::State &state, bool parallel) {
  const Matrix points = Gaussian(5000, 30, 3);
  const Matrix centers = Gaussian(50, 30, 4);
  std::vector<std::int32_t> labels(points.rows());
  std::vector<double> dist(points.rows());
  for (auto _ : state) {
    const double obj = parallel ? kernels::AssignNearest(points, centers, labels, dist)
                                : kernels::AssignNearestSerial(points, centers, labels, dist);
    benchmark::DoNotOptimize(obj);
  }
}

void BM_SharedUnitGram(benchmark::State &state, bool parallel) {
  const Layers &l = SharedLayers();
  for (auto _ : state) {
    Matrix g = parallel ? kernels::SharedUnitGram(l.bottom_codes)
                        : kernels::SharedUnitGramSerial(l.bottom_codes);
    benchmark::DoNotOptimize(g.data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_GmmAccumulate, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_GmmAccumulate, openmp, true)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_EncodeBottom, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_EncodeBottom, openmp, true)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_EncodeUpper, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_EncodeUpper, openmp, true)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_AssignNearest, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_AssignNearest, openmp, true)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SharedUnitGram, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SharedUnitGram, openmp, true)->Unit(benchmark::kMillisecond);

int main(int argc, char **argv) {
  ApplyWorkersFromEnv();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
