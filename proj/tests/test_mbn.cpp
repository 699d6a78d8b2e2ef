// tests/test_mbn.cpp

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

#include <cstring>
#include <set>

#include "doctest.h"
#include "mbnspk/kernels.hpp"
#include "mbnspk/mbn.hpp"
#include "mbnspk/parallel.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace mbnspk;

namespace {

bool BitEqual(const Matrix &a, const Matrix &b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0;
}

SparseCodes RandomCodes(std::size_t rows, std::size_t blocks, std::size_t width, std::uint64_t seed) {
  Rng rng(seed);
  SparseCodes c(rows, blocks, width);
  for (auto &a : c.active) a = static_cast<std::int32_t>(rng() % width);
  return c;
}

// Two Gaussian clouds in 6-D, first half label 0.
Matrix TwoClouds(std::size_t n, std::uint64_t seed) {
  Matrix x = oracle::RandomMatrix(n, 6, seed);
  for (std::size_t i = n / 2; i < n; ++i) x.row(i).array() += 6.0;
  return x;
}

// Dense one-hot oracle for an upper clustering: first arg max of the dot
// product between the dense input row and the dense center.
std::size_t DenseUpperOracle(const KCentersClustering &c, const Vector &x) {
  std::size_t best = 0;
  double best_dot = -1;
  for (std::size_t i = 0; i < c.NumCenters(); ++i) {
    Vector center = Vector::Zero(x.size());
    for (auto col : c.center_ones.Row(i)) center(col) = 1.0;
    const double dot = center.dot(x);
    if (dot > best_dot) {
      best_dot = dot;
      best = i;
    }
  }
  return best;
}

void CheckCodesShape(const SparseCodes &codes, std::size_t rows, std::size_t V, std::size_t k) {
  REQUIRE(codes.rows == rows);
  REQUIRE(codes.blocks == V);
  REQUIRE(codes.block_width == k);
  for (auto a : codes.active) REQUIRE((a >= 0 && static_cast<std::size_t>(a) < k));
  const Matrix dense = codes.ToDense();
  for (Eigen::Index i = 0; i < dense.rows(); ++i) CHECK(dense.row(i).sum() == static_cast<double>(V));
}

}  // namespace

TEST_SUITE("mbn") {

TEST_CASE("k schedules") {
  CHECK(ComputeKSchedule(3400, 10000, 34) ==
        std::vector<std::size_t>{3060, 1530, 765, 382, 191, 95});
  CHECK(ComputeKSchedule(10, 10000, 2) == std::vector<std::size_t>{9, 4});
  CHECK(ComputeKSchedule(3400, 500, 34) == std::vector<std::size_t>{500, 250, 125, 62});
  CHECK(ComputeKSchedule(500, 10000, 10) == std::vector<std::size_t>{450, 225, 112, 56, 28});
  CHECK(ComputeKSchedule(20, 10000, std::nullopt) == std::vector<std::size_t>{18});
  CHECK_THROWS_AS(ComputeKSchedule(3, 10, 1), ValidationError);
}

TEST_CASE("config resolution picks r from the size of k_1") {
  MbnConfig c;
  c.c_hint = 2;
  const MbnConfig small = ResolveMbnConfig(c, 100);
  CHECK(*small.reconstruction_fraction == 0.5);
  c.k_max = 50;
  CHECK(*ResolveMbnConfig(c, 100).reconstruction_fraction == 0.0);
  c.k_schedule = {200};
  CHECK_THROWS_AS(ResolveMbnConfig(c, 100), ValidationError);
  c.k_schedule = {10, 20};
  CHECK_THROWS_AS(c.Validate(), ValidationError);
  c.k_schedule = {};
  c.reconstruction_fraction = 0.7;
  CHECK_THROWS_AS(c.Validate(), ValidationError);
}

TEST_CASE("selected and shifted dim counts") {
  CHECK(SelectedDimCount(10, 0.5) == 5);
  CHECK(SelectedDimCount(11, 0.5) == 6);
  CHECK(SelectedDimCount(3, 0.01) == 1);
  CHECK(SelectedDimCount(7, 1.0) == 7);
  CHECK(ShiftedDimCount(5, 0.5) == 2);
  CHECK(ShiftedDimCount(6, 0.5) == 3);
  CHECK(ShiftedDimCount(6, 0.0) == 0);
}

TEST_CASE("a = 1 selects every dim") {
  Rng rng(1);
  const auto c = TrainClustering(oracle::RandomMatrix(10, 7, 1), 3, 1.0, 0.0, rng);
  CHECK(c.selected_dims == std::vector<std::uint32_t>{0, 1, 2, 3, 4, 5, 6});
}

TEST_CASE("r = 0 keeps verbatim dim-restricted rows") {
  const Matrix x = oracle::RandomMatrix(30, 9, 2);
  Rng rng(2);
  const auto c = TrainClustering(x, 8, 0.5, 0.0, rng);
  REQUIRE(c.centers.rows() == 8);
  REQUIRE(c.centers.cols() == 5);
  CHECK(c.shifted_positions.empty());
  CHECK(std::set<std::uint32_t>(c.source_rows.begin(), c.source_rows.end()).size() == 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 5; ++j) CHECK(c.centers(i, j) == x(c.source_rows[i], c.selected_dims[j]));
}

TEST_CASE("r = 0.5 rotates exactly d' columns by one step") {
  const Matrix x = oracle::RandomMatrix(30, 12, 3);
  Rng rng(3);
  const std::size_t k = 7;
  const auto c = TrainClustering(x, k, 0.5, 0.5, rng);
  const std::size_t d_hat = 6, d_prime = 3;
  REQUIRE(c.shifted_positions.size() == d_prime);
  std::size_t rotated = 0;
  for (std::size_t j = 0; j < d_hat; ++j) {
    bool is_rotated = true, is_verbatim = true;
    for (std::size_t i = 0; i < k; ++i) {
      is_rotated &= c.centers(i, j) == x(c.source_rows[(i + 1) % k], c.selected_dims[j]);
      is_verbatim &= c.centers(i, j) == x(c.source_rows[i], c.selected_dims[j]);
    }
    CHECK(is_rotated != is_verbatim);
    rotated += is_rotated;
  }
  CHECK(rotated == d_prime);
}

TEST_CASE("k = 3 rotation maps (v1, v2, v3) to (v2, v3, v1)") {
  Matrix x(3, 1);
  x << 10, 20, 30;
  Rng rng(4);
  const auto c = TrainClustering(x, 3, 1.0, 0.5, rng);
  // d_hat = 1 gives d' = 0 at r = 0.5; two columns give one rotation.
  CHECK(c.shifted_positions.empty());
  Matrix y(3, 2);
  y << 10, 1, 20, 2, 30, 3;
  Rng rng2(4);
  const auto r = TrainClustering(y, 3, 1.0, 0.5, rng2);
  REQUIRE(r.shifted_positions.size() == 1);
  REQUIRE(r.source_rows == std::vector<std::uint32_t>{0, 1, 2});
  const auto col = r.shifted_positions[0];
  CHECK(r.centers(0, col) == y(1, col));
  CHECK(r.centers(1, col) == y(2, col));
  CHECK(r.centers(2, col) == y(0, col));
}

TEST_CASE("one-hot input: r = 0 centers are restricted rows, r = 0.5 rotates d' columns") {
  const SparseCodes codes = RandomCodes(25, 6, 5, 7);
  const Matrix dense = codes.ToDense();
  for (double r : {0.0, 0.5}) {
    Rng rng(5);
    const auto c = TrainClustering(codes, 6, 0.5, r, rng);
    const std::size_t d_hat = SelectedDimCount(30, 0.5);
    REQUIRE(c.selected_dims.size() == d_hat);
    REQUIRE(c.shifted_positions.size() == ShiftedDimCount(d_hat, r));
    std::set<std::uint32_t> shifted;
    for (auto p : c.shifted_positions) shifted.insert(c.selected_dims[p]);
    for (std::size_t i = 0; i < 6; ++i) {
      std::vector<std::uint32_t> expected;
      for (auto col : c.selected_dims) {
        const std::size_t src = c.source_rows[shifted.count(col) ? (i + 1) % 6 : i];
        if (dense(src, col) == 1.0) expected.push_back(col);
      }
      const auto row = c.center_ones.Row(i);
      CHECK(std::vector<std::uint32_t>(row.begin(), row.end()) == expected);
    }
  }
}

TEST_CASE("EncodeOne picks the nearest / most overlapping center") {
  const Matrix x = oracle::RandomMatrix(10, 4, 6);
  Rng rng(6);
  const auto c = TrainClustering(x, 4, 1.0, 0.0, rng);
  Vector probe(4);
  for (int j = 0; j < 4; ++j) probe(j) = c.centers(2, j);
  CHECK(EncodeOne(c, {probe.data(), 4}, SimilarityMode::kBottom) == 2);
  Rng rng1(6);
  const auto single = TrainClustering(x, 1, 0.5, 0.0, rng1);
  for (int i = 0; i < 10; ++i) {
    const Vector row = x.row(i);
    CHECK(EncodeOne(single, {row.data(), 4}, SimilarityMode::kBottom) == 0);
  }

  KCentersClustering upper;
  upper.center_ones.AppendRow(std::vector<std::uint32_t>{0, 1, 2, 5});
  upper.center_ones.AppendRow(std::vector<std::uint32_t>{3, 6});
  upper.BuildIndex();
  Vector xs = Vector::Zero(8);
  xs(0) = xs(1) = xs(2) = xs(3) = 1.0;  // 3 shared with center 0, 1 with center 1
  CHECK(EncodeOne(upper, {xs.data(), 8}, SimilarityMode::kUpper) == 0);
  CHECK(DenseUpperOracle(upper, xs) == 0);
}

TEST_CASE("upper-layer encoding matches the dense dot-product oracle") {
  const SparseCodes codes = RandomCodes(40, 8, 6, 9);
  MbnLayer layer;
  layer.layer_index = 2;
  layer.k = 5;
  layer.mode = SimilarityMode::kUpper;
  for (std::size_t v = 0; v < 12; ++v) {
    Rng rng(100 + v);
    layer.clusterings.push_back(TrainClustering(codes, 5, 0.5, 0.5, rng));
  }
  const SparseCodes out = EncodeLayer(layer, codes);
  CheckCodesShape(out, 40, 12, 5);
  for (std::size_t i = 0; i < 40; ++i) {
    const Vector x = codes.DenseRow(i);
    for (std::size_t v = 0; v < 12; ++v)
      CHECK(out.Row(i)[v] == static_cast<std::int32_t>(DenseUpperOracle(layer.clusterings[v], x)));
  }
  CHECK(out == kernels::EncodeUpperSerial(layer, codes));
}

TEST_CASE("every trained layer has exactly V active units per row") {
  const Matrix x = TwoClouds(60, 1);
  MbnConfig c;
  c.clusterings_per_layer = 20;
  c.k_schedule = {40, 20, 10};
  c.seed = 3;
  const MbnFit fit = TrainMbn(x, c, true);
  REQUIRE(fit.layer_codes.size() == 3);
  for (std::size_t l = 0; l < 3; ++l) CheckCodesShape(fit.layer_codes[l], 60, 20, c.k_schedule[l]);
  CHECK(fit.embedding.rows() == 60);
  CHECK(fit.embedding.cols() == 2);
}

TEST_CASE("identical inputs encode identically") {
  Matrix x = oracle::RandomMatrix(30, 5, 2);
  x.row(7) = x.row(3);
  MbnConfig c;
  c.clusterings_per_layer = 30;
  c.k_schedule = {20, 8};
  const MbnFit fit = TrainMbn(x, c, true);
  for (const auto &codes : fit.layer_codes) {
    const auto a = codes.Row(3), b = codes.Row(7);
    CHECK(std::equal(a.begin(), a.end(), b.begin()));
  }
  CHECK(fit.embedding.row(3) == fit.embedding.row(7));
}

TEST_CASE("encodings preserve locality on two clusters") {
  const Matrix x = TwoClouds(50, 4);
  MbnConfig c;
  c.clusterings_per_layer = 100;
  c.k_schedule = {10};
  c.reconstruction_fraction = 0.0;
  const MbnFit fit = TrainMbn(x, c, true);
  const SparseCodes &codes = fit.layer_codes[0];
  double within = 0, between = 0;
  std::size_t nw = 0, nb = 0;
  for (std::size_t i = 0; i < 50; ++i)
    for (std::size_t j = i + 1; j < 50; ++j) {
      std::size_t overlap = 0;
      for (std::size_t v = 0; v < 100; ++v) overlap += codes.Row(i)[v] == codes.Row(j)[v];
      if ((i < 25) == (j < 25)) {
        within += overlap;
        ++nw;
      } else {
        between += overlap;
        ++nb;
      }
    }
  CHECK(within / nw > between / nb);
}

TEST_CASE("single layer, V = 1, a = 1, r = 0 is PCA of a k-centers quantization") {
  const Matrix x = oracle::RandomMatrix(20, 3, 8);
  MbnConfig c;
  c.clusterings_per_layer = 1;
  c.feature_fraction = 1.0;
  c.reconstruction_fraction = 0.0;
  c.k_schedule = {6};
  c.seed = 2;
  const MbnFit fit = TrainMbn(x, c, true);
  const auto &cl = fit.model.layers[0].clusterings[0];
  Matrix onehot = Matrix::Zero(20, 6);
  for (int i = 0; i < 20; ++i) {
    int best = 0;
    for (int j = 1; j < 6; ++j)
      if ((x.row(i) - cl.centers.row(j)).squaredNorm() < (x.row(i) - cl.centers.row(best)).squaredNorm())
        best = j;
    onehot(i, best) = 1.0;
  }
  CHECK(onehot == fit.layer_codes[0].ToDense());
  const PcaModel pca = PcaFit(onehot, 2);
  CHECK((PcaTransform(pca, onehot) - fit.embedding).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("transforming the training set reproduces the embedding") {
  const Matrix x = TwoClouds(40, 5);
  MbnConfig c;
  c.clusterings_per_layer = 25;
  c.c_hint = 2;
  c.seed = 7;
  const MbnFit fit = TrainMbn(x, c);
  CHECK(BitEqual(Transform(fit.model, x), fit.embedding));
  const Matrix one = x.row(11);
  CHECK(BitEqual(Transform(fit.model, one), fit.embedding.row(11)));
  CHECK_THROWS_AS(Transform(fit.model, oracle::RandomMatrix(2, 5, 1)), ValidationError);
}

TEST_CASE("tiny perturbations change codes only at genuine decision boundaries") {
  const Matrix x = oracle::RandomMatrix(30, 8, 10);
  MbnConfig c;
  c.clusterings_per_layer = 50;
  c.k_schedule = {20};
  c.seed = 1;
  const MbnFit fit = TrainMbn(x, c);
  Matrix y = x;
  y.array() += 1e-12;
  const SparseCodes a = EncodeThrough(fit.model, x), b = EncodeThrough(fit.model, y);
  for (std::size_t i = 0; i < 30; ++i) {
    for (std::size_t v = 0; v < 50; ++v) {
      if (a.Row(i)[v] == b.Row(i)[v]) continue;
      // Changed: the two winners must be tied to within the perturbation.
      const auto &cl = fit.model.layers[0].clusterings[v];
      auto dist = [&](int center) {
        long double s = 0;
        for (std::size_t j = 0; j < cl.selected_dims.size(); ++j) {
          const long double d = static_cast<long double>(x(i, cl.selected_dims[j])) - cl.centers(center, j);
          s += d * d;
        }
        return s;
      };
      CHECK(std::abs(static_cast<double>(dist(a.Row(i)[v]) - dist(b.Row(i)[v]))) < 1e-9);
    }
  }
}

TEST_CASE("truncating a trained network equals training the shorter schedule") {
  const Matrix x = TwoClouds(60, 6);
  MbnConfig c;
  c.clusterings_per_layer = 15;
  c.k_schedule = {40, 20, 10};
  c.seed = 9;
  const MbnFit full = TrainMbn(x, c, true);
  c.k_schedule = {40, 20};
  const MbnFit shorter = TrainMbn(x, c);
  const MbnFit cut = TruncateMbn(full.model, full.layer_codes[1], 2, 2);
  CHECK(cut.model.Depth() == 2);
  CHECK(BitEqual(cut.embedding, shorter.embedding));
}

TEST_CASE("model save/load round-trip") {
  testutil::TempDir dir("mbn");
  const Matrix x = TwoClouds(40, 7);
  for (bool standardize : {false, true}) {
    MbnConfig c;
    c.clusterings_per_layer = 10;
    c.c_hint = 2;
    c.standardize_input = standardize;
    const MbnFit fit = TrainMbn(x, c);
    const auto path = dir / (standardize ? "std" : "raw");
    SaveMbnModel(path, fit.model);
    const MbnModel back = LoadMbnModel(path);
    REQUIRE(back.Depth() == fit.model.Depth());
    for (std::size_t l = 0; l < back.Depth(); ++l)
      for (std::size_t v = 0; v < 10; ++v) {
        const auto &p = back.layers[l].clusterings[v], &q = fit.model.layers[l].clusterings[v];
        CHECK(p.selected_dims == q.selected_dims);
        CHECK(p.source_rows == q.source_rows);
        CHECK(p.shifted_positions == q.shifted_positions);
        CHECK(BitEqual(p.centers, q.centers));
        CHECK(p.center_ones == q.center_ones);
      }
    CHECK(BitEqual(Transform(back, x), fit.embedding));
  }
  CHECK_THROWS_AS(LoadMbnModel(dir / "absent"), ValidationError);
}

TEST_CASE("training is bit-identical across worker counts") {
  const Matrix x = TwoClouds(50, 8);
  MbnConfig c;
  c.clusterings_per_layer = 30;
  c.c_hint = 2;
  MbnFit one, many;
  {
    ScopedWorkers w(1);
    one = TrainMbn(x, c, true);
  }
  {
    ScopedWorkers w(4);
    many = TrainMbn(x, c, true);
  }
  REQUIRE(one.layer_codes.size() == many.layer_codes.size());
  for (std::size_t l = 0; l < one.layer_codes.size(); ++l) CHECK(one.layer_codes[l] == many.layer_codes[l]);
  CHECK(BitEqual(one.embedding, many.embedding));
}

}  // TEST_SUITE
