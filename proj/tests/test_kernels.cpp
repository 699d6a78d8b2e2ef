// tests/test_kernels.cpp

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

// Parallel kernels against their serial references, across worker counts.

#include <cstring>

#include "doctest.h"
#include "mbnspk/kernels.hpp"
#include "mbnspk/parallel.hpp"
#include "oracles.hpp"

using namespace mbnspk;

namespace {

bool BitEqual(const Matrix &a, const Matrix &b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0;
}

const int kWorkerCounts[] = {1, 2, 3, 8};

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("GMM accumulation: parallel matches serial and ignores the worker count") {
  // Enough frames for several accumulation blocks.
  const Matrix x = oracle::RandomMatrix(3 * kernels::kGmmBlockFrames + 17, 4, 1);
  UbmConfig cfg;
  cfg.num_mixtures = 6;
  const GmmModel m = InitUbm(x, cfg);
  const GmmAccumulators ref = kernels::GmmAccumulateSerial(m, x);
  GmmAccumulators first_run;
  {
    ScopedWorkers scope(1);
    first_run = kernels::GmmAccumulate(m, x);
  }
  // Blocked summation differs from the frame-by-frame reference only by
  // rounding, and does not depend on the worker count at all.
  CHECK(first_run.log_likelihood == doctest::Approx(ref.log_likelihood).epsilon(1e-12));
  CHECK((first_run.occupancy - ref.occupancy).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK((first_run.first - ref.first).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK((first_run.second - ref.second).cwiseAbs().maxCoeff() <= 1e-9);
  for (int w : kWorkerCounts) {
    ScopedWorkers scope(w);
    const GmmAccumulators got = kernels::GmmAccumulate(m, x);
    CHECK(got.log_likelihood == first_run.log_likelihood);
    CHECK(got.occupancy == first_run.occupancy);
    CHECK(BitEqual(got.first, first_run.first));
    CHECK(BitEqual(got.second, first_run.second));
  }
  double naive_ll = 0;
  oracle::NaiveResponsibilities(m, x, &naive_ll);
  CHECK(ref.log_likelihood == doctest::Approx(naive_ll).epsilon(1e-10));
}

TEST_CASE("layer encoding: parallel equals serial") {
  const Matrix x = oracle::RandomMatrix(90, 12, 2);
  MbnLayer bottom;
  bottom.layer_index = 1;
  bottom.k = 30;
  bottom.mode = SimilarityMode::kBottom;
  for (std::size_t v = 0; v < 16; ++v) {
    Rng rng(v);
    bottom.clusterings.push_back(TrainClustering(x, 30, 0.5, 0.5, rng));
  }
  const SparseCodes ref = kernels::EncodeBottomSerial(bottom, x);
  MbnLayer upper;
  upper.layer_index = 2;
  upper.k = 12;
  upper.mode = SimilarityMode::kUpper;
  for (std::size_t v = 0; v < 16; ++v) {
    Rng rng(100 + v);
    upper.clusterings.push_back(TrainClustering(ref, 12, 0.5, 0.5, rng));
  }
  const SparseCodes ref_upper = kernels::EncodeUpperSerial(upper, ref);
  for (int w : kWorkerCounts) {
    ScopedWorkers scope(w);
    CHECK(kernels::EncodeBottom(bottom, x) == ref);
    CHECK(kernels::EncodeUpper(upper, ref) == ref_upper);
  }
  for (std::size_t i = 0; i < 90; ++i) {
    const Vector row = x.row(i);
    for (std::size_t v = 0; v < 16; ++v)
      CHECK(ref.Row(i)[v] ==
            static_cast<std::int32_t>(EncodeOne(bottom.clusterings[v], {row.data(), 12}, SimilarityMode::kBottom)));
  }
}

TEST_CASE("nearest-center assignment: parallel equals serial") {
  const Matrix x = oracle::RandomMatrix(500, 3, 3);
  const Matrix c = oracle::RandomMatrix(7, 3, 4);
  std::vector<std::int32_t> rl(500), gl(500);
  std::vector<double> rd(500), gd(500);
  const double ref = kernels::AssignNearestSerial(x, c, rl, rd);
  for (int w : kWorkerCounts) {
    ScopedWorkers scope(w);
    CHECK(kernels::AssignNearest(x, c, gl, gd) == ref);
    CHECK(gl == rl);
    CHECK(gd == rd);
  }
}

TEST_CASE("shared-unit Gram: parallel equals the dense product") {
  Rng rng(5);
  SparseCodes codes(60, 20, 7);
  for (auto &a : codes.active) a = static_cast<std::int32_t>(rng() % 7);
  const Matrix ref = kernels::SharedUnitGramSerial(codes);
  const Matrix dense = codes.ToDense();
  CHECK(BitEqual(ref, dense * dense.transpose()));
  for (int w : kWorkerCounts) {
    ScopedWorkers scope(w);
    CHECK(BitEqual(kernels::SharedUnitGram(codes), ref));
  }
}

}  // TEST_SUITE
