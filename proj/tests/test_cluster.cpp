// tests/test_cluster.cpp

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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "mbnspk/cluster.hpp"
#include "mbnspk/rng.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace mbnspk;

namespace {

Matrix Column(std::initializer_list<double> v) {
  Matrix m(v.size(), 1);
  int i = 0;
  for (double x : v) m(i++, 0) = x;
  return m;
}

std::vector<int> RandomLabels(Rng &rng, std::size_t n, int k) {
  std::vector<int> l(n);
  for (auto &x : l) x = static_cast<int>(rng() % k);
  return l;
}

}  // namespace

TEST_SUITE("cluster") {

TEST_CASE("k-means on {0, 1, 9, 10} with c = 2") {
  KMeansConfig cfg;
  cfg.num_clusters = 2;
  const ClusterAssignment a = KMeans(Column({0, 1, 9, 10}), cfg);
  CHECK(a.labels[0] == a.labels[1]);
  CHECK(a.labels[2] == a.labels[3]);
  CHECK(a.labels[0] != a.labels[2]);
  CHECK(*a.objective == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(oracle::ExhaustiveKMeansOptimum(Column({0, 1, 9, 10}), 2) == doctest::Approx(1.0));
}

TEST_CASE("c distinct points give objective 0") {
  KMeansConfig cfg;
  cfg.num_clusters = 3;
  const ClusterAssignment a = KMeans(Column({-4, 2, 11}), cfg);
  CHECK(*a.objective == 0.0);
  CHECK(a.OccupiedClusters() == 3);
}

TEST_CASE("objective trace is non-increasing and ends at the final objective") {
  KMeansConfig cfg;
  cfg.num_clusters = 4;
  cfg.seed = 3;
  const Matrix x = oracle::RandomMatrix(200, 3, 4);
  const ClusterAssignment a = KMeans(x, cfg);
  REQUIRE(!a.objective_trace.empty());
  for (std::size_t i = 1; i < a.objective_trace.size(); ++i)
    CHECK(a.objective_trace[i] <= a.objective_trace[i - 1] * (1 + 1e-12));
  CHECK(a.objective_trace.back() == doctest::Approx(*a.objective).epsilon(1e-12));
  CHECK(*a.objective == doctest::Approx(WithinClusterSumOfSquares(x, a.labels)).epsilon(1e-12));
  CHECK(a.restart_objectives.size() == cfg.restarts);
  CHECK(*a.objective == *std::min_element(a.restart_objectives.begin(), a.restart_objectives.end()));
}

TEST_CASE("k-means reaches the exhaustive optimum on small instances") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 4 + rng() % 5, d = 1 + rng() % 2, c = 2 + rng() % 2;
    const Matrix x = oracle::RandomMatrix(n, d, rng());
    KMeansConfig cfg;
    cfg.num_clusters = c;
    cfg.restarts = 10;
    cfg.seed = trial;
    CHECK(*KMeans(x, cfg).objective <= oracle::ExhaustiveKMeansOptimum(x, c) + 1e-9);
  }
}

TEST_CASE("k-means rejects invalid input") {
  KMeansConfig cfg;
  cfg.num_clusters = 5;
  CHECK_THROWS_AS(KMeans(Column({1, 2}), cfg), ValidationError);
  cfg.num_clusters = 0;
  CHECK_THROWS_AS(KMeans(Column({1, 2}), cfg), ValidationError);
  cfg.num_clusters = 1;
  cfg.restarts = 0;
  CHECK_THROWS_AS(KMeans(Column({1, 2}), cfg), ValidationError);
}

TEST_CASE("agglomerative: two far pairs, stop = 2") {
  const Dendrogram d = Agglomerative(Column({0, 1, 100, 101}), {2, std::nullopt});
  CHECK(d.assignment.labels == std::vector<int>{0, 0, 1, 1});
  CHECK(d.merges.size() == 2);
}

TEST_CASE("agglomerative: stop = n leaves singletons") {
  const Dendrogram d = Agglomerative(Column({5, 1, 3}), {3, std::nullopt});
  CHECK(d.assignment.labels == std::vector<int>{0, 1, 2});
  CHECK(d.merges.empty());
}

TEST_CASE("agglomerative merge order matches the brute-force linkage") {
  Matrix x(6, 2);
  x << 0, 0, 0.5, 0.1, 10, 10, 10.3, 9.9, -8, 7, -8.2, 7.4;
  const Dendrogram d = Agglomerative(x, {1, std::nullopt});
  const auto naive = oracle::NaiveAverageLinkage(x, 1);
  REQUIRE(d.merges.size() == naive.size());
  for (std::size_t i = 0; i < naive.size(); ++i) {
    CHECK(d.merges[i].a == naive[i].a);
    CHECK(d.merges[i].b == naive[i].b);
    CHECK(d.merges[i].distance == doctest::Approx(naive[i].distance).epsilon(1e-12));
  }
  const Dendrogram three = Agglomerative(x, {3, std::nullopt});
  CHECK(three.assignment.labels == std::vector<int>{0, 0, 1, 1, 2, 2});
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix r = oracle::RandomMatrix(9, 2, 40 + trial);
    const auto got = Agglomerative(r, {1, std::nullopt}).merges;
    const auto want = oracle::NaiveAverageLinkage(r, 1);
    for (std::size_t i = 0; i < want.size(); ++i) {
      CHECK(got[i].a == want[i].a);
      CHECK(got[i].b == want[i].b);
    }
  }
}

TEST_CASE("agglomerative distance threshold") {
  const Dendrogram d = Agglomerative(Column({0, 1, 100, 101, 300}), {std::nullopt, 2.0});
  CHECK(d.assignment.OccupiedClusters() == 3);
  CHECK_THROWS_AS(Agglomerative(Column({0, 1}), {}), ValidationError);
}

TEST_CASE("NMI hand-computed cases") {
  const std::vector<int> a{0, 0, 1, 1}, b{0, 0, 1, 2};
  CHECK(std::abs(Nmi(a, b) - 1.0 / std::sqrt(1.5)) <= 1e-12);
  CHECK(Nmi(a, a) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(Nmi(a, std::vector<int>{5, 5, 3, 3}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(Nmi(a, std::vector<int>{0, 1, 0, 1})) <= 1e-15);
  CHECK(Nmi(std::vector<int>{0, 0, 0}, std::vector<int>{1, 1, 1}) == 1.0);
  CHECK(Nmi(std::vector<int>{0, 0, 0}, std::vector<int>{0, 1, 1}) == 0.0);
  CHECK_THROWS_AS(Nmi(a, std::vector<int>{0}), ValidationError);
}

TEST_CASE("NMI is symmetric, permutation invariant and agrees with the base-2 oracle") {
  Rng rng(2);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng() % 40;
    const auto a = RandomLabels(rng, n, 1 + rng() % 5), b = RandomLabels(rng, n, 1 + rng() % 5);
    std::vector<int> perm(8);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> renamed(n);
    for (std::size_t i = 0; i < n; ++i) renamed[i] = perm[a[i]];
    CHECK(Nmi(a, b) == doctest::Approx(Nmi(b, a)).epsilon(1e-12));
    CHECK(Nmi(renamed, b) == doctest::Approx(Nmi(a, b)).epsilon(1e-12));
    CHECK(Nmi(a, b) == doctest::Approx(oracle::NaiveNmi(a, b)).epsilon(1e-12));
    CHECK(Nmi(a, b) >= -1e-15);
    CHECK(Nmi(a, b) <= 1 + 1e-12);
  }
}

TEST_CASE("independent random labelings have NMI near zero") {
  Rng rng(8);
  CHECK(Nmi(RandomLabels(rng, 10000, 10), RandomLabels(rng, 10000, 10)) < 0.02);
}

TEST_CASE("assignments CSV round-trip") {
  testutil::TempDir dir("cl");
  const std::vector<std::string> ids{"a", "b", "c"};
  const std::vector<int> labels{2, 0, 2};
  WriteAssignmentsCsv(dir / "a.csv", ids, labels);
  CHECK(testutil::ReadFile(dir / "a.csv").rfind("utterance_id,predicted_label\n", 0) == 0);
  std::vector<std::string> ri;
  std::vector<int> rl;
  ReadAssignmentsCsv(dir / "a.csv", &ri, &rl);
  CHECK(ri == ids);
  CHECK(rl == labels);
  testutil::WriteFile(dir / "bad.csv", "utterance_id,predicted_label\nx,notanumber\n");
  CHECK_THROWS_AS(ReadAssignmentsCsv(dir / "bad.csv", &ri, &rl), ValidationError);
}

}  // TEST_SUITE
