// tests/test_pca.cpp

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

#include "doctest.h"
#include "mbnspk/pca.hpp"
#include "mbnspk/rng.hpp"
#include "oracles.hpp"

using namespace mbnspk;

namespace {

double MaxAbsDiff(const Matrix &a, const Matrix &b) {
  REQUIRE(a.rows() == b.rows());
  REQUIRE(a.cols() == b.cols());
  return (a - b).cwiseAbs().maxCoeff();
}

SparseCodes RandomCodes(std::size_t rows, std::size_t blocks, std::size_t width, std::uint64_t seed) {
  Rng rng(seed);
  SparseCodes c(rows, blocks, width);
  for (auto &a : c.active) a = static_cast<std::int32_t>(rng() % width);
  return c;
}

}  // namespace

TEST_SUITE("pca") {

TEST_CASE("points (+-1, 0) project onto the x-axis") {
  Matrix x(2, 2);
  x << 1, 0, -1, 0;
  const PcaModel m = PcaFit(x, 1);
  CHECK(std::abs(m.projection(0, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(m.projection(1, 0)) < 1e-15);
  const Matrix y = PcaTransform(m, x);
  CHECK(y(0, 0) == doctest::Approx(1.0));
  CHECK(y(1, 0) == doctest::Approx(-1.0));
}

TEST_CASE("random 6x4 projection matches the Jacobi oracle") {
  const Matrix x = oracle::RandomMatrix(6, 4, 21);
  std::vector<double> values;
  const Matrix expected = oracle::PcaProjection(x, 3, &values);
  const PcaModel m = PcaFit(x, 3);
  CHECK(MaxAbsDiff(m.projection, expected) <= 1e-8);
  for (int i = 0; i < 3; ++i) CHECK(m.eigenvalues(i) == doctest::Approx(values[i]).epsilon(1e-10));
}

TEST_CASE("wide data uses the Gram route and still matches the oracle") {
  const Matrix x = oracle::RandomMatrix(8, 30, 5);
  const PcaModel m = PcaFit(x, 4);
  CHECK(MaxAbsDiff(m.projection, oracle::PcaProjection(x, 4)) <= 1e-8);
}

TEST_CASE("data on a 2-D affine subspace is reconstructed exactly") {
  const Matrix basis = oracle::RandomMatrix(2, 5, 1);
  const Matrix coef = oracle::RandomMatrix(20, 2, 2);
  Matrix x = coef * basis;
  x.rowwise() += oracle::RandomMatrix(1, 5, 3).row(0);
  const PcaModel m = PcaFit(x, 2);
  const Matrix y = PcaTransform(m, x);
  Matrix back = y * m.projection.transpose();
  back.rowwise() += m.mean.transpose();
  CHECK(MaxAbsDiff(back, x) <= 1e-8);
}

TEST_CASE("output dim is clamped to the rank and zero variance gives zeros") {
  ScopedWarningMute mute;
  Matrix x(3, 4);
  x << 1, 2, 3, 4, 2, 4, 6, 8, 3, 6, 9, 12;
  const PcaModel m = PcaFit(x, 3);
  CHECK(m.OutputDim() == 1);
  const Matrix flat = Matrix::Constant(5, 3, 2.0);
  const PcaModel z = PcaFit(flat, 2);
  CHECK(PcaTransform(z, flat).cwiseAbs().maxCoeff() == 0.0);
  CHECK(PcaTransform(z, flat).cols() == 2);
}

TEST_CASE("truncation keeps the leading components") {
  const Matrix x = oracle::RandomMatrix(20, 6, 9);
  const PcaModel m = PcaFit(x, 5);
  const PcaModel t = m.Truncated(2);
  CHECK(t.OutputDim() == 2);
  CHECK(MaxAbsDiff(t.projection, m.projection.leftCols(2)) == 0.0);
  CHECK(MaxAbsDiff(PcaTransform(t, x), PcaTransform(m, x).leftCols(2)) <= 1e-12);
}

TEST_CASE("sparse one-hot codes give the same PCA as their dense form") {
  for (auto [rows, blocks, width] : {std::tuple{12, 5, 4}, std::tuple{40, 3, 3}}) {
    const SparseCodes codes = RandomCodes(rows, blocks, width, rows);
    const Matrix dense = codes.ToDense();
    const PcaModel ms = PcaFit(codes, 3), md = PcaFit(dense, 3);
    CHECK(MaxAbsDiff(ms.projection, md.projection) <= 1e-8);
    CHECK(MaxAbsDiff(PcaTransform(ms, codes), PcaTransform(md, dense)) <= 1e-8);
    CHECK(MaxAbsDiff(ms.projection, oracle::PcaProjection(dense, 3)) <= 1e-8);
  }
}

TEST_CASE("invalid requests") {
  CHECK_THROWS_AS(PcaFit(oracle::RandomMatrix(1, 3, 1), 1), ValidationError);
  CHECK_THROWS_AS(PcaFit(oracle::RandomMatrix(5, 3, 1), 0), ValidationError);
  const PcaModel m = PcaFit(oracle::RandomMatrix(5, 3, 1), 1);
  CHECK_THROWS_AS(PcaTransform(m, oracle::RandomMatrix(2, 4, 1)), ValidationError);
}

}  // TEST_SUITE
