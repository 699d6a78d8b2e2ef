// src/pca.cpp

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

#include "mbnspk/pca.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mbnspk/kernels.hpp"

namespace mbnspk {

namespace {

/// Flips each column so its largest-magnitude entry (first on ties) is positive.
void FixSigns(Matrix *projection) {
  for (Eigen::Index j = 0; j < projection->cols(); ++j) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index i = 0; i < projection->rows(); ++i) {
      const double a = std::abs((*projection)(i, j));
      if (a > best_abs) {
        best_abs = a;
        best = i;
      }
    }
    if ((*projection)(best, j) < 0.0) projection->col(j) *= -1.0;
  }
}

/// Number of components to keep given descending eigenvalues.
std::size_t KeptComponents(const Vector &descending, std::size_t requested, std::size_t n,
                           std::size_t input_dim) {
  const double top = descending.size() > 0 ? descending(0) : 0.0;
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < descending.size(); ++i)
    if (descending(i) > kPcaRankTolerance * top) ++rank;
  rank = std::min({rank, n - 1, input_dim});
  if (requested > rank) {
    Warn("pca", "output dimension " + std::to_string(requested) + " clamped to rank " +
                    std::to_string(rank));
    return rank;
  }
  return requested;
}

PcaModel ZeroVarianceModel(Vector mean, std::size_t output_dim) {
  Warn("pca", "input has zero variance; embedding is all zeros");
  PcaModel model;
  const auto d = static_cast<Eigen::Index>(mean.size());
  model.mean = std::move(mean);
  model.projection = Matrix::Zero(d, static_cast<Eigen::Index>(output_dim));
  model.eigenvalues = Vector::Zero(static_cast<Eigen::Index>(output_dim));
  return model;
}

struct Descending {
  Vector values;
  Matrix vectors;  // columns
};

Descending SortedEigen(const Matrix &symmetric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetric);
  if (es.info() != Eigen::Success) throw RuntimeFailure("pca: eigen-decomposition failed");
  Descending out;
  out.values = es.eigenvalues().reverse();
  out.vectors = es.eigenvectors().rowwise().reverse();
  return out;
}

void CheckRows(std::size_t n, std::size_t output_dim) {
  if (n < 2) throw ValidationError("pca: need at least 2 rows");
  if (output_dim == 0) throw ValidationError("pca: output dimension must be positive");
}

}  // namespace

PcaModel PcaModel::Truncated(std::size_t dim) const {
  PcaModel out;
  const auto keep = static_cast<Eigen::Index>(std::min(dim, OutputDim()));
  out.mean = mean;
  out.projection = projection.leftCols(keep);
  out.eigenvalues = eigenvalues.head(keep);
  return out;
}

PcaModel PcaFit(const Matrix &data, std::size_t output_dim) {
  const auto n = static_cast<std::size_t>(data.rows());
  const auto dim = static_cast<std::size_t>(data.cols());
  CheckRows(n, output_dim);
  if (dim == 0) throw ValidationError("pca: zero-width input");
  const double denom = static_cast<double>(n - 1);
  Vector mean = data.colwise().mean().transpose();
  const Matrix centered = data.rowwise() - mean.transpose();
  const double scale = std::max(1.0, data.cwiseAbs().maxCoeff());
  if (centered.cwiseAbs().maxCoeff() <= 1e-12 * scale)
    return ZeroVarianceModel(std::move(mean), output_dim);

  PcaModel model;
  model.mean = std::move(mean);
  if (dim <= n) {
    const Matrix cov = (centered.transpose() * centered) / denom;
    const Descending eig = SortedEigen(cov);
    const auto keep = static_cast<Eigen::Index>(KeptComponents(eig.values, output_dim, n, dim));
    model.projection = eig.vectors.leftCols(keep);
    model.eigenvalues = eig.values.head(keep);
  } else {
    // Gram route: covariance eigenvectors are Zc^T u / sqrt((n-1) lambda).
    const Matrix gram = (centered * centered.transpose()) / denom;
    const Descending eig = SortedEigen(gram);
    const auto keep = static_cast<Eigen::Index>(KeptComponents(eig.values, output_dim, n, dim));
    model.projection.resize(static_cast<Eigen::Index>(dim), keep);
    for (Eigen::Index j = 0; j < keep; ++j)
      model.projection.col(j) =
          centered.transpose() * eig.vectors.col(j) / std::sqrt(denom * eig.values(j));
    model.eigenvalues = eig.values.head(keep);
  }
  FixSigns(&model.projection);
  return model;
}

PcaModel PcaFit(const SparseCodes &codes, std::size_t output_dim) {
  const std::size_t n = codes.rows;
  CheckRows(n, output_dim);
  if (codes.Width() <= n) return PcaFit(codes.ToDense(), output_dim);

  const auto width = static_cast<Eigen::Index>(codes.Width());
  const double denom = static_cast<double>(n - 1);
  Vector mean = Vector::Zero(width);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t v = 0; v < codes.blocks; ++v)
      mean(static_cast<Eigen::Index>(codes.Column(i, v))) += 1.0;
  mean /= static_cast<double>(n);

  // Centered Gram: Z Z^T - s 1^T - 1 s^T + |mu|^2, with s = Z mu.
  Matrix gram = kernels::SharedUnitGram(codes);
  Vector s(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t v = 0; v < codes.blocks; ++v)
      acc += mean(static_cast<Eigen::Index>(codes.Column(i, v)));
    s(static_cast<Eigen::Index>(i)) = acc;
  }
  const double mu2 = mean.squaredNorm();
  for (Eigen::Index i = 0; i < gram.rows(); ++i)
    for (Eigen::Index j = 0; j < gram.cols(); ++j) gram(i, j) += mu2 - s(i) - s(j);
  gram /= denom;
  if (gram.cwiseAbs().maxCoeff() <= 1e-12 * static_cast<double>(codes.blocks))
    return ZeroVarianceModel(std::move(mean), output_dim);

  const Descending eig = SortedEigen(gram);
  const auto keep = static_cast<Eigen::Index>(
      KeptComponents(eig.values, output_dim, n, codes.Width()));
  PcaModel model;
  model.projection = Matrix::Zero(width, keep);
  for (Eigen::Index j = 0; j < keep; ++j) {
    const Vector u = eig.vectors.col(j);
    Vector col = Vector::Zero(width);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t v = 0; v < codes.blocks; ++v)
        col(static_cast<Eigen::Index>(codes.Column(i, v))) += u(static_cast<Eigen::Index>(i));
    col -= mean * u.sum();
    model.projection.col(j) = col / std::sqrt(denom * eig.values(j));
  }
  model.eigenvalues = eig.values.head(keep);
  model.mean = std::move(mean);
  FixSigns(&model.projection);
  return model;
}

Matrix PcaTransform(const PcaModel &model, const Matrix &data) {
  if (static_cast<std::size_t>(data.cols()) != model.InputDim())
    throw ValidationError("pca: input has " + std::to_string(data.cols()) + " columns, model expects " +
                          std::to_string(model.InputDim()));
  const auto d = model.projection.cols();
  const auto width = model.projection.rows();
  Matrix out(data.rows(), d);
  // Row-at-a-time in a fixed order, so a row's embedding does not depend on
  // how many other rows are transformed with it.
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      double acc = 0.0;
      for (Eigen::Index k = 0; k < width; ++k)
        acc += (data(i, k) - model.mean(k)) * model.projection(k, j);
      out(i, j) = acc;
    }
  }
  return out;
}

Matrix PcaTransform(const PcaModel &model, const SparseCodes &codes) {
  if (codes.Width() != model.InputDim())
    throw ValidationError("pca: code width " + std::to_string(codes.Width()) +
                          " does not match model input " + std::to_string(model.InputDim()));
  const auto d = model.projection.cols();
  Eigen::RowVectorXd offset = Eigen::RowVectorXd::Zero(d);
  for (Eigen::Index k = 0; k < model.projection.rows(); ++k)
    offset += model.mean(k) * model.projection.row(k);
  Matrix out(static_cast<Eigen::Index>(codes.rows), d);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < codes.rows; ++i) {
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(d);
    for (std::size_t v = 0; v < codes.blocks; ++v)
      acc += model.projection.row(static_cast<Eigen::Index>(codes.Column(i, v)));
    out.row(static_cast<Eigen::Index>(i)) = acc - offset;
  }
  return out;
}

}  // namespace mbnspk
