// src/gmm.cpp

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

#include "mbnspk/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "json.hpp"
#include "mbnspk/kernels.hpp"
#include "mbnspk/rng.hpp"

namespace mbnspk {

namespace {

// Components whose responsibility mass falls below this are re-seeded.
constexpr double kDegenerateMass = 1e-10;
// Lower bound on the floor itself, for constant feature dimensions.
constexpr double kMinVarianceFloor = 1e-12;

}  // namespace

void GmmModel::Check() const {
  const auto c = weights.size();
  if (c == 0) throw ValidationError("gmm: no mixtures");
  if (means.rows() != c || variances.rows() != c || variances.cols() != means.cols() ||
      variance_floor.size() != means.cols())
    throw ValidationError("gmm: inconsistent parameter shapes");
  if ((weights.array() < 0.0).any()) throw ValidationError("gmm: negative weight");
  if (std::abs(weights.sum() - 1.0) > 1e-10) throw ValidationError("gmm: weights do not sum to 1");
  if ((variance_floor.array() <= 0.0).any()) throw ValidationError("gmm: non-positive floor");
  for (Eigen::Index i = 0; i < c; ++i)
    if ((variances.row(i).transpose().array() < variance_floor.array()).any())
      throw ValidationError("gmm: variance below floor in mixture " + std::to_string(i));
  if (!means.allFinite() || !variances.allFinite())
    throw ValidationError("gmm: non-finite parameters");
}

void UbmConfig::Validate() const {
  if (num_mixtures == 0) throw ValidationError("ubm: num_mixtures must be positive");
  if (em_iterations < 0) throw ValidationError("ubm: em_iterations must be nonnegative");
  if (!(variance_floor_factor > 0.0))
    throw ValidationError("ubm: variance_floor_factor must be positive");
}

void GmmAccumulators::Resize(std::size_t num_mixtures, std::size_t dim) {
  const auto c = static_cast<Eigen::Index>(num_mixtures);
  const auto f = static_cast<Eigen::Index>(dim);
  log_likelihood = 0.0;
  occupancy = Vector::Zero(c);
  first = Matrix::Zero(c, f);
  second = Matrix::Zero(c, f);
}

void GmmAccumulators::Add(const GmmAccumulators &other) {
  log_likelihood += other.log_likelihood;
  occupancy += other.occupancy;
  first += other.first;
  second += other.second;
}

GmmEvaluator::GmmEvaluator(const GmmModel &m) : model(m) {
  const auto c = m.means.rows();
  log_gconst.resize(c);
  inv_var = m.variances.cwiseInverse();
  for (Eigen::Index i = 0; i < c; ++i) {
    double s = 0.0;
    for (Eigen::Index f = 0; f < m.means.cols(); ++f)
      s += std::log(2.0 * std::numbers::pi * m.variances(i, f));
    log_gconst(i) = std::log(m.weights(i)) - 0.5 * s;
  }
}

double GmmEvaluator::Posteriors(const double *frame, double *log_post) const {
  const auto c = model.means.rows();
  const auto dim = model.means.cols();
  double max_lp = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < c; ++i) {
    const double *mean = model.means.row(i).data();
    const double *iv = inv_var.row(i).data();
    double q = 0.0;
    for (Eigen::Index f = 0; f < dim; ++f) {
      const double d = frame[f] - mean[f];
      q += d * d * iv[f];
    }
    log_post[i] = log_gconst(i) - 0.5 * q;
    max_lp = std::max(max_lp, log_post[i]);
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < c; ++i) sum += std::exp(log_post[i] - max_lp);
  const double lse = max_lp + std::log(sum);
  for (Eigen::Index i = 0; i < c; ++i) log_post[i] -= lse;
  return lse;
}

Matrix PoolFrames(std::span<const FrameMatrix> utterances) {
  if (utterances.empty()) throw ValidationError("no utterances to pool");
  const auto dim = utterances.front().frames.cols();
  Eigen::Index total = 0;
  for (const auto &u : utterances) {
    if (u.frames.cols() != dim)
      throw ValidationError("utterance '" + u.utterance_id + "' has feature dim " +
                            std::to_string(u.frames.cols()) + ", expected " + std::to_string(dim));
    total += u.frames.rows();
  }
  Matrix pooled(total, dim);
  Eigen::Index row = 0;
  for (const auto &u : utterances) {
    pooled.middleRows(row, u.frames.rows()) = u.frames;
    row += u.frames.rows();
  }
  return pooled;
}

Vector GlobalVariance(const Matrix &frames) {
  const double n = static_cast<double>(frames.rows());
  const Eigen::RowVectorXd mean = frames.colwise().sum() / n;
  return ((frames.rowwise() - mean).array().square().colwise().sum() / n).transpose();
}

GmmModel InitUbm(const Matrix &pooled_frames, const UbmConfig &config) {
  config.Validate();
  const auto n = static_cast<std::size_t>(pooled_frames.rows());
  if (n < config.num_mixtures)
    throw ValidationError("ubm: " + std::to_string(n) + " frames cannot seed " +
                          std::to_string(config.num_mixtures) + " mixtures");
  const auto c = static_cast<Eigen::Index>(config.num_mixtures);
  const auto dim = pooled_frames.cols();

  GmmModel model;
  model.seed = config.seed;
  model.em_iterations = 0;
  const Vector global_var = GlobalVariance(pooled_frames);
  model.variance_floor =
      (config.variance_floor_factor * global_var).cwiseMax(kMinVarianceFloor);
  model.weights = Vector::Constant(c, 1.0 / static_cast<double>(c));
  model.means.resize(c, dim);
  model.variances.resize(c, dim);

  Rng rng(StreamSeed(config.seed, "ubm-init"));
  const auto rows = SampleSorted(rng, n, config.num_mixtures);
  const Eigen::RowVectorXd var = global_var.cwiseMax(model.variance_floor).transpose();
  for (Eigen::Index i = 0; i < c; ++i) {
    model.means.row(i) = pooled_frames.row(rows[static_cast<std::size_t>(i)]);
    model.variances.row(i) = var;
  }
  return model;
}

EmStepResult EmStep(const GmmModel &model, const Matrix &pooled_frames) {
  if (static_cast<std::size_t>(pooled_frames.cols()) != model.Dim())
    throw ValidationError("em_step: frame dim does not match model");
  const GmmAccumulators acc = kernels::GmmAccumulate(model, pooled_frames);
  if (!std::isfinite(acc.log_likelihood))
    throw RuntimeFailure("em_step: non-finite log-likelihood");

  const auto c = model.means.rows();
  const auto dim = model.means.cols();
  const auto n = static_cast<std::size_t>(pooled_frames.rows());
  GmmModel next = model;
  next.em_iterations = model.em_iterations + 1;
  const double total = acc.occupancy.sum();

  Eigen::RowVectorXd reset_var;
  for (Eigen::Index i = 0; i < c; ++i) {
    const double mass = acc.occupancy(i);
    next.weights(i) = mass / total;
    if (mass < kDegenerateMass) {
      if (reset_var.size() == 0)
        reset_var = GlobalVariance(pooled_frames).cwiseMax(model.variance_floor).transpose();
      Rng rng(StreamSeed(model.seed, {HashName("ubm-reset"),
                                      static_cast<std::uint64_t>(model.em_iterations),
                                      static_cast<std::uint64_t>(i)}));
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      next.means.row(i) = pooled_frames.row(static_cast<Eigen::Index>(pick(rng)));
      next.variances.row(i) = reset_var;
      continue;
    }
    for (Eigen::Index f = 0; f < dim; ++f) {
      const double mean = acc.first(i, f) / mass;
      const double var = acc.second(i, f) / mass - mean * mean;
      next.means(i, f) = mean;
      next.variances(i, f) = std::max(var, model.variance_floor(f));
    }
  }
  return {std::move(next), acc.log_likelihood};
}

GmmModel TrainUbm(std::span<const FrameMatrix> utterances, const UbmConfig &config,
                  std::vector<double> *log_likelihoods) {
  if (utterances.empty()) throw ValidationError("ubm: empty dataset");
  const Matrix pooled = PoolFrames(utterances);
  GmmModel model = InitUbm(pooled, config);
  if (log_likelihoods) log_likelihoods->clear();
  for (int it = 0; it < config.em_iterations; ++it) {
    EmStepResult step = EmStep(model, pooled);
    if (log_likelihoods) log_likelihoods->push_back(step.log_likelihood);
    model = std::move(step.model);
  }
  return model;
}

namespace {

nlohmann::json MatrixToJson(const Matrix &m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    rows.push_back(std::vector<double>(m.row(i).data(), m.row(i).data() + m.cols()));
  return rows;
}

Matrix MatrixFromJson(const nlohmann::json &j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows > 0 ? static_cast<Eigen::Index>(j.at(0).size()) : 0;
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto &row = j.at(static_cast<std::size_t>(i));
    if (static_cast<Eigen::Index>(row.size()) != cols)
      throw ValidationError("gmm json: ragged matrix");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
  }
  return m;
}

}  // namespace

void SaveGmmJson(const std::filesystem::path &path, const GmmModel &model) {
  nlohmann::json j;
  j["weights"] = std::vector<double>(model.weights.data(), model.weights.data() + model.weights.size());
  j["means"] = MatrixToJson(model.means);
  j["variances"] = MatrixToJson(model.variances);
  j["variance_floor"] = std::vector<double>(model.variance_floor.data(),
                                            model.variance_floor.data() + model.variance_floor.size());
  j["seed"] = model.seed;
  j["em_iterations"] = model.em_iterations;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw RuntimeFailure("cannot write " + path.string());
  os << j.dump(1) << '\n';
}

GmmModel LoadGmmJson(const std::filesystem::path &path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("gmm file not found: " + path.string());
  GmmModel model;
  try {
    nlohmann::json j;
    is >> j;
    const auto w = j.at("weights").get<std::vector<double>>();
    model.weights = Eigen::Map<const Vector>(w.data(), static_cast<Eigen::Index>(w.size()));
    model.means = MatrixFromJson(j.at("means"));
    model.variances = MatrixFromJson(j.at("variances"));
    if (j.contains("variance_floor")) {
      const auto fl = j.at("variance_floor").get<std::vector<double>>();
      model.variance_floor = Eigen::Map<const Vector>(fl.data(), static_cast<Eigen::Index>(fl.size()));
    } else {
      model.variance_floor = model.variances.colwise().minCoeff().transpose();
    }
    model.seed = j.at("seed").get<std::uint64_t>();
    model.em_iterations = j.at("em_iterations").get<int>();
  } catch (const nlohmann::json::exception &e) {
    throw ValidationError("gmm file " + path.string() + ": " + e.what());
  }
  model.Check();
  return model;
}

}  // namespace mbnspk
