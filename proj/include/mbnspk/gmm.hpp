// mbnspk/gmm.hpp

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

#ifndef MBNSPK_GMM_HPP_
#define MBNSPK_GMM_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "mbnspk/common.hpp"
#include "mbnspk/dataset.hpp"

namespace mbnspk {

/// Diagonal-covariance GMM used as the universal background model.
struct GmmModel {
  Vector weights;    // C
  Matrix means;      // C x F
  Matrix variances;  // C x F
  Vector variance_floor;  // F; every variance is kept >= this
  std::uint64_t seed = 0;
  int em_iterations = 0;  // EM steps applied so far

  std::size_t NumMixtures() const { return static_cast<std::size_t>(weights.size()); }
  std::size_t Dim() const { return static_cast<std::size_t>(means.cols()); }

  /// Throws ValidationError if weights/variances violate the model invariants.
  void Check() const;
};

struct UbmConfig {
  std::size_t num_mixtures = 16;
  int em_iterations = 20;
  double variance_floor_factor = 1e-3;
  std::uint64_t seed = 0;

  void Validate() const;
};

/// Sufficient statistics of a frame set under a GMM.
struct GmmAccumulators {
  double log_likelihood = 0.0;
  Vector occupancy;  // C: sum_t gamma_t(c)
  Matrix first;      // C x F: sum_t gamma_t(c) o_t
  Matrix second;     // C x F: sum_t gamma_t(c) o_t^2

  void Resize(std::size_t num_mixtures, std::size_t dim);
  void Add(const GmmAccumulators &other);
};

/// Per-component constants for log-domain evaluation.
struct GmmEvaluator {
  explicit GmmEvaluator(const GmmModel &model);

  /// Fills log_post (size C) with log w_c N(frame; m_c, S_c) and returns the
  /// log-sum-exp over components; on return log_post holds log gamma(c).
  double Posteriors(const double *frame, double *log_post) const;

  const GmmModel &model;
  Vector log_gconst;  // log w_c - 0.5 sum_f log(2 pi var_cf)
  Matrix inv_var;     // C x F
};

/// Stacks every utterance's frames into one T_total x F matrix.
Matrix PoolFrames(std::span<const FrameMatrix> utterances);

/// Per-dimension biased variance of a frame matrix.
Vector GlobalVariance(const Matrix &frames);

/// Random-mean initialization: C distinct frames as means, uniform weights,
/// global variances (floored).
GmmModel InitUbm(const Matrix &pooled_frames, const UbmConfig &config);

struct EmStepResult {
  GmmModel model;
  double log_likelihood;  // of the input model, before the update
};

/// One EM iteration on pooled frames.
EmStepResult EmStep(const GmmModel &model, const Matrix &pooled_frames);

/// InitUbm followed by exactly config.em_iterations EM steps. The optional
/// out-parameter receives the pre-update log-likelihood of every step.
GmmModel TrainUbm(std::span<const FrameMatrix> utterances, const UbmConfig &config,
                  std::vector<double> *log_likelihoods = nullptr);

void SaveGmmJson(const std::filesystem::path &path, const GmmModel &model);
GmmModel LoadGmmJson(const std::filesystem::path &path);

}  // namespace mbnspk

#endif  // MBNSPK_GMM_HPP_
