// src/synthetic.cpp

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

#include "mbnspk/synthetic.hpp"

#include <cstdio>
#include <random>

#include "mbnspk/rng.hpp"

namespace mbnspk {

void SyntheticCorpusSpec::Validate() const {
  if (num_speakers == 0) throw ValidationError("synthetic: num_speakers must be positive");
  if (utterances_per_speaker == 0)
    throw ValidationError("synthetic: utterances_per_speaker must be positive");
  if (min_frames == 0 || max_frames < min_frames)
    throw ValidationError("synthetic: frame range must satisfy 1 <= min <= max");
  if (feature_dim == 0) throw ValidationError("synthetic: feature_dim must be positive");
  if (mixtures_per_speaker == 0)
    throw ValidationError("synthetic: mixtures_per_speaker must be positive");
  if (!(speaker_separation > 0.0))
    throw ValidationError("synthetic: speaker_separation must be positive");
}

Dataset GenerateSyntheticCorpus(const SyntheticCorpusSpec &spec) {
  spec.Validate();
  const std::size_t dim = spec.feature_dim;
  const std::size_t mix = spec.mixtures_per_speaker;
  Dataset dataset;
  dataset.labels.emplace();
  for (std::size_t s = 0; s < spec.num_speakers; ++s) {
    char name[32];
    std::snprintf(name, sizeof(name), "spk%02zu", s);
    dataset.label_names.emplace_back(name);

    Rng speaker_rng(StreamSeed(spec.seed, {HashName("speaker"), s}));
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix means(static_cast<Eigen::Index>(mix), static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < means.size(); ++i)
      means.data()[i] = spec.speaker_separation * normal(speaker_rng);

    for (std::size_t u = 0; u < spec.utterances_per_speaker; ++u) {
      Rng rng(StreamSeed(spec.seed, {HashName("utterance"), s, u}));
      std::normal_distribution<double> noise(0.0, 1.0);
      std::uniform_int_distribution<std::size_t> length(spec.min_frames, spec.max_frames);
      std::uniform_int_distribution<std::size_t> component(0, mix - 1);
      const std::size_t frames = length(rng);
      FrameMatrix utt;
      char id[48];
      std::snprintf(id, sizeof(id), "%s_utt%03zu", name, u);
      utt.utterance_id = id;
      utt.frames.resize(static_cast<Eigen::Index>(frames), static_cast<Eigen::Index>(dim));
      for (std::size_t t = 0; t < frames; ++t) {
        const auto c = static_cast<Eigen::Index>(component(rng));
        for (std::size_t f = 0; f < dim; ++f) {
          const auto fi = static_cast<Eigen::Index>(f);
          utt.frames(static_cast<Eigen::Index>(t), fi) = means(c, fi) + noise(rng);
        }
      }
      dataset.utterances.push_back(std::move(utt));
      dataset.labels->push_back(static_cast<int>(s));
    }
  }
  return dataset;
}

}  // namespace mbnspk
