// mbnspk/synthetic.hpp

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

#ifndef MBNSPK_SYNTHETIC_HPP_
#define MBNSPK_SYNTHETIC_HPP_

#include <cstdint>

#include "mbnspk/dataset.hpp"

namespace mbnspk {

/// Desk-scale speaker corpus: every speaker is a private diagonal GMM with
/// unit variances and means drawn from N(0, separation^2 I).
struct SyntheticCorpusSpec {
  std::size_t num_speakers = 10;
  std::size_t utterances_per_speaker = 50;
  std::size_t min_frames = 80;
  std::size_t max_frames = 160;
  std::size_t feature_dim = 10;
  std::size_t mixtures_per_speaker = 4;
  double speaker_separation = 5.0;
  std::uint64_t seed = 0;

  void Validate() const;
};

/// Utterances ordered speaker-major; ids are "spkXX_uttYYY"; labels are the
/// speaker index. Pure function of `spec`.
Dataset GenerateSyntheticCorpus(const SyntheticCorpusSpec &spec);

}  // namespace mbnspk

#endif  // MBNSPK_SYNTHETIC_HPP_
