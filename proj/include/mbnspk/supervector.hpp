// mbnspk/supervector.hpp

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

#ifndef MBNSPK_SUPERVECTOR_HPP_
#define MBNSPK_SUPERVECTOR_HPP_

#include <span>

#include "mbnspk/dataset.hpp"
#include "mbnspk/gmm.hpp"

namespace mbnspk {

/// Zeroth-order occupations n (C) and centered first-order statistics f
/// (C*F, component-major) of one utterance; x = [n; f].
struct Supervector {
  Vector n;
  Vector f;

  Vector Combined() const;
};

struct SupervectorOptions {
  /// Off by default: f is left as raw centered sums. When on, f_c is divided
  /// by n_c and whitened by the component standard deviations.
  bool normalize = false;
};

Supervector ExtractSupervector(const GmmModel &model, const FrameMatrix &utterance,
                               const SupervectorOptions &options = {});

/// One row per utterance, rows aligned with the input order. Width C + C*F.
Matrix ExtractSupervectors(const GmmModel &model, std::span<const FrameMatrix> utterances,
                           const SupervectorOptions &options = {});

}  // namespace mbnspk

#endif  // MBNSPK_SUPERVECTOR_HPP_
