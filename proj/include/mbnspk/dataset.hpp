// mbnspk/dataset.hpp

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

#ifndef MBNSPK_DATASET_HPP_
#define MBNSPK_DATASET_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mbnspk/common.hpp"
#include "mbnspk/matrix_io.hpp"

namespace mbnspk {

/// One utterance: T frames of F-dimensional acoustic features.
struct FrameMatrix {
  std::string utterance_id;
  Matrix frames;

  std::size_t NumFrames() const { return static_cast<std::size_t>(frames.rows()); }
  std::size_t Dim() const { return static_cast<std::size_t>(frames.cols()); }
};

struct ManifestEntry {
  std::string id;
  std::string path;  // relative paths resolve against the manifest's directory
  std::optional<std::string> label;
};

struct DatasetManifest {
  std::size_t feature_dim = 0;
  std::vector<ManifestEntry> entries;
};

/// Utterances in manifest order plus integer ground truth when every entry is
/// labelled. Label ids follow the order in which speaker names first appear.
struct Dataset {
  std::vector<FrameMatrix> utterances;
  std::optional<std::vector<int>> labels;
  std::vector<std::string> label_names;

  std::size_t Size() const { return utterances.size(); }
  std::size_t Dim() const { return utterances.empty() ? 0 : utterances.front().Dim(); }
  std::vector<std::string> Ids() const;
};

DatasetManifest ReadManifest(const std::filesystem::path &manifest_path);
void WriteManifest(const std::filesystem::path &manifest_path, const DatasetManifest &manifest);

/// Checks id uniqueness and the all-or-none label rule.
void ValidateManifest(const DatasetManifest &manifest);

Dataset LoadDataset(const std::filesystem::path &manifest_path);

/// Manifest SaveDataset writes for this dataset: paths "features/<id>.bin|.csv".
DatasetManifest ManifestFor(const Dataset &dataset, MatrixFormat format = MatrixFormat::kBinary);

/// Writes one feature file per utterance under dir/features plus
/// dir/manifest.json. Returns the manifest path.
std::filesystem::path SaveDataset(const std::filesystem::path &dir, const Dataset &dataset,
                                  MatrixFormat format = MatrixFormat::kBinary);

/// Throws ValidationError if any entry of m is NaN or infinite, naming the cell.
void CheckFinite(const Matrix &m, const std::string &what);

}  // namespace mbnspk

#endif  // MBNSPK_DATASET_HPP_
