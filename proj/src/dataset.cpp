// src/dataset.cpp

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

#include "mbnspk/dataset.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "json.hpp"

namespace mbnspk {

using nlohmann::json;

std::vector<std::string> Dataset::Ids() const {
  std::vector<std::string> ids;
  ids.reserve(utterances.size());
  for (const auto &u : utterances) ids.push_back(u.utterance_id);
  return ids;
}

void CheckFinite(const Matrix &m, const std::string &what) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (!std::isfinite(m(i, j)))
        throw ValidationError("non-finite value in " + what + " at row " + std::to_string(i + 1) +
                              ", column " + std::to_string(j + 1));
}

void ValidateManifest(const DatasetManifest &manifest) {
  if (manifest.feature_dim == 0) throw ValidationError("manifest: feature_dim must be positive");
  std::set<std::string> seen;
  std::size_t labelled = 0;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    const auto &e = manifest.entries[i];
    if (!seen.insert(e.id).second)
      throw ValidationError("manifest entry " + std::to_string(i) + ": duplicate utterance id '" +
                            e.id + "'");
    if (e.label) ++labelled;
  }
  if (labelled != 0 && labelled != manifest.entries.size())
    throw ValidationError("manifest: speaker labels must be given for all entries or none");
}

DatasetManifest ReadManifest(const std::filesystem::path &manifest_path) {
  std::ifstream is(manifest_path);
  if (!is) throw ValidationError("manifest not found: " + manifest_path.string());
  json j;
  try {
    is >> j;
  } catch (const json::exception &e) {
    throw ValidationError("manifest " + manifest_path.string() + ": " + e.what());
  }
  DatasetManifest manifest;
  try {
    const auto dim = j.at("feature_dim").get<long long>();
    if (dim <= 0) throw ValidationError("manifest: feature_dim must be positive");
    manifest.feature_dim = static_cast<std::size_t>(dim);
    for (const auto &e : j.at("entries")) {
      ManifestEntry entry;
      entry.id = e.at("id").get<std::string>();
      entry.path = e.at("path").get<std::string>();
      if (e.contains("label") && !e.at("label").is_null())
        entry.label = e.at("label").get<std::string>();
      manifest.entries.push_back(std::move(entry));
    }
  } catch (const json::exception &e) {
    throw ValidationError("manifest " + manifest_path.string() + ": " + e.what());
  }
  ValidateManifest(manifest);
  return manifest;
}

void WriteManifest(const std::filesystem::path &manifest_path, const DatasetManifest &manifest) {
  json entries = json::array();
  for (const auto &e : manifest.entries) {
    entries.push_back({{"id", e.id},
                       {"path", e.path},
                       {"label", e.label ? json(*e.label) : json(nullptr)}});
  }
  json j = {{"feature_dim", manifest.feature_dim}, {"entries", entries}};
  if (manifest_path.has_parent_path())
    std::filesystem::create_directories(manifest_path.parent_path());
  std::ofstream os(manifest_path);
  if (!os) throw RuntimeFailure("cannot write " + manifest_path.string());
  os << j.dump(2) << '\n';
}

Dataset LoadDataset(const std::filesystem::path &manifest_path) {
  const DatasetManifest manifest = ReadManifest(manifest_path);
  const auto base = manifest_path.parent_path();
  Dataset dataset;
  dataset.utterances.reserve(manifest.entries.size());
  std::map<std::string, int> label_ids;
  std::vector<int> labels;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    const auto &e = manifest.entries[i];
    std::filesystem::path path(e.path);
    if (path.is_relative()) path = base / path;
    const std::string row = "manifest entry " + std::to_string(i) + " ('" + e.id + "')";
    Matrix frames;
    try {
      frames = LoadMatrix(path);
    } catch (const ValidationError &err) {
      throw ValidationError(row + ": " + err.what());
    }
    if (frames.rows() < 1)
      throw ValidationError(row + ": feature file " + path.string() + " has no frames");
    if (static_cast<std::size_t>(frames.cols()) != manifest.feature_dim)
      throw ValidationError(row + ": feature file " + path.string() + " has " +
                            std::to_string(frames.cols()) + " columns, manifest feature_dim is " +
                            std::to_string(manifest.feature_dim));
    try {
      CheckFinite(frames, path.string());
    } catch (const ValidationError &err) {
      throw ValidationError(row + ": " + err.what());
    }
    if (e.label) {
      auto [it, inserted] = label_ids.emplace(*e.label, static_cast<int>(label_ids.size()));
      if (inserted) dataset.label_names.push_back(*e.label);
      labels.push_back(it->second);
    }
    dataset.utterances.push_back({e.id, std::move(frames)});
  }
  if (!manifest.entries.empty() && manifest.entries.front().label) dataset.labels = std::move(labels);
  return dataset;
}

DatasetManifest ManifestFor(const Dataset &dataset, MatrixFormat format) {
  DatasetManifest manifest;
  manifest.feature_dim = dataset.Dim();
  const std::string ext = format == MatrixFormat::kBinary ? ".bin" : ".csv";
  for (std::size_t i = 0; i < dataset.Size(); ++i) {
    const auto &u = dataset.utterances[i];
    ManifestEntry entry{u.utterance_id, "features/" + u.utterance_id + ext, std::nullopt};
    if (dataset.labels) {
      const int id = (*dataset.labels)[i];
      entry.label = static_cast<std::size_t>(id) < dataset.label_names.size()
                        ? dataset.label_names[static_cast<std::size_t>(id)]
                        : std::to_string(id);
    }
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

std::filesystem::path SaveDataset(const std::filesystem::path &dir, const Dataset &dataset,
                                  MatrixFormat format) {
  const DatasetManifest manifest = ManifestFor(dataset, format);
  for (std::size_t i = 0; i < dataset.Size(); ++i)
    SaveMatrix(dir / manifest.entries[i].path, dataset.utterances[i].frames, format);
  const auto manifest_path = dir / "manifest.json";
  WriteManifest(manifest_path, manifest);
  return manifest_path;
}

}  // namespace mbnspk
