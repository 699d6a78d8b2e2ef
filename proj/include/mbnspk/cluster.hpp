// mbnspk/cluster.hpp

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

#ifndef MBNSPK_CLUSTER_HPP_
#define MBNSPK_CLUSTER_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mbnspk/common.hpp"

namespace mbnspk {

struct ClusterAssignment {
  std::vector<int> labels;
  std::size_t num_clusters = 0;       // c requested / produced
  std::optional<double> objective;    // k-means within-cluster sum of squares
  std::vector<double> objective_trace;  // best restart, one value per Lloyd iteration
  std::vector<double> restart_objectives;

  std::size_t OccupiedClusters() const;
};

struct KMeansConfig {
  std::size_t num_clusters = 2;  // c
  std::size_t restarts = 10;
  std::size_t max_iters = 300;
  double tol = 1e-10;
  std::uint64_t seed = 0;

  void Validate() const;
};

/// Lloyd iterations from k-means++ seeding, best of `restarts` by
/// (objective, restart index). Empty clusters are re-seeded to the point
/// farthest from its center. Throws ValidationError if c > n.
ClusterAssignment KMeans(const Matrix &points, const KMeansConfig &config);

/// Within-cluster sum of squares of a labelling around its cluster means.
double WithinClusterSumOfSquares(const Matrix &points, std::span<const int> labels);

struct AgglomerativeStop {
  std::optional<std::size_t> num_clusters;
  std::optional<double> distance_threshold;  // merge while distance <= threshold
};

struct Merge {
  std::size_t a;  // surviving slot (smallest member index of the union)
  std::size_t b;
  double distance;
  std::size_t size;
};

struct Dendrogram {
  std::vector<Merge> merges;
  ClusterAssignment assignment;
};

/// Average-linkage bottom-up merging on Euclidean distance. Clusters are
/// identified by their smallest member index; ties go to the smallest
/// (a, b) pair. Labels are numbered by first appearance.
Dendrogram Agglomerative(const Matrix &points, const AgglomerativeStop &stop);

/// I(A;B) / sqrt(H(A) H(B)) with natural logs. 1 when both labelings are a
/// single cluster, 0 when exactly one is.
double Nmi(std::span<const int> labels_a, std::span<const int> labels_b);

/// CSV "utterance_id,predicted_label" with header.
void WriteAssignmentsCsv(const std::filesystem::path &path, std::span<const std::string> ids,
                         std::span<const int> labels);
void ReadAssignmentsCsv(const std::filesystem::path &path, std::vector<std::string> *ids,
                        std::vector<int> *labels);

}  // namespace mbnspk

#endif  // MBNSPK_CLUSTER_HPP_
