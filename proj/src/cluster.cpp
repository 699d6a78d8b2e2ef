// src/cluster.cpp

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

#include "mbnspk/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "mbnspk/dataset.hpp"
#include "mbnspk/kernels.hpp"
#include "mbnspk/rng.hpp"

namespace mbnspk {

std::size_t ClusterAssignment::OccupiedClusters() const {
  return std::set<int>(labels.begin(), labels.end()).size();
}

void KMeansConfig::Validate() const {
  if (num_clusters == 0) throw ValidationError("kmeans: c must be positive");
  if (restarts == 0) throw ValidationError("kmeans: restarts must be positive");
  if (max_iters == 0) throw ValidationError("kmeans: max_iters must be positive");
  if (!(tol > 0.0)) throw ValidationError("kmeans: tol must be positive");
}

double WithinClusterSumOfSquares(const Matrix &points, std::span<const int> labels) {
  std::map<int, std::pair<Eigen::RowVectorXd, double>> sums;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    auto [it, inserted] = sums.try_emplace(labels[static_cast<std::size_t>(i)],
                                           Eigen::RowVectorXd::Zero(points.cols()), 0.0);
    it->second.first += points.row(i);
    it->second.second += 1.0;
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const auto &[sum, count] = sums.at(labels[static_cast<std::size_t>(i)]);
    total += (points.row(i) - sum / count).squaredNorm();
  }
  return total;
}

namespace {

struct RunResult {
  std::vector<int> labels;
  double objective = 0.0;
  std::vector<double> trace;
};

Matrix SeedPlusPlus(const Matrix &points, std::size_t c, Rng &rng) {
  const auto n = static_cast<std::size_t>(points.rows());
  Matrix centers(static_cast<Eigen::Index>(c), points.cols());
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  centers.row(0) = points.row(static_cast<Eigen::Index>(pick(rng)));
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i)
    d2[i] = (points.row(static_cast<Eigen::Index>(i)) - centers.row(0)).squaredNorm();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t m = 1; m < c; ++m) {
    double total = 0.0;
    for (double d : d2) total += d;
    std::size_t chosen = n - 1;
    if (total > 0.0) {
      double target = unit(rng) * total;
      for (std::size_t i = 0; i < n; ++i) {
        target -= d2[i];
        if (target < 0.0 && d2[i] > 0.0) {
          chosen = i;
          break;
        }
      }
      // Rounding can run past the end; fall back to the last positive weight.
      if (chosen == n - 1 && d2[n - 1] == 0.0)
        for (std::size_t i = n; i-- > 0;)
          if (d2[i] > 0.0) {
            chosen = i;
            break;
          }
    } else {
      chosen = pick(rng);
    }
    centers.row(static_cast<Eigen::Index>(m)) = points.row(static_cast<Eigen::Index>(chosen));
    for (std::size_t i = 0; i < n; ++i)
      d2[i] = std::min(d2[i], (points.row(static_cast<Eigen::Index>(i)) -
                               centers.row(static_cast<Eigen::Index>(m))).squaredNorm());
  }
  return centers;
}

RunResult LloydRun(const Matrix &points, const KMeansConfig &config, Rng &rng) {
  const auto n = static_cast<std::size_t>(points.rows());
  const std::size_t c = config.num_clusters;
  Matrix centers = SeedPlusPlus(points, c, rng);
  std::vector<std::int32_t> labels(n);
  std::vector<double> dist(n);
  RunResult run;
  for (std::size_t it = 0; it < config.max_iters; ++it) {
    run.trace.push_back(kernels::AssignNearest(points, centers, labels, dist));

    std::vector<std::size_t> counts(c, 0);
    for (auto l : labels) ++counts[static_cast<std::size_t>(l)];
    for (std::size_t m = 0; m < c; ++m) {
      if (counts[m] != 0) continue;
      // Farthest point whose own cluster keeps at least one member.
      std::size_t far = n;
      for (std::size_t i = 0; i < n; ++i)
        if (counts[static_cast<std::size_t>(labels[i])] > 1 && (far == n || dist[i] > dist[far]))
          far = i;
      if (far == n) break;
      --counts[static_cast<std::size_t>(labels[far])];
      labels[far] = static_cast<std::int32_t>(m);
      dist[far] = 0.0;
      counts[m] = 1;
    }

    Matrix next = Matrix::Zero(static_cast<Eigen::Index>(c), points.cols());
    for (std::size_t i = 0; i < n; ++i)
      next.row(labels[i]) += points.row(static_cast<Eigen::Index>(i));
    for (std::size_t m = 0; m < c; ++m) {
      if (counts[m] > 0) {
        next.row(static_cast<Eigen::Index>(m)) /= static_cast<double>(counts[m]);
      } else {
        next.row(static_cast<Eigen::Index>(m)) = centers.row(static_cast<Eigen::Index>(m));
      }
    }
    const double movement = (next - centers).rowwise().norm().maxCoeff();
    centers = std::move(next);
    if (movement < config.tol) break;
  }
  run.labels.assign(labels.begin(), labels.end());
  run.objective = WithinClusterSumOfSquares(points, run.labels);
  run.trace.push_back(run.objective);
  return run;
}

}  // namespace

ClusterAssignment KMeans(const Matrix &points, const KMeansConfig &config) {
  config.Validate();
  const auto n = static_cast<std::size_t>(points.rows());
  if (config.num_clusters > n)
    throw ValidationError("kmeans: c = " + std::to_string(config.num_clusters) + " exceeds n = " +
                          std::to_string(n));
  CheckFinite(points, "kmeans input");

  std::vector<RunResult> runs(config.restarts);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t r = 0; r < config.restarts; ++r) {
    Rng rng(StreamSeed(config.seed, {HashName("kmeans-restart"), r}));
    runs[r] = LloydRun(points, config, rng);
  }
  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r)
    if (runs[r].objective < runs[best].objective) best = r;

  ClusterAssignment out;
  out.num_clusters = config.num_clusters;
  out.objective = runs[best].objective;
  out.labels = std::move(runs[best].labels);
  out.objective_trace = std::move(runs[best].trace);
  for (const auto &r : runs) out.restart_objectives.push_back(r.objective);
  if (out.OccupiedClusters() < config.num_clusters)
    Warn("kmeans", std::to_string(config.num_clusters - out.OccupiedClusters()) +
                       " cluster(s) left empty");
  return out;
}

Dendrogram Agglomerative(const Matrix &points, const AgglomerativeStop &stop) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (n < 2) throw ValidationError("agglomerative: need at least 2 points");
  if (!stop.num_clusters && !stop.distance_threshold)
    throw ValidationError("agglomerative: give a cluster count or a distance threshold");
  if (stop.num_clusters && (*stop.num_clusters == 0 || *stop.num_clusters > n))
    throw ValidationError("agglomerative: cluster count must lie in [1, n]");
  CheckFinite(points, "agglomerative input");

  Matrix dist(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < dist.rows(); ++i)
    for (Eigen::Index j = 0; j < dist.cols(); ++j) dist(i, j) = (points.row(i) - points.row(j)).norm();
  std::vector<std::size_t> size(n, 1);
  std::vector<bool> alive(n, true);
  std::vector<std::size_t> slot_of(n);
  for (std::size_t i = 0; i < n; ++i) slot_of[i] = i;

  Dendrogram out;
  std::size_t clusters = n;
  const std::size_t target = stop.num_clusters.value_or(1);
  while (clusters > target) {
    std::size_t ba = 0, bb = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < n; ++a) {
      if (!alive[a]) continue;
      for (std::size_t b = a + 1; b < n; ++b) {
        if (!alive[b]) continue;
        const double d = dist(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
        if (d < best) {
          best = d;
          ba = a;
          bb = b;
        }
      }
    }
    if (stop.distance_threshold && best > *stop.distance_threshold) break;
    // Lance-Williams update for average linkage.
    const double wa = static_cast<double>(size[ba]);
    const double wb = static_cast<double>(size[bb]);
    for (std::size_t k = 0; k < n; ++k) {
      if (!alive[k] || k == ba || k == bb) continue;
      const auto ka = static_cast<Eigen::Index>(k);
      const double d = (wa * dist(static_cast<Eigen::Index>(ba), ka) +
                        wb * dist(static_cast<Eigen::Index>(bb), ka)) / (wa + wb);
      dist(static_cast<Eigen::Index>(ba), ka) = d;
      dist(ka, static_cast<Eigen::Index>(ba)) = d;
    }
    size[ba] += size[bb];
    alive[bb] = false;
    for (auto &s : slot_of)
      if (s == bb) s = ba;
    out.merges.push_back({ba, bb, best, size[ba]});
    --clusters;
  }
  if (clusters == 1 && n > 1) Warn("agglomerative", "all points merged into a single cluster");

  std::map<std::size_t, int> relabel;
  out.assignment.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, inserted] = relabel.try_emplace(slot_of[i], static_cast<int>(relabel.size()));
    out.assignment.labels[i] = it->second;
  }
  out.assignment.num_clusters = clusters;
  return out;
}

double Nmi(std::span<const int> labels_a, std::span<const int> labels_b) {
  if (labels_a.size() != labels_b.size())
    throw ValidationError("nmi: labelings have lengths " + std::to_string(labels_a.size()) +
                          " and " + std::to_string(labels_b.size()));
  if (labels_a.empty()) throw ValidationError("nmi: empty labelings");
  const double n = static_cast<double>(labels_a.size());
  std::map<int, double> ca, cb;
  std::map<std::pair<int, int>, double> joint;
  for (std::size_t i = 0; i < labels_a.size(); ++i) {
    ca[labels_a[i]] += 1.0;
    cb[labels_b[i]] += 1.0;
    joint[{labels_a[i], labels_b[i]}] += 1.0;
  }
  auto entropy = [n](const std::map<int, double> &counts) {
    double h = 0.0;
    for (const auto &[label, c] : counts) h -= (c / n) * std::log(c / n);
    return h;
  };
  const double ha = entropy(ca);
  const double hb = entropy(cb);
  const bool single_a = ca.size() == 1;
  const bool single_b = cb.size() == 1;
  if (single_a && single_b) return 1.0;
  if (single_a || single_b) return 0.0;
  double mi = 0.0;
  for (const auto &[key, c] : joint)
    mi += (c / n) * std::log(c * n / (ca.at(key.first) * cb.at(key.second)));
  return std::clamp(mi / std::sqrt(ha * hb), 0.0, 1.0);
}

void WriteAssignmentsCsv(const std::filesystem::path &path, std::span<const std::string> ids,
                         std::span<const int> labels) {
  if (ids.size() != labels.size())
    throw ValidationError("assignments: " + std::to_string(ids.size()) + " ids for " +
                          std::to_string(labels.size()) + " labels");
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw RuntimeFailure("cannot write " + path.string());
  os << "utterance_id,predicted_label\n";
  for (std::size_t i = 0; i < ids.size(); ++i) os << ids[i] << ',' << labels[i] << '\n';
}

void ReadAssignmentsCsv(const std::filesystem::path &path, std::vector<std::string> *ids,
                        std::vector<int> *labels) {
  std::ifstream is(path);
  if (!is) throw ValidationError("assignments file not found: " + path.string());
  ids->clear();
  labels->clear();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (line_no == 1 && line.rfind("utterance_id", 0) == 0)) continue;
    const auto comma = line.rfind(',');
    if (comma == std::string::npos)
      throw ValidationError(path.string() + ": malformed row " + std::to_string(line_no));
    ids->push_back(line.substr(0, comma));
    try {
      labels->push_back(std::stoi(line.substr(comma + 1)));
    } catch (const std::exception &) {
      throw ValidationError(path.string() + ": bad label on row " + std::to_string(line_no));
    }
  }
}

}  // namespace mbnspk
