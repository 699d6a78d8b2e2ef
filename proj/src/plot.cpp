// src/plot.cpp

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

#include "mbnspk/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <tuple>

#include "mbnspk/pipeline.hpp"

namespace mbnspk {

PlotKind ParsePlotKind(const std::string &name) {
  if (name == "scatter") return PlotKind::kScatter;
  if (name == "sensitivity") return PlotKind::kSensitivity;
  if (name == "depth") return PlotKind::kDepth;
  throw ValidationError("unknown plot kind '" + name + "' (expected scatter, sensitivity or depth)");
}

namespace {

constexpr double kWidth = 640, kHeight = 480, kMargin = 60;

std::string Color(std::size_t i) {
  static const char *kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                   "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  if (i < 10) return kPalette[i];
  // Golden-angle hues beyond the base palette.
  char buf[32];
  std::snprintf(buf, sizeof(buf), "hsl(%d,65%%,45%%)", static_cast<int>(std::fmod(i * 137.508, 360.0)));
  return buf;
}

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string Escape(const std::string &s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string SvgOpen(const std::string &title) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + Num(kWidth) + "\" height=\"" +
         Num(kHeight) + "\" font-family=\"sans-serif\" font-size=\"11\">\n"
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
         "<text x=\"" + Num(kWidth / 2) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" +
         Escape(title) + "</text>\n"
         "<rect x=\"" + Num(kMargin) + "\" y=\"" + Num(kMargin) + "\" width=\"" +
         Num(kWidth - 2 * kMargin) + "\" height=\"" + Num(kHeight - 2 * kMargin) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
}

std::string Legend(const std::vector<std::string> &names) {
  std::string s;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const double y = kMargin + 12 + 14 * i;
    s += "<rect x=\"" + Num(kWidth - kMargin + 6) + "\" y=\"" + Num(y - 8) +
         "\" width=\"8\" height=\"8\" fill=\"" + Color(i) + "\"/>\n";
    s += "<text x=\"" + Num(kWidth - kMargin + 18) + "\" y=\"" + Num(y) + "\">" +
         Escape(names[i]) + "</text>\n";
  }
  return s;
}

struct Series {
  std::string name;
  std::vector<std::pair<std::size_t, double>> points;  // (x index, y)
};

// Line chart over categorical x positions; y in [0, 1].
std::string LineChart(const std::string &title, const std::string &x_title,
                      const std::vector<std::string> &x_labels, const std::vector<Series> &series) {
  const double plot_w = kWidth - 2 * kMargin, plot_h = kHeight - 2 * kMargin;
  auto px = [&](std::size_t i) {
    return kMargin + (x_labels.size() == 1 ? plot_w / 2 : plot_w * i / (x_labels.size() - 1.0));
  };
  auto py = [&](double y) { return kHeight - kMargin - plot_h * std::clamp(y, 0.0, 1.0); };
  std::string s = SvgOpen(title);
  for (int t = 0; t <= 5; ++t) {
    const double y = t / 5.0;
    s += "<text x=\"" + Num(kMargin - 6) + "\" y=\"" + Num(py(y) + 4) +
         "\" text-anchor=\"end\">" + Num(y) + "</text>\n";
  }
  for (std::size_t i = 0; i < x_labels.size(); ++i)
    s += "<text x=\"" + Num(px(i)) + "\" y=\"" + Num(kHeight - kMargin + 16) +
         "\" text-anchor=\"middle\">" + Escape(x_labels[i]) + "</text>\n";
  s += "<text x=\"" + Num(kWidth / 2) + "\" y=\"" + Num(kHeight - 16) +
       "\" text-anchor=\"middle\">" + Escape(x_title) + "</text>\n";
  s += "<text x=\"16\" y=\"" + Num(kHeight / 2) + "\" transform=\"rotate(-90 16 " +
       Num(kHeight / 2) + ")\" text-anchor=\"middle\">NMI</text>\n";
  std::vector<std::string> names;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto &ser = series[k];
    names.push_back(ser.name);
    std::string pts;
    for (const auto &[xi, y] : ser.points) {
      pts += Num(px(xi)) + "," + Num(py(y)) + " ";
      s += "<circle cx=\"" + Num(px(xi)) + "\" cy=\"" + Num(py(y)) + "\" r=\"3\" fill=\"" +
           Color(k) + "\"/>\n";
    }
    s += "<polyline fill=\"none\" stroke=\"" + Color(k) + "\" stroke-width=\"1.5\" points=\"" +
         pts + "\"/>\n";
  }
  s += Legend(names);
  s += "</svg>\n";
  return s;
}

std::string Fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Drops truncated-depth rows: keeps rows without depth and rows at the
// deepest layer of their (method, seed, mixtures, em_iters) cell.
std::vector<SweepRow> FullDepthRows(const std::vector<SweepRow> &rows) {
  std::map<std::tuple<int, std::uint64_t, std::size_t, std::size_t>, std::size_t> deepest;
  for (const auto &r : rows) {
    if (!r.depth) continue;
    auto &d = deepest[{static_cast<int>(r.method), r.seed, r.mixtures, r.em_iters}];
    d = std::max(d, *r.depth);
  }
  std::vector<SweepRow> out;
  for (const auto &r : rows) {
    if (!r.depth || *r.depth == deepest.at({static_cast<int>(r.method), r.seed, r.mixtures, r.em_iters}))
      out.push_back(r);
  }
  return out;
}

}  // namespace

void WriteScatterPlot(const std::filesystem::path &prefix, const Matrix &embedding,
                      const std::vector<std::string> &ids,
                      const std::optional<std::vector<std::string>> &labels) {
  if (embedding.cols() < 2)
    throw ValidationError("scatter plot needs an embedding with at least 2 dimensions, got " +
                          std::to_string(embedding.cols()));
  if (static_cast<std::size_t>(embedding.rows()) != ids.size() ||
      (labels && labels->size() != ids.size()))
    throw ValidationError("scatter plot: embedding, ids and labels differ in length");
  if (ids.empty()) throw ValidationError("scatter plot: empty embedding");

  std::vector<std::string> names;
  std::map<std::string, std::size_t> color_of;
  if (labels) {
    for (const auto &l : *labels)
      if (color_of.emplace(l, names.size()).second) names.push_back(l);
  }
  std::string csv = "utterance_id,dim1,dim2,true_label\n";
  for (std::size_t i = 0; i < ids.size(); ++i)
    csv += ids[i] + ',' + Fmt(embedding(i, 0)) + ',' + Fmt(embedding(i, 1)) + ',' +
           (labels ? (*labels)[i] : std::string()) + '\n';

  const double x0 = embedding.col(0).minCoeff(), x1 = embedding.col(0).maxCoeff();
  const double y0 = embedding.col(1).minCoeff(), y1 = embedding.col(1).maxCoeff();
  const double plot_w = kWidth - 2 * kMargin, plot_h = kHeight - 2 * kMargin;
  auto px = [&](double x) { return kMargin + 10 + (plot_w - 20) * (x1 > x0 ? (x - x0) / (x1 - x0) : 0.5); };
  auto py = [&](double y) {
    return kHeight - kMargin - 10 - (plot_h - 20) * (y1 > y0 ? (y - y0) / (y1 - y0) : 0.5);
  };
  std::string svg = SvgOpen("2-D embedding");
  for (std::size_t i = 0; i < ids.size(); ++i)
    svg += "<circle cx=\"" + Num(px(embedding(i, 0))) + "\" cy=\"" + Num(py(embedding(i, 1))) +
           "\" r=\"3\" fill=\"" + (labels ? Color(color_of.at((*labels)[i])) : Color(0)) +
           "\"><title>" + Escape(ids[i]) + "</title></circle>\n";
  svg += Legend(names);
  svg += "</svg>\n";

  WriteTextFile(prefix.string() + ".csv", csv);
  WriteTextFile(prefix.string() + ".svg", svg);
}

void WriteResultsPlot(const std::filesystem::path &prefix, const std::vector<SweepRow> &all_rows,
                      PlotKind kind) {
  if (kind == PlotKind::kScatter)
    throw ValidationError("scatter plots are drawn from an embedding, not a results table");
  std::vector<SweepRow> rows;
  for (const auto &r : all_rows)
    if (r.nmi) rows.push_back(r);
  if (rows.empty()) throw ValidationError("results table has no completed cells");

  std::string csv;
  std::vector<std::string> x_labels;
  std::vector<Series> series;
  if (kind == PlotKind::kSensitivity) {
    rows = FullDepthRows(rows);
    csv = "method,mixtures,em_iters,output_dim,seed,nmi\n";
    for (const auto &r : rows)
      csv += MethodName(r.method) + ',' + std::to_string(r.mixtures) + ',' +
             std::to_string(r.em_iters) + ',' + (r.output_dim ? std::to_string(*r.output_dim) : "") +
             ',' + std::to_string(r.seed) + ',' + Fmt(*r.nmi) + '\n';
    std::set<std::size_t> mixtures;
    for (const auto &r : rows) mixtures.insert(r.mixtures);
    const std::vector<std::size_t> xs(mixtures.begin(), mixtures.end());
    for (auto m : xs) x_labels.push_back(std::to_string(m));
    std::map<std::pair<int, std::size_t>, std::size_t> index;
    auto medians = MedianOverSeeds(BestOverDims(rows));
    std::stable_sort(medians.begin(), medians.end(),
                     [](const SweepRow &a, const SweepRow &b) { return a.mixtures < b.mixtures; });
    for (const auto &r : medians) {
      const auto key = std::make_pair(static_cast<int>(r.method), r.em_iters);
      if (!index.count(key)) {
        index[key] = series.size();
        series.push_back({MethodName(r.method) + " em=" + std::to_string(r.em_iters), {}});
      }
      const std::size_t xi = std::lower_bound(xs.begin(), xs.end(), r.mixtures) - xs.begin();
      series[index[key]].points.emplace_back(xi, *r.nmi);
    }
  } else {
    std::vector<SweepRow> with_depth;
    for (const auto &r : rows)
      if (r.depth) with_depth.push_back(r);
    if (with_depth.empty()) throw ValidationError("results table has no depth rows");
    const auto best = BestOverDims(with_depth);
    csv = "method,mixtures,em_iters,depth,seed,nmi\n";
    for (const auto &r : best)
      csv += MethodName(r.method) + ',' + std::to_string(r.mixtures) + ',' +
             std::to_string(r.em_iters) + ',' + std::to_string(*r.depth) + ',' +
             std::to_string(r.seed) + ',' + Fmt(*r.nmi) + '\n';
    std::set<std::size_t> depths;
    for (const auto &r : best) depths.insert(*r.depth);
    const std::vector<std::size_t> xs(depths.begin(), depths.end());
    for (auto d : xs) x_labels.push_back(std::to_string(d));
    std::map<std::tuple<int, std::size_t, std::size_t>, std::size_t> index;
    auto medians = MedianOverSeeds(best);
    std::stable_sort(medians.begin(), medians.end(),
                     [](const SweepRow &a, const SweepRow &b) { return *a.depth < *b.depth; });
    for (const auto &r : medians) {
      const auto key = std::make_tuple(static_cast<int>(r.method), r.mixtures, r.em_iters);
      if (!index.count(key)) {
        index[key] = series.size();
        series.push_back({MethodName(r.method) + " C=" + std::to_string(r.mixtures) +
                              " em=" + std::to_string(r.em_iters),
                          {}});
      }
      const std::size_t xi = std::lower_bound(xs.begin(), xs.end(), *r.depth) - xs.begin();
      series[index[key]].points.emplace_back(xi, *r.nmi);
    }
  }
  const std::string svg =
      kind == PlotKind::kSensitivity
          ? LineChart("Median best-over-dims NMI", "UBM mixtures", x_labels, series)
          : LineChart("Median NMI by depth", "hidden layers", x_labels, series);
  WriteTextFile(prefix.string() + ".csv", csv);
  WriteTextFile(prefix.string() + ".svg", svg);
}

}  // namespace mbnspk
