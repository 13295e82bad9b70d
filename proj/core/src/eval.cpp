/* Copyright 2026 The TransLAD Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "translad/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "translad/error.hpp"

namespace fs = std::filesystem;

namespace translad::eval {

RocCurve roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) throw Error("roc_auc: scores and labels differ in length");
  std::size_t positives = 0;
  for (auto l : labels) positives += l ? 1 : 0;
  const std::size_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0) throw Error("AUC undefined: labels contain a single class");
  for (double s : scores) {
    if (std::isnan(s)) throw Error("roc_auc: NaN score");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.thresholds.push_back(std::numeric_limits<double>::infinity());
  curve.tpr.push_back(0.0);
  curve.fpr.push_back(0.0);
  std::size_t tp = 0, fp = 0;
  double area = 0.0;  // in units of (tp * fp) counts
  for (std::size_t i = 0; i < order.size();) {
    const double threshold = scores[order[i]];
    const std::size_t tp_before = tp, fp_before = fp;
    for (; i < order.size() && scores[order[i]] == threshold; ++i) {
      if (labels[order[i]]) {
        ++tp;
      } else {
        ++fp;
      }
    }
    area += static_cast<double>(fp - fp_before) * static_cast<double>(tp + tp_before) / 2.0;
    curve.thresholds.push_back(threshold);
    curve.tpr.push_back(static_cast<double>(tp) / static_cast<double>(positives));
    curve.fpr.push_back(static_cast<double>(fp) / static_cast<double>(negatives));
  }
  curve.auc = area / (static_cast<double>(positives) * static_cast<double>(negatives));
  return curve;
}

LabelSet labels_of(const Corpus& corpus) {
  LabelSet set;
  for (const auto& clip : corpus.test_clips) {
    if (clip.labels) set[clip.clip_id] = *clip.labels;
  }
  return set;
}

LabelSet load_test_labels(const fs::path& root) {
  LabelSet set;
  const fs::path test_dir = root / "test";
  if (!fs::is_directory(test_dir)) throw Error("corpus " + root.string() + ": missing split directory 'test'");
  for (const auto& entry : fs::directory_iterator(test_dir)) {
    if (!entry.is_directory()) continue;
    const std::string id = entry.path().filename().string();
    const fs::path p = test_dir / (id + ".labels");
    if (fs::exists(p)) set[id] = read_labels(p);
  }
  return set;
}

namespace {

using Column = double scoring::ScoreRow::*;

struct Variant {
  const char* key;
  Column column;
};

constexpr Variant kVariants[] = {
    {"app.raw", &scoring::ScoreRow::app_raw},         {"app.refined", &scoring::ScoreRow::app_refined},
    {"app.smoothed", &scoring::ScoreRow::app_smooth}, {"mot.raw", &scoring::ScoreRow::mot_raw},
    {"mot.refined", &scoring::ScoreRow::mot_refined}, {"mot.smoothed", &scoring::ScoreRow::mot_smooth},
    {"fused.raw", &scoring::ScoreRow::fused_raw},     {"fused.refined", &scoring::ScoreRow::fused_refined},
    {"fused.smoothed", &scoring::ScoreRow::fused},
};

void min_max_normalize(std::vector<double>& v) {
  if (v.empty()) return;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double a = *lo, span = *hi - *lo;
  for (double& x : v) x = span > 0 ? (x - a) / span : 0.0;
}

}  // namespace

Report evaluate_run(const scoring::ScoreTable& table, const LabelSet& labels, const EvalOptions& options) {
  // Group rows by clip, keyed by frame index.
  std::map<std::string, std::map<int, const scoring::ScoreRow*>> by_clip;
  for (const auto& row : table.rows) {
    if (!options.clips.empty() && !options.clips.count(row.clip_id)) continue;
    by_clip[row.clip_id][row.frame_index] = &row;
  }

  std::vector<std::string> missing;
  std::vector<std::string> clip_ids;
  for (const auto& [clip_id, clip_labels] : labels) {
    if (!options.clips.empty() && !options.clips.count(clip_id)) continue;
    clip_ids.push_back(clip_id);
    const auto it = by_clip.find(clip_id);
    for (std::size_t i = 0; i < clip_labels.size(); ++i) {
      if (it == by_clip.end() || !it->second.count(static_cast<int>(i))) {
        missing.push_back(clip_id + "/" + frame_stem(static_cast<int>(i)));
      }
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (std::size_t i = 0; i < std::min<std::size_t>(missing.size(), 10); ++i) list += (i ? ", " : "") + missing[i];
    if (missing.size() > 10) list += ", ...";
    throw Error("score file is missing " + std::to_string(missing.size()) + " labeled frames: " + list);
  }
  if (clip_ids.empty()) throw Error("no labeled test clips to evaluate");

  Report report;
  report.options = options;
  for (const auto& id : clip_ids) {
    for (auto l : labels.at(id)) {
      ++report.frames;
      report.anomalous_frames += l ? 1 : 0;
    }
  }

  for (const auto& variant : kVariants) {
    std::vector<double> pooled_scores;
    std::vector<std::uint8_t> pooled_labels;
    double macro_sum = 0.0;
    int macro_count = 0;
    for (const auto& id : clip_ids) {
      const auto& clip_labels = labels.at(id);
      const auto& rows = by_clip.at(id);
      std::vector<double> s;
      for (std::size_t i = 0; i < clip_labels.size(); ++i) s.push_back(rows.at(static_cast<int>(i))->*variant.column);
      if (options.per_clip_normalize) min_max_normalize(s);
      if (options.macro) {
        const auto positives = std::count(clip_labels.begin(), clip_labels.end(), 1);
        if (positives == 0 || positives == static_cast<long>(clip_labels.size())) continue;
        macro_sum += roc_auc(s, clip_labels).auc;
        ++macro_count;
      } else {
        pooled_scores.insert(pooled_scores.end(), s.begin(), s.end());
        pooled_labels.insert(pooled_labels.end(), clip_labels.begin(), clip_labels.end());
      }
    }
    if (options.macro) {
      if (macro_count == 0) throw Error("AUC undefined: no clip contains both normal and anomalous frames");
      report.auc[variant.key] = macro_sum / macro_count;
    } else {
      report.auc[variant.key] = roc_auc(pooled_scores, pooled_labels).auc;
    }
  }
  return report;
}

std::string format_report(const Report& report) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(4);
  out << "frame-level AUC (" << (report.options.macro ? "per-clip mean" : "pooled frames")
      << (report.options.per_clip_normalize ? ", per-clip normalized" : "") << "), " << report.frames << " frames, "
      << report.anomalous_frames << " anomalous\n\n";
  out << "branch      raw       refined   smoothed\n";
  for (const char* branch : {"app", "mot", "fused"}) {
    out << branch << std::string(12 - std::string(branch).size(), ' ');
    for (const char* stage : {"raw", "refined", "smoothed"}) {
      out << report.auc.at(std::string(branch) + "." + stage) << "    ";
    }
    out << "\n";
  }
  out.precision(2);
  out << "\nreference (full-scale corpora):";
  for (const auto& ref : kReferenceAuc) out << " " << ref.dataset << " " << ref.auc;
  out << "\n";
  return out.str();
}

void write_report(const Report& report, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.precision(17);
  out << "frames = " << report.frames << "\n";
  out << "anomalous_frames = " << report.anomalous_frames << "\n";
  out << "mode = " << (report.options.macro ? "macro" : "micro") << "\n";
  out << "per_clip_normalize = " << (report.options.per_clip_normalize ? "true" : "false") << "\n";
  for (const auto& [key, value] : report.auc) out << "auc." << key << " = " << value << "\n";
  for (const auto& ref : kReferenceAuc) out << "reference." << ref.dataset << " = " << ref.auc << "\n";
}

}  // namespace translad::eval
