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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "translad/data_model.hpp"
#include "translad/scoring.hpp"

namespace translad::eval {

struct RocCurve {
  std::vector<double> thresholds;  // descending; first is +inf
  std::vector<double> tpr;
  std::vector<double> fpr;
  double auc = 0.0;
};

// Frame-level ROC over all distinct thresholds; tied scores move together (trapezoid across the tie).
RocCurve roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

using LabelSet = std::map<std::string, std::vector<std::uint8_t>>;

LabelSet labels_of(const Corpus& corpus);
// Reads <root>/test/<clip_id>.labels for every test clip directory.
LabelSet load_test_labels(const std::filesystem::path& root);

struct EvalOptions {
  bool per_clip_normalize = false;  // min-max normalize every clip's scores first
  bool macro = false;               // mean of per-clip AUCs instead of pooled frames
  std::set<std::string> clips;      // restrict to these clips when non-empty
};

struct Report {
  // Keys "<app|mot|fused>.<raw|refined|smoothed>".
  std::map<std::string, double> auc;
  std::size_t frames = 0;
  std::size_t anomalous_frames = 0;
  EvalOptions options;
};

// Reference frame-level AUCs (percent) of the original full-scale experiments.
struct ReferenceRow {
  const char* dataset;
  double auc;
};
inline constexpr ReferenceRow kReferenceAuc[] = {{"ShanghaiTech", 86.18}, {"UCSD-Ped2", 97.76}, {"UCSD-Ped1", 88.61}};

Report evaluate_run(const scoring::ScoreTable& table, const LabelSet& labels, const EvalOptions& options = {});

std::string format_report(const Report& report);
void write_report(const Report& report, const std::filesystem::path& path);

}  // namespace translad::eval
