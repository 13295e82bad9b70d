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
#include <optional>
#include <string>
#include <vector>

#include "translad/image.hpp"
#include "translad/target_cache.hpp"

namespace translad::scoring {

struct AnomalyMap {
  Image values;  // H x W x 1, nonnegative
  Branch branch = Branch::appearance;
  bool refined = false;
};

enum class Stage { raw, refined, smoothed, fused };

struct ScoreSeries {
  std::string clip_id;
  std::vector<double> scores;
  Stage stage = Stage::raw;
};

// Squared difference per pixel; appearance maps average over channels.
AnomalyMap anomaly_map(const Image& output, const Image& target, Branch branch);

// Grayscale opening: `iterations` erosions (min filter) then as many dilations (max filter)
// with a square kernel, replicating edge pixels.
AnomalyMap refine(const AnomalyMap& map, int kernel_size = 3, int iterations = 1);

// Mean of the map.
double frame_score(const AnomalyMap& map);

// Least-squares weights for evaluating a degree-`polyorder` fit over `window` samples at
// `position` (0-based within the window).
std::vector<double> savgol_weights(int window, int polyorder, int position);

// Per-clip Savitzky-Golay smoothing. Edge samples use the fit over the first/last full window.
// Series shorter than `window` use the largest odd window that fits.
ScoreSeries smooth_scores(const ScoreSeries& series, int window = 41, int polyorder = 1);

struct BranchStats {
  double mean = 0.0;
  double stddev = 0.0;

  static BranchStats of(const std::vector<double>& training_scores);
};

struct BranchCalibration {
  BranchStats appearance;
  BranchStats motion;
};

// Per-frame max of the two branches' z-scores.
ScoreSeries fuse(const ScoreSeries& appearance, const ScoreSeries& motion, const BranchCalibration& calib);

struct Thresholds {
  double appearance = 0.0;
  double motion = 0.0;
};

struct Decisions {
  std::vector<std::uint8_t> appearance;
  std::vector<std::uint8_t> motion;
  std::vector<std::uint8_t> anomaly;  // appearance OR motion
};

// A frame is flagged by a branch iff its score is strictly above that branch's threshold.
Decisions decide(const ScoreSeries& appearance, const ScoreSeries& motion, const Thresholds& thresholds);

// One row of the per-run score CSV.
struct ScoreRow {
  std::string clip_id;
  int frame_index = 0;
  double app_raw = 0, mot_raw = 0;
  double app_refined = 0, mot_refined = 0;
  double app_smooth = 0, mot_smooth = 0;
  double fused_raw = 0, fused_refined = 0, fused = 0;
  std::optional<int> label;
};

// clip_id,frame_index,app_raw,mot_raw,app_refined,mot_refined,app_smooth,mot_smooth,
// fused_raw,fused_refined,fused,label
struct ScoreTable {
  std::vector<ScoreRow> rows;

  static ScoreTable load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
  [[nodiscard]] std::string to_csv() const;
};

}  // namespace translad::scoring
