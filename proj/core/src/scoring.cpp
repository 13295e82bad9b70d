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

#include "translad/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <Eigen/Dense>
#include <opencv2/imgproc.hpp>

#include "translad/kv.hpp"

namespace fs = std::filesystem;

namespace translad::scoring {

AnomalyMap anomaly_map(const Image& output, const Image& target, Branch branch) {
  if (!output.same_shape(target)) throw Error("anomaly_map: output and target shapes differ");
  if (branch == Branch::motion && output.channels != 1) throw Error("anomaly_map: motion maps have one channel");
  AnomalyMap map{Image(output.height, output.width, 1), branch, false};
  const int k = output.channels;
  for (std::size_t p = 0; p < map.values.data.size(); ++p) {
    double sum = 0.0;
    for (int c = 0; c < k; ++c) {
      const double d = static_cast<double>(output.data[p * k + c]) - target.data[p * k + c];
      sum += d * d;
    }
    map.values.data[p] = static_cast<float>(sum / k);
  }
  return map;
}

AnomalyMap refine(const AnomalyMap& map, int kernel_size, int iterations) {
  if (kernel_size < 1 || kernel_size % 2 == 0) throw Error("refine: kernel size must be odd and >= 1");
  if (iterations < 0) throw Error("refine: iterations must be >= 0");
  if (map.values.channels != 1) throw Error("refine: anomaly maps have one channel");
  const cv::Mat kernel = cv::getStructuringElement(cv::MORPH_RECT, cv::Size(kernel_size, kernel_size));
  cv::Mat work = to_mat(map.values);
  for (int i = 0; i < iterations; ++i) cv::erode(work, work, kernel, cv::Point(-1, -1), 1, cv::BORDER_REPLICATE);
  for (int i = 0; i < iterations; ++i) cv::dilate(work, work, kernel, cv::Point(-1, -1), 1, cv::BORDER_REPLICATE);
  return AnomalyMap{from_mat(work), map.branch, true};
}

double frame_score(const AnomalyMap& map) {
  if (map.values.data.empty()) return 0.0;
  double sum = 0.0;
  for (float v : map.values.data) sum += v;
  return sum / static_cast<double>(map.values.data.size());
}

std::vector<double> savgol_weights(int window, int polyorder, int position) {
  if (window < 1 || window % 2 == 0) throw Error("Savitzky-Golay window must be odd and >= 1");
  if (polyorder < 0) throw Error("Savitzky-Golay polyorder must be >= 0");
  if (polyorder >= window) throw Error("Savitzky-Golay polyorder must be smaller than the window");
  if (position < 0 || position >= window) throw Error("Savitzky-Golay position outside the window");
  const int half = window / 2;
  const double scale = std::max(half, 1);
  Eigen::MatrixXd vander(window, polyorder + 1);
  for (int j = 0; j < window; ++j) {
    const double t = (j - half) / scale;
    double power = 1.0;
    for (int k = 0; k <= polyorder; ++k) {
      vander(j, k) = power;
      power *= t;
    }
  }
  Eigen::VectorXd at(polyorder + 1);
  const double t = (position - half) / scale;
  double power = 1.0;
  for (int k = 0; k <= polyorder; ++k) {
    at(k) = power;
    power *= t;
  }
  const Eigen::MatrixXd gram = vander.transpose() * vander;
  const Eigen::VectorXd solved = gram.ldlt().solve(at);
  const Eigen::VectorXd weights = vander * solved;
  return {weights.data(), weights.data() + weights.size()};
}

ScoreSeries smooth_scores(const ScoreSeries& series, int window, int polyorder) {
  if (window < 1 || window % 2 == 0) throw Error("Savitzky-Golay window must be odd and >= 1");
  if (polyorder < 0 || polyorder >= window) throw Error("Savitzky-Golay polyorder must be in [0, window)");
  ScoreSeries out{series.clip_id, series.scores, Stage::smoothed};
  const int n = static_cast<int>(series.scores.size());
  int w = window;
  if (n < w) w = n % 2 == 1 ? n : n - 1;
  // A fit with as many coefficients as samples reproduces the data.
  if (w <= polyorder || w < 1) return out;
  const int half = w / 2;
  std::map<int, std::vector<double>> weights;
  for (int i = 0; i < n; ++i) {
    int start = i - half;
    int position = half;
    if (i < half) {
      start = 0;
      position = i;
    } else if (i >= n - half) {
      start = n - w;
      position = i - start;
    }
    auto it = weights.find(position);
    if (it == weights.end()) it = weights.emplace(position, savgol_weights(w, polyorder, position)).first;
    double acc = 0.0;
    for (int j = 0; j < w; ++j) acc += it->second[static_cast<std::size_t>(j)] * series.scores[static_cast<std::size_t>(start + j)];
    out.scores[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

BranchStats BranchStats::of(const std::vector<double>& training_scores) {
  if (training_scores.empty()) throw Error("calibration needs at least one training score");
  double mean = 0.0;
  for (double s : training_scores) mean += s;
  mean /= static_cast<double>(training_scores.size());
  double var = 0.0;
  for (double s : training_scores) var += (s - mean) * (s - mean);
  var /= static_cast<double>(training_scores.size());
  return BranchStats{mean, std::sqrt(var)};
}

ScoreSeries fuse(const ScoreSeries& appearance, const ScoreSeries& motion, const BranchCalibration& calib) {
  if (appearance.scores.size() != motion.scores.size()) throw Error("fuse: branch series lengths differ");
  auto check = [](const BranchStats& s, const char* name) {
    if (!(s.stddev > 1e-12) || !std::isfinite(s.stddev)) {
      throw Error(std::string("fuse: ") + name + " calibration has zero variance");
    }
  };
  check(calib.appearance, "appearance");
  check(calib.motion, "motion");
  ScoreSeries out{appearance.clip_id, std::vector<double>(appearance.scores.size()), Stage::fused};
  for (std::size_t i = 0; i < out.scores.size(); ++i) {
    const double za = (appearance.scores[i] - calib.appearance.mean) / calib.appearance.stddev;
    const double zm = (motion.scores[i] - calib.motion.mean) / calib.motion.stddev;
    out.scores[i] = std::max(za, zm);
  }
  return out;
}

Decisions decide(const ScoreSeries& appearance, const ScoreSeries& motion, const Thresholds& thresholds) {
  if (appearance.scores.size() != motion.scores.size()) throw Error("decide: branch series lengths differ");
  Decisions d;
  for (std::size_t i = 0; i < appearance.scores.size(); ++i) {
    const std::uint8_t a = appearance.scores[i] > thresholds.appearance ? 1 : 0;
    const std::uint8_t m = motion.scores[i] > thresholds.motion ? 1 : 0;
    d.appearance.push_back(a);
    d.motion.push_back(m);
    d.anomaly.push_back(a | m);
  }
  return d;
}

namespace {

constexpr const char* kHeader =
    "clip_id,frame_index,app_raw,mot_raw,app_refined,mot_refined,app_smooth,mot_smooth,fused_raw,fused_refined,fused,label";

}  // namespace

std::string ScoreTable::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << kHeader << "\n";
  for (const auto& r : rows) {
    out << r.clip_id << "," << r.frame_index << "," << r.app_raw << "," << r.mot_raw << "," << r.app_refined << ","
        << r.mot_refined << "," << r.app_smooth << "," << r.mot_smooth << "," << r.fused_raw << "," << r.fused_refined
        << "," << r.fused << ",";
    if (r.label) out << *r.label;
    out << "\n";
  }
  return out.str();
}

void ScoreTable::save(const fs::path& path) const {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << to_csv();
}

ScoreTable ScoreTable::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw StageError("no score file at " + path.string() + "; run `score` first");
  std::string line;
  if (!std::getline(in, line)) throw Error("empty score file " + path.string());
  const auto header = split(line, ',');
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header.size(); ++i) column[header[i]] = i;
  for (const char* required : {"clip_id", "frame_index", "app_raw", "mot_raw", "app_smooth", "mot_smooth", "fused"}) {
    if (!column.count(required)) throw Error(path.string() + ": missing column '" + required + "'");
  }
  auto num = [&](const std::vector<std::string>& f, const char* name, int line_no) -> double {
    const auto it = column.find(name);
    if (it == column.end()) return 0.0;
    if (it->second >= f.size()) throw Error(path.string() + ":" + std::to_string(line_no) + ": too few fields");
    return parse_double(name, f[it->second]);
  };
  ScoreTable table;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split(line, ',');
    if (f.size() < header.size() - (column.count("label") ? 1 : 0)) {
      throw Error(path.string() + ":" + std::to_string(line_no) + ": too few fields");
    }
    ScoreRow r;
    r.clip_id = f[column["clip_id"]];
    r.frame_index = static_cast<int>(parse_int("frame_index", f[column["frame_index"]]));
    r.app_raw = num(f, "app_raw", line_no);
    r.mot_raw = num(f, "mot_raw", line_no);
    r.app_refined = column.count("app_refined") ? num(f, "app_refined", line_no) : r.app_raw;
    r.mot_refined = column.count("mot_refined") ? num(f, "mot_refined", line_no) : r.mot_raw;
    r.app_smooth = num(f, "app_smooth", line_no);
    r.mot_smooth = num(f, "mot_smooth", line_no);
    r.fused = num(f, "fused", line_no);
    r.fused_raw = column.count("fused_raw") ? num(f, "fused_raw", line_no) : r.fused;
    r.fused_refined = column.count("fused_refined") ? num(f, "fused_refined", line_no) : r.fused;
    if (column.count("label") && column["label"] < f.size() && !f[column["label"]].empty()) {
      r.label = static_cast<int>(parse_int("label", f[column["label"]]));
    }
    table.rows.push_back(std::move(r));
  }
  return table;
}

}  // namespace translad::scoring
