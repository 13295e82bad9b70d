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
#include <string>
#include <vector>

#include "translad/kv.hpp"
#include "translad/targets.hpp"

namespace translad::synth {

enum class Shape { circle, square, triangle };
enum class Trajectory { linear, bounce };
enum class AnomalyKind { unseen_class, over_speed };

const char* to_string(Shape shape);
const char* to_string(AnomalyKind kind);
Shape parse_shape(const std::string& text);

// Template for a population of normal actors present in every clip.
struct ActorSpec {
  Shape shape = Shape::circle;
  double size = 28.0;   // circle diameter, square side, triangle side
  double speed = 2.0;   // px per frame
  int count = 1;
  Trajectory trajectory = Trajectory::bounce;
};

// An abnormal actor added to one test clip for frames [start, start + length).
struct AnomalyInjection {
  AnomalyKind kind = AnomalyKind::unseen_class;
  Shape shape = Shape::square;
  double size = 28.0;
  double speed = 2.0;             // base speed
  double speed_multiplier = 1.0;  // applied for over_speed
  int clip = 0;
  int start = 0;
  int length = 0;
  Trajectory trajectory = Trajectory::bounce;

  [[nodiscard]] double effective_speed() const {
    return kind == AnomalyKind::over_speed ? speed * speed_multiplier : speed;
  }
};

struct SplitShape {
  int clips = 0;
  int frames = 0;
};

struct SceneSpec {
  std::string name = "synthetic";
  int canvas = 224;
  double noise = 0.01;
  std::uint64_t seed = 1;
  bool wrap = false;
  std::vector<std::string> palette{"circle", "square", "triangle"};
  double normal_speed_min = 0.0;
  double normal_speed_max = 1e9;
  SplitShape train{4, 48};
  SplitShape test{4, 120};
  std::vector<ActorSpec> actors;
  std::vector<AnomalyInjection> anomalies;

  static SceneSpec from_kv(const KvDocument& doc);
  static SceneSpec load(const std::filesystem::path& path);
  [[nodiscard]] KvDocument to_kv() const;

  // Throws Error on any inconsistency, including actors leaving the canvas when wrap = false.
  void validate() const;

  [[nodiscard]] int class_index(Shape shape) const;  // 1-based palette index
};

// Renders the corpus into `root` following the on-disk corpus layout, plus
// oracle/<clip_id>/<index>.png (class maps), oracle/<clip_id>/<index>.flow (u,v maps)
// and oracle/<clip_id>/meta.txt. Output is byte-identical for a fixed spec.
void generate(const SceneSpec& spec, const std::filesystem::path& root);

struct ClipMeta {
  std::vector<AnomalyKind> anomaly_kinds;
};
ClipMeta read_clip_meta(const std::filesystem::path& root, const std::string& clip_id);

// Exact class maps written by generate(); optional deterministic miss rate.
class AnalyticSegmentationOracle final : public targets::SegmentationOracle {
 public:
  AnalyticSegmentationOracle(std::filesystem::path root, double miss_rate = 0.0, std::uint64_t seed = 0);
  targets::SegOracleResult segment(const Frame& frame) const override;

 private:
  std::filesystem::path root_;
  double miss_rate_;
  std::uint64_t seed_;
};

// Per-frame actor displacement written by generate().
class AnalyticFlowEstimator final : public targets::FlowEstimator {
 public:
  explicit AnalyticFlowEstimator(std::filesystem::path root);
  targets::FlowField estimate(const Frame& prev, const Frame& curr) const override;

 private:
  std::filesystem::path root_;
};

// Deterministic uniform value in [0, 1) from a key, used for oracle misses.
double hash_unit(std::uint64_t seed, const std::string& clip_id, int index);

}  // namespace translad::synth
