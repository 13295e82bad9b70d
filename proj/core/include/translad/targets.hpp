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

#include <span>
#include <string>
#include <vector>

#include "translad/data_model.hpp"
#include "translad/error.hpp"
#include "translad/image.hpp"

namespace translad::targets {

struct SegOracleResult {
  LabelMap class_map;  // indices into [background] + class_palette
  Mask instance_mask;  // 1 wherever class_map != 0
  bool missed = false;

  static SegOracleResult empty(int height, int width);
  static SegOracleResult from_class_map(LabelMap class_map);
};

// Raised by an oracle that could not process a frame; segment() records it as a miss.
class OracleFailure : public Error {
 public:
  using Error::Error;
};

// Pluggable instance-segmentation source. Implementations must be deterministic per frame.
class SegmentationOracle {
 public:
  virtual ~SegmentationOracle() = default;
  virtual SegOracleResult segment(const Frame& frame) const = 0;
};

// Runs the oracle; an OracleFailure yields an empty (missed) result sized like the frame.
SegOracleResult segment(const Frame& frame, const SegmentationOracle& oracle);

// One-hot encoding over palette_size channels; channel 0 is background.
Image make_seg_target(const SegOracleResult& result, int palette_size);

// Per-pixel argmax over channels (lowest channel wins ties).
LabelMap decode_seg_target(const Image& target);

// Displacement field aligned to the current frame, in pixels per frame step.
struct FlowField {
  Image uv;  // 2 channels: u (x), v (y)

  FlowField() = default;
  FlowField(int height, int width) : uv(height, width, 2) {}
  [[nodiscard]] int height() const { return uv.height; }
  [[nodiscard]] int width() const { return uv.width; }
  float& u(int y, int x) { return uv.at(y, x, 0); }
  float& v(int y, int x) { return uv.at(y, x, 1); }
  [[nodiscard]] float u(int y, int x) const { return uv.at(y, x, 0); }
  [[nodiscard]] float v(int y, int x) const { return uv.at(y, x, 1); }
};

class FlowEstimator {
 public:
  virtual ~FlowEstimator() = default;
  virtual FlowField estimate(const Frame& prev, const Frame& curr) const = 0;
};

// Polynomial-expansion dense flow (OpenCV Farneback), computed from curr back to prev
// and negated so the field lives on the current frame's pixel grid.
class FarnebackEstimator final : public FlowEstimator {
 public:
  struct Params {
    double pyr_scale = 0.5;
    int levels = 3;
    int window = 15;
    int iterations = 3;
    int poly_n = 5;
    double poly_sigma = 1.2;
  };

  FarnebackEstimator() = default;
  explicit FarnebackEstimator(Params params) : params_(params) {}
  FlowField estimate(const Frame& prev, const Frame& curr) const override;

 private:
  Params params_;
};

FlowField dense_flow(const Frame& prev, const Frame& curr, const FlowEstimator& estimator);

// Flow into frame `index` of a clip; the first frame has no predecessor and gets zero flow.
FlowField clip_flow(const Clip& clip, int index, const FlowEstimator& estimator);

Image flow_magnitude(const FlowField& flow);

Image mask_flow(const Image& magnitude, const Mask& mask);

// min(m, cap) / cap per pixel.
Image scale_flow_target(const Image& flow_target, double cap);

// Linear-interpolated percentile (pct in [0, 100]) of a non-empty sample.
double percentile(std::vector<float> values, double pct);

}  // namespace translad::targets
