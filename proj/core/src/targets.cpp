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

#include "translad/targets.hpp"

#include <algorithm>
#include <cmath>

#include <opencv2/imgproc.hpp>
#include <opencv2/video/tracking.hpp>

namespace translad::targets {

SegOracleResult SegOracleResult::empty(int height, int width) {
  return SegOracleResult{LabelMap(height, width), Mask(height, width), false};
}

SegOracleResult SegOracleResult::from_class_map(LabelMap class_map) {
  Mask mask(class_map.height, class_map.width);
  for (std::size_t i = 0; i < class_map.data.size(); ++i) mask.data[i] = class_map.data[i] != 0 ? 1 : 0;
  return SegOracleResult{std::move(class_map), std::move(mask), false};
}

SegOracleResult segment(const Frame& frame, const SegmentationOracle& oracle) {
  try {
    SegOracleResult result = oracle.segment(frame);
    if (result.class_map.height != frame.pixels.height || result.class_map.width != frame.pixels.width) {
      throw Error("oracle returned a " + std::to_string(result.class_map.height) + "x" +
                  std::to_string(result.class_map.width) + " map for frame " + frame.clip_id + "/" +
                  frame_stem(frame.index));
    }
    return result;
  } catch (const OracleFailure&) {
    SegOracleResult miss = SegOracleResult::empty(frame.pixels.height, frame.pixels.width);
    miss.missed = true;
    return miss;
  }
}

Image make_seg_target(const SegOracleResult& result, int palette_size) {
  if (palette_size < 2) throw Error("palette needs background plus at least one class");
  const LabelMap& labels = result.class_map;
  Image target(labels.height, labels.width, palette_size);
  for (std::size_t p = 0; p < labels.data.size(); ++p) {
    const auto cls = labels.data[p];
    if (cls < 0 || cls >= palette_size) {
      throw Error("class index " + std::to_string(cls) + " outside palette of size " + std::to_string(palette_size));
    }
    target.data[p * palette_size + cls] = 1.0f;
  }
  return target;
}

LabelMap decode_seg_target(const Image& target) {
  LabelMap labels(target.height, target.width);
  const int k = target.channels;
  for (std::size_t p = 0; p < labels.data.size(); ++p) {
    const float* px = target.data.data() + p * k;
    labels.data[p] = static_cast<std::int32_t>(std::max_element(px, px + k) - px);
  }
  return labels;
}

namespace {

cv::Mat to_gray8(const Image& pixels) {
  cv::Mat rgb = to_mat(pixels);
  cv::Mat gray;
  if (pixels.channels == 3) {
    cv::cvtColor(rgb, gray, cv::COLOR_RGB2GRAY);
  } else if (pixels.channels == 1) {
    gray = rgb;
  } else {
    throw Error("flow estimation needs 1- or 3-channel frames");
  }
  cv::Mat out;
  gray.convertTo(out, CV_8U, 255.0);
  return out;
}

}  // namespace

FlowField FarnebackEstimator::estimate(const Frame& prev, const Frame& curr) const {
  cv::Mat backward;
  cv::calcOpticalFlowFarneback(to_gray8(curr.pixels), to_gray8(prev.pixels), backward, params_.pyr_scale,
                               params_.levels, params_.window, params_.iterations, params_.poly_n,
                               params_.poly_sigma, 0);
  FlowField flow(curr.pixels.height, curr.pixels.width);
  for (int y = 0; y < flow.height(); ++y) {
    const auto* row = backward.ptr<cv::Point2f>(y);
    for (int x = 0; x < flow.width(); ++x) {
      flow.u(y, x) = -row[x].x;
      flow.v(y, x) = -row[x].y;
    }
  }
  return flow;
}

FlowField dense_flow(const Frame& prev, const Frame& curr, const FlowEstimator& estimator) {
  if (!prev.pixels.same_shape(curr.pixels)) throw Error("dense_flow: frame shapes differ");
  if (prev.clip_id != curr.clip_id || prev.index + 1 != curr.index) {
    throw Error("dense_flow: frames must be consecutive in one clip (" + prev.clip_id + "/" +
                std::to_string(prev.index) + " -> " + curr.clip_id + "/" + std::to_string(curr.index) + ")");
  }
  FlowField flow = estimator.estimate(prev, curr);
  if (flow.height() != curr.pixels.height || flow.width() != curr.pixels.width) {
    throw Error("dense_flow: estimator returned a field of the wrong size");
  }
  for (float& c : flow.uv.data) {
    if (!std::isfinite(c)) c = 0.0f;
  }
  return flow;
}

FlowField clip_flow(const Clip& clip, int index, const FlowEstimator& estimator) {
  if (index < 0 || index >= static_cast<int>(clip.frames.size())) throw Error("clip_flow: index out of range");
  const Frame& curr = clip.frames[static_cast<std::size_t>(index)];
  if (index == 0) return FlowField(curr.pixels.height, curr.pixels.width);
  return dense_flow(clip.frames[static_cast<std::size_t>(index) - 1], curr, estimator);
}

Image flow_magnitude(const FlowField& flow) {
  Image magnitude(flow.height(), flow.width(), 1);
  for (std::size_t p = 0; p < magnitude.data.size(); ++p) {
    const float u = flow.uv.data[2 * p];
    const float v = flow.uv.data[2 * p + 1];
    magnitude.data[p] = std::sqrt(u * u + v * v);
  }
  return magnitude;
}

Image mask_flow(const Image& magnitude, const Mask& mask) {
  if (magnitude.channels != 1 || magnitude.height != mask.height || magnitude.width != mask.width) {
    throw Error("mask_flow: magnitude and mask shapes differ");
  }
  Image out(magnitude.height, magnitude.width, 1);
  for (std::size_t p = 0; p < out.data.size(); ++p) out.data[p] = mask.data[p] ? magnitude.data[p] : 0.0f;
  return out;
}

Image scale_flow_target(const Image& flow_target, double cap) {
  if (!(cap > 0.0)) throw Error("scale_flow_target: cap must be positive");
  Image out = flow_target;
  for (float& v : out.data) v = static_cast<float>(std::min(static_cast<double>(v), cap) / cap);
  return out;
}

double percentile(std::vector<float> values, double pct) {
  if (values.empty()) throw Error("percentile of an empty sample");
  pct = std::clamp(pct, 0.0, 100.0);
  std::sort(values.begin(), values.end());
  const double pos = pct / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (static_cast<double>(values[hi]) - values[lo]);
}

}  // namespace translad::targets
