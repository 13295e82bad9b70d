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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <opencv2/core/mat.hpp>

namespace translad {

// Dense float image, row-major with interleaved channels (H x W x C).
struct Image {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<float> data;

  Image() = default;
  Image(int h, int w, int c, float fill = 0.0f);

  [[nodiscard]] std::size_t size() const { return data.size(); }
  [[nodiscard]] std::size_t pixel_count() const {
    return static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  }
  [[nodiscard]] bool same_shape(const Image& other) const {
    return height == other.height && width == other.width && channels == other.channels;
  }

  float& at(int y, int x, int c = 0) {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  [[nodiscard]] float at(int y, int x, int c = 0) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }

  bool operator==(const Image&) const = default;
};

// Per-pixel integer label map (class indices, 0 = background).
struct LabelMap {
  int height = 0;
  int width = 0;
  std::vector<std::int32_t> data;

  LabelMap() = default;
  LabelMap(int h, int w, std::int32_t fill = 0);

  std::int32_t& at(int y, int x) { return data[static_cast<std::size_t>(y) * width + x]; }
  [[nodiscard]] std::int32_t at(int y, int x) const {
    return data[static_cast<std::size_t>(y) * width + x];
  }

  bool operator==(const LabelMap&) const = default;
};

// Binary per-pixel mask; values are 0 or 1.
struct Mask {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> data;

  Mask() = default;
  Mask(int h, int w, std::uint8_t fill = 0);

  std::uint8_t& at(int y, int x) { return data[static_cast<std::size_t>(y) * width + x]; }
  [[nodiscard]] std::uint8_t at(int y, int x) const {
    return data[static_cast<std::size_t>(y) * width + x];
  }

  bool operator==(const Mask&) const = default;
};

// Deep-copying conversions to and from OpenCV matrices (CV_32FC(n)).
cv::Mat to_mat(const Image& image);
Image from_mat(const cv::Mat& mat);

}  // namespace translad
