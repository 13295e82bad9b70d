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

#include "translad/image.hpp"

#include <cstring>

#include "translad/error.hpp"

namespace translad {

Image::Image(int h, int w, int c, float fill)
    : height(h), width(w), channels(c),
      data(static_cast<std::size_t>(h) * static_cast<std::size_t>(w) * static_cast<std::size_t>(c), fill) {}

LabelMap::LabelMap(int h, int w, std::int32_t fill)
    : height(h), width(w), data(static_cast<std::size_t>(h) * static_cast<std::size_t>(w), fill) {}

Mask::Mask(int h, int w, std::uint8_t fill)
    : height(h), width(w), data(static_cast<std::size_t>(h) * static_cast<std::size_t>(w), fill) {}

cv::Mat to_mat(const Image& image) {
  cv::Mat mat(image.height, image.width, CV_32FC(image.channels));
  std::memcpy(mat.ptr<float>(), image.data.data(), image.data.size() * sizeof(float));
  return mat;
}

Image from_mat(const cv::Mat& mat) {
  if (mat.depth() != CV_32F) throw Error("from_mat: expected a float32 matrix");
  Image image(mat.rows, mat.cols, mat.channels());
  const std::size_t row_floats = static_cast<std::size_t>(mat.cols) * mat.channels();
  for (int y = 0; y < mat.rows; ++y) {
    std::memcpy(image.data.data() + y * row_floats, mat.ptr<float>(y), row_floats * sizeof(float));
  }
  return image;
}

}  // namespace translad
