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

#include "translad/map_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include <opencv2/imgcodecs.hpp>

#include "translad/error.hpp"

namespace fs = std::filesystem;

namespace translad {

namespace {

constexpr std::array<char, 4> kMagic{'T', 'L', 'M', 'P'};

static_assert(std::endian::native == std::endian::little, "map files assume a little-endian host");

void put_u32(std::ofstream& out, std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), sizeof(v)); }

std::uint32_t get_u32(std::ifstream& in, const fs::path& path) {
  std::uint32_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(v))) throw Error("truncated map header in " + path.string());
  return v;
}

}  // namespace

void write_map(const fs::path& path, const Image& map) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, static_cast<std::uint32_t>(map.height));
  put_u32(out, static_cast<std::uint32_t>(map.width));
  put_u32(out, static_cast<std::uint32_t>(map.channels));
  out.write(reinterpret_cast<const char*>(map.data.data()), static_cast<std::streamsize>(map.data.size() * sizeof(float)));
  if (!out) throw Error("failed writing " + path.string());
}

Image read_map(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) throw Error("not a map file: " + path.string());
  const auto h = get_u32(in, path);
  const auto w = get_u32(in, path);
  const auto c = get_u32(in, path);
  if (h == 0 || w == 0 || c == 0 || h > 1u << 15 || w > 1u << 15 || c > 1024) {
    throw Error("implausible map shape in " + path.string());
  }
  Image map(static_cast<int>(h), static_cast<int>(w), static_cast<int>(c));
  if (!in.read(reinterpret_cast<char*>(map.data.data()), static_cast<std::streamsize>(map.data.size() * sizeof(float)))) {
    throw Error("truncated map data in " + path.string());
  }
  return map;
}

void write_label_png(const fs::path& path, const LabelMap& labels) {
  cv::Mat mat(labels.height, labels.width, CV_8UC1);
  for (int y = 0; y < labels.height; ++y) {
    for (int x = 0; x < labels.width; ++x) {
      const auto v = labels.at(y, x);
      if (v < 0 || v > 255) throw Error("label out of 8-bit range while writing " + path.string());
      mat.at<std::uint8_t>(y, x) = static_cast<std::uint8_t>(v);
    }
  }
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  if (!cv::imwrite(path.string(), mat)) throw Error("cannot write " + path.string());
}

LabelMap read_label_png(const fs::path& path) {
  cv::Mat mat = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (mat.empty() || mat.type() != CV_8UC1) throw Error("not an 8-bit label map: " + path.string());
  LabelMap labels(mat.rows, mat.cols);
  for (int y = 0; y < mat.rows; ++y) {
    for (int x = 0; x < mat.cols; ++x) labels.at(y, x) = mat.at<std::uint8_t>(y, x);
  }
  return labels;
}

}  // namespace translad
