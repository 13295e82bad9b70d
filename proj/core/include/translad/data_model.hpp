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

namespace translad {

inline constexpr int kFrameSide = 224;

enum class Split { train, test };

const char* to_string(Split split);

struct Frame {
  std::string clip_id;
  int index = 0;
  Image pixels;  // H x W x 3, values in [0, 1]
};

struct Clip {
  std::string clip_id;
  std::vector<Frame> frames;
  std::optional<std::vector<std::uint8_t>> labels;  // test clips only

  [[nodiscard]] std::size_t size() const { return frames.size(); }
};

struct Corpus {
  std::string name;
  std::filesystem::path root;
  std::vector<Clip> train_clips;
  std::vector<Clip> test_clips;
  // Foreground classes in target-channel order; background is channel 0 and is implicit.
  std::vector<std::string> class_palette;

  // Number of appearance target channels (foreground classes + background).
  [[nodiscard]] int palette_size() const { return static_cast<int>(class_palette.size()) + 1; }
  [[nodiscard]] const std::vector<Clip>& clips(Split split) const {
    return split == Split::train ? train_clips : test_clips;
  }
  [[nodiscard]] const Clip* find_clip(const std::string& clip_id) const;
};

struct IngestConfig {
  int side = kFrameSide;
  // Overrides <root>/palette.txt when non-empty.
  std::vector<std::string> class_palette;
  // When false, test clip names are validated but their frames are not decoded.
  bool load_test = true;
};

// Reads <root>/{train,test}/<clip_id>/<index:06d>.png|jpg and <root>/test/<clip_id>.labels.
// Frames are resized to side x side, scaled to [0, 1], grayscale replicated to 3 channels.
Corpus ingest_corpus(const std::filesystem::path& root, const IngestConfig& config);

// Bilinear resampling to side x side. Identity (bit-exact) when the frame already has that size.
Frame resize_frame(const Frame& frame, int side);
Image resize_image(const Image& image, int side);

// Decodes an 8-bit image file to a 3-channel [0, 1] image.
Image read_image(const std::filesystem::path& path);

std::vector<std::uint8_t> read_labels(const std::filesystem::path& path);
std::vector<std::string> read_palette(const std::filesystem::path& path);

// Frame paths of one clip directory, validated to be consecutive from 0.
std::vector<std::filesystem::path> list_frame_files(const std::filesystem::path& clip_dir);

std::string frame_stem(int index);

}  // namespace translad
