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

#include "translad/data_model.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "translad/error.hpp"
#include "translad/kv.hpp"

namespace fs = std::filesystem;

namespace translad {

const char* to_string(Split split) { return split == Split::train ? "train" : "test"; }

const Clip* Corpus::find_clip(const std::string& clip_id) const {
  for (const auto* list : {&train_clips, &test_clips}) {
    for (const auto& clip : *list) {
      if (clip.clip_id == clip_id) return &clip;
    }
  }
  return nullptr;
}

std::string frame_stem(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%06d", index);
  return buf;
}

Image resize_image(const Image& image, int side) {
  if (side < 8) throw Error("resize: side must be >= 8, got " + std::to_string(side));
  if (image.height == side && image.width == side) return image;
  cv::Mat resized;
  cv::resize(to_mat(image), resized, cv::Size(side, side), 0, 0, cv::INTER_LINEAR);
  Image out = from_mat(resized);
  for (float& v : out.data) v = std::clamp(v, 0.0f, 1.0f);
  return out;
}

Frame resize_frame(const Frame& frame, int side) {
  return Frame{frame.clip_id, frame.index, resize_image(frame.pixels, side)};
}

Image read_image(const fs::path& path) {
  cv::Mat raw = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (raw.empty()) throw Error("cannot decode image " + path.string());
  if (raw.depth() != CV_8U) raw.convertTo(raw, CV_8U, 1.0 / 256.0);
  cv::Mat rgb;
  switch (raw.channels()) {
    case 1: cv::cvtColor(raw, rgb, cv::COLOR_GRAY2RGB); break;
    case 3: cv::cvtColor(raw, rgb, cv::COLOR_BGR2RGB); break;
    case 4: cv::cvtColor(raw, rgb, cv::COLOR_BGRA2RGB); break;
    default: throw Error("unsupported channel count in " + path.string());
  }
  cv::Mat scaled;
  rgb.convertTo(scaled, CV_32FC3, 1.0 / 255.0);
  return from_mat(scaled);
}

std::vector<std::uint8_t> read_labels(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read labels " + path.string());
  std::vector<std::uint8_t> labels;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t != "0" && t != "1") {
      throw Error(path.string() + ":" + std::to_string(line_no) + ": label must be 0 or 1");
    }
    labels.push_back(t == "1" ? 1 : 0);
  }
  return labels;
}

std::vector<std::string> read_palette(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read palette " + path.string());
  std::vector<std::string> palette;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (!t.empty() && t[0] != '#') palette.push_back(std::move(t));
  }
  return palette;
}

std::vector<fs::path> list_frame_files(const fs::path& clip_dir) {
  std::vector<std::pair<int, fs::path>> indexed;
  for (const auto& entry : fs::directory_iterator(clip_dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext != ".png" && ext != ".jpg" && ext != ".jpeg") continue;
    const std::string stem = entry.path().stem().string();
    int index = -1;
    const auto [ptr, ec] = std::from_chars(stem.data(), stem.data() + stem.size(), index);
    if (ec != std::errc() || ptr != stem.data() + stem.size() || index < 0) {
      throw Error("frame file name is not an index: " + entry.path().string());
    }
    indexed.emplace_back(index, entry.path());
  }
  std::sort(indexed.begin(), indexed.end());
  std::vector<fs::path> files;
  for (std::size_t i = 0; i < indexed.size(); ++i) {
    if (indexed[i].first != static_cast<int>(i)) {
      throw Error("clip " + clip_dir.filename().string() + ": frame indices are not consecutive from 0 (missing " +
                  frame_stem(static_cast<int>(i)) + ")");
    }
    files.push_back(indexed[i].second);
  }
  return files;
}

namespace {

std::vector<fs::path> list_clip_dirs(const fs::path& split_dir) {
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(split_dir)) {
    if (entry.is_directory()) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

Clip load_clip(const fs::path& clip_dir, int side) {
  Clip clip;
  clip.clip_id = clip_dir.filename().string();
  const auto files = list_frame_files(clip_dir);
  if (files.empty()) throw Error("clip " + clip.clip_id + " has no frames");
  clip.frames.reserve(files.size());
  for (std::size_t i = 0; i < files.size(); ++i) {
    clip.frames.push_back(Frame{clip.clip_id, static_cast<int>(i), resize_image(read_image(files[i]), side)});
  }
  return clip;
}

}  // namespace

Corpus ingest_corpus(const fs::path& root, const IngestConfig& config) {
  if (config.side < 8) throw Error("ingest: frame side must be >= 8");
  const fs::path train_dir = root / "train";
  const fs::path test_dir = root / "test";
  if (!fs::is_directory(train_dir)) throw Error("corpus " + root.string() + ": missing split directory 'train'");
  if (!fs::is_directory(test_dir)) throw Error("corpus " + root.string() + ": missing split directory 'test'");

  Corpus corpus;
  corpus.root = root;
  corpus.name = root.filename().string();
  if (corpus.name.empty()) corpus.name = root.parent_path().filename().string();
  if (!config.class_palette.empty()) {
    corpus.class_palette = config.class_palette;
  } else if (fs::exists(root / "palette.txt")) {
    corpus.class_palette = read_palette(root / "palette.txt");
  }
  if (corpus.class_palette.empty()) {
    throw Error("corpus " + root.string() + ": class palette needs at least one foreground class");
  }

  for (const auto& dir : list_clip_dirs(train_dir)) corpus.train_clips.push_back(load_clip(dir, config.side));
  if (corpus.train_clips.empty()) throw Error("corpus " + root.string() + ": no training clips");

  std::set<std::string> ids;
  for (const auto& clip : corpus.train_clips) ids.insert(clip.clip_id);

  for (const auto& dir : list_clip_dirs(test_dir)) {
    const std::string id = dir.filename().string();
    if (ids.count(id)) throw Error("clip id '" + id + "' appears in both train and test");
    if (!config.load_test) continue;
    const fs::path labels_path = test_dir / (id + ".labels");
    Clip clip = load_clip(dir, config.side);
    if (fs::exists(labels_path)) {
      auto labels = read_labels(labels_path);
      if (labels.size() != clip.frames.size()) {
        throw Error("test clip " + id + ": " + std::to_string(clip.frames.size()) + " frames but " +
                    std::to_string(labels.size()) + " labels");
      }
      clip.labels = std::move(labels);
    }
    corpus.test_clips.push_back(std::move(clip));
  }
  return corpus;
}

}  // namespace translad
