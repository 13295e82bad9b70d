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

#include "translad/manifest.hpp"

#include <algorithm>
#include <array>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "translad/error.hpp"
#include "translad/kv.hpp"

namespace fs = std::filesystem;

namespace translad {

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t hash = seed;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::uint64_t checksum_file(const fs::path& path, std::uint64_t seed) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::array<char, 1 << 16> buffer{};
  std::uint64_t hash = seed;
  while (in) {
    in.read(buffer.data(), buffer.size());
    hash = fnv1a(std::string_view(buffer.data(), static_cast<std::size_t>(in.gcount())), hash);
  }
  return hash;
}

Manifest Manifest::scan(const fs::path& root) {
  Manifest manifest;
  manifest.name = root.filename().string();
  for (Split split : {Split::train, Split::test}) {
    const fs::path split_dir = root / translad::to_string(split);
    if (!fs::is_directory(split_dir)) throw Error("corpus " + root.string() + ": missing split directory '" + translad::to_string(split) + "'");
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(split_dir)) {
      if (entry.is_directory()) dirs.push_back(entry.path());
    }
    std::sort(dirs.begin(), dirs.end());
    for (const auto& dir : dirs) {
      ManifestEntry entry;
      entry.split = split;
      entry.clip_id = dir.filename().string();
      std::uint64_t hash = fnv1a(entry.clip_id);
      const auto files = list_frame_files(dir);
      for (const auto& file : files) hash = checksum_file(file, hash);
      entry.frame_count = static_cast<int>(files.size());
      const fs::path labels = split_dir / (entry.clip_id + ".labels");
      if (split == Split::test && fs::exists(labels)) {
        entry.has_labels = true;
        hash = checksum_file(labels, hash);
      }
      entry.checksum = hash;
      manifest.entries.push_back(std::move(entry));
    }
  }
  return manifest;
}

std::string Manifest::to_string() const {
  std::ostringstream out;
  out << "# translad corpus manifest v1\n";
  out << "name " << name << "\n";
  for (const auto& e : entries) {
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016" PRIx64, e.checksum);
    out << "clip " << translad::to_string(e.split) << " " << e.clip_id << " " << e.frame_count << " " << hex << " "
        << (e.has_labels ? "labels" : "nolabels") << "\n";
  }
  return out.str();
}

Manifest Manifest::parse(std::string_view text) {
  Manifest manifest;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::istringstream fields(t);
    std::string tag;
    fields >> tag;
    if (tag == "name") {
      std::getline(fields, manifest.name);
      manifest.name = trim(manifest.name);
      continue;
    }
    if (tag != "clip") throw Error("manifest line " + std::to_string(line_no) + ": unknown record '" + tag + "'");
    ManifestEntry e;
    std::string split, hex, labels;
    if (!(fields >> split >> e.clip_id >> e.frame_count >> hex >> labels)) {
      throw Error("manifest line " + std::to_string(line_no) + ": malformed clip record");
    }
    if (split != "train" && split != "test") throw Error("manifest line " + std::to_string(line_no) + ": bad split");
    e.split = split == "train" ? Split::train : Split::test;
    e.checksum = std::stoull(hex, nullptr, 16);
    e.has_labels = labels == "labels";
    manifest.entries.push_back(std::move(e));
  }
  return manifest;
}

Manifest Manifest::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read manifest " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

void Manifest::save(const fs::path& path) const {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << to_string();
}

}  // namespace translad
