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
#include <string_view>
#include <vector>

#include "translad/data_model.hpp"

namespace translad {

struct ManifestEntry {
  Split split = Split::train;
  std::string clip_id;
  int frame_count = 0;
  std::uint64_t checksum = 0;  // FNV-1a over frame files (and labels) in order
  bool has_labels = false;

  bool operator==(const ManifestEntry&) const = default;
};

// Text manifest of a corpus tree: one line per clip.
struct Manifest {
  std::string name;
  std::vector<ManifestEntry> entries;

  static Manifest scan(const std::filesystem::path& root);
  static Manifest parse(std::string_view text);
  static Manifest load(const std::filesystem::path& path);

  [[nodiscard]] std::string to_string() const;
  void save(const std::filesystem::path& path) const;

  bool operator==(const Manifest&) const = default;
};

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 14695981039346656037ull);
std::uint64_t checksum_file(const std::filesystem::path& path, std::uint64_t seed = 14695981039346656037ull);

}  // namespace translad
