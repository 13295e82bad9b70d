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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace translad {

// Structured key-value text used for run configs and scene specs.
//
//   # comment
//   key = value
//   block_name {
//     key = value
//   }
//
// Keys keep their insertion order; blocks may repeat and nest.
class KvDocument {
 public:
  struct Block;

  static KvDocument parse(std::string_view text);
  static KvDocument load(const std::filesystem::path& path);

  [[nodiscard]] std::string to_string() const;
  void save(const std::filesystem::path& path) const;

  void set(const std::string& key, std::string value);
  [[nodiscard]] bool has(std::string_view key) const;
  [[nodiscard]] std::optional<std::string> find(std::string_view key) const;

  [[nodiscard]] std::string get_string(std::string_view key, std::string fallback) const;
  [[nodiscard]] double get_double(std::string_view key, double fallback) const;
  [[nodiscard]] long long get_int(std::string_view key, long long fallback) const;
  [[nodiscard]] bool get_bool(std::string_view key, bool fallback) const;

  [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }
  [[nodiscard]] const std::vector<Block>& blocks() const { return blocks_; }
  [[nodiscard]] std::vector<const KvDocument*> blocks_named(std::string_view name) const;
  KvDocument& add_block(std::string name);

  bool operator==(const KvDocument&) const;

 private:
  void write(std::string& out, int depth) const;

  std::vector<std::pair<std::string, std::string>> entries_;
  std::vector<Block> blocks_;
};

struct KvDocument::Block {
  std::string name;
  KvDocument body;
  bool operator==(const Block&) const = default;
};

// Strict scalar parsers; throw Error naming the key on malformed input.
double parse_double(std::string_view key, std::string_view text);
long long parse_int(std::string_view key, std::string_view text);
bool parse_bool(std::string_view key, std::string_view text);

std::string trim(std::string_view text);
std::vector<std::string> split(std::string_view text, char delimiter);

}  // namespace translad
