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

#include "translad/kv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "translad/error.hpp"

namespace translad {

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view text, char delimiter) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(delimiter, start);
    parts.push_back(trim(text.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_double(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw Error("invalid number for '" + std::string(key) + "': '" + s + "'");
  }
  return value;
}

long long parse_int(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw Error("invalid integer for '" + std::string(key) + "': '" + s + "'");
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw Error("invalid boolean for '" + std::string(key) + "': '" + s + "'");
}

namespace {

std::string strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  return trim(hash == std::string_view::npos ? line : line.substr(0, hash));
}

}  // namespace

KvDocument KvDocument::parse(std::string_view text) {
  KvDocument root;
  std::vector<KvDocument*> stack{&root};
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = strip_comment(raw);
    if (line.empty()) continue;
    if (line == "}") {
      if (stack.size() == 1) throw Error("line " + std::to_string(line_no) + ": unmatched '}'");
      stack.pop_back();
      continue;
    }
    if (line.back() == '{') {
      const std::string name = trim(std::string_view(line).substr(0, line.size() - 1));
      if (name.empty()) throw Error("line " + std::to_string(line_no) + ": block without a name");
      stack.push_back(&stack.back()->add_block(name));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error("line " + std::to_string(line_no) + ": expected 'key = value', got '" + line + "'");
    }
    std::string key = trim(std::string_view(line).substr(0, eq));
    if (key.empty()) throw Error("line " + std::to_string(line_no) + ": empty key");
    stack.back()->set(key, trim(std::string_view(line).substr(eq + 1)));
  }
  if (stack.size() != 1) throw Error("unterminated block at end of input");
  return root;
}

KvDocument KvDocument::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse(buffer.str());
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void KvDocument::write(std::string& out, int depth) const {
  const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
  for (const auto& [key, value] : entries_) out += indent + key + " = " + value + "\n";
  for (const auto& block : blocks_) {
    out += indent + block.name + " {\n";
    block.body.write(out, depth + 1);
    out += indent + "}\n";
  }
}

std::string KvDocument::to_string() const {
  std::string out;
  write(out, 0);
  return out;
}

void KvDocument::save(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << to_string();
}

void KvDocument::set(const std::string& key, std::string value) {
  for (auto& entry : entries_) {
    if (entry.first == key) {
      entry.second = std::move(value);
      return;
    }
  }
  entries_.emplace_back(key, std::move(value));
}

bool KvDocument::has(std::string_view key) const { return find(key).has_value(); }

std::optional<std::string> KvDocument::find(std::string_view key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string KvDocument::get_string(std::string_view key, std::string fallback) const {
  auto v = find(key);
  return v ? *v : std::move(fallback);
}

double KvDocument::get_double(std::string_view key, double fallback) const {
  auto v = find(key);
  return v ? parse_double(key, *v) : fallback;
}

long long KvDocument::get_int(std::string_view key, long long fallback) const {
  auto v = find(key);
  return v ? parse_int(key, *v) : fallback;
}

bool KvDocument::get_bool(std::string_view key, bool fallback) const {
  auto v = find(key);
  return v ? parse_bool(key, *v) : fallback;
}

std::vector<const KvDocument*> KvDocument::blocks_named(std::string_view name) const {
  std::vector<const KvDocument*> out;
  for (const auto& block : blocks_) {
    if (block.name == name) out.push_back(&block.body);
  }
  return out;
}

KvDocument& KvDocument::add_block(std::string name) {
  blocks_.push_back(Block{std::move(name), KvDocument{}});
  return blocks_.back().body;
}

bool KvDocument::operator==(const KvDocument& other) const {
  return entries_ == other.entries_ && blocks_ == other.blocks_;
}

}  // namespace translad
