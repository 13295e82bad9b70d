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

#include "translad/image.hpp"

namespace translad {

// Flat float map file: "TLMP" magic, uint32 height, width, channels (little-endian),
// then height*width*channels float32 little-endian values, row-major with interleaved channels.
void write_map(const std::filesystem::path& path, const Image& map);
Image read_map(const std::filesystem::path& path);

// 8-bit PNG label maps (class indices < 256).
void write_label_png(const std::filesystem::path& path, const LabelMap& labels);
LabelMap read_label_png(const std::filesystem::path& path);

}  // namespace translad
