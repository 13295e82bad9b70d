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
#include <vector>

namespace translad {

struct PlotCurve {
  std::string name;
  std::vector<double> values;
  std::uint8_t r = 0, g = 0, b = 0;
};

// Score-versus-frame chart; frames with label 1 are shaded pink. Curves are min-max scaled.
void plot_scores(const std::filesystem::path& path, const std::string& title, const std::vector<PlotCurve>& curves,
                 const std::vector<std::uint8_t>& labels, int width = 900, int height = 320);

}  // namespace translad
