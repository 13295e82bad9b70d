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
#include <string>
#include <vector>

#include "translad/data_model.hpp"
#include "translad/targets.hpp"

namespace translad {

enum class Branch { appearance, motion };

const char* to_string(Branch branch);       // "appearance" / "motion"
const char* directory_name(Branch branch);  // "app" / "mot"
Branch parse_branch(const std::string& text);

struct TargetOptions {
  bool masking = true;
  double flow_cap = 0.0;  // <= 0: derive from training magnitudes
  double flow_cap_percentile = 99.5;
  double flow_cap_scale = 1.0;
};

// <root>/targets/<app|mot>/<clip_id>/<index:06d>.bin
class TargetCache {
 public:
  explicit TargetCache(std::filesystem::path root) : root_(std::move(root)) {}

  [[nodiscard]] const std::filesystem::path& root() const { return root_; }
  [[nodiscard]] std::filesystem::path dir() const { return root_ / "targets"; }
  [[nodiscard]] std::filesystem::path path(Branch branch, const std::string& clip_id, int index) const;
  [[nodiscard]] bool has(Branch branch, const std::string& clip_id, int index) const;
  [[nodiscard]] Image read(Branch branch, const std::string& clip_id, int index) const;
  void write(Branch branch, const std::string& clip_id, int index, const Image& target) const;

  // Clip/frame pairs of `clips` with no cached target for `branch`.
  [[nodiscard]] std::vector<std::string> missing(Branch branch, const std::vector<Clip>& clips) const;

  [[nodiscard]] double flow_cap() const;  // from targets/meta.txt

 private:
  std::filesystem::path root_;
};

struct TargetReport {
  double flow_cap = 0.0;
  int frames = 0;
  int oracle_misses = 0;
};

// Writes appearance and/or motion targets for every train and test frame. The motion
// cap is derived from training frames only (percentile of on-mask magnitudes).
TargetReport generate_targets(const Corpus& corpus, const std::vector<Branch>& branches,
                              const targets::SegmentationOracle& oracle, const targets::FlowEstimator& estimator,
                              const TargetOptions& options, const TargetCache& cache);

}  // namespace translad
