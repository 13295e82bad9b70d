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

#include "translad/eval.hpp"
#include "translad/kv.hpp"
#include "translad/target_cache.hpp"
#include "translad/targets.hpp"
#include "translad/translator.hpp"

namespace translad {

// Bad command-line or configuration input (exit code 2).
class UsageError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::filesystem::path corpus;
  std::filesystem::path test_corpus;  // empty: same as corpus
  std::filesystem::path run_dir;
  std::uint64_t seed = 0;
  int side = kFrameSide;
  std::vector<std::string> palette;  // empty: <corpus>/palette.txt

  std::string oracle = "analytic";
  double oracle_miss_rate = 0.0;
  std::string flow_estimator = "farneback";
  targets::FarnebackEstimator::Params farneback;
  TargetOptions target;

  translator::ModelConfig model;  // out_channels is set per branch
  std::filesystem::path encoder_weights;
  translator::TrainConfig app_train;
  translator::TrainConfig mot_train;

  bool refine = true;
  int refine_kernel = 3;
  int refine_iterations = 1;
  int sg_window = 41;
  int sg_polyorder = 1;
  bool emit_decisions = false;
  double app_threshold = 0.0;
  double mot_threshold = 0.0;
  int score_batch = 16;

  bool per_clip_normalize = false;
  bool macro_auc = false;

  static RunConfig from_kv(const KvDocument& doc);
  static RunConfig load(const std::filesystem::path& path);
  [[nodiscard]] KvDocument to_kv() const;

  // "key=value" overrides; unknown keys raise UsageError.
  void apply_overrides(const std::vector<std::string>& assignments);

  [[nodiscard]] std::filesystem::path effective_test_corpus() const {
    return test_corpus.empty() ? corpus : test_corpus;
  }
  [[nodiscard]] const translator::TrainConfig& train_config(Branch branch) const {
    return branch == Branch::appearance ? app_train : mot_train;
  }
};

// Every key RunConfig understands, in serialization order.
const std::vector<std::string>& run_config_keys();

using Logger = translator::LogSink;

// Training clips from `corpus`, test clips from the (possibly different) test corpus.
Corpus load_run_corpus(const RunConfig& config, bool load_test);

void run_synth(const std::filesystem::path& spec_path, const std::filesystem::path& out_root, const Logger& log = {});
TargetReport run_gen_targets(const RunConfig& config, const std::vector<Branch>& branches, const Logger& log = {});
translator::TrainResult run_train(const RunConfig& config, Branch branch, const Logger& log = {});
scoring::ScoreTable run_score(const RunConfig& config, const Logger& log = {});
eval::Report run_eval(const RunConfig& config, const Logger& log = {});
std::vector<std::filesystem::path> run_plot(const RunConfig& config, const Logger& log = {});

// Writes <run_dir>/config.txt.
void snapshot_config(const RunConfig& config);

std::filesystem::path scores_path(const RunConfig& config);

}  // namespace translad
