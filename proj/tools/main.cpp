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

// translad command-line driver.
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "translad/pipeline.hpp"

namespace fs = std::filesystem;
using namespace translad;

namespace {

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--config", common.config_path, "run config file (key = value)");
  cmd->add_option("--set", common.overrides, "override a config key, key=value (repeatable)")->take_last()->allow_extra_args(false);
}

RunConfig resolve(const Common& common) {
  RunConfig config;
  if (!common.config_path.empty()) config = RunConfig::load(common.config_path);
  if (config.run_dir.empty()) {
    if (const char* env = std::getenv("TRANSLAD_RUN_DIR"); env && *env) config.run_dir = env;
  }
  config.apply_overrides(common.overrides);
  if (config.run_dir.empty()) throw UsageError("no run directory: set run_dir in the config, --set run_dir=PATH or TRANSLAD_RUN_DIR");
  return config;
}

std::vector<Branch> parse_branches(const std::string& text) {
  if (text == "both") return {Branch::appearance, Branch::motion};
  try {
    return {parse_branch(text)};
  } catch (const Error&) {
    throw UsageError("--branch must be app, mot or both");
  }
}

void log_stderr(const std::string& line) { std::cerr << line << std::endl; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"translad: two-stream frame translation anomaly detector"};
  app.require_subcommand(1);

  Common common;
  std::string spec_path, synth_out, branch = "both", train_branch = "both";
  bool per_clip = false, macro = false;

  auto* synth = app.add_subcommand("synth", "render a synthetic corpus from a scene spec");
  synth->add_option("--spec", spec_path, "scene spec file")->required();
  synth->add_option("--out", synth_out, "output corpus directory (default: config corpus)");
  add_common(synth, common);

  auto* gen = app.add_subcommand("gen-targets", "compute appearance and/or motion targets");
  gen->add_option("--branch", branch, "app, mot or both");
  add_common(gen, common);

  auto* train = app.add_subcommand("train", "train translator branches");
  train->add_option("--branch", train_branch, "app, mot or both");
  add_common(train, common);

  auto* score = app.add_subcommand("score", "score test frames");
  add_common(score, common);

  auto* eval = app.add_subcommand("eval", "frame-level AUC report");
  eval->add_flag("--per-clip-normalize", per_clip, "min-max normalize scores within each clip");
  eval->add_flag("--macro", macro, "average per-clip AUCs");
  add_common(eval, common);

  auto* plot = app.add_subcommand("plot", "per-clip score curves with anomaly shading");
  add_common(plot, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    torch::set_num_threads(1);
    if (synth->parsed()) {
      fs::path out = synth_out;
      if (out.empty()) {
        RunConfig config;
        if (!common.config_path.empty()) config = RunConfig::load(common.config_path);
        config.apply_overrides(common.overrides);
        out = config.corpus;
      }
      if (out.empty()) throw UsageError("synth needs --out or a configured corpus");
      run_synth(spec_path, out, log_stderr);
      return 0;
    }
    RunConfig config = resolve(common);
    if (gen->parsed()) {
      run_gen_targets(config, parse_branches(branch), log_stderr);
    } else if (train->parsed()) {
      for (Branch b : parse_branches(train_branch)) run_train(config, b, log_stderr);
    } else if (score->parsed()) {
      run_score(config, log_stderr);
    } else if (eval->parsed()) {
      config.per_clip_normalize = config.per_clip_normalize || per_clip;
      config.macro_auc = config.macro_auc || macro;
      const auto report = run_eval(config);
      std::cout << eval::format_report(report);
    } else if (plot->parsed()) {
      run_plot(config, log_stderr);
    }
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
}
