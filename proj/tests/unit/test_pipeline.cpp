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

#include "doctest_main.hpp"

#include <fstream>
#include <iterator>
#include <sys/wait.h>

#include "test_support.hpp"
#include "translad/error.hpp"
#include "translad/pipeline.hpp"

namespace fs = std::filesystem;
using namespace translad;
using translad::testing::TempDir;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

RunConfig tiny_config(const fs::path& root) {
  RunConfig c;
  c.corpus = root / "corpus";
  c.run_dir = root / "run";
  c.side = 64;
  c.flow_estimator = "analytic";
  c.model.base_width = 4;
  c.model.blocks = {1, 1, 1, 1};
  c.app_train.epochs = c.mot_train.epochs = 2;
  c.app_train.batch_size = c.mot_train.batch_size = 4;
  c.sg_window = 5;
  return c;
}

int run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + TRANSLAD_BIN + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("run config serializes, overrides and rejects unknown keys") {
  RunConfig c;
  c.corpus = "/data/x";
  c.seed = 17;
  c.palette = {"circle", "square"};
  c.target.flow_cap = 2.5;
  c.model.blocks = {1, 2, 3, 4};
  c.encoder_weights = "/w/enc.pt";
  c.app_train.epochs = 3;
  c.refine_kernel = 5;
  c.per_clip_normalize = true;
  const auto back = RunConfig::from_kv(c.to_kv());
  CHECK(back.to_kv() == c.to_kv());
  CHECK(back.model.blocks == c.model.blocks);
  CHECK(back.app_train.seed != back.mot_train.seed);

  const auto keys = run_config_keys();
  CHECK(std::find(keys.begin(), keys.end(), "post.sg_window") != keys.end());

  RunConfig d;
  d.apply_overrides({"post.sg_window=21", "app.epochs = 4", "targets.flow_cap=auto"});
  CHECK(d.sg_window == 21);
  CHECK(d.app_train.epochs == 4);
  CHECK(d.target.flow_cap == 0.0);
  CHECK_THROWS_AS(d.apply_overrides({"post.window=3"}), UsageError);
  CHECK_THROWS_AS(d.apply_overrides({"noequals"}), UsageError);
  CHECK_THROWS_AS(d.apply_overrides({"post.sg_window=20"}), UsageError);
  CHECK_THROWS_AS(d.apply_overrides({"seed=abc"}), UsageError);
  CHECK_THROWS_AS(RunConfig::from_kv(KvDocument::parse("bogus = 1\n")), UsageError);
}

TEST_CASE("stages run in order on a tiny corpus") {
  TempDir dir("pipeline");
  synth::generate(testing::tiny_scene(64, 2, 2, 12), dir.path() / "corpus");
  const auto config = tiny_config(dir.path());

  CHECK_THROWS_WITH_AS(run_eval(config), doctest::Contains("run `score` first"), StageError);
  CHECK_THROWS_WITH_AS(run_train(config, Branch::appearance), doctest::Contains("gen-targets"), StageError);
  CHECK(fs::exists(config.run_dir / "config.txt"));
  CHECK(RunConfig::load(config.run_dir / "config.txt").to_kv() == config.to_kv());

  const auto report = run_gen_targets(config, {Branch::appearance, Branch::motion});
  CHECK(report.frames == 48);
  CHECK_THROWS_WITH_AS(run_score(config), doctest::Contains("train --branch app"), StageError);

  run_train(config, Branch::appearance);
  run_train(config, Branch::motion);
  const auto table = run_score(config);
  CHECK(table.rows.size() == 24);
  const std::string first = slurp(config.run_dir / "scores.csv");
  run_score(config);
  CHECK(slurp(config.run_dir / "scores.csv") == first);

  const auto eval_report = run_eval(config);
  CHECK(eval_report.auc.size() == 9);
  CHECK(fs::exists(config.run_dir / "report.txt"));

  const auto plots = run_plot(config);
  CHECK(plots.size() == 2);
  for (const auto& p : plots) CHECK(fs::file_size(p) > 1000);

  SUBCASE("decisions are emitted on request") {
    auto c = config;
    c.emit_decisions = true;
    c.app_threshold = 1e9;
    c.mot_threshold = -1.0;
    run_score(c);
    const auto text = slurp(c.run_dir / "decisions.csv");
    CHECK(text.rfind("clip_id,frame_index,app_flag,mot_flag,anomaly\n", 0) == 0);
    CHECK(text.find(",0,1,1\n") != std::string::npos);
  }
  SUBCASE("a changed corpus invalidates cached targets") {
    std::ofstream(config.corpus / "test" / "test_000.labels", std::ios::app) << "";
    fs::remove(config.corpus / "test" / "test_001" / "000011.png");
    std::ofstream(config.corpus / "test" / "test_001.labels", std::ios::trunc) << "0\n0\n0\n0\n0\n0\n1\n1\n1\n0\n0\n";
    CHECK_THROWS_WITH_AS(run_train(config, Branch::motion), doctest::Contains("gen-targets"), StageError);
  }
}

TEST_CASE("command line exit codes") {
  TempDir dir("cli");
  const std::string env = "TRANSLAD_RUN_DIR=" + (dir.path() / "run").string();
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("") == 2);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("eval --no-such-flag", env) == 2);
  CHECK(run_cli("eval --set post.nothing=1", env) == 2);
  CHECK(run_cli("train --branch sideways --set corpus=" + dir.path().string(), env) == 2);
  CHECK(run_cli("eval", "env -u TRANSLAD_RUN_DIR") == 2);
  CHECK(run_cli("eval --set corpus=" + dir.path().string(), env) == 1);
  CHECK(fs::exists(dir.path() / "run" / "config.txt"));
  CHECK(run_cli("synth --spec " + (dir.path() / "missing.txt").string() + " --out " + dir.path().string(), env) == 1);
}
