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

// Acceptance checks. Usage: translad_acceptance [1-8 ...] [--work DIR]
// Prints one PASS/FAIL line per criterion; exit code 0 iff all requested criteria pass.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <random>
#include <set>
#include <sstream>

#include "translad/pipeline.hpp"
#include "translad/scoring.hpp"
#include "translad/synth.hpp"

namespace fs = std::filesystem;
using namespace translad;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

fs::path g_work;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(precision);
  out << v;
  return out.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Image random_map(std::mt19937_64& rng, int h, int w, int c) {
  std::uniform_real_distribution<float> d(0.0f, 1.0f);
  Image img(h, w, c);
  for (auto& v : img.data) v = d(rng);
  return img;
}

// ---- 1: opening oracle ------------------------------------------------------------

Image clamped_filter(const Image& in, bool take_min) {
  Image out(in.height, in.width, 1);
  for (int y = 0; y < in.height; ++y) {
    for (int x = 0; x < in.width; ++x) {
      float best = in.at(y, x);
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const float v = in.at(std::clamp(y + dy, 0, in.height - 1), std::clamp(x + dx, 0, in.width - 1));
          best = take_min ? std::min(best, v) : std::max(best, v);
        }
      }
      out.at(y, x) = best;
    }
  }
  return out;
}

Outcome criterion_1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1);
  int mismatches = 0, not_idempotent = 0;
  const int trials = 200;
  for (int i = 0; i < trials; ++i) {
    Image img = random_map(rng, 16, 16, 1);
    if (i % 2) {
      for (auto& v : img.data) v = std::round(v * 4.0f) / 4.0f;
    }
    const scoring::AnomalyMap map{img, Branch::appearance, false};
    const auto r = scoring::refine(map, 3, 1);
    mismatches += r.values != clamped_filter(clamped_filter(img, true), false);
    not_idempotent += scoring::refine(r, 3, 1).values != r.values;
  }
  const double secs = seconds_since(t0);
  o.require(mismatches == 0, std::to_string(mismatches) + " maps differ from brute force");
  o.require(not_idempotent == 0, std::to_string(not_idempotent) + " maps not idempotent");
  o.require(secs < 10.0, "runtime " + fmt(secs, 2) + " s");
  o.detail = o.pass ? std::to_string(trials) + " random 16x16 maps exact and idempotent in " + fmt(secs, 3) + " s"
                    : o.detail;
  return o;
}

// ---- 2: Savitzky-Golay -------------------------------------------------------------

double line_weight(int window, int position, int j) {
  const int m = window / 2;
  const double s = static_cast<double>(m) * (m + 1) * (2 * m + 1) / 3.0;
  return 1.0 / window + static_cast<double>(position - m) * (j - m) / s;
}

Outcome criterion_2() {
  Outcome o;
  std::vector<double> constant(200, 1.75), ramp(200);
  for (int i = 0; i < 200; ++i) ramp[i] = 0.03 * i - 2.0;
  double worst_fixed = 0;
  for (const auto* s : {&constant, &ramp}) {
    const auto out = scoring::smooth_scores({"c", *s, scoring::Stage::refined}, 41, 1).scores;
    for (int i = 0; i < 200; ++i) worst_fixed = std::max(worst_fixed, std::abs(out[i] - (*s)[i]));
  }
  double worst_impulse = 0;
  for (int at = 0; at < 200; ++at) {
    std::vector<double> s(200, 0.0);
    s[at] = 1.0;
    const auto out = scoring::smooth_scores({"c", s, scoring::Stage::refined}, 41, 1).scores;
    for (int i = 0; i < 200; ++i) {
      const int start = std::clamp(i - 20, 0, 200 - 41);
      const int j = at - start;
      const double expected = (j >= 0 && j < 41) ? line_weight(41, i - start, j) : 0.0;
      worst_impulse = std::max(worst_impulse, std::abs(out[i] - expected));
    }
  }
  o.require(worst_fixed <= 1e-9, "fixed-point error " + std::to_string(worst_fixed));
  o.require(worst_impulse <= 1e-9, "impulse error " + std::to_string(worst_impulse));
  if (o.pass) {
    std::ostringstream d;
    d << "fixed points max err " << worst_fixed << ", impulse max err " << worst_impulse << " (window 41, order 1)";
    o.detail = d.str();
  }
  return o;
}

// ---- 3: AUC -------------------------------------------------------------------------

Outcome criterion_3() {
  Outcome o;
  std::mt19937_64 rng(3);
  int mismatches = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng() % 199;
    std::vector<double> s(n);
    std::vector<std::uint8_t> l(n);
    const unsigned levels = 1 + static_cast<unsigned>(rng() % 25);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng() % levels) / 7.0;
      l[i] = static_cast<std::uint8_t>(rng() % 2);
    }
    l[0] = 0;
    l[n - 1] = 1;
    long long twice = 0, pairs = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (l[i] && !l[j]) {
          twice += s[i] > s[j] ? 2 : (s[i] == s[j] ? 1 : 0);
          ++pairs;
        }
      }
    }
    const double mw = static_cast<double>(twice) / (2.0 * static_cast<double>(pairs));
    mismatches += eval::roc_auc(s, l).auc != mw;
  }
  const double perfect =
      eval::roc_auc(std::vector<double>{0.1, 0.2, 0.3, 0.7, 0.9}, std::vector<std::uint8_t>{0, 0, 0, 1, 1}).auc;
  const double ties = eval::roc_auc(std::vector<double>(9, 0.4), std::vector<std::uint8_t>{1, 0, 1, 0, 0, 1, 1, 0, 0}).auc;
  o.require(mismatches == 0, std::to_string(mismatches) + " of 500 differ from Mann-Whitney");
  o.require(perfect == 1.0, "perfect separation gave " + fmt(perfect));
  o.require(ties == 0.5, "all ties gave " + fmt(ties));
  if (o.pass) o.detail = "500 random instances equal Mann-Whitney exactly; perfect = 1.0; all-ties = 0.5";
  return o;
}

// ---- 4: patch losses --------------------------------------------------------------

Outcome criterion_4() {
  using namespace translator;
  Outcome o;
  torch::manual_seed(4);
  std::mt19937_64 rng(4);
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int b = 1 + static_cast<int>(rng() % 4), c = 1 + static_cast<int>(rng() % 4);
    const int h = 6 + static_cast<int>(rng() % 40), w = 6 + static_cast<int>(rng() % 40);
    const int k = trial % 3 == 0 ? 1 : (trial % 3 == 1 ? 4 : 9);
    const auto grid = PatchGrid::uniform(k, h, w);
    const auto out = torch::rand({b, c, h, w});
    const auto tgt = torch::rand({b, c, h, w});
    const auto od = out.to(torch::kDouble), td = tgt.to(torch::kDouble);
    for (bool squared : {true, false}) {
      double expected = 0;
      for (int bi = 0; bi < b; ++bi) {
        double best = -1;
        for (std::size_t r = 0; r + 1 < grid.row_bounds.size(); ++r) {
          for (std::size_t cc = 0; cc + 1 < grid.col_bounds.size(); ++cc) {
            const auto d = (od[bi] - td[bi])
                               .slice(1, grid.row_bounds[r], grid.row_bounds[r + 1])
                               .slice(2, grid.col_bounds[cc], grid.col_bounds[cc + 1]);
            const double v = (squared ? d.square() : d.abs()).mean().item<double>();
            best = std::max(best, v);
          }
        }
        expected += best / b;
      }
      const double got = (squared ? patch_loss_appearance(out, tgt, grid) : patch_loss_motion(out, tgt, grid)).item<double>();
      worst = std::max(worst, std::abs(got - expected));
      if (k == 1) {
        const double frame = squared ? torch::mse_loss(od, td).item<double>() : torch::l1_loss(od, td).item<double>();
        worst = std::max(worst, std::abs(got - frame));
      }
    }
  }
  o.require(worst <= 1e-6, "brute-force mismatch " + std::to_string(worst));

  ModelConfig mc;
  mc.base_width = 4;
  mc.blocks = {1, 1, 1, 1};
  mc.out_channels = 2;
  auto model = make_model(Branch::appearance, mc, 11);
  model.net->to(torch::kDouble);
  model.net->eval();
  const auto x = torch::rand({2, 3, 32, 32}, torch::kDouble);
  const auto y = torch::rand({2, 2, 32, 32}, torch::kDouble);
  const auto grid = PatchGrid::uniform(9, 32, 32);
  double worst_rel = 0;
  int checked = 0;
  for (Branch branch : {Branch::appearance, Branch::motion}) {
    auto loss = [&] { return patch_loss(branch, model.net->forward(x), y, grid); };
    model.net->zero_grad();
    loss().backward();
    for (auto& p : model.net->parameters()) {
      torch::NoGradGuard guard;
      auto flat = p.view(-1);
      const auto grad = p.grad().view(-1);
      const int64_t i = static_cast<int64_t>(rng() % static_cast<std::uint64_t>(flat.numel()));
      const double g = grad[i].item<double>();
      const double orig = flat[i].item<double>();
      flat[i] = orig + 1e-6;
      const double up = loss().item<double>();
      flat[i] = orig - 1e-6;
      const double down = loss().item<double>();
      flat[i] = orig;
      const double fd = (up - down) / 2e-6;
      worst_rel = std::max(worst_rel, std::abs(fd - g) / std::max({std::abs(fd), std::abs(g), 1e-7}));
      ++checked;
    }
  }
  o.require(worst_rel <= 1e-2, "finite-difference relative error " + std::to_string(worst_rel));
  if (o.pass) {
    std::ostringstream d;
    d << "patch-max losses vs brute force max err " << worst << " (k=1 included); gradient max rel err " << worst_rel
      << " over " << checked << " parameters";
    o.detail = d.str();
  }
  return o;
}

// ---- 5: targets ---------------------------------------------------------------------

Outcome criterion_5() {
  using namespace targets;
  Outcome o;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<float> uv(-12.0f, 12.0f);
  int mask_bad = 0, dir_bad = 0, onehot_bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int h = 1 + static_cast<int>(rng() % 64), w = 1 + static_cast<int>(rng() % 64);
    FlowField f(h, w);
    for (auto& v : f.uv.data) v = uv(rng);
    Mask mask(h, w);
    for (auto& m : mask.data) m = static_cast<std::uint8_t>(rng() % 2);
    const auto mag = flow_magnitude(f);
    const auto masked = mask_flow(mag, mask);
    for (std::size_t p = 0; p < mag.data.size(); ++p) {
      mask_bad += masked.data[p] != (mask.data[p] ? mag.data[p] : 0.0f);
    }
    FlowField neg(h, w), swapped(h, w), rot(h, w);
    for (int yy = 0; yy < h; ++yy) {
      for (int xx = 0; xx < w; ++xx) {
        neg.u(yy, xx) = -f.u(yy, xx);
        neg.v(yy, xx) = -f.v(yy, xx);
        swapped.u(yy, xx) = f.v(yy, xx);
        swapped.v(yy, xx) = f.u(yy, xx);
        rot.u(yy, xx) = -f.v(yy, xx);
        rot.v(yy, xx) = f.u(yy, xx);
      }
    }
    dir_bad += flow_magnitude(neg) != mag;
    dir_bad += flow_magnitude(swapped) != mag;
    dir_bad += flow_magnitude(rot) != mag;

    const int k = 2 + static_cast<int>(rng() % 8);
    LabelMap cls(h, w);
    for (auto& c : cls.data) c = static_cast<std::int32_t>(rng() % static_cast<unsigned>(k));
    onehot_bad += decode_seg_target(make_seg_target(SegOracleResult::from_class_map(cls), k)) != cls;
  }
  o.require(mask_bad == 0, std::to_string(mask_bad) + " masking mismatches");
  o.require(dir_bad == 0, std::to_string(dir_bad) + " direction-dependent magnitude maps");
  o.require(onehot_bad == 0, std::to_string(onehot_bad) + " one-hot round-trip failures");
  if (o.pass) o.detail = "100 random fields: masking, negation/rotation invariance and one-hot round-trip exact";
  return o;
}

// ---- end-to-end helpers ---------------------------------------------------------------

fs::path source_path(const std::string& rel) { return fs::path(TRANSLAD_SOURCE_DIR) / rel; }

void log_line(const std::string& s) { std::cerr << "  " << s << std::endl; }

RunConfig end_to_end(const fs::path& dir, const std::string& scene, const std::vector<std::string>& overrides,
                     bool reuse_corpus = false) {
  RunConfig config = RunConfig::load(source_path("configs/reference_run.txt"));
  config.corpus = dir / "corpus";
  config.run_dir = dir / "run";
  config.apply_overrides(overrides);
  if (!reuse_corpus || !fs::exists(config.corpus / "manifest.txt")) run_synth(source_path(scene), config.corpus, log_line);
  fs::remove_all(config.run_dir);
  run_gen_targets(config, {Branch::appearance, Branch::motion}, log_line);
  auto epoch_log = [](const std::string& s) {
    if (s.find("epoch") != std::string::npos) std::cerr << "  " << s << std::endl;
  };
  run_train(config, Branch::appearance, epoch_log);
  run_train(config, Branch::motion, epoch_log);
  run_score(config, log_line);
  return config;
}

std::set<std::string> clips_with(const RunConfig& config, synth::AnomalyKind kind) {
  std::set<std::string> out;
  for (const auto& entry : fs::directory_iterator(config.effective_test_corpus() / "test")) {
    if (!entry.is_directory()) continue;
    const auto id = entry.path().filename().string();
    const auto meta = synth::read_clip_meta(config.effective_test_corpus(), id);
    if (std::find(meta.anomaly_kinds.begin(), meta.anomaly_kinds.end(), kind) != meta.anomaly_kinds.end()) out.insert(id);
  }
  return out;
}

// ---- 6: end-to-end ------------------------------------------------------------------

Outcome criterion_6() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto config = end_to_end(g_work / "c6", "configs/reference_scene.txt", {});
  const auto report = run_eval(config);
  std::cerr << eval::format_report(report);
  const auto table = scoring::ScoreTable::load(scores_path(config));
  const auto labels = eval::load_test_labels(config.effective_test_corpus());

  eval::EvalOptions class_only, speed_only;
  class_only.clips = clips_with(config, synth::AnomalyKind::unseen_class);
  speed_only.clips = clips_with(config, synth::AnomalyKind::over_speed);
  const double fused = report.auc.at("fused.smoothed");
  const double app_all = report.auc.at("app.smoothed");
  const double mot_all = report.auc.at("mot.smoothed");
  const double app_class = eval::evaluate_run(table, labels, class_only).auc.at("app.smoothed");
  const double mot_speed = eval::evaluate_run(table, labels, speed_only).auc.at("mot.smoothed");
  const double secs = seconds_since(t0);

  o.require(!class_only.clips.empty() && !speed_only.clips.empty(), "scene lacks one anomaly family");
  o.require(fused >= 0.90, "fused smoothed AUC " + fmt(fused) + " < 0.90");
  o.require(app_class >= 0.85, "appearance AUC on class anomalies " + fmt(app_class) + " < 0.85");
  o.require(mot_speed >= 0.85, "motion AUC on speed anomalies " + fmt(mot_speed) + " < 0.85");
  o.require(fused >= std::max(app_all, mot_all) - 0.02, "fused below best single branch by more than 0.02");
  o.require(secs < 1800.0, "runtime " + fmt(secs, 0) + " s");
  std::ostringstream d;
  d << "fused " << fmt(fused) << ", app(class) " << fmt(app_class) << ", mot(speed) " << fmt(mot_speed) << ", app "
    << fmt(app_all) << ", mot " << fmt(mot_all) << ", " << fmt(secs, 0) << " s";
  o.detail = o.pass ? d.str() : o.detail + " [" + d.str() + "]";
  return o;
}

// ---- 7: denoising -------------------------------------------------------------------

Outcome criterion_7() {
  Outcome o;
  const auto config = end_to_end(g_work / "c7", "configs/reference_scene.txt", {"oracle.miss_rate=0.1"});
  const auto report = run_eval(config);
  std::cerr << eval::format_report(report);
  const double smoothed = report.auc.at("fused.smoothed");
  const double unsmoothed = report.auc.at("fused.refined");
  const double raw = report.auc.at("fused.raw");
  o.require(smoothed > unsmoothed, "smoothed " + fmt(smoothed) + " <= unsmoothed " + fmt(unsmoothed));
  std::ostringstream d;
  d << "miss rate 0.1: fused smoothed " << fmt(smoothed) << " > unsmoothed " << fmt(unsmoothed) << " (raw " << fmt(raw)
    << ")";
  o.detail = o.pass ? d.str() : o.detail;
  return o;
}

// ---- 8: reproducibility -------------------------------------------------------------

Outcome criterion_8() {
  Outcome o;
  const std::vector<std::string> reduced{"app.epochs=2", "mot.epochs=2"};
  const auto a = end_to_end(g_work / "c8a", "configs/smoke_scene.txt", reduced);
  const auto b = end_to_end(g_work / "c8b", "configs/smoke_scene.txt", reduced);
  const std::string sa = slurp(scores_path(a)), sb = slurp(scores_path(b));
  o.require(!sa.empty() && sa == sb, "score CSVs differ");
  o.require(slurp(a.run_dir / "calibration.txt") == slurp(b.run_dir / "calibration.txt"), "calibrations differ");
  for (const char* branch : {"app", "mot"}) {
    const auto ckpt = slurp(a.run_dir / branch / "latest");
    o.require(slurp(a.run_dir / branch / ckpt.substr(0, ckpt.find('\n'))) ==
                  slurp(b.run_dir / branch / ckpt.substr(0, ckpt.find('\n'))),
              std::string(branch) + " checkpoints differ");
  }

  // Post-processing alone, repeated on identical inputs.
  std::mt19937_64 rng(8);
  bool post_identical = true;
  for (int i = 0; i < 20; ++i) {
    const scoring::AnomalyMap m{random_map(rng, 64, 64, 1), Branch::motion, false};
    post_identical = post_identical && scoring::refine(m).values == scoring::refine(m).values;
    std::vector<double> s(150);
    for (auto& v : s) v = std::uniform_real_distribution<double>(0, 1)(rng);
    post_identical = post_identical && scoring::smooth_scores({"c", s, scoring::Stage::refined}).scores ==
                                           scoring::smooth_scores({"c", s, scoring::Stage::refined}).scores;
  }
  o.require(post_identical, "post-processing not bit-identical");
  if (o.pass) o.detail = "two seeded runs: score CSV, calibration and checkpoints byte-identical; post-processing bit-identical";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  g_work = fs::current_path() / "acceptance_work";
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--work" && i + 1 < argc) {
      g_work = argv[++i];
    } else if (arg.size() == 1 && arg[0] >= '1' && arg[0] <= '8') {
      selected.push_back(arg[0] - '0');
    } else {
      std::cerr << "usage: translad_acceptance [1-8 ...] [--work DIR]\n";
      return 2;
    }
  }
  if (selected.empty()) selected = {1, 2, 3, 4, 5, 6, 7, 8};
  torch::set_num_threads(1);

  const std::function<Outcome()> criteria[] = {criterion_1, criterion_2, criterion_3, criterion_4,
                                               criterion_5, criterion_6, criterion_7, criterion_8};
  bool all = true;
  for (int c : selected) {
    Outcome outcome;
    try {
      outcome = criteria[c - 1]();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    std::cout << "criterion " << c << ": " << (outcome.pass ? "PASS" : "FAIL") << " - " << outcome.detail << std::endl;
    all = all && outcome.pass;
  }
  return all ? 0 : 1;
}
