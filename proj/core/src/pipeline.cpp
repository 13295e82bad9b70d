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

#include "translad/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "translad/manifest.hpp"
#include "translad/plot.hpp"
#include "translad/scoring.hpp"
#include "translad/synth.hpp"

namespace fs = std::filesystem;

namespace translad {

namespace {

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

void train_to_kv(KvDocument& doc, const std::string& prefix, const translator::TrainConfig& t) {
  doc.set(prefix + ".lr0", fmt(t.lr0));
  doc.set(prefix + ".lr_halve_every", std::to_string(t.lr_halve_every));
  doc.set(prefix + ".epochs", std::to_string(t.epochs));
  doc.set(prefix + ".batch_size", std::to_string(t.batch_size));
}

void train_from_kv(const KvDocument& doc, const std::string& prefix, translator::TrainConfig& t) {
  t.lr0 = doc.get_double(prefix + ".lr0", t.lr0);
  t.lr_halve_every = static_cast<int>(doc.get_int(prefix + ".lr_halve_every", t.lr_halve_every));
  t.epochs = static_cast<int>(doc.get_int(prefix + ".epochs", t.epochs));
  t.batch_size = static_cast<int>(doc.get_int(prefix + ".batch_size", t.batch_size));
}

void log_line(const Logger& log, const std::string& msg) {
  if (log) log(msg);
}

}  // namespace

KvDocument RunConfig::to_kv() const {
  KvDocument doc;
  doc.set("corpus", corpus.string());
  doc.set("test_corpus", test_corpus.string());
  doc.set("run_dir", run_dir.string());
  doc.set("seed", std::to_string(seed));
  doc.set("side", std::to_string(side));
  doc.set("palette", join(palette, ","));
  doc.set("oracle", oracle);
  doc.set("oracle.miss_rate", fmt(oracle_miss_rate));
  doc.set("flow.estimator", flow_estimator);
  doc.set("flow.pyr_scale", fmt(farneback.pyr_scale));
  doc.set("flow.levels", std::to_string(farneback.levels));
  doc.set("flow.window", std::to_string(farneback.window));
  doc.set("flow.iterations", std::to_string(farneback.iterations));
  doc.set("flow.poly_n", std::to_string(farneback.poly_n));
  doc.set("flow.poly_sigma", fmt(farneback.poly_sigma));
  doc.set("targets.masking", target.masking ? "true" : "false");
  doc.set("targets.flow_cap", target.flow_cap > 0 ? fmt(target.flow_cap) : "auto");
  doc.set("targets.flow_cap_percentile", fmt(target.flow_cap_percentile));
  doc.set("targets.flow_cap_scale", fmt(target.flow_cap_scale));
  doc.set("model.base_width", std::to_string(model.base_width));
  doc.set("model.blocks", std::to_string(model.blocks[0]) + "," + std::to_string(model.blocks[1]) + "," +
                              std::to_string(model.blocks[2]) + "," + std::to_string(model.blocks[3]));
  doc.set("model.encoder_weights", encoder_weights.empty() ? "none" : encoder_weights.string());
  doc.set("train.patch_count", std::to_string(app_train.patch_count));
  train_to_kv(doc, "app", app_train);
  train_to_kv(doc, "mot", mot_train);
  doc.set("post.refine", refine ? "true" : "false");
  doc.set("post.refine_kernel", std::to_string(refine_kernel));
  doc.set("post.refine_iterations", std::to_string(refine_iterations));
  doc.set("post.sg_window", std::to_string(sg_window));
  doc.set("post.sg_polyorder", std::to_string(sg_polyorder));
  doc.set("post.decisions", emit_decisions ? "true" : "false");
  doc.set("post.app_threshold", fmt(app_threshold));
  doc.set("post.mot_threshold", fmt(mot_threshold));
  doc.set("score.batch_size", std::to_string(score_batch));
  doc.set("eval.per_clip_normalize", per_clip_normalize ? "true" : "false");
  doc.set("eval.macro", macro_auc ? "true" : "false");
  return doc;
}

const std::vector<std::string>& run_config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    const KvDocument doc = RunConfig{}.to_kv();
    for (const auto& [key, value] : doc.entries()) k.push_back(key);
    return k;
  }();
  return keys;
}

RunConfig RunConfig::from_kv(const KvDocument& doc) {
  const auto& known = run_config_keys();
  for (const auto& [key, value] : doc.entries()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) throw UsageError("unknown config key '" + key + "'");
  }
  if (!doc.blocks().empty()) throw UsageError("run config does not take blocks");
  RunConfig c;
  c.corpus = doc.get_string("corpus", "");
  c.test_corpus = doc.get_string("test_corpus", "");
  c.run_dir = doc.get_string("run_dir", "");
  c.seed = static_cast<std::uint64_t>(doc.get_int("seed", 0));
  c.side = static_cast<int>(doc.get_int("side", c.side));
  for (auto& p : split(doc.get_string("palette", ""), ',')) {
    if (!p.empty()) c.palette.push_back(std::move(p));
  }
  c.oracle = doc.get_string("oracle", c.oracle);
  c.oracle_miss_rate = doc.get_double("oracle.miss_rate", c.oracle_miss_rate);
  c.flow_estimator = doc.get_string("flow.estimator", c.flow_estimator);
  c.farneback.pyr_scale = doc.get_double("flow.pyr_scale", c.farneback.pyr_scale);
  c.farneback.levels = static_cast<int>(doc.get_int("flow.levels", c.farneback.levels));
  c.farneback.window = static_cast<int>(doc.get_int("flow.window", c.farneback.window));
  c.farneback.iterations = static_cast<int>(doc.get_int("flow.iterations", c.farneback.iterations));
  c.farneback.poly_n = static_cast<int>(doc.get_int("flow.poly_n", c.farneback.poly_n));
  c.farneback.poly_sigma = doc.get_double("flow.poly_sigma", c.farneback.poly_sigma);
  c.target.masking = doc.get_bool("targets.masking", c.target.masking);
  const std::string cap = doc.get_string("targets.flow_cap", "auto");
  c.target.flow_cap = cap == "auto" ? 0.0 : parse_double("targets.flow_cap", cap);
  c.target.flow_cap_percentile = doc.get_double("targets.flow_cap_percentile", c.target.flow_cap_percentile);
  c.target.flow_cap_scale = doc.get_double("targets.flow_cap_scale", c.target.flow_cap_scale);
  c.model.base_width = static_cast<int>(doc.get_int("model.base_width", c.model.base_width));
  if (auto blocks = doc.find("model.blocks")) {
    const auto parts = split(*blocks, ',');
    if (parts.size() != 4) throw UsageError("model.blocks needs four comma-separated counts");
    for (std::size_t i = 0; i < 4; ++i) c.model.blocks[i] = static_cast<int>(parse_int("model.blocks", parts[i]));
  }
  const std::string weights = doc.get_string("model.encoder_weights", "none");
  c.encoder_weights = weights == "none" ? fs::path() : fs::path(weights);
  train_from_kv(doc, "app", c.app_train);
  train_from_kv(doc, "mot", c.mot_train);
  c.app_train.patch_count = c.mot_train.patch_count = static_cast<int>(doc.get_int("train.patch_count", 9));
  c.app_train.seed = c.seed * 2 + 1;
  c.mot_train.seed = c.seed * 2 + 2;
  c.refine = doc.get_bool("post.refine", c.refine);
  c.refine_kernel = static_cast<int>(doc.get_int("post.refine_kernel", c.refine_kernel));
  c.refine_iterations = static_cast<int>(doc.get_int("post.refine_iterations", c.refine_iterations));
  c.sg_window = static_cast<int>(doc.get_int("post.sg_window", c.sg_window));
  c.sg_polyorder = static_cast<int>(doc.get_int("post.sg_polyorder", c.sg_polyorder));
  c.emit_decisions = doc.get_bool("post.decisions", c.emit_decisions);
  c.app_threshold = doc.get_double("post.app_threshold", c.app_threshold);
  c.mot_threshold = doc.get_double("post.mot_threshold", c.mot_threshold);
  c.score_batch = static_cast<int>(doc.get_int("score.batch_size", c.score_batch));
  c.per_clip_normalize = doc.get_bool("eval.per_clip_normalize", c.per_clip_normalize);
  c.macro_auc = doc.get_bool("eval.macro", c.macro_auc);

  if (c.side < 8) throw UsageError("side must be >= 8");
  if (c.oracle_miss_rate < 0 || c.oracle_miss_rate > 1) throw UsageError("oracle.miss_rate must lie in [0, 1]");
  if (c.refine_kernel < 1 || c.refine_kernel % 2 == 0) throw UsageError("post.refine_kernel must be odd and >= 1");
  if (c.sg_window < 1 || c.sg_window % 2 == 0) throw UsageError("post.sg_window must be odd and >= 1");
  if (c.sg_polyorder < 0 || c.sg_polyorder >= c.sg_window) throw UsageError("post.sg_polyorder must be in [0, window)");
  if (c.score_batch < 1) throw UsageError("score.batch_size must be >= 1");
  return c;
}

RunConfig RunConfig::load(const fs::path& path) {
  try {
    return from_kv(KvDocument::load(path));
  } catch (const UsageError&) {
    throw;
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

void RunConfig::apply_overrides(const std::vector<std::string>& assignments) {
  KvDocument doc = to_kv();
  for (const auto& a : assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + a + "'");
    const std::string key = trim(std::string_view(a).substr(0, eq));
    const auto& known = run_config_keys();
    if (std::find(known.begin(), known.end(), key) == known.end()) throw UsageError("unknown config key '" + key + "'");
    doc.set(key, trim(std::string_view(a).substr(eq + 1)));
  }
  try {
    *this = from_kv(doc);
  } catch (const UsageError&) {
    throw;
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

void snapshot_config(const RunConfig& config) {
  if (config.run_dir.empty()) throw UsageError("no run directory (use --set run_dir=... or TRANSLAD_RUN_DIR)");
  config.to_kv().save(config.run_dir / "config.txt");
}

fs::path scores_path(const RunConfig& config) { return config.run_dir / "scores.csv"; }

Corpus load_run_corpus(const RunConfig& config, bool load_test) {
  if (config.corpus.empty()) throw UsageError("no corpus configured (use --set corpus=PATH)");
  if (!fs::is_directory(config.corpus)) {
    throw StageError("corpus " + config.corpus.string() + " does not exist; run `synth` first or fix the path");
  }
  IngestConfig ingest;
  ingest.side = config.side;
  ingest.class_palette = config.palette;
  const bool separate_test = !config.test_corpus.empty() && config.test_corpus != config.corpus;
  ingest.load_test = load_test && !separate_test;
  Corpus corpus = ingest_corpus(config.corpus, ingest);
  if (separate_test) {
    corpus.test_clips.clear();
    if (load_test) {
      IngestConfig test_ingest = ingest;
      test_ingest.load_test = true;
      test_ingest.class_palette = corpus.class_palette;
      Corpus other = ingest_corpus(config.test_corpus, test_ingest);
      for (auto& clip : other.test_clips) {
        if (corpus.find_clip(clip.clip_id)) throw Error("test clip id '" + clip.clip_id + "' collides with a training clip");
        corpus.test_clips.push_back(std::move(clip));
      }
    }
  }
  return corpus;
}

namespace {

// Dispatches to the oracle tree (train corpus or test corpus) that knows the clip.
class RunOracle final : public targets::SegmentationOracle {
 public:
  explicit RunOracle(const RunConfig& config) {
    if (config.oracle != "analytic") {
      throw UsageError("unknown oracle '" + config.oracle + "' (supported: analytic)");
    }
    add(config.corpus, config);
    if (!config.test_corpus.empty() && config.test_corpus != config.corpus) add(config.test_corpus, config);
  }
  targets::SegOracleResult segment(const Frame& frame) const override {
    for (const auto& [root, oracle] : oracles_) {
      if (fs::exists(root / "oracle" / frame.clip_id)) return oracle->segment(frame);
    }
    return oracles_.front().second->segment(frame);
  }

 private:
  void add(const fs::path& root, const RunConfig& config) {
    oracles_.emplace_back(root, std::make_unique<synth::AnalyticSegmentationOracle>(root, config.oracle_miss_rate, config.seed));
  }
  std::vector<std::pair<fs::path, std::unique_ptr<synth::AnalyticSegmentationOracle>>> oracles_;
};

class RunAnalyticFlow final : public targets::FlowEstimator {
 public:
  explicit RunAnalyticFlow(const RunConfig& config) {
    roots_.push_back(config.corpus);
    if (!config.test_corpus.empty()) roots_.push_back(config.test_corpus);
  }
  targets::FlowField estimate(const Frame& prev, const Frame& curr) const override {
    for (const auto& root : roots_) {
      if (fs::exists(root / "oracle" / curr.clip_id)) return synth::AnalyticFlowEstimator(root).estimate(prev, curr);
    }
    return synth::AnalyticFlowEstimator(roots_.front()).estimate(prev, curr);
  }

 private:
  std::vector<fs::path> roots_;
};

std::unique_ptr<targets::FlowEstimator> make_estimator(const RunConfig& config) {
  if (config.flow_estimator == "farneback") return std::make_unique<targets::FarnebackEstimator>(config.farneback);
  if (config.flow_estimator == "analytic") return std::make_unique<RunAnalyticFlow>(config);
  throw UsageError("unknown flow estimator '" + config.flow_estimator + "' (supported: farneback, analytic)");
}

Manifest run_manifest(const RunConfig& config) {
  Manifest m = Manifest::scan(config.corpus);
  if (!config.test_corpus.empty() && config.test_corpus != config.corpus) {
    std::erase_if(m.entries, [](const ManifestEntry& e) { return e.split == Split::test; });
    for (auto& e : Manifest::scan(config.test_corpus).entries) {
      if (e.split == Split::test) m.entries.push_back(std::move(e));
    }
  }
  return m;
}

void require_fresh_targets(const RunConfig& config) {
  const TargetCache cache(config.run_dir);
  const fs::path saved = cache.dir() / "manifest.txt";
  if (!fs::exists(saved)) throw StageError("no targets in " + config.run_dir.string() + "; run `gen-targets` first");
  if (!(Manifest::load(saved) == run_manifest(config))) {
    throw StageError("corpus changed since targets were generated; run `gen-targets` again");
  }
}

}  // namespace

void run_synth(const fs::path& spec_path, const fs::path& out_root, const Logger& log) {
  const auto spec = synth::SceneSpec::load(spec_path);
  synth::generate(spec, out_root);
  log_line(log, "synth: wrote " + std::to_string(spec.train.clips) + " train and " + std::to_string(spec.test.clips) +
                    " test clips to " + out_root.string());
}

TargetReport run_gen_targets(const RunConfig& config, const std::vector<Branch>& branches, const Logger& log) {
  snapshot_config(config);
  const Corpus corpus = load_run_corpus(config, true);
  const RunOracle oracle(config);
  const auto estimator = make_estimator(config);
  const TargetCache cache(config.run_dir);
  const TargetReport report = generate_targets(corpus, branches, oracle, *estimator, config.target, cache);
  run_manifest(config).save(cache.dir() / "manifest.txt");
  std::ostringstream msg;
  msg << "gen-targets: " << report.frames << " frames, " << report.oracle_misses << " oracle misses";
  if (std::find(branches.begin(), branches.end(), Branch::motion) != branches.end()) msg << ", flow cap " << report.flow_cap;
  log_line(log, msg.str());
  return report;
}

translator::TrainResult run_train(const RunConfig& config, Branch branch, const Logger& log) {
  snapshot_config(config);
  require_fresh_targets(config);
  const Corpus corpus = load_run_corpus(config, false);
  const TargetCache cache(config.run_dir);
  const auto missing = cache.missing(branch, corpus.train_clips);
  if (!missing.empty()) {
    throw StageError(std::string("no ") + to_string(branch) + " targets; run `gen-targets --branch " +
                     directory_name(branch) + "` first");
  }
  translator::ModelConfig mc = config.model;
  mc.out_channels = branch == Branch::appearance ? corpus.palette_size() : 1;
  const auto& tc = config.train_config(branch);
  auto model = translator::make_model(branch, mc, tc.seed);
  if (!config.encoder_weights.empty()) translator::load_encoder(model, config.encoder_weights);
  return translator::train(model, corpus, cache, tc, config.run_dir, log);
}

namespace {

struct BranchScores {
  std::vector<double> raw, refined;
};

BranchScores score_clip(translator::TranslatorModel& model, const Clip& clip, const TargetCache& cache,
                        const RunConfig& config) {
  BranchScores out;
  for (std::size_t start = 0; start < clip.frames.size(); start += static_cast<std::size_t>(config.score_batch)) {
    const std::size_t end = std::min(clip.frames.size(), start + static_cast<std::size_t>(config.score_batch));
    std::vector<const Frame*> batch;
    for (std::size_t i = start; i < end; ++i) batch.push_back(&clip.frames[i]);
    const auto outputs = translator::translate_batch(model, batch);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const Image target = cache.read(model.branch, clip.clip_id, batch[i]->index);
      const auto map = scoring::anomaly_map(outputs[i], target, model.branch);
      out.raw.push_back(scoring::frame_score(map));
      out.refined.push_back(config.refine
                                ? scoring::frame_score(scoring::refine(map, config.refine_kernel, config.refine_iterations))
                                : out.raw.back());
    }
  }
  return out;
}

struct ClipScores {
  const Clip* clip;
  BranchScores app, mot;
  std::vector<double> app_smooth, mot_smooth;
};

std::vector<double> smooth(const std::string& id, const std::vector<double>& s, const RunConfig& config) {
  return scoring::smooth_scores({id, s, scoring::Stage::refined}, config.sg_window, config.sg_polyorder).scores;
}

}  // namespace

scoring::ScoreTable run_score(const RunConfig& config, const Logger& log) {
  snapshot_config(config);
  auto app = translator::load_latest(config.run_dir, Branch::appearance);
  auto mot = translator::load_latest(config.run_dir, Branch::motion);
  require_fresh_targets(config);
  const Corpus corpus = load_run_corpus(config, true);
  const TargetCache cache(config.run_dir);
  for (Branch b : {Branch::appearance, Branch::motion}) {
    if (!cache.missing(b, corpus.test_clips).empty() || !cache.missing(b, corpus.train_clips).empty()) {
      throw StageError(std::string("incomplete ") + to_string(b) + " targets; run `gen-targets` first");
    }
  }

  auto score_all = [&](const std::vector<Clip>& clips) {
    std::vector<ClipScores> all;
    for (const auto& clip : clips) {
      ClipScores cs{&clip, score_clip(app, clip, cache, config), score_clip(mot, clip, cache, config), {}, {}};
      cs.app_smooth = smooth(clip.clip_id, cs.app.refined, config);
      cs.mot_smooth = smooth(clip.clip_id, cs.mot.refined, config);
      all.push_back(std::move(cs));
    }
    return all;
  };
  const auto train_scores = score_all(corpus.train_clips);
  log_line(log, "score: scored " + std::to_string(corpus.train_clips.size()) + " training clips for calibration");
  const auto test_scores = score_all(corpus.test_clips);

  // Calibration per stage from the training split.
  auto stats = [&](auto getter) {
    std::vector<double> v;
    for (const auto& cs : train_scores) {
      const auto& s = getter(cs);
      v.insert(v.end(), s.begin(), s.end());
    }
    return scoring::BranchStats::of(v);
  };
  const scoring::BranchCalibration cal_raw{stats([](const ClipScores& c) -> const auto& { return c.app.raw; }),
                                           stats([](const ClipScores& c) -> const auto& { return c.mot.raw; })};
  const scoring::BranchCalibration cal_refined{stats([](const ClipScores& c) -> const auto& { return c.app.refined; }),
                                               stats([](const ClipScores& c) -> const auto& { return c.mot.refined; })};
  const scoring::BranchCalibration cal_smooth{stats([](const ClipScores& c) -> const auto& { return c.app_smooth; }),
                                              stats([](const ClipScores& c) -> const auto& { return c.mot_smooth; })};
  {
    KvDocument doc;
    const std::pair<const char*, const scoring::BranchCalibration*> stages[] = {
        {"raw", &cal_raw}, {"refined", &cal_refined}, {"smoothed", &cal_smooth}};
    for (const auto& [name, cal] : stages) {
      doc.set(std::string("app.") + name + ".mean", fmt(cal->appearance.mean));
      doc.set(std::string("app.") + name + ".std", fmt(cal->appearance.stddev));
      doc.set(std::string("mot.") + name + ".mean", fmt(cal->motion.mean));
      doc.set(std::string("mot.") + name + ".std", fmt(cal->motion.stddev));
    }
    doc.save(config.run_dir / "calibration.txt");
  }

  auto build_table = [&](const std::vector<ClipScores>& all, bool with_labels) {
    scoring::ScoreTable table;
    for (const auto& cs : all) {
      const auto& id = cs.clip->clip_id;
      using scoring::ScoreSeries;
      using scoring::Stage;
      const auto f_raw = scoring::fuse({id, cs.app.raw, Stage::raw}, {id, cs.mot.raw, Stage::raw}, cal_raw);
      const auto f_ref = scoring::fuse({id, cs.app.refined, Stage::refined}, {id, cs.mot.refined, Stage::refined}, cal_refined);
      const auto f_smo = scoring::fuse({id, cs.app_smooth, Stage::smoothed}, {id, cs.mot_smooth, Stage::smoothed}, cal_smooth);
      for (std::size_t i = 0; i < cs.clip->frames.size(); ++i) {
        scoring::ScoreRow r;
        r.clip_id = id;
        r.frame_index = static_cast<int>(i);
        r.app_raw = cs.app.raw[i];
        r.mot_raw = cs.mot.raw[i];
        r.app_refined = cs.app.refined[i];
        r.mot_refined = cs.mot.refined[i];
        r.app_smooth = cs.app_smooth[i];
        r.mot_smooth = cs.mot_smooth[i];
        r.fused_raw = f_raw.scores[i];
        r.fused_refined = f_ref.scores[i];
        r.fused = f_smo.scores[i];
        if (with_labels && cs.clip->labels) r.label = (*cs.clip->labels)[i];
        table.rows.push_back(std::move(r));
      }
    }
    return table;
  };

  build_table(train_scores, false).save(config.run_dir / "train_scores.csv");
  auto table = build_table(test_scores, true);
  table.save(scores_path(config));

  if (config.emit_decisions) {
    std::ofstream out(config.run_dir / "decisions.csv", std::ios::trunc);
    out << "clip_id,frame_index,app_flag,mot_flag,anomaly\n";
    for (const auto& cs : test_scores) {
      const auto d = scoring::decide({cs.clip->clip_id, cs.app.raw, scoring::Stage::raw},
                                     {cs.clip->clip_id, cs.mot.raw, scoring::Stage::raw},
                                     {config.app_threshold, config.mot_threshold});
      for (std::size_t i = 0; i < d.anomaly.size(); ++i) {
        out << cs.clip->clip_id << "," << i << "," << int(d.appearance[i]) << "," << int(d.motion[i]) << ","
            << int(d.anomaly[i]) << "\n";
      }
    }
  }
  log_line(log, "score: wrote " + std::to_string(table.rows.size()) + " rows to " + scores_path(config).string());
  return table;
}

eval::Report run_eval(const RunConfig& config, const Logger& log) {
  snapshot_config(config);
  if (!fs::exists(scores_path(config))) throw StageError("no scores in " + config.run_dir.string() + "; run `score` first");
  const auto table = scoring::ScoreTable::load(scores_path(config));
  const auto labels = eval::load_test_labels(config.effective_test_corpus());
  eval::EvalOptions options;
  options.per_clip_normalize = config.per_clip_normalize;
  options.macro = config.macro_auc;
  const auto report = eval::evaluate_run(table, labels, options);
  eval::write_report(report, config.run_dir / "report.txt");
  log_line(log, eval::format_report(report));
  return report;
}

std::vector<fs::path> run_plot(const RunConfig& config, const Logger& log) {
  snapshot_config(config);
  if (!fs::exists(scores_path(config))) throw StageError("no scores in " + config.run_dir.string() + "; run `score` first");
  const auto table = scoring::ScoreTable::load(scores_path(config));
  std::map<std::string, std::vector<const scoring::ScoreRow*>> by_clip;
  for (const auto& r : table.rows) by_clip[r.clip_id].push_back(&r);
  std::vector<fs::path> written;
  for (auto& [clip_id, rows] : by_clip) {
    std::sort(rows.begin(), rows.end(), [](auto* a, auto* b) { return a->frame_index < b->frame_index; });
    PlotCurve app_curve{"appearance", {}, 220, 30, 30};
    PlotCurve mot_curve{"motion", {}, 30, 60, 220};
    PlotCurve fused_curve{"fused", {}, 40, 40, 40};
    std::vector<std::uint8_t> labels;
    for (const auto* r : rows) {
      app_curve.values.push_back(r->app_smooth);
      mot_curve.values.push_back(r->mot_smooth);
      fused_curve.values.push_back(r->fused);
      labels.push_back(r->label.value_or(0) ? 1 : 0);
    }
    const fs::path out = config.run_dir / "plots" / (clip_id + ".png");
    plot_scores(out, clip_id + " anomaly scores", {app_curve, mot_curve, fused_curve}, labels);
    written.push_back(out);
  }
  log_line(log, "plot: wrote " + std::to_string(written.size()) + " images to " + (config.run_dir / "plots").string());
  return written;
}

}  // namespace translad
