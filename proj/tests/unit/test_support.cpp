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

#include "test_support.hpp"

#include <atomic>
#include <unistd.h>

namespace fs = std::filesystem;

namespace translad::testing {

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          ("translad_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

Image random_image(std::mt19937_64& rng, int h, int w, int c, float lo, float hi) {
  std::uniform_real_distribution<float> dist(lo, hi);
  Image img(h, w, c);
  for (auto& v : img.data) v = dist(rng);
  return img;
}

synth::SceneSpec tiny_scene(int canvas, int train_clips, int test_clips, int frames) {
  synth::SceneSpec spec;
  spec.name = "tiny";
  spec.canvas = canvas;
  spec.seed = 3;
  spec.noise = 0.01;
  spec.normal_speed_min = 1.0;
  spec.normal_speed_max = 2.0;
  spec.train = {train_clips, frames};
  spec.test = {test_clips, frames};
  synth::ActorSpec circle;
  circle.size = canvas / 6.0;
  circle.speed = 1.5;
  circle.count = 1;
  spec.actors.push_back(circle);
  synth::AnomalyInjection square;
  square.kind = synth::AnomalyKind::unseen_class;
  square.shape = synth::Shape::square;
  square.size = canvas / 6.0;
  square.speed = 1.5;
  square.clip = 0;
  square.start = frames / 3;
  square.length = frames / 3;
  spec.anomalies.push_back(square);
  if (test_clips > 1) {
    synth::AnomalyInjection fast;
    fast.kind = synth::AnomalyKind::over_speed;
    fast.shape = synth::Shape::circle;
    fast.size = canvas / 6.0;
    fast.speed = 1.5;
    fast.speed_multiplier = 3.0;
    fast.clip = 1;
    fast.start = frames / 2;
    fast.length = frames / 4;
    spec.anomalies.push_back(fast);
  }
  return spec;
}

TinyCorpus::TinyCorpus(const std::string& tag, const synth::SceneSpec& spec, double miss_rate)
    : dir(tag), cache(dir.path() / "run") {
  synth::generate(spec, root());
  IngestConfig ingest;
  ingest.side = spec.canvas;
  corpus = ingest_corpus(root(), ingest);
  const synth::AnalyticSegmentationOracle oracle(root(), miss_rate, 1);
  const synth::AnalyticFlowEstimator flow(root());
  report = generate_targets(corpus, {Branch::appearance, Branch::motion}, oracle, flow, TargetOptions{}, cache);
}

}  // namespace translad::testing
