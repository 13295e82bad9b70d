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

#include <random>

#include <benchmark/benchmark.h>

#include "translad/eval.hpp"
#include "translad/scoring.hpp"
#include "translad/translator.hpp"

namespace {

using namespace translad;

Image random_image(int side, int channels, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> d(0.0f, 1.0f);
  Image img(side, side, channels);
  for (auto& v : img.data) v = d(rng);
  return img;
}

void BM_Refine(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const scoring::AnomalyMap map{random_image(side, 1, 1), Branch::appearance, false};
  for (auto _ : state) benchmark::DoNotOptimize(scoring::refine(map));
  state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(BM_Refine)->Arg(64)->Arg(224);

void BM_AnomalyMap(benchmark::State& state) {
  const Image out = random_image(224, 3, 2), tgt = random_image(224, 3, 3);
  for (auto _ : state) benchmark::DoNotOptimize(scoring::anomaly_map(out, tgt, Branch::appearance));
}
BENCHMARK(BM_AnomalyMap);

void BM_SmoothScores(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> d;
  scoring::ScoreSeries s{"clip", std::vector<double>(static_cast<std::size_t>(state.range(0))), scoring::Stage::refined};
  for (auto& v : s.scores) v = d(rng);
  for (auto _ : state) benchmark::DoNotOptimize(scoring::smooth_scores(s, 41, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SmoothScores)->Arg(240)->Arg(10000);

void BM_RocAuc(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d;
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> scores(n);
  std::vector<std::uint8_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    scores[i] = d(rng);
    labels[i] = static_cast<std::uint8_t>(i % 3 == 0);
  }
  for (auto _ : state) benchmark::DoNotOptimize(eval::roc_auc(scores, labels).auc);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RocAuc)->Arg(1000)->Arg(100000);

void BM_PatchLoss(benchmark::State& state) {
  torch::manual_seed(6);
  const auto out = torch::rand({8, 3, 224, 224});
  const auto tgt = torch::rand({8, 3, 224, 224});
  const auto grid = translator::PatchGrid::uniform(static_cast<int>(state.range(0)), 224, 224);
  for (auto _ : state) benchmark::DoNotOptimize(translator::patch_loss_appearance(out, tgt, grid).item<float>());
}
BENCHMARK(BM_PatchLoss)->Arg(1)->Arg(9);

}  // namespace

BENCHMARK_MAIN();
