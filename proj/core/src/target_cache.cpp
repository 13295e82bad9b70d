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

#include "translad/target_cache.hpp"

#include <algorithm>
#include <sstream>

#include "translad/kv.hpp"
#include "translad/map_io.hpp"

namespace fs = std::filesystem;

namespace translad {

const char* to_string(Branch branch) { return branch == Branch::appearance ? "appearance" : "motion"; }
const char* directory_name(Branch branch) { return branch == Branch::appearance ? "app" : "mot"; }

Branch parse_branch(const std::string& text) {
  if (text == "app" || text == "appearance") return Branch::appearance;
  if (text == "mot" || text == "motion") return Branch::motion;
  throw Error("unknown branch '" + text + "' (expected app or mot)");
}

fs::path TargetCache::path(Branch branch, const std::string& clip_id, int index) const {
  return dir() / directory_name(branch) / clip_id / (frame_stem(index) + ".bin");
}

bool TargetCache::has(Branch branch, const std::string& clip_id, int index) const {
  return fs::exists(path(branch, clip_id, index));
}

Image TargetCache::read(Branch branch, const std::string& clip_id, int index) const {
  const fs::path p = path(branch, clip_id, index);
  if (!fs::exists(p)) {
    throw StageError("no " + std::string(to_string(branch)) + " target for " + clip_id + "/" + frame_stem(index) +
                     "; run `gen-targets` first");
  }
  return read_map(p);
}

void TargetCache::write(Branch branch, const std::string& clip_id, int index, const Image& target) const {
  write_map(path(branch, clip_id, index), target);
}

std::vector<std::string> TargetCache::missing(Branch branch, const std::vector<Clip>& clips) const {
  std::vector<std::string> out;
  for (const auto& clip : clips) {
    for (std::size_t i = 0; i < clip.frames.size(); ++i) {
      if (!has(branch, clip.clip_id, static_cast<int>(i))) out.push_back(clip.clip_id + "/" + frame_stem(static_cast<int>(i)));
    }
  }
  return out;
}

double TargetCache::flow_cap() const {
  const fs::path meta = dir() / "meta.txt";
  if (!fs::exists(meta)) throw StageError("motion targets missing; run `gen-targets` first");
  const auto doc = KvDocument::load(meta);
  if (!doc.has("flow_cap")) throw StageError("motion targets missing; run `gen-targets --branch mot` first");
  return doc.get_double("flow_cap", 0.0);
}

TargetReport generate_targets(const Corpus& corpus, const std::vector<Branch>& branches,
                              const targets::SegmentationOracle& oracle, const targets::FlowEstimator& estimator,
                              const TargetOptions& options, const TargetCache& cache) {
  const bool want_app = std::find(branches.begin(), branches.end(), Branch::appearance) != branches.end();
  const bool want_mot = std::find(branches.begin(), branches.end(), Branch::motion) != branches.end();
  for (Branch b : branches) {
    if (fs::exists(cache.dir() / directory_name(b))) fs::remove_all(cache.dir() / directory_name(b));
  }

  TargetReport report;
  std::vector<float> train_magnitudes;
  for (Split split : {Split::train, Split::test}) {
    for (const auto& clip : corpus.clips(split)) {
      for (std::size_t i = 0; i < clip.frames.size(); ++i) {
        const Frame& frame = clip.frames[i];
        const auto seg = targets::segment(frame, oracle);
        report.oracle_misses += seg.missed ? 1 : 0;
        ++report.frames;
        if (want_app) {
          cache.write(Branch::appearance, clip.clip_id, frame.index, targets::make_seg_target(seg, corpus.palette_size()));
        }
        if (want_mot) {
          Image magnitude = targets::flow_magnitude(targets::clip_flow(clip, static_cast<int>(i), estimator));
          if (options.masking) magnitude = targets::mask_flow(magnitude, seg.instance_mask);
          if (split == Split::train) {
            for (std::size_t p = 0; p < magnitude.data.size(); ++p) {
              if (!options.masking || seg.instance_mask.data[p]) train_magnitudes.push_back(magnitude.data[p]);
            }
          }
          // Unscaled for now; rescaled once the cap is known.
          cache.write(Branch::motion, clip.clip_id, frame.index, magnitude);
        }
      }
    }
  }

  KvDocument meta;
  const fs::path meta_path = cache.dir() / "meta.txt";
  if (fs::exists(meta_path)) meta = KvDocument::load(meta_path);
  meta.set("palette_size", std::to_string(corpus.palette_size()));
  if (want_mot) {
    double cap = options.flow_cap;
    if (cap <= 0.0) {
      const double base = train_magnitudes.empty() ? 0.0 : targets::percentile(train_magnitudes, options.flow_cap_percentile);
      cap = base > 1e-6 ? base * options.flow_cap_scale : 1.0;
    }
    for (Split split : {Split::train, Split::test}) {
      for (const auto& clip : corpus.clips(split)) {
        for (const auto& frame : clip.frames) {
          cache.write(Branch::motion, clip.clip_id, frame.index,
                      targets::scale_flow_target(cache.read(Branch::motion, clip.clip_id, frame.index), cap));
        }
      }
    }
    report.flow_cap = cap;
    std::ostringstream cap_text;
    cap_text.precision(17);
    cap_text << cap;
    meta.set("flow_cap", cap_text.str());
    meta.set("masking", options.masking ? "true" : "false");
  }
  meta.save(meta_path);
  return report;
}

}  // namespace translad
