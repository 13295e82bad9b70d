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

#include "translad/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <cstring>
#include <set>
#include <sstream>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "translad/manifest.hpp"
#include "translad/map_io.hpp"

namespace fs = std::filesystem;

namespace translad::synth {

const char* to_string(Shape shape) {
  switch (shape) {
    case Shape::circle: return "circle";
    case Shape::square: return "square";
    case Shape::triangle: return "triangle";
  }
  return "?";
}

const char* to_string(AnomalyKind kind) { return kind == AnomalyKind::unseen_class ? "class" : "speed"; }

Shape parse_shape(const std::string& text) {
  if (text == "circle") return Shape::circle;
  if (text == "square") return Shape::square;
  if (text == "triangle") return Shape::triangle;
  throw Error("unknown shape '" + text + "' (expected circle, square or triangle)");
}

namespace {

Trajectory parse_trajectory(const std::string& text) {
  if (text == "linear") return Trajectory::linear;
  if (text == "bounce") return Trajectory::bounce;
  throw Error("unknown trajectory '" + text + "' (expected linear or bounce)");
}

const char* trajectory_name(Trajectory t) { return t == Trajectory::linear ? "linear" : "bounce"; }

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) {
  return splitmix64(splitmix64(splitmix64(seed ^ splitmix64(a)) ^ b) ^ c);
}

double half_extent(Shape shape, double size) {
  return shape == Shape::triangle ? size / std::sqrt(3.0) : size / 2.0;
}

struct ActorInstance {
  Shape shape;
  int class_index;
  double size;
  double x0, y0;   // position at first_frame
  double vx, vy;   // px per frame
  Trajectory trajectory;
  int first_frame;
  int end_frame;   // exclusive
  bool anomalous;
};

struct State {
  double x, y, vx, vy;
};

// Reflects a coordinate into [lo, hi]; returns position and velocity sign.
std::pair<double, double> fold(double raw, double lo, double hi) {
  const double span = hi - lo;
  double m = std::fmod(raw - lo, 2.0 * span);
  if (m < 0) m += 2.0 * span;
  return m <= span ? std::pair{lo + m, 1.0} : std::pair{lo + 2.0 * span - m, -1.0};
}

State state_at(const ActorInstance& a, int frame, const SceneSpec& spec) {
  const double t = frame - a.first_frame;
  const double rx = a.x0 + a.vx * t;
  const double ry = a.y0 + a.vy * t;
  if (a.trajectory == Trajectory::bounce) {
    const double h = half_extent(a.shape, a.size);
    const auto [x, sx] = fold(rx, h, spec.canvas - h);
    const auto [y, sy] = fold(ry, h, spec.canvas - h);
    return {x, y, a.vx * sx, a.vy * sy};
  }
  if (spec.wrap) {
    const double c = spec.canvas;
    return {rx - c * std::floor(rx / c), ry - c * std::floor(ry / c), a.vx, a.vy};
  }
  return {rx, ry, a.vx, a.vy};
}

ActorInstance place(std::mt19937_64& rng, const SceneSpec& spec, Shape shape, double size, double speed,
                    Trajectory trajectory, int first, int end, bool anomalous) {
  const double h = half_extent(shape, size);
  std::uniform_real_distribution<double> pos(h, spec.canvas - h);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const double x0 = pos(rng);
  const double y0 = pos(rng);
  const double theta = angle(rng);
  return ActorInstance{shape, spec.class_index(shape), size, x0, y0, speed * std::cos(theta), speed * std::sin(theta),
                       trajectory, first, end, anomalous};
}

std::vector<ActorInstance> instantiate(const SceneSpec& spec, Split split, int clip) {
  std::mt19937_64 rng(derive_seed(spec.seed, split == Split::train ? 1 : 2, static_cast<std::uint64_t>(clip)));
  const int frames = split == Split::train ? spec.train.frames : spec.test.frames;
  std::vector<ActorInstance> actors;
  for (const auto& a : spec.actors) {
    for (int i = 0; i < a.count; ++i) {
      actors.push_back(place(rng, spec, a.shape, a.size, a.speed, a.trajectory, 0, frames, false));
    }
  }
  if (split == Split::test) {
    for (const auto& inj : spec.anomalies) {
      if (inj.clip != clip) continue;
      actors.push_back(place(rng, spec, inj.shape, inj.size, inj.effective_speed(), inj.trajectory, inj.start,
                             inj.start + inj.length, true));
    }
  }
  return actors;
}

bool covers(const ActorInstance& a, double dx, double dy) {
  switch (a.shape) {
    case Shape::circle: {
      const double r = a.size / 2.0;
      return dx * dx + dy * dy <= r * r;
    }
    case Shape::square: return std::abs(dx) <= a.size / 2.0 && std::abs(dy) <= a.size / 2.0;
    case Shape::triangle: {
      // Upward equilateral triangle around its centroid.
      const double r = a.size / std::sqrt(3.0);
      const double ax = 0.0, ay = -r;
      const double bx = r * std::cos(std::numbers::pi / 6.0), by = r / 2.0;
      const double cx = -bx, cy = by;
      auto edge = [&](double x0, double y0, double x1, double y1) { return (x1 - x0) * (dy - y0) - (y1 - y0) * (dx - x0); };
      const double e0 = edge(ax, ay, bx, by);
      const double e1 = edge(bx, by, cx, cy);
      const double e2 = edge(cx, cy, ax, ay);
      return (e0 >= 0 && e1 >= 0 && e2 >= 0) || (e0 <= 0 && e1 <= 0 && e2 <= 0);
    }
  }
  return false;
}

// Texture attached to the actor so dense flow has structure to track.
float actor_shade(double dx, double dy) {
  constexpr double kPeriod = 9.0;
  const double s = std::sin(2.0 * std::numbers::pi * dx / kPeriod) * std::sin(2.0 * std::numbers::pi * dy / kPeriod);
  return static_cast<float>(0.62 + 0.3 * s);
}

Image render_background(const SceneSpec& spec) {
  std::mt19937_64 rng(derive_seed(spec.seed, 99));
  Image bg(spec.canvas, spec.canvas, 3);
  const double c = spec.canvas;
  for (int y = 0; y < spec.canvas; ++y) {
    for (int x = 0; x < spec.canvas; ++x) {
      const double base = 0.28 + 0.06 * std::sin(2.0 * std::numbers::pi * x / c) * std::cos(2.0 * std::numbers::pi * y / c) +
                          0.05 * y / c;
      bg.at(y, x, 0) = static_cast<float>(base * 0.9);
      bg.at(y, x, 1) = static_cast<float>(base);
      bg.at(y, x, 2) = static_cast<float>(base * 1.1);
    }
  }
  // A few static low-contrast slabs as scene furniture.
  std::uniform_int_distribution<int> coord(0, spec.canvas - 1);
  std::uniform_real_distribution<double> tone(-0.05, 0.05);
  for (int i = 0; i < 5; ++i) {
    const int x0 = coord(rng), y0 = coord(rng);
    const int w = std::max(4, spec.canvas / 6), h = std::max(4, spec.canvas / 10);
    const float t = static_cast<float>(tone(rng));
    for (int y = y0; y < std::min(spec.canvas, y0 + h); ++y) {
      for (int x = x0; x < std::min(spec.canvas, x0 + w); ++x) {
        for (int ch = 0; ch < 3; ++ch) bg.at(y, x, ch) += t;
      }
    }
  }
  return bg;
}

struct RenderedFrame {
  Image pixels;
  LabelMap classes;
  Image flow;  // 2 channels
  bool anomalous = false;
};

RenderedFrame render(const SceneSpec& spec, const Image& background, const std::vector<ActorInstance>& actors,
                     int frame, std::uint64_t noise_seed) {
  RenderedFrame out{background, LabelMap(spec.canvas, spec.canvas), Image(spec.canvas, spec.canvas, 2), false};
  for (const auto& a : actors) {
    if (frame < a.first_frame || frame >= a.end_frame) continue;
    out.anomalous = out.anomalous || a.anomalous;
    const State s = state_at(a, frame, spec);
    // Displacement since the previous frame.
    double fx = s.vx, fy = s.vy;
    if (a.trajectory == Trajectory::bounce && frame > a.first_frame) {
      const State prev = state_at(a, frame - 1, spec);
      fx = s.x - prev.x;
      fy = s.y - prev.y;
    }
    const double h = half_extent(a.shape, a.size) + 1.0;
    const int ylo = static_cast<int>(std::floor(s.y - h)), yhi = static_cast<int>(std::ceil(s.y + h));
    const int xlo = static_cast<int>(std::floor(s.x - h)), xhi = static_cast<int>(std::ceil(s.x + h));
    for (int yy = ylo; yy <= yhi; ++yy) {
      for (int xx = xlo; xx <= xhi; ++xx) {
        int py = yy, px = xx;
        if (spec.wrap) {
          py = ((py % spec.canvas) + spec.canvas) % spec.canvas;
          px = ((px % spec.canvas) + spec.canvas) % spec.canvas;
        } else if (py < 0 || px < 0 || py >= spec.canvas || px >= spec.canvas) {
          continue;
        }
        const double dx = xx + 0.5 - s.x;
        const double dy = yy + 0.5 - s.y;
        if (!covers(a, dx, dy)) continue;
        const float shade = actor_shade(dx, dy);
        out.pixels.at(py, px, 0) = shade;
        out.pixels.at(py, px, 1) = shade * 0.8f;
        out.pixels.at(py, px, 2) = shade * 0.55f;
        out.classes.at(py, px) = a.class_index;
        out.flow.at(py, px, 0) = static_cast<float>(fx);
        out.flow.at(py, px, 1) = static_cast<float>(fy);
      }
    }
  }
  if (spec.noise > 0) {
    std::mt19937_64 rng(noise_seed);
    std::normal_distribution<float> gauss(0.0f, static_cast<float>(spec.noise));
    for (float& v : out.pixels.data) v += gauss(rng);
  }
  for (float& v : out.pixels.data) v = std::clamp(v, 0.0f, 1.0f);
  return out;
}

void write_png(const fs::path& path, const Image& rgb) {
  cv::Mat mat(rgb.height, rgb.width, CV_8UC3);
  for (int y = 0; y < rgb.height; ++y) {
    auto* row = mat.ptr<cv::Vec3b>(y);
    for (int x = 0; x < rgb.width; ++x) {
      for (int ch = 0; ch < 3; ++ch) {
        // BGR order on disk.
        row[x][2 - ch] = static_cast<std::uint8_t>(std::lround(rgb.at(y, x, ch) * 255.0f));
      }
    }
  }
  if (!cv::imwrite(path.string(), mat)) throw Error("cannot write " + path.string());
}

std::string clip_name(Split split, int clip) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s_%03d", split == Split::train ? "train" : "test", clip);
  return buf;
}

}  // namespace

int SceneSpec::class_index(Shape shape) const {
  const auto it = std::find(palette.begin(), palette.end(), to_string(shape));
  if (it == palette.end()) throw Error(std::string("shape '") + to_string(shape) + "' is not in the palette");
  return static_cast<int>(it - palette.begin()) + 1;
}

SceneSpec SceneSpec::from_kv(const KvDocument& doc) {
  SceneSpec spec;
  spec.name = doc.get_string("name", spec.name);
  spec.canvas = static_cast<int>(doc.get_int("canvas", spec.canvas));
  spec.noise = doc.get_double("noise", spec.noise);
  spec.seed = static_cast<std::uint64_t>(doc.get_int("seed", static_cast<long long>(spec.seed)));
  spec.wrap = doc.get_bool("wrap", spec.wrap);
  if (auto p = doc.find("palette")) spec.palette = split(*p, ',');
  spec.normal_speed_min = doc.get_double("normal_speed_min", spec.normal_speed_min);
  spec.normal_speed_max = doc.get_double("normal_speed_max", spec.normal_speed_max);
  for (const auto& [name, shape] : {std::pair{"train", &spec.train}, std::pair{"test", &spec.test}}) {
    const auto blocks = doc.blocks_named(name);
    if (blocks.size() > 1) throw Error(std::string("scene spec: more than one '") + name + "' block");
    if (blocks.empty()) continue;
    shape->clips = static_cast<int>(blocks[0]->get_int("clips", shape->clips));
    shape->frames = static_cast<int>(blocks[0]->get_int("frames", shape->frames));
  }
  for (const auto* block : doc.blocks_named("actor")) {
    ActorSpec a;
    a.shape = parse_shape(block->get_string("shape", "circle"));
    a.size = block->get_double("size", a.size);
    a.speed = block->get_double("speed", a.speed);
    a.count = static_cast<int>(block->get_int("count", a.count));
    a.trajectory = parse_trajectory(block->get_string("trajectory", "bounce"));
    spec.actors.push_back(a);
  }
  for (const auto* block : doc.blocks_named("anomaly")) {
    AnomalyInjection inj;
    const std::string kind = block->get_string("kind", "class");
    if (kind == "class") {
      inj.kind = AnomalyKind::unseen_class;
    } else if (kind == "speed") {
      inj.kind = AnomalyKind::over_speed;
    } else {
      throw Error("unknown anomaly kind '" + kind + "' (expected class or speed)");
    }
    inj.shape = parse_shape(block->get_string("shape", inj.kind == AnomalyKind::unseen_class ? "square" : "circle"));
    inj.size = block->get_double("size", inj.size);
    inj.speed = block->get_double("speed", inj.speed);
    inj.speed_multiplier = block->get_double("multiplier", inj.speed_multiplier);
    inj.clip = static_cast<int>(block->get_int("clip", inj.clip));
    inj.start = static_cast<int>(block->get_int("start", inj.start));
    inj.length = static_cast<int>(block->get_int("length", inj.length));
    inj.trajectory = parse_trajectory(block->get_string("trajectory", "bounce"));
    spec.anomalies.push_back(inj);
  }
  return spec;
}

SceneSpec SceneSpec::load(const fs::path& path) { return from_kv(KvDocument::load(path)); }

KvDocument SceneSpec::to_kv() const {
  KvDocument doc;
  doc.set("name", name);
  doc.set("canvas", std::to_string(canvas));
  doc.set("noise", format_double(noise));
  doc.set("seed", std::to_string(seed));
  doc.set("wrap", wrap ? "true" : "false");
  std::string pal;
  for (std::size_t i = 0; i < palette.size(); ++i) pal += (i ? ", " : "") + palette[i];
  doc.set("palette", pal);
  doc.set("normal_speed_min", format_double(normal_speed_min));
  doc.set("normal_speed_max", format_double(normal_speed_max));
  for (const auto& [label, shape] : {std::pair{"train", &train}, std::pair{"test", &test}}) {
    auto& b = doc.add_block(label);
    b.set("clips", std::to_string(shape->clips));
    b.set("frames", std::to_string(shape->frames));
  }
  for (const auto& a : actors) {
    auto& b = doc.add_block("actor");
    b.set("shape", to_string(a.shape));
    b.set("size", format_double(a.size));
    b.set("speed", format_double(a.speed));
    b.set("count", std::to_string(a.count));
    b.set("trajectory", trajectory_name(a.trajectory));
  }
  for (const auto& inj : anomalies) {
    auto& b = doc.add_block("anomaly");
    b.set("kind", to_string(inj.kind));
    b.set("shape", to_string(inj.shape));
    b.set("size", format_double(inj.size));
    b.set("speed", format_double(inj.speed));
    b.set("multiplier", format_double(inj.speed_multiplier));
    b.set("clip", std::to_string(inj.clip));
    b.set("start", std::to_string(inj.start));
    b.set("length", std::to_string(inj.length));
    b.set("trajectory", trajectory_name(inj.trajectory));
  }
  return doc;
}

void SceneSpec::validate() const {
  if (canvas < 8) throw Error("scene spec: canvas must be >= 8");
  if (noise < 0) throw Error("scene spec: noise must be >= 0");
  if (train.clips < 1 || train.frames < 2) throw Error("scene spec: need at least one training clip of >= 2 frames");
  if (test.clips < 0 || (test.clips > 0 && test.frames < 2)) throw Error("scene spec: test clips need >= 2 frames");
  if (palette.empty()) throw Error("scene spec: palette is empty");
  std::set<std::string> seen;
  for (const auto& p : palette) {
    if (!seen.insert(p).second) throw Error("scene spec: duplicate palette entry '" + p + "'");
    parse_shape(p);
  }
  if (palette.size() > 254) throw Error("scene spec: palette too large");
  if (normal_speed_min > normal_speed_max) throw Error("scene spec: empty normal speed band");
  if (actors.empty()) throw Error("scene spec: no actors");

  std::set<Shape> normal_shapes;
  auto check_geometry = [&](Shape shape, double size, const std::string& what) {
    (void)class_index(shape);
    if (!(size > 0) || 2.0 * half_extent(shape, size) >= canvas) throw Error("scene spec: " + what + " size does not fit the canvas");
  };
  for (const auto& a : actors) {
    check_geometry(a.shape, a.size, "actor");
    if (a.count < 0) throw Error("scene spec: negative actor count");
    if (a.speed < normal_speed_min || a.speed > normal_speed_max) {
      throw Error("scene spec: actor speed " + format_double(a.speed) + " outside the normal band");
    }
    normal_shapes.insert(a.shape);
  }
  for (const auto& inj : anomalies) {
    check_geometry(inj.shape, inj.size, "anomaly");
    if (inj.clip < 0 || inj.clip >= test.clips) throw Error("scene spec: anomaly clip index out of range");
    if (inj.start < 0 || inj.length < 1 || inj.start + inj.length > test.frames) {
      throw Error("scene spec: anomaly interval outside the clip");
    }
    if (inj.kind == AnomalyKind::unseen_class && normal_shapes.count(inj.shape)) {
      throw Error(std::string("scene spec: class anomaly uses normal shape '") + to_string(inj.shape) + "'");
    }
    if (inj.kind == AnomalyKind::unseen_class &&
        (inj.speed < normal_speed_min || inj.speed > normal_speed_max)) {
      throw Error("scene spec: class anomaly speed must lie in the normal band");
    }
    if (inj.kind == AnomalyKind::over_speed) {
      if (!normal_shapes.count(inj.shape)) throw Error("scene spec: speed anomaly must use a normal shape");
      const double v = inj.effective_speed();
      if (v >= normal_speed_min && v <= normal_speed_max) {
        throw Error("scene spec: speed anomaly " + format_double(v) + " lies inside the normal band");
      }
    }
  }
  if (!wrap) {
    for (Split split : {Split::train, Split::test}) {
      const int clips = split == Split::train ? train.clips : test.clips;
      for (int c = 0; c < clips; ++c) {
        for (const auto& a : instantiate(*this, split, c)) {
          if (a.trajectory != Trajectory::linear) continue;
          const double h = half_extent(a.shape, a.size);
          for (int f = a.first_frame; f < a.end_frame; ++f) {
            const State s = state_at(a, f, *this);
            if (s.x < h || s.y < h || s.x > canvas - h || s.y > canvas - h) {
              throw Error(std::string("scene spec: linear ") + to_string(a.shape) + " leaves the canvas in " +
                          clip_name(split, c) + " at frame " + std::to_string(f) + " (set wrap = true or use bounce)");
            }
          }
        }
      }
    }
  }
}

void generate(const SceneSpec& spec, const fs::path& root) {
  spec.validate();
  for (const char* sub : {"train", "test", "oracle"}) {
    if (fs::exists(root / sub)) fs::remove_all(root / sub);
    fs::create_directories(root / sub);
  }
  spec.to_kv().save(root / "scene.txt");
  {
    std::ofstream pal(root / "palette.txt", std::ios::trunc);
    for (const auto& p : spec.palette) pal << p << "\n";
  }
  const Image background = render_background(spec);
  for (Split split : {Split::train, Split::test}) {
    const SplitShape shape = split == Split::train ? spec.train : spec.test;
    for (int c = 0; c < shape.clips; ++c) {
      const std::string id = clip_name(split, c);
      const auto actors = instantiate(spec, split, c);
      const fs::path frame_dir = root / to_string(split) / id;
      const fs::path oracle_dir = root / "oracle" / id;
      fs::create_directories(frame_dir);
      fs::create_directories(oracle_dir);
      std::vector<std::uint8_t> labels;
      for (int f = 0; f < shape.frames; ++f) {
        const auto frame = render(spec, background, actors, f,
                                  derive_seed(spec.seed, split == Split::train ? 1 : 2, static_cast<std::uint64_t>(c),
                                              static_cast<std::uint64_t>(f) + 1));
        write_png(frame_dir / (frame_stem(f) + ".png"), frame.pixels);
        write_label_png(oracle_dir / (frame_stem(f) + ".png"), frame.classes);
        write_map(oracle_dir / (frame_stem(f) + ".flow"), frame.flow);
        labels.push_back(frame.anomalous ? 1 : 0);
      }
      KvDocument meta;
      meta.set("split", to_string(split));
      std::string kinds;
      if (split == Split::test) {
        std::ofstream out(root / "test" / (id + ".labels"), std::ios::trunc);
        for (auto l : labels) out << static_cast<int>(l) << "\n";
        for (const auto& inj : spec.anomalies) {
          if (inj.clip == c) kinds += std::string(kinds.empty() ? "" : ", ") + to_string(inj.kind);
        }
      }
      meta.set("anomalies", kinds);
      meta.save(oracle_dir / "meta.txt");
    }
  }
  Manifest manifest = Manifest::scan(root);
  manifest.name = spec.name;
  manifest.save(root / "manifest.txt");
}

ClipMeta read_clip_meta(const fs::path& root, const std::string& clip_id) {
  const auto doc = KvDocument::load(root / "oracle" / clip_id / "meta.txt");
  ClipMeta meta;
  for (const auto& k : split(doc.get_string("anomalies", ""), ',')) {
    if (k.empty()) continue;
    if (k == "class") {
      meta.anomaly_kinds.push_back(AnomalyKind::unseen_class);
    } else if (k == "speed") {
      meta.anomaly_kinds.push_back(AnomalyKind::over_speed);
    } else {
      throw Error("bad anomaly kind '" + k + "' in meta of " + clip_id);
    }
  }
  return meta;
}

double hash_unit(std::uint64_t seed, const std::string& clip_id, int index) {
  const std::uint64_t h = derive_seed(seed, fnv1a(clip_id), static_cast<std::uint64_t>(index));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

AnalyticSegmentationOracle::AnalyticSegmentationOracle(fs::path root, double miss_rate, std::uint64_t seed)
    : root_(std::move(root)), miss_rate_(miss_rate), seed_(seed) {
  if (miss_rate_ < 0.0 || miss_rate_ > 1.0) throw Error("oracle miss rate must lie in [0, 1]");
}

targets::SegOracleResult AnalyticSegmentationOracle::segment(const Frame& frame) const {
  const fs::path path = root_ / "oracle" / frame.clip_id / (frame_stem(frame.index) + ".png");
  if (!fs::exists(path)) {
    throw Error("frame " + frame.clip_id + "/" + frame_stem(frame.index) + " was not generated by the scene at " +
                root_.string());
  }
  if (miss_rate_ > 0.0 && hash_unit(seed_, frame.clip_id, frame.index) < miss_rate_) {
    throw targets::OracleFailure("simulated oracle miss");
  }
  LabelMap labels = read_label_png(path);
  if (labels.height != frame.pixels.height || labels.width != frame.pixels.width) {
    cv::Mat src(labels.height, labels.width, CV_32SC1, labels.data.data());
    cv::Mat dst;
    cv::resize(src, dst, cv::Size(frame.pixels.width, frame.pixels.height), 0, 0, cv::INTER_NEAREST);
    LabelMap resized(dst.rows, dst.cols);
    std::memcpy(resized.data.data(), dst.ptr<std::int32_t>(), resized.data.size() * sizeof(std::int32_t));
    labels = std::move(resized);
  }
  return targets::SegOracleResult::from_class_map(std::move(labels));
}

AnalyticFlowEstimator::AnalyticFlowEstimator(fs::path root) : root_(std::move(root)) {}

targets::FlowField AnalyticFlowEstimator::estimate(const Frame& /*prev*/, const Frame& curr) const {
  const fs::path path = root_ / "oracle" / curr.clip_id / (frame_stem(curr.index) + ".flow");
  if (!fs::exists(path)) throw Error("no analytic flow for frame " + curr.clip_id + "/" + frame_stem(curr.index));
  Image uv = read_map(path);
  if (uv.channels != 2) throw Error("analytic flow must have 2 channels: " + path.string());
  if (uv.height != curr.pixels.height || uv.width != curr.pixels.width) {
    const float sx = static_cast<float>(curr.pixels.width) / static_cast<float>(uv.width);
    const float sy = static_cast<float>(curr.pixels.height) / static_cast<float>(uv.height);
    cv::Mat dst;
    cv::resize(to_mat(uv), dst, cv::Size(curr.pixels.width, curr.pixels.height), 0, 0, cv::INTER_NEAREST);
    uv = from_mat(dst);
    for (std::size_t p = 0; p < uv.pixel_count(); ++p) {
      uv.data[2 * p] *= sx;
      uv.data[2 * p + 1] *= sy;
    }
  }
  targets::FlowField flow;
  flow.uv = std::move(uv);
  return flow;
}

}  // namespace translad::synth
