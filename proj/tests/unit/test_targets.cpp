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

#include <cmath>

#include "test_support.hpp"
#include "translad/data_model.hpp"
#include "translad/error.hpp"
#include "translad/targets.hpp"

using namespace translad;
using namespace translad::targets;

namespace {

class FixedOracle final : public SegmentationOracle {
 public:
  explicit FixedOracle(SegOracleResult r, bool fail = false) : result_(std::move(r)), fail_(fail) {}
  SegOracleResult segment(const Frame&) const override {
    if (fail_) throw OracleFailure("detector gave up");
    return result_;
  }

 private:
  SegOracleResult result_;
  bool fail_;
};

// Textured disc on a smooth background, centred at (cx, cy).
Frame disc_frame(int index, double cx, double cy, int side = 224, double radius = 22.0) {
  Frame f{"clip", index, Image(side, side, 3)};
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      const double bg = 0.3 + 0.1 * std::sin(x * 0.05) * std::cos(y * 0.04);
      const double dx = x - cx, dy = y - cy;
      double v = bg;
      if (dx * dx + dy * dy <= radius * radius) v = 0.6 + 0.3 * std::sin(dx * 0.7) * std::sin(dy * 0.7);
      for (int c = 0; c < 3; ++c) f.pixels.at(y, x, c) = static_cast<float>(v * (0.8 + 0.1 * c));
    }
  }
  return f;
}

LabelMap random_labels(std::mt19937_64& rng, int h, int w, int classes) {
  LabelMap m(h, w);
  for (auto& v : m.data) v = static_cast<std::int32_t>(rng() % classes);
  return m;
}

}  // namespace

TEST_CASE("segment passes oracle results through and converts failures to misses") {
  Frame f{"c", 0, Image(8, 8, 3)};
  LabelMap cls(8, 8);
  cls.at(2, 3) = 1;
  const auto ok = segment(f, FixedOracle(SegOracleResult::from_class_map(cls)));
  CHECK(ok.class_map == cls);
  CHECK(ok.instance_mask.at(2, 3) == 1);
  CHECK(ok.instance_mask.at(0, 0) == 0);
  CHECK_FALSE(ok.missed);

  const auto miss = segment(f, FixedOracle({}, true));
  CHECK(miss.missed);
  CHECK(miss.class_map == LabelMap(8, 8));
  CHECK(miss.instance_mask == Mask(8, 8));

  CHECK_THROWS_AS(segment(f, FixedOracle(SegOracleResult::from_class_map(LabelMap(4, 4)))), Error);
}

TEST_CASE("make_seg_target") {
  SUBCASE("background only") {
    const auto t = make_seg_target(SegOracleResult::empty(5, 6), 3);
    CHECK(t.channels == 3);
    for (int y = 0; y < 5; ++y) {
      for (int x = 0; x < 6; ++x) {
        CHECK(t.at(y, x, 0) == 1.0f);
        CHECK(t.at(y, x, 1) == 0.0f);
        CHECK(t.at(y, x, 2) == 0.0f);
      }
    }
  }
  SUBCASE("single pixel of class 2") {
    LabelMap cls(4, 4);
    cls.at(1, 2) = 2;
    const auto t = make_seg_target(SegOracleResult::from_class_map(cls), 4);
    CHECK(t.at(1, 2, 2) == 1.0f);
    CHECK(t.at(1, 2, 0) == 0.0f);
    CHECK(t.at(0, 0, 0) == 1.0f);
  }
  SUBCASE("index outside palette") {
    LabelMap cls(2, 2);
    cls.at(0, 0) = 3;
    CHECK_THROWS_AS(make_seg_target(SegOracleResult::from_class_map(cls), 3), Error);
  }
  SUBCASE("round-trip through argmax on random maps") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
      const int k = 2 + static_cast<int>(rng() % 6);
      const auto cls = random_labels(rng, 1 + rng() % 40, 1 + rng() % 40, k);
      const auto t = make_seg_target(SegOracleResult::from_class_map(cls), k);
      for (float v : t.data) REQUIRE((v == 0.0f || v == 1.0f));
      REQUIRE(decode_seg_target(t) == cls);
    }
  }
}

TEST_CASE("flow_magnitude") {
  FlowField f(2, 2);
  f.u(0, 0) = 3;
  f.v(0, 0) = 4;
  const auto m = flow_magnitude(f);
  CHECK(m.channels == 1);
  CHECK(m.at(0, 0) == 5.0f);
  CHECK(m.at(1, 1) == 0.0f);
  CHECK(flow_magnitude(FlowField(3, 3)) == Image(3, 3, 1));
}

TEST_CASE("flow_magnitude ignores direction") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<float> uv(-8.0f, 8.0f);
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
  for (int trial = 0; trial < 30; ++trial) {
    FlowField f(13, 17), neg(13, 17), rot(13, 17);
    for (int y = 0; y < 13; ++y) {
      for (int x = 0; x < 17; ++x) {
        f.u(y, x) = uv(rng);
        f.v(y, x) = uv(rng);
        neg.u(y, x) = -f.u(y, x);
        neg.v(y, x) = -f.v(y, x);
        const double a = angle(rng);
        rot.u(y, x) = static_cast<float>(std::cos(a) * f.u(y, x) - std::sin(a) * f.v(y, x));
        rot.v(y, x) = static_cast<float>(std::sin(a) * f.u(y, x) + std::cos(a) * f.v(y, x));
      }
    }
    const auto m = flow_magnitude(f);
    REQUIRE(flow_magnitude(neg) == m);
    const auto mr = flow_magnitude(rot);
    for (std::size_t i = 0; i < m.data.size(); ++i) REQUIRE(mr.data[i] == doctest::Approx(m.data[i]).epsilon(1e-5));
  }
}

TEST_CASE("mask_flow is exact elementwise suppression") {
  std::mt19937_64 rng(29);
  const auto mag = testing::random_image(rng, 20, 30, 1, 0.0f, 10.0f);
  CHECK(mask_flow(mag, Mask(20, 30, 1)) == mag);
  CHECK(mask_flow(mag, Mask(20, 30, 0)) == Image(20, 30, 1));

  for (int trial = 0; trial < 30; ++trial) {
    Mask mask(20, 30);
    for (int y = 0; y < 20; ++y) {
      for (int x = 0; x < 30; ++x) mask.at(y, x) = trial == 0 ? (x + y) % 2 : static_cast<std::uint8_t>(rng() % 2);
    }
    const auto out = mask_flow(mag, mask);
    for (int y = 0; y < 20; ++y) {
      for (int x = 0; x < 30; ++x) REQUIRE(out.at(y, x) == (mask.at(y, x) ? mag.at(y, x) : 0.0f));
    }
  }
  CHECK_THROWS_AS(mask_flow(mag, Mask(3, 3)), Error);
}

TEST_CASE("scale_flow_target") {
  Image m(1, 4, 1);
  m.data = {0.0f, 2.0f, 4.0f, 9.0f};
  const auto s = scale_flow_target(m, 4.0);
  CHECK(s.data == std::vector<float>{0.0f, 0.5f, 1.0f, 1.0f});
  CHECK_THROWS_AS(scale_flow_target(m, 0.0), Error);

  std::mt19937_64 rng(31);
  const auto r = testing::random_image(rng, 1, 500, 1, 0.0f, 20.0f);
  auto sorted = r;
  std::sort(sorted.data.begin(), sorted.data.end());
  const auto scaled = scale_flow_target(sorted, 7.5);
  for (std::size_t i = 0; i < scaled.data.size(); ++i) {
    REQUIRE(scaled.data[i] >= 0.0f);
    REQUIRE(scaled.data[i] <= 1.0f);
    if (i) REQUIRE(scaled.data[i] >= scaled.data[i - 1]);
  }
}

TEST_CASE("percentile interpolates linearly") {
  CHECK(percentile({1, 2, 3, 4, 5}, 50) == 3.0);
  CHECK(percentile({1, 2, 3, 4, 5}, 100) == 5.0);
  CHECK(percentile({0, 10}, 25) == doctest::Approx(2.5));
  CHECK_THROWS_AS(percentile({}, 50), Error);
}

TEST_CASE("Farneback dense flow") {
  const FarnebackEstimator est;
  SUBCASE("identical frames give zero flow") {
    const Frame a = disc_frame(0, 100, 110);
    Frame b = a;
    b.index = 1;
    const auto flow = dense_flow(a, b, est);
    for (float v : flow.uv.data) REQUIRE(std::abs(v) <= 1e-3f);
  }
  SUBCASE("disc translated by (3, 0)") {
    const Frame a = disc_frame(0, 100, 110);
    const Frame b = disc_frame(1, 103, 110);
    const auto flow = dense_flow(a, b, est);
    double su = 0, sv = 0;
    int n = 0;
    for (int y = 0; y < 224; ++y) {
      for (int x = 0; x < 224; ++x) {
        if ((x - 103.0) * (x - 103.0) + (y - 110.0) * (y - 110.0) <= 22.0 * 22.0) {
          su += flow.u(y, x);
          sv += flow.v(y, x);
          ++n;
        }
      }
    }
    CHECK(su / n == doctest::Approx(3.0).epsilon(0.5 / 3.0));
    CHECK(std::abs(sv / n) < 0.5);
  }
  SUBCASE("frame pairs must be consecutive in one clip") {
    const Frame a = disc_frame(0, 100, 110);
    Frame b = disc_frame(2, 100, 110);
    CHECK_THROWS_AS(dense_flow(a, b, est), Error);
    b.index = 1;
    b.clip_id = "other";
    CHECK_THROWS_AS(dense_flow(a, b, est), Error);
  }
  SUBCASE("first frame of a clip gets zero flow") {
    Clip clip{"clip", {disc_frame(0, 100, 110), disc_frame(1, 104, 110)}, std::nullopt};
    const auto first = clip_flow(clip, 0, est);
    CHECK(first.uv == Image(224, 224, 2));
    const auto second = clip_flow(clip, 1, est);
    CHECK(second.u(110, 104) > 2.0f);
  }
}
