// Copyright 2026 The IntentGrasp Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "intentgrasp/errors.hpp"
#include "intentgrasp/eval.hpp"
#include "intentgrasp/json_io.hpp"
#include "test_util.hpp"

namespace intentgrasp {
namespace {

using testing::make_object;
using testing::make_scene;

// Counts unit pixels covered by both / either box.
double raster_iou(const Box<int>& a, const Box<int>& b) {
  const int x0 = std::min(a.x1, b.x1), x1 = std::max(a.x2, b.x2);
  const int y0 = std::min(a.y1, b.y1), y1 = std::max(a.y2, b.y2);
  long inter = 0, uni = 0;
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x) {
      const bool in_a = a.contains_pixel(x, y), in_b = b.contains_pixel(x, y);
      inter += in_a && in_b;
      uni += in_a || in_b;
    }
  return uni == 0 ? 0.0 : double(inter) / double(uni);
}

TEST(Iou, Identity) {
  const RegionBox a{10, 20, 50, 80};
  EXPECT_DOUBLE_EQ(iou(a, a), 1.0);
}

TEST(Iou, Disjoint) {
  EXPECT_EQ(iou(RegionBox{0, 0, 10, 10}, RegionBox{20, 20, 30, 30}), 0.0);
  // touching edges share no area
  EXPECT_EQ(iou(RegionBox{0, 0, 10, 10}, RegionBox{10, 0, 20, 10}), 0.0);
}

TEST(Iou, OverlapMatchesRaster) {
  const Box<int> a{0, 0, 10, 10}, b{5, 5, 15, 15};
  const double oracle = raster_iou(a, b);
  EXPECT_DOUBLE_EQ(oracle, 25.0 / 175.0);
  EXPECT_DOUBLE_EQ(iou(a, b), oracle);
  EXPECT_DOUBLE_EQ(iou(a.cast<double>(), b.cast<double>()), oracle);
}

TEST(Iou, RandomBoxesMatchRasterAndAreSymmetric) {
  Rng rng(11);
  for (int i = 0; i < 400; ++i) {
    auto box = [&] {
      const int x = uniform_int(rng, 0, 40), y = uniform_int(rng, 0, 40);
      return Box<int>{x, y, x + uniform_int(rng, 1, 30), y + uniform_int(rng, 1, 30)};
    };
    const auto a = box(), b = box();
    EXPECT_EQ(iou(a, b), raster_iou(a, b));
    EXPECT_EQ(iou(a, b), iou(b, a));
  }
}

TEST(Quantize, Examples) {
  EXPECT_EQ(quantize_coordinate(320, 640), 500);
  EXPECT_EQ(quantize_coordinate(0, 640), 0);
  EXPECT_EQ(quantize_coordinate(640, 640), 999);
  const auto q = quantize_box({0, 0, 640, 480}, 640, 480);
  EXPECT_EQ(q, (QuantizedBox{0, 0, 999, 999}));
}

TEST(Quantize, MonotoneAndRoundTrip) {
  Rng rng(5);
  for (double d : {480.0, 640.0, 1000.0, 37.0}) {
    int last = -1;
    for (int k = 0; k <= 2000; ++k) {
      const double v = d * k / 2000.0;
      const int q = quantize_coordinate(v, d);
      EXPECT_GE(q, last);
      last = q;
    }
    for (int k = 0; k < 1000; ++k) {
      const double v = uniform_real(rng, 0.0, d);
      EXPECT_LE(std::abs(dequantize_coordinate(quantize_coordinate(v, d), d) - v), d / 1000.0);
    }
  }
}

TEST(Scene, ValidationRejectsBrokenInvariants) {
  auto good = testing::two_drinks();
  EXPECT_NO_THROW(good.validate(&Lexicon::standard()));

  auto no_target = good;
  no_target.target_id = "ghost";
  EXPECT_THROW(no_target.validate(), Error);

  auto overlap = good;
  overlap.objects[1].box = {110, 110, 210, 210};
  EXPECT_THROW(overlap.validate(), Error);
  overlap.clutter_mode = true;
  EXPECT_NO_THROW(overlap.validate());

  auto outside = good;
  outside.objects[0].box = {600, 100, 700, 200};
  EXPECT_THROW(outside.validate(), Error);

  auto unknown = good;
  unknown.objects[0].category = "spaceship";
  EXPECT_THROW(unknown.validate(&Lexicon::standard()), Error);

  auto dup = good;
  dup.objects[1].id = "coke";
  EXPECT_THROW(dup.validate(), Error);
}

TEST(Scene, ResolveObjectUsesBestOverlap) {
  const auto s = testing::two_drinks();
  const auto* o = resolve_object(s, {102, 98, 201, 203});
  ASSERT_NE(o, nullptr);
  EXPECT_EQ(o->id, "coke");
  EXPECT_EQ(resolve_object(s, {0, 400, 40, 440}), nullptr);
}

TEST(Descriptor, MinimalDistinguishesByColorFirst) {
  const auto pink = make_object("a", "candle", "pink", "medium", {10, 10, 90, 90});
  const auto white = make_object("b", "candle", "white", "medium", {200, 10, 280, 90});
  const auto d = minimal_descriptor(pink, {white});
  EXPECT_EQ(d.text(), "pink candle");
  EXPECT_TRUE(d.matches(pink));
  EXPECT_FALSE(d.matches(white));

  const auto banana = make_object("c", "banana", "yellow", "small", {300, 10, 370, 80});
  EXPECT_EQ(minimal_descriptor(banana, {pink, white}).text(), "banana");

  const auto big = make_object("d", "candle", "white", "large", {400, 10, 520, 130});
  EXPECT_EQ(minimal_descriptor(big, {white}).text(), "large candle");
}

TEST(Generator, DeterministicForFixedSeed) {
  const auto cfg = GeneratorConfig::for_split(Split::kSeen);
  const Task a = generate_task(cfg, 7), b = generate_task(cfg, 7);
  EXPECT_EQ(a.scene, b.scene);
  EXPECT_EQ(a.utterance, b.utterance);
  EXPECT_EQ(scene_to_json(a.scene).dump(), scene_to_json(b.scene).dump());
  EXPECT_NE(scene_to_json(generate_task(cfg, 8).scene).dump(), scene_to_json(a.scene).dump());
}

TEST(Generator, AmbiguousSeedSevenHasTwoSatisfyingObjects) {
  const Task t = generate_task(GeneratorConfig{}, 7);
  const IntentEntry* intent = Lexicon::standard().intents.match_utterance(t.utterance);
  ASSERT_NE(intent, nullptr);
  int n = 0;
  for (const auto& o : t.scene.objects) n += intent->satisfied_by(o);
  EXPECT_GE(n, 2);
}

TEST(Generator, HoldoutIsRespected) {
  GeneratorConfig cfg;
  cfg.holdout = {"banana"};
  for (std::uint64_t seed = 0; seed < 200; ++seed)
    for (const auto& o : generate_task(cfg, seed).scene.objects) EXPECT_NE(o.category, "banana");
}

TEST(Generator, SplitProperties) {
  for (Split split : {Split::kSeen, Split::kUnseen, Split::kCluttered}) {
    const auto cfg = GeneratorConfig::for_split(split);
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
      const Task t = generate_task(cfg, seed);
      ASSERT_NO_THROW(t.scene.validate(&Lexicon::standard()));
      const IntentEntry* intent = Lexicon::standard().intents.match_utterance(t.utterance);
      ASSERT_NE(intent, nullptr);
      EXPECT_TRUE(intent->satisfied_by(t.scene.target()));
      const auto& novel = novel_categories();
      if (split == Split::kUnseen) {
        EXPECT_TRUE(novel.count(t.scene.target().category));
      } else {
        for (const auto& o : t.scene.objects) EXPECT_FALSE(novel.count(o.category));
      }
      double max_iou = 0.0;
      for (std::size_t i = 0; i < t.scene.objects.size(); ++i)
        for (std::size_t j = i + 1; j < t.scene.objects.size(); ++j)
          max_iou = std::max(max_iou, iou(t.scene.objects[i].box, t.scene.objects[j].box));
      EXPECT_LE(max_iou, split == Split::kCluttered ? 0.5 : 0.05);
      if (split == Split::kCluttered) {
        EXPECT_TRUE(t.scene.clutter_mode);
        EXPECT_GE(t.scene.objects.size(), 5u);
      }
    }
  }
}

TEST(Render, EmptySceneIsFlat) {
  Scene s = make_scene({}, "");
  s.table_z = 0.25;
  const auto cloud = render_point_cloud(s, 0.0);
  ASSERT_GT(cloud.size(), 0);
  EXPECT_TRUE((cloud.points.row(2).array() == 0.25).all());
}

TEST(Render, ObjectTopMatchesHeight) {
  auto obj = make_object("o", "mug", "red", "medium", {100, 100, 200, 180});
  obj.height_m = 0.04;
  const Scene s = make_scene({obj}, "o");
  const auto cloud = render_point_cloud(s, 0.0);
  double top = -1.0;
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    const bool inside = obj.box.contains_pixel(cloud.pixel_map(0, i), cloud.pixel_map(1, i));
    const double z = cloud.points(2, i);
    if (inside) {
      EXPECT_GT(z, s.table_z);
      EXPECT_LE(z, s.table_z + 0.04);
      EXPECT_EQ(cloud.labels[std::size_t(i)], 0);
      top = std::max(top, z);
    } else {
      EXPECT_EQ(z, s.table_z);
      EXPECT_EQ(cloud.labels[std::size_t(i)], -1);
    }
  }
  EXPECT_DOUBLE_EQ(top, s.table_z + 0.04);
}

TEST(Render, PixelMapIsOrthographicAndInBounds) {
  const auto s = testing::two_drinks();
  RenderOptions opt;
  opt.stride_px = 5;
  const auto cloud = render_point_cloud(s, 0.0, opt);
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    const int u = cloud.pixel_map(0, i), v = cloud.pixel_map(1, i);
    ASSERT_TRUE(u >= 0 && u < s.width && v >= 0 && v < s.height);
    EXPECT_DOUBLE_EQ(cloud.points(0, i), (u + 0.5) * opt.metres_per_px);
    EXPECT_DOUBLE_EQ(cloud.points(1, i), (v + 0.5) * opt.metres_per_px);
  }
}

TEST(Render, PlaneNoiseStd) {
  const auto s = testing::two_drinks();
  const auto cloud = render_point_cloud(s, 0.001, RenderOptions{2, 0.001, 16, 3});
  std::vector<double> z;
  for (Eigen::Index i = 0; i < cloud.size(); ++i)
    if (cloud.labels[std::size_t(i)] < 0) z.push_back(cloud.points(2, i));
  ASSERT_GE(z.size(), 10000u);
  double mean = 0.0;
  for (double v : z) mean += v;
  mean /= double(z.size());
  double var = 0.0;
  for (double v : z) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / double(z.size() - 1));
  EXPECT_GE(sd, 0.0008);
  EXPECT_LE(sd, 0.0012);
}

TEST(Render, DeterministicAndSeeded) {
  const auto s = testing::two_drinks();
  RenderOptions a;
  a.seed = 4;
  const auto c1 = render_point_cloud(s, 0.001, a), c2 = render_point_cloud(s, 0.001, a);
  EXPECT_TRUE(c1.points == c2.points);
  a.seed = 5;
  EXPECT_FALSE(render_point_cloud(s, 0.001, a).points == c1.points);
  EXPECT_THROW(render_point_cloud(s, -1.0), Error);
}

TEST(PointCloudIo, RoundTrip) {
  const auto s = testing::two_drinks();
  const auto cloud = render_point_cloud(s, 0.001, RenderOptions{8, 0.001, 16, 1});
  const auto path = std::filesystem::temp_directory_path() / "ig_cloud_test.igpc";
  save_point_cloud(cloud, path);
  const auto back = load_point_cloud(path);
  EXPECT_TRUE(back.points == cloud.points);
  EXPECT_TRUE(back.pixel_map == cloud.pixel_map);
  std::filesystem::remove(path);
}

DatasetRecord one_qa_record() {
  DatasetRecord r;
  r.scene = testing::two_drinks("water");
  r.utterance = "I am thirsty";
  r.qa_pairs = {{"Should I get the can of coke?", "No."}};
  r.region_labels = {{r.scene.objects[0].box, r.scene.objects[1].box}, {r.scene.objects[1].box}};
  r.target_box = r.scene.objects[1].box;
  return r;
}

TEST(Dataset, RecordInvariants) {
  auto r = one_qa_record();
  EXPECT_NO_THROW(r.validate());
  auto short_labels = r;
  short_labels.region_labels.pop_back();
  EXPECT_THROW(short_labels.validate(), Error);
  auto lost_target = r;
  lost_target.region_labels.back() = {r.scene.objects[0].box};
  EXPECT_THROW(lost_target.validate(), Error);
}

TEST(Dataset, RoundTripOfGeneratedSplit) {
  const auto records = generate_records(GeneratorConfig::for_split(Split::kSeen), 400, 99, AgentParams{});
  const auto path = std::filesystem::temp_directory_path() / "ig_dataset_test.json";
  save_dataset(records, path);
  const auto back = load_dataset(path);
  EXPECT_EQ(back, records);
  std::filesystem::remove(path);
}

TEST(Dataset, SchemaErrorNamesField) {
  json j = json::array({record_to_json(one_qa_record())});
  j[0]["scene"]["objects"][1].erase("box");
  const auto path = std::filesystem::temp_directory_path() / "ig_dataset_bad.json";
  std::ofstream(path) << j.dump();
  try {
    load_dataset(path);
    FAIL() << "expected a schema error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSchema);
    EXPECT_NE(std::string(e.what()).find("objects[1]"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("box"), std::string::npos) << e.what();
  }
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace intentgrasp
