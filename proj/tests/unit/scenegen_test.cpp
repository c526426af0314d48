// Copyright 2026 The hybridfit Authors
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

#include "hybridfit/scenegen.hpp"

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "hybridfit/random.hpp"

namespace hybridfit {
namespace {

TEST(GenerateSceneTest, EmptyScene) {
  SceneSpec spec;
  spec.n_boxes = 0;
  const Scene scene = generate_scene(spec);
  EXPECT_TRUE(scene.boxes.empty());
  EXPECT_TRUE(scene.points.empty());
}

TEST(GenerateSceneTest, SameSeedSameScene) {
  SceneSpec spec;
  spec.seed = 77;
  const Scene a = generate_scene(spec);
  const Scene b = generate_scene(spec);
  ASSERT_EQ(a.boxes.size(), b.boxes.size());
  for (std::size_t i = 0; i < a.boxes.size(); ++i) {
    EXPECT_EQ(a.boxes[i].params(), b.boxes[i].params());
    EXPECT_EQ(a.boxes[i].class_label(), b.boxes[i].class_label());
  }
  EXPECT_EQ(a.points, b.points);
  spec.seed = 78;
  EXPECT_NE(generate_scene(spec).points, a.points);
}

TEST(GenerateSceneTest, BoxesSeparatedInsideBoundsOnFloor) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SceneSpec spec;
    spec.seed = seed;
    spec.n_boxes = 6;
    const Scene scene = generate_scene(spec);
    ASSERT_EQ(scene.boxes.size(), 6u);
    for (std::size_t i = 0; i < scene.boxes.size(); ++i) {
      const auto& b = scene.boxes[i];
      EXPECT_TRUE(spec.bounds.contains(b));
      EXPECT_NEAR(b.center().z() - 0.5 * b.scales().z(), spec.bounds.min.z(), 1e-12);
      EXPECT_TRUE((b.scales().array() >= spec.size_min.array()).all());
      EXPECT_TRUE((b.scales().array() <= spec.size_max.array()).all());
      ASSERT_TRUE(b.class_label());
      EXPECT_GE(*b.class_label(), 0);
      EXPECT_LT(*b.class_label(), spec.n_classes);
      for (std::size_t j = 0; j < i; ++j) {
        EXPECT_EQ(iou3d(b, scene.boxes[j]), 0.0);
        const OrientedBox grown(b.center(), b.scales() + Vec3(spec.min_gap, spec.min_gap, 0),
                                b.yaw());
        EXPECT_EQ(footprint_intersection_area(grown, scene.boxes[j]), 0.0);
      }
    }
  }
}

TEST(GenerateSceneTest, PointsLieOnFaces) {
  SceneSpec spec;
  spec.seed = 3;
  const Scene scene = generate_scene(spec);
  ASSERT_EQ(scene.points.size(), static_cast<std::size_t>(spec.n_boxes * spec.points_per_box));
  for (const Vec3& p : scene.points) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : scene.boxes) best = std::min(best, point_face_distance(p, b).distance);
    EXPECT_LT(best, 1e-9);
  }
}

TEST(GenerateSceneTest, ClutterAddsRoomPoints) {
  SceneSpec spec;
  spec.seed = 4;
  spec.clutter_rate = 0.5;
  const Scene scene = generate_scene(spec);
  EXPECT_EQ(scene.points.size(), static_cast<std::size_t>(1.5 * spec.n_boxes * spec.points_per_box));
}

TEST(GenerateSceneTest, PlacementFailureIsReported) {
  SceneSpec spec;
  spec.n_boxes = 200;
  spec.max_attempts = 50;
  EXPECT_THROW(generate_scene(spec), SceneGenError);
}

TEST(GenerateSceneTest, InvalidSpecRejected) {
  SceneSpec spec;
  spec.size_min = Vec3(0, 1, 1);
  EXPECT_THROW(generate_scene(spec), std::invalid_argument);
  spec = SceneSpec{};
  spec.n_boxes = -1;
  EXPECT_THROW(generate_scene(spec), std::invalid_argument);
}

TEST(GenerateScenesTest, IdsAndDerivedSeeds) {
  SceneSpec spec;
  spec.seed = 9;
  const auto scenes = generate_scenes(spec, 3);
  ASSERT_EQ(scenes.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(scenes[i].id, i);
    EXPECT_EQ(scenes[i].seed, derive_seed(9, i));
  }
}

TEST(CorruptPrimitivesTest, ZeroNoiseIsExact) {
  SceneSpec spec;
  spec.seed = 5;
  const Scene scene = generate_scene(spec);
  const PrimitiveSet preds = corrupt_primitives(scene, NoiseModel{}, 1);
  ASSERT_EQ(preds.size(), scene.boxes.size() * kNumPrimitives);
  for (std::size_t b = 0; b < scene.boxes.size(); ++b) {
    const auto locs = primitive_locations(scene.boxes[b]);
    for (int s = 0; s < kNumPrimitives; ++s) {
      const auto& p = preds[b * kNumPrimitives + s];
      EXPECT_EQ(p.type, locs[s].kind.type());
      EXPECT_EQ(p.position, locs[s].position);
      EXPECT_EQ(p.source, static_cast<int>(b));
      EXPECT_EQ(p.class_label, scene.boxes[b].class_label());
    }
  }
}

TEST(CorruptPrimitivesTest, FullDropoutLeavesOnlyOutliers) {
  SceneSpec spec;
  spec.seed = 6;
  const Scene scene = generate_scene(spec);
  NoiseModel model;
  model.dropout_prob = 1.0;
  model.outlier_rate = 5.0;
  model.outlier_extent = 0.5;
  const PrimitiveSet preds = corrupt_primitives(scene, model, 2);
  ASSERT_EQ(preds.size(), 5u);
  for (const auto& p : preds) {
    EXPECT_FALSE(p.source);
    EXPECT_TRUE((p.position.array() >= scene.bounds.min.array() - 0.5).all());
    EXPECT_TRUE((p.position.array() <= scene.bounds.max.array() + 0.5).all());
  }
}

TEST(CorruptPrimitivesTest, FractionalOutlierRate) {
  SceneSpec spec;
  spec.n_boxes = 0;
  const Scene scene = generate_scene(spec);
  NoiseModel model;
  model.outlier_rate = 1.25;
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 4000; ++seed) {
    const auto n = corrupt_primitives(scene, model, seed).size();
    EXPECT_TRUE(n == 1 || n == 2);
    total += static_cast<double>(n);
  }
  EXPECT_NEAR(total / 4000.0, 1.25, 0.03);
}

TEST(CorruptPrimitivesTest, Deterministic) {
  SceneSpec spec;
  spec.seed = 7;
  const Scene scene = generate_scene(spec);
  NoiseModel model;
  model.set_std(0.05);
  model.dropout_prob = 0.1;
  model.outlier_rate = 3;
  const auto a = corrupt_primitives(scene, model, 11);
  const auto b = corrupt_primitives(scene, model, 11);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].position, b[i].position);
    EXPECT_EQ(a[i].id, b[i].id);
  }
}

TEST(CorruptPrimitivesTest, NoiseStandardDeviation) {
  SceneSpec spec;
  spec.seed = 8;
  spec.n_boxes = 1;
  const Scene scene = generate_scene(spec);
  NoiseModel model;
  model.set_std(0.1);
  const Vec3 truth = primitive_position(scene.boxes[0], 3);
  constexpr int kDraws = 10000;
  Vec3 sum = Vec3::Zero();
  Vec3 sq = Vec3::Zero();
  for (int t = 0; t < kDraws; ++t) {
    const Vec3 e = corrupt_primitives(scene, model, t)[3].position - truth;
    sum += e;
    sq += e.cwiseProduct(e);
  }
  const Vec3 mean = sum / kDraws;
  for (int k = 0; k < 3; ++k) {
    const double var = (sq[k] - kDraws * mean[k] * mean[k]) / (kDraws - 1);
    EXPECT_NEAR(std::sqrt(var), 0.1, 0.003);
  }
}

TEST(CorruptPrimitivesTest, SharedModeUsesOneDrawPerBox) {
  SceneSpec spec;
  spec.seed = 9;
  const Scene scene = generate_scene(spec);
  NoiseModel model;
  model.set_std(0.1);
  model.correlation = CorrelationMode::kSharedPerBox;
  const auto preds = corrupt_primitives(scene, model, 3);
  for (std::size_t b = 0; b < scene.boxes.size(); ++b) {
    const auto locs = primitive_locations(scene.boxes[b]);
    const Vec3 d0 = preds[b * kNumPrimitives].position - locs[0].position;
    for (int s = 1; s < kNumPrimitives; ++s) {
      EXPECT_LT((preds[b * kNumPrimitives + s].position - locs[s].position - d0).norm(), 1e-12);
    }
  }
}

TEST(NoiseModelTest, Validation) {
  NoiseModel m;
  m.dropout_prob = 1.5;
  EXPECT_THROW(m.validate(), std::invalid_argument);
  m = NoiseModel{};
  m.set_std(-0.1);
  EXPECT_THROW(m.validate(), std::invalid_argument);
  m = NoiseModel{};
  m.outlier_rate = -1;
  EXPECT_THROW(m.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace hybridfit
