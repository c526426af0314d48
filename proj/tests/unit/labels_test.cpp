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

#include "hybridfit/labels.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Geometry>
#include <gtest/gtest.h>

#include "generators.hpp"
#include "oracles.hpp"

namespace hybridfit {
namespace {

const OrientedBox kUnitCube(Vec3::Zero(), Vec3::Ones(), 0.0);

TEST(GenerateLabelsTest, PointAtFaceCenter) {
  const std::vector<Vec3> pts{Vec3(0.5, 0, 0)};
  const auto labels = generate_labels(pts, std::span(&kUnitCube, 1), 0.2);
  ASSERT_EQ(labels.size(), 1u);
  EXPECT_TRUE(labels[0].face.flag);
  ASSERT_TRUE(labels[0].face.offset);
  EXPECT_EQ(*labels[0].face.offset, Vec3::Zero());
  EXPECT_EQ(labels[0].face.index, (FeatureRef{0, 0}));
  EXPECT_EQ(labels[0].owner, 0);
}

TEST(GenerateLabelsTest, PointFarFromEveryFeature) {
  // A 1.5 m cube; its center is 0.75 m from every face and more from edges.
  const OrientedBox big(Vec3::Zero(), Vec3::Constant(1.5), 0.0);
  const std::vector<Vec3> pts{Vec3::Zero(), Vec3(0.5, 0.5, 0.5)};
  const auto labels = generate_labels(pts, std::span(&big, 1), 0.2);
  EXPECT_FALSE(labels[0].face.flag);
  EXPECT_FALSE(labels[0].edge.flag);
  // 0.25 m from three faces and farther from every edge.
  EXPECT_NEAR(labels[1].face.distance, 0.25, 1e-15);
  EXPECT_FALSE(labels[1].face.flag);
  EXPECT_FALSE(labels[1].edge.flag);
}

TEST(GenerateLabelsTest, ThresholdIsStrict) {
  const std::vector<Vec3> pts{Vec3(0.7, 0, 0)};
  const auto at = generate_labels(pts, std::span(&kUnitCube, 1), 0.2);
  EXPECT_NEAR(at[0].face.distance, 0.2, 1e-15);
  EXPECT_EQ(at[0].face.flag, at[0].face.distance < 0.2);
  const std::vector<Vec3> exact{Vec3(0.75, 0, 0)};
  EXPECT_FALSE(generate_labels(exact, std::span(&kUnitCube, 1), 0.25)[0].face.flag);
}

TEST(GenerateLabelsTest, TiesGoToLowestFeature) {
  // Beyond the +x/+y edge: equidistant to faces 0 (+x) and 2 (+y).
  const std::vector<Vec3> pts{Vec3(0.6, 0.6, 0.0)};
  const auto labels = generate_labels(pts, std::span(&kUnitCube, 1), 0.2);
  EXPECT_EQ(labels[0].face.index, (FeatureRef{0, 0}));
  // Two identical boxes: the lower box index wins.
  const std::vector<OrientedBox> twins{kUnitCube, kUnitCube};
  const auto twin_labels = generate_labels(pts, twins, 0.2);
  EXPECT_EQ(twin_labels[0].face.index->box, 0);
  EXPECT_EQ(twin_labels[0].edge.index->box, 0);
}

TEST(GenerateLabelsTest, NoBoxesMeansAbsentOffsets) {
  const std::vector<Vec3> pts{Vec3(1, 2, 3)};
  const auto labels = generate_labels(pts, {}, 0.2);
  EXPECT_FALSE(labels[0].face.flag);
  EXPECT_FALSE(labels[0].edge.flag);
  EXPECT_FALSE(labels[0].face.offset);
  EXPECT_FALSE(labels[0].edge.index);
  EXPECT_FALSE(labels[0].owner);
}

TEST(GenerateLabelsTest, RejectsNonPositiveThreshold) {
  const std::vector<Vec3> pts{Vec3::Zero()};
  EXPECT_THROW(generate_labels(pts, std::span(&kUnitCube, 1), 0.0),
               std::invalid_argument);
}

TEST(GenerateLabelsTest, OwnerAndCenterOffset) {
  const std::vector<OrientedBox> boxes{
      OrientedBox(Vec3(0, 0, 0), Vec3(1, 1, 1), 0.3),
      OrientedBox(Vec3(3, 0, 0), Vec3(1, 2, 1), -0.7)};
  const std::vector<Vec3> pts{Vec3(0.1, 0.1, 0.1), Vec3(3.1, 0.2, 0.3),
                              Vec3(1.5, 0, 0)};
  const auto labels = generate_labels(pts, boxes, 0.2);
  EXPECT_EQ(labels[0].owner, 0);
  EXPECT_TRUE(labels[0].center_offset->isApprox(-pts[0]));
  EXPECT_EQ(labels[1].owner, 1);
  EXPECT_LT((*labels[1].center_offset - (boxes[1].center() - pts[1])).norm(), 1e-15);
  EXPECT_FALSE(labels[2].owner);
  EXPECT_FALSE(labels[2].center_offset);
}

TEST(GenerateLabelsTest, OffsetsReachAssignedFeatureCenter) {
  Rng rng(11);
  std::vector<OrientedBox> boxes;
  for (int k = 0; k < 4; ++k) boxes.push_back(testing::random_box(rng, 2.0));
  std::vector<Vec3> pts;
  for (int i = 0; i < 300; ++i) pts.push_back(testing::uniform3(rng, -3.0, 3.0));
  const auto labels = generate_labels(pts, boxes, 0.2);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& f = labels[i].face;
    const auto& e = labels[i].edge;
    EXPECT_LT((pts[i] + *f.offset - oracle::face_center(boxes[f.index->box], f.index->feature)).norm(), 1e-12);
    EXPECT_LT((pts[i] + *e.offset - oracle::edge_center(boxes[e.index->box], e.index->feature)).norm(), 1e-12);
    EXPECT_NEAR(f.distance, point_face_distance(pts[i], boxes[f.index->box], f.index->feature), 1e-15);
  }
}

TEST(GenerateLabelsTest, AgreesWithDenseSamplingOracleOnPairs) {
  Rng rng(12);
  constexpr double kThr = 0.2;
  int flag_mismatch = 0;
  double worst_offset = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::vector<OrientedBox> box{testing::random_box(rng, 1.0, 0.3, 2.0)};
    const Vec3 p = box[0].center() + testing::uniform3(rng, -1.5, 1.5);
    const auto label = generate_labels(std::span(&p, 1), box, kThr)[0];
    const oracle::NearestFeature of = oracle::nearest_face(p, box, kThr);
    const oracle::NearestFeature oe = oracle::nearest_edge(p, box, kThr);
    flag_mismatch += (label.face.flag != of.flag) + (label.edge.flag != oe.flag);
    EXPECT_NEAR(label.face.distance, of.distance, 1e-6);
    EXPECT_NEAR(label.edge.distance, oe.distance, 1e-6);
    worst_offset = std::max(worst_offset, oracle::offset_error(*label.face.offset, of));
    worst_offset = std::max(worst_offset, oracle::offset_error(*label.edge.offset, oe));
  }
  EXPECT_EQ(flag_mismatch, 0);
  EXPECT_LT(worst_offset, 1e-6);
}

TEST(GenerateLabelsTest, GloballyClosestAcrossBoxes) {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<OrientedBox> boxes;
    for (int k = 0; k < 3; ++k) boxes.push_back(testing::random_box(rng, 1.5));
    const Vec3 p = testing::uniform3(rng, -2.5, 2.5);
    const auto label = generate_labels(std::span(&p, 1), boxes, 0.3)[0];
    const oracle::NearestFeature of = oracle::nearest_face(p, boxes, 0.3);
    EXPECT_EQ(label.face.flag, of.flag);
    EXPECT_NEAR(label.face.distance, of.distance, 1e-6);
  }
}

TEST(GenerateLabelsTest, MonotoneInThreshold) {
  Rng rng(14);
  std::vector<OrientedBox> boxes{testing::random_box(rng, 1.0),
                                 testing::random_box(rng, 1.0)};
  std::vector<Vec3> pts;
  for (int i = 0; i < 500; ++i) pts.push_back(testing::uniform3(rng, -2.5, 2.5));
  PointLabels prev = generate_labels(pts, boxes, 0.01);
  for (double thr : {0.05, 0.1, 0.2, 0.4, 1.0}) {
    const PointLabels cur = generate_labels(pts, boxes, thr);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (prev[i].face.flag) EXPECT_TRUE(cur[i].face.flag);
      if (prev[i].edge.flag) EXPECT_TRUE(cur[i].edge.flag);
    }
    prev = cur;
  }
}

TEST(GenerateLabelsTest, InvariantUnderRigidMotion) {
  Rng rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<OrientedBox> boxes{testing::random_box(rng, 1.5),
                                   testing::random_box(rng, 1.5)};
    std::vector<Vec3> pts;
    for (int i = 0; i < 100; ++i) pts.push_back(testing::uniform3(rng, -2.5, 2.5));
    const double a = rng.uniform(-std::numbers::pi, std::numbers::pi);
    const Vec3 t = testing::uniform3(rng, -5.0, 5.0);
    const Mat3 r = Eigen::AngleAxisd(a, Vec3::UnitZ()).toRotationMatrix();
    std::vector<OrientedBox> moved_boxes;
    for (const auto& b : boxes) {
      moved_boxes.emplace_back(r * b.center() + t, b.scales(), b.yaw() + a);
    }
    std::vector<Vec3> moved_pts;
    for (const auto& p : pts) moved_pts.push_back(r * p + t);
    const auto before = generate_labels(pts, boxes, 0.2);
    const auto after = generate_labels(moved_pts, moved_boxes, 0.2);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      EXPECT_EQ(before[i].face.flag, after[i].face.flag);
      EXPECT_EQ(before[i].edge.flag, after[i].edge.flag);
      EXPECT_LT((r * *before[i].face.offset - *after[i].face.offset).norm(), 1e-9);
      EXPECT_LT((r * *before[i].edge.offset - *after[i].edge.offset).norm(), 1e-9);
      EXPECT_EQ(before[i].owner, after[i].owner);
    }
  }
}

TEST(PrimitiveAccuracyTest, ExactPredictionsScoreOne) {
  const std::vector<OrientedBox> boxes{kUnitCube,
                                       OrientedBox(Vec3(3, 0, 0), Vec3::Ones(), 1.0)};
  PrimitiveSet preds = exact_primitives(boxes[0]);
  for (const auto& p : exact_primitives(boxes[1], 19)) preds.add(p);
  const auto acc = primitive_accuracy(preds, boxes);
  EXPECT_EQ(acc.center, 1.0);
  EXPECT_EQ(acc.face, 1.0);
  EXPECT_EQ(acc.edge, 1.0);
}

TEST(PrimitiveAccuracyTest, EmptyPredictionsScoreZero) {
  const auto acc = primitive_accuracy(PrimitiveSet{}, std::span(&kUnitCube, 1));
  EXPECT_EQ(acc.center, 0.0);
  EXPECT_EQ(acc.face, 0.0);
  EXPECT_EQ(acc.edge, 0.0);
}

TEST(PrimitiveAccuracyTest, NoTruthIsAbsent) {
  const auto acc = primitive_accuracy(exact_primitives(kUnitCube), {});
  EXPECT_FALSE(acc.center);
  EXPECT_FALSE(acc.face);
  EXPECT_FALSE(acc.edge);
}

TEST(PrimitiveAccuracyTest, BoundedNoiseBelowTolerance) {
  Rng rng(16);
  for (int trial = 0; trial < 50; ++trial) {
    const OrientedBox box = testing::random_box(rng);
    PrimitiveSet preds;
    for (const auto& loc : primitive_locations(box)) {
      Vec3 dir = rng.normal3();
      dir.normalize();
      const double r = 0.29 * std::cbrt(rng.uniform());
      preds.add({loc.kind.type(), loc.position + r * dir, loc.kind.slot()});
    }
    const auto acc = primitive_accuracy(preds, std::span(&box, 1), 0.3);
    EXPECT_EQ(acc.center, 1.0);
    EXPECT_EQ(acc.face, 1.0);
    EXPECT_EQ(acc.edge, 1.0);
  }
}

TEST(PrimitiveAccuracyTest, TypeMustMatch) {
  PrimitiveSet preds;
  preds.add({PrimitiveType::kEdge, Vec3(0.5, 0, 0), 0});
  const auto acc = primitive_accuracy(preds, std::span(&kUnitCube, 1));
  EXPECT_EQ(acc.face, 0.0);
}

}  // namespace
}  // namespace hybridfit
