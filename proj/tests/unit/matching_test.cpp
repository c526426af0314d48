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

#include "hybridfit/matching.hpp"

#include <set>

#include <gtest/gtest.h>

#include "generators.hpp"

namespace hybridfit {
namespace {

const OrientedBox kUnitCube(Vec3::Zero(), Vec3::Ones(), 0.0);

TEST(RangeMatchTest, PredictionAtFaceCenter) {
  PrimitiveSet preds;
  preds.add({PrimitiveType::kFace, Vec3(0.5, 0, 0), 7});
  const auto sample = range_match(preds, kUnitCube, 0.05, 32, 0);
  for (int s = 0; s < kNumPrimitives; ++s) {
    if (s == 1) {
      EXPECT_EQ(sample.slots[s].ids, std::vector<int>(32, 7));
      EXPECT_TRUE(sample.slots[s].sampled_with_replacement);
      EXPECT_EQ(sample.slots[s].found, 1u);
    } else {
      EXPECT_TRUE(sample.slots[s].ids.empty()) << "slot " << s;
    }
  }
}

TEST(RangeMatchTest, JustOutsideRadiusIsEmpty) {
  PrimitiveSet preds;
  int id = 0;
  for (const auto& loc : primitive_locations(kUnitCube)) {
    preds.add({loc.kind.type(), loc.position + Vec3(0, 0, 0.06), id++});
  }
  const auto sample = range_match(preds, kUnitCube, 0.05, 32, 0);
  for (const auto& slot : sample.slots) EXPECT_TRUE(slot.ids.empty());
}

TEST(RangeMatchTest, SubsamplesWithoutReplacementReproducibly) {
  Rng rng(41);
  PrimitiveSet preds;
  for (int i = 0; i < 100; ++i) {
    Vec3 d = rng.normal3();
    d *= 0.049 * rng.uniform() / d.norm();
    preds.add({PrimitiveType::kEdge, primitive_position(kUnitCube, 9) + d, i});
  }
  const auto a = range_match(preds, kUnitCube, 0.05, 32, 123);
  const auto b = range_match(preds, kUnitCube, 0.05, 32, 123);
  const auto c = range_match(preds, kUnitCube, 0.05, 32, 124);
  const auto& ids = a.slots[9].ids;
  ASSERT_EQ(ids.size(), 32u);
  EXPECT_EQ(std::set<int>(ids.begin(), ids.end()).size(), 32u);
  EXPECT_FALSE(a.slots[9].sampled_with_replacement);
  EXPECT_EQ(a.slots[9].found, 100u);
  EXPECT_EQ(ids, b.slots[9].ids);
  EXPECT_NE(ids, c.slots[9].ids);
}

TEST(RangeMatchTest, PaddingRepeatsCyclically) {
  PrimitiveSet preds;
  preds.add({PrimitiveType::kCenter, Vec3(0.01, 0, 0), 4});
  preds.add({PrimitiveType::kCenter, Vec3(-0.01, 0, 0), 9});
  preds.add({PrimitiveType::kCenter, Vec3(0, 0.02, 0), 2});
  const auto slot = range_match(preds, kUnitCube, 0.05, 8, 5).slots[0];
  ASSERT_EQ(slot.ids.size(), 8u);
  for (std::size_t i = 3; i < 8; ++i) EXPECT_EQ(slot.ids[i], slot.ids[i % 3]);
  EXPECT_EQ(std::set<int>(slot.ids.begin(), slot.ids.end()), (std::set<int>{2, 4, 9}));
}

TEST(RangeMatchTest, RadiusIsInclusive) {
  PrimitiveSet preds;
  preds.add({PrimitiveType::kCenter, Vec3(0.25, 0, 0), 0});
  EXPECT_EQ(range_match(preds, kUnitCube, 0.25, 1, 0).slots[0].ids.size(), 1u);
}

TEST(RangeMatchTest, RespectsTypeAndRadiusAgainstBruteForce) {
  Rng rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const OrientedBox box = testing::random_box(rng, 1.0, 0.1, 0.4);
    PrimitiveSet preds;
    for (int i = 0; i < 400; ++i) {
      preds.add({PrimitiveKind::from_slot(static_cast<int>(rng.uniform_index(19))).type(),
                 box.center() + testing::uniform3(rng, -0.3, 0.3), i});
    }
    const double radius = rng.uniform(0.02, 0.1);
    const auto sample = range_match(preds, box, radius, 8, trial);
    const auto locs = primitive_locations(box);
    for (int s = 0; s < kNumPrimitives; ++s) {
      std::set<int> expected;
      for (const auto& p : preds) {
        if (p.type == locs[s].kind.type() &&
            (p.position - locs[s].position).norm() <= radius) {
          expected.insert(p.id);
        }
      }
      const auto& slot = sample.slots[s];
      EXPECT_EQ(slot.found, expected.size());
      EXPECT_EQ(slot.ids.size(), expected.empty() ? 0u : 8u);
      for (int id : slot.ids) EXPECT_TRUE(expected.contains(id));
      EXPECT_EQ(slot.sampled_with_replacement,
                !expected.empty() && expected.size() < 8u);
    }
  }
}

TEST(RangeMatchTest, RejectsBadArguments) {
  EXPECT_THROW(range_match(PrimitiveSet{}, kUnitCube, 0.0, 32, 0), std::invalid_argument);
  EXPECT_THROW(range_match(PrimitiveSet{}, kUnitCube, 0.05, 0, 0), std::invalid_argument);
}

}  // namespace
}  // namespace hybridfit
