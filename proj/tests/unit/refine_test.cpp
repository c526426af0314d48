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

#include "hybridfit/refine.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "instances.hpp"

namespace hybridfit {
namespace {

using testing::param_error;

TEST(SeedProposalsTest, OnePerCenterPrediction) {
  PrimitiveSet preds;
  preds.add({PrimitiveType::kFace, Vec3(0, 0, 0), 0});
  preds.add({PrimitiveType::kCenter, Vec3(1, 2, 0.5), 1, std::nullopt, 2});
  preds.add({PrimitiveType::kEdge, Vec3(0, 1, 0), 2});
  preds.add({PrimitiveType::kCenter, Vec3(-1, 0, 0), 3});
  const auto boxes = seed_proposals(preds, Vec3(1, 2, 3), 0.25);
  ASSERT_EQ(boxes.size(), 2u);
  EXPECT_EQ(boxes[0].center(), Vec3(1, 2, 0.5));
  EXPECT_EQ(boxes[0].scales(), Vec3(1, 2, 3));
  EXPECT_EQ(boxes[0].yaw(), 0.25);
  EXPECT_EQ(boxes[0].class_label(), 2);
  EXPECT_EQ(boxes[1].center(), Vec3(-1, 0, 0));
}

TEST(SeedProposalsTest, NoCentersNoProposals) {
  PrimitiveSet preds;
  preds.add({PrimitiveType::kFace, Vec3(0, 0, 0), 0});
  EXPECT_TRUE(seed_proposals(preds, Vec3::Ones(), 0.0).empty());
  EXPECT_THROW(seed_proposals(preds, Vec3(1, 0, 1), 0.0), std::invalid_argument);
}

TEST(RefineProposalTest, ExactPrimitivesAtTruthStayPut) {
  const OrientedBox truth(Vec3(1, -2, 0.5), Vec3(1.2, 0.8, 1.0), 0.3);
  const auto trace = refine_proposal(truth, exact_primitives(truth), FitConfig{});
  EXPECT_TRUE(trace.converged);
  EXPECT_EQ(trace.iterations, 0);
  EXPECT_EQ(trace.final_box.params(), truth.params());
  EXPECT_DOUBLE_EQ(trace.final_value, -19 * FitConfig{}.delta);
}

TEST(RefineProposalTest, RecoversFromSmallPerturbation) {
  const OrientedBox truth(Vec3(1, -2, 0.5), Vec3(1.2, 0.8, 1.0), 0.3);
  const OrientedBox init(truth.center() + Vec3(0.05, 0, 0),
                         truth.scales() * 1.05, truth.yaw());
  const auto trace = refine_proposal(init, exact_primitives(truth), FitConfig{});
  EXPECT_TRUE(trace.converged);
  EXPECT_LT(param_error(trace.final_box, truth), 1e-4);
  EXPECT_LE(trace.final_value, trace.initial_value);
}

TEST(RefineProposalTest, PlateauLeavesInitUnchanged) {
  const OrientedBox init(Vec3::Zero(), Vec3::Ones(), 0.0);
  const OrientedBox far(Vec3(10, 10, 0), Vec3::Ones(), 0.0);
  const auto trace = refine_proposal(init, exact_primitives(far), FitConfig{});
  EXPECT_TRUE(trace.converged);
  EXPECT_EQ(trace.final_box.params(), init.params());
  EXPECT_EQ(trace.final_value, 0.0);
}

TEST(RefineProposalTest, ScalesStayAboveMinimum) {
  // Face predictions pulled into the center drive the scales toward zero.
  PrimitiveSet preds;
  for (int s = 1; s <= 6; ++s) {
    preds.add({PrimitiveType::kFace, Vec3(0.001 * s, 0, 0), s});
  }
  FitConfig cfg;
  cfg.delta = 1.0;
  const auto trace =
      refine_proposal(OrientedBox(Vec3::Zero(), Vec3::Constant(0.3), 0.0), preds, cfg);
  EXPECT_GE(trace.final_box.scales().minCoeff(), cfg.refine.min_scale);
  EXPECT_LE(trace.final_value, trace.initial_value);
}

TEST(RefineProposalTest, DescentAndFixedPointOnNoisyInstances) {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const OrientedBox truth = testing::random_box(rng, 3.0, 0.4, 2.0);
    PrimitiveSet preds = testing::noisy_primitives(truth, rng, 0.05);
    const OrientedBox init = testing::perturbed(truth, rng, 0.2, 0.2, 0.3);
    FitConfig cfg;
    const auto trace = refine_proposal(init, preds, cfg);
    EXPECT_LE(trace.final_value, trace.initial_value + 1e-12);
    EXPECT_DOUBLE_EQ(trace.initial_value, distance_value(preds, init, cfg));
    EXPECT_DOUBLE_EQ(trace.final_value, distance_value(preds, trace.final_box, cfg));
    if (!trace.converged) continue;
    const auto again = refine_proposal(trace.final_box, preds, cfg);
    EXPECT_LE(param_error(again.final_box, trace.final_box), cfg.refine.tol_x)
        << "trial " << trial;
  }
}

TEST(RefineProposalTest, BasinOfExactRecovery) {
  Rng rng(22);
  int recovered = 0;
  int unflagged_failures = 0;
  constexpr int kTrials = 200;
  for (int trial = 0; trial < kTrials; ++trial) {
    const OrientedBox truth = testing::random_box(rng, 3.0, 0.4, 2.0);
    const OrientedBox init = testing::perturbed(truth, rng, 0.1 / std::sqrt(3.0), 0.1, 0.1);
    const auto trace = refine_proposal(init, exact_primitives(truth), FitConfig{});
    if (param_error(trace.final_box, truth) < 1e-4) {
      ++recovered;
    } else if (trace.boundary_warnings == 0) {
      ++unflagged_failures;
    }
  }
  EXPECT_GE(recovered, 190);
  EXPECT_EQ(unflagged_failures, 0);
}

TEST(RefineProposalTest, FrozenYawKeepsHeading) {
  const OrientedBox truth(Vec3(0, 0, 0), Vec3(2, 1, 1), 0.4);
  FitConfig cfg;
  cfg.refine.freeze_yaw = true;
  const OrientedBox init(Vec3(0.05, 0, 0), Vec3(2, 1, 1), 0.35);
  const auto trace = refine_proposal(init, exact_primitives(truth), cfg);
  EXPECT_EQ(trace.final_box.yaw(), 0.35);
}

TEST(DedupTest, IdenticalBoxesMerge) {
  const OrientedBox b(Vec3(1, 1, 1), Vec3::Ones(), 0.2);
  const auto out = dedup_proposals({b, b}, {-1.0, -2.0});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(dedup_indices({b, b}, {-1.0, -2.0}), std::vector<std::size_t>{1});
}

TEST(DedupTest, DistantBoxesBothKeptInValueOrder) {
  const OrientedBox a(Vec3(0, 0, 0), Vec3::Ones(), 0.0);
  const OrientedBox b(Vec3(5, 0, 0), Vec3::Ones(), 0.0);
  EXPECT_EQ(dedup_indices({a, b}, {-0.5, -1.0}), (std::vector<std::size_t>{1, 0}));
}

TEST(DedupTest, YawWrapsButHalfTurnIsDistinct) {
  const OrientedBox a(Vec3::Zero(), Vec3::Ones(), 3.14);
  const OrientedBox b(Vec3::Zero(), Vec3::Ones(), -3.14);
  EXPECT_EQ(dedup_proposals({a, b}, {0.0, 0.0}).size(), 1u);
  const OrientedBox c(Vec3::Zero(), Vec3::Ones(), 3.14 - std::numbers::pi);
  EXPECT_EQ(dedup_proposals({a, c}, {0.0, 0.0}).size(), 2u);
}

TEST(DedupTest, PerturbedInitsConvergeToOneSurvivor) {
  Rng rng(23);
  const OrientedBox truth(Vec3(2, 1, 0.6), Vec3(1.4, 0.9, 1.2), -0.4);
  const PrimitiveSet preds = exact_primitives(truth);
  std::vector<OrientedBox> boxes;
  std::vector<double> values;
  for (int k = 0; k < 10; ++k) {
    const auto trace = refine_proposal(testing::perturbed(truth, rng, 0.05, 0.05, 0.05),
                                       preds, FitConfig{});
    boxes.push_back(trace.final_box);
    values.push_back(trace.final_value);
  }
  EXPECT_EQ(dedup_proposals(boxes, values).size(), 1u);
}

TEST(DedupTest, ParallelListsRequired) {
  EXPECT_THROW(dedup_indices({OrientedBox(Vec3::Zero(), Vec3::Ones(), 0.0)}, {}),
               std::invalid_argument);
}

}  // namespace
}  // namespace hybridfit
