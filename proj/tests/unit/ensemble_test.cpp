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

#include "hybridfit/ensemble.hpp"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "generators.hpp"

namespace hybridfit {
namespace {

const OrientedBox kRef(Vec3(1, 2, 0.5), Vec3(1.2, 0.8, 1.0), 0.6);

PrimitivePositions constant_positions(const Vec3& c) {
  PrimitivePositions p;
  p.fill(c);
  return p;
}

PerPrimitive constant(double v) {
  PerPrimitive p;
  p.fill(v);
  return p;
}

NoiseModel isotropic(double sigma, CorrelationMode mode = CorrelationMode::kIndependent) {
  NoiseModel m;
  m.set_std(sigma);
  m.correlation = mode;
  return m;
}

TEST(ImpliedCenterTest, CenterKindIsIdentity) {
  const Vec3 p(3, -1, 2);
  EXPECT_EQ(implied_center(PrimitiveKind::from_slot(0), p, Vec3(1, 2, 3), 0.7), p);
}

TEST(ImpliedCenterTest, UnitCubeFace) {
  EXPECT_LT(implied_center(PrimitiveKind::from_slot(1), Vec3(0.5, 0, 0),
                           Vec3::Ones(), 0.0).norm(), 1e-15);
}

TEST(ImpliedCenterTest, RoundTripThroughExactPrimitives) {
  Rng rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    const OrientedBox box = testing::random_box(rng);
    PrimitivePositions pos;
    for (const auto& loc : primitive_locations(box)) pos[loc.kind.slot()] = loc.position;
    for (const Vec3& c : implied_centers(pos, box.scales(), box.yaw())) {
      EXPECT_LT((c - box.center()).norm(), 1e-12);
    }
  }
}

TEST(FusedCenterTest, EqualInputsAreExact) {
  const Vec3 c(0.1, -7.3, 2.9);
  for (const FusionWeights w : {FusionWeights{1, 1}, FusionWeights{0.5, 0.25},
                                FusionWeights{0, 0}, FusionWeights{3, 0.1}}) {
    const Vec3 f = fused_center(constant_positions(c), w);
    EXPECT_LE((f - c).lpNorm<Eigen::Infinity>(), 1e-15);
  }
}

TEST(FusedCenterTest, ZeroWeightsKeepCenterPrediction) {
  PrimitivePositions p = constant_positions(Vec3(5, 5, 5));
  p[0] = Vec3(1, 2, 3);
  EXPECT_EQ(fused_center(p, FusionWeights{0, 0}), Vec3(1, 2, 3));
}

TEST(FusedCenterTest, SingleFaceOffset) {
  PrimitivePositions p = constant_positions(Vec3::Zero());
  p[1] = Vec3(0.19, 0, 0);
  EXPECT_LT((fused_center(p, FusionWeights{1, 1}) - Vec3(0.01, 0, 0)).norm(), 1e-17);
}

TEST(VarianceFormulaTest, Examples) {
  const double s2 = 0.04;
  EXPECT_NEAR(variance_formula(constant(s2), FusionWeights{1, 1}), s2 / 19.0, 1e-18);
  PerPrimitive v = constant(9.0);
  v[0] = 0.3;
  EXPECT_EQ(variance_formula(v, FusionWeights{0, 0}), 0.3);
  EXPECT_EQ(variance_formula(constant(0.0), FusionWeights{0.3, 0.7}), 0.0);
}

TEST(VarianceFormulaTest, WeightsEnterSquared) {
  PerPrimitive v{};
  v[0] = 1.0;
  v[1] = 2.0;
  v[7] = 3.0;
  const FusionWeights w{0.5, 0.25};
  const double d = w.denominator();
  EXPECT_NEAR(variance_formula(v, w), (1.0 + 0.25 * 2.0 + 0.0625 * 3.0) / (d * d), 1e-15);
}

TEST(BiasBoundTest, Examples) {
  EXPECT_NEAR(bias_bound(constant(0.3), FusionWeights{0.5, 2.0}), 0.3, 1e-15);
  EXPECT_EQ(bias_bound(constant(0.0), FusionWeights{1, 1}), 0.0);
  PerPrimitive b{};
  for (int s = 0; s < kNumPrimitives; ++s) b[s] = 0.01 * s;
  const FusionWeights w{0.5, 0.25};
  double num = b[0];
  for (int s = 1; s <= 6; ++s) num += 0.5 * b[s];
  for (int s = 7; s < 19; ++s) num += 0.25 * b[s];
  EXPECT_NEAR(bias_bound(b, w), num / w.denominator(), 1e-15);
}

TEST(FusionWeightsTest, Validation) {
  EXPECT_THROW((FusionWeights{-1, 0}.validate()), std::invalid_argument);
  EXPECT_NO_THROW((FusionWeights{0, 0}.validate()));
  EXPECT_EQ((FusionWeights{2, 3}.weight(0)), 1.0);
  EXPECT_EQ((FusionWeights{2, 3}.weight(4)), 2.0);
  EXPECT_EQ((FusionWeights{2, 3}.weight(12)), 3.0);
}

TEST(EmpiricalMomentsTest, ZeroNoise) {
  const auto samples = draw_samples(kRef, isotropic(0.0), 1, 10);
  const auto m = empirical_moments(samples, kRef);
  for (int s = 0; s < kNumPrimitives; ++s) {
    EXPECT_EQ(m.bias[s], 0.0);
    EXPECT_EQ(m.variance[s], 0.0);
  }
}

TEST(EmpiricalMomentsTest, NeedsTwoSamples) {
  const auto samples = draw_samples(kRef, isotropic(0.1), 1, 1);
  EXPECT_THROW(empirical_moments(samples, kRef), std::invalid_argument);
}

TEST(EmpiricalMomentsTest, IndependentIsotropicNoise) {
  const auto samples = draw_samples(kRef, isotropic(0.1), 7, 10000);
  const auto m = empirical_moments(samples, kRef);
  for (int s = 0; s < kNumPrimitives; ++s) {
    // The spectral norm is the largest of three sample eigenvalues, which
    // sits slightly above sigma^2.
    EXPECT_NEAR(m.variance[s], 0.01, 0.05 * 0.01) << "slot " << s;
    for (int t = 0; t < kNumPrimitives; ++t) {
      if (s != t) EXPECT_LT(std::abs(m.correlation(s, t)), 0.05);
    }
    EXPECT_DOUBLE_EQ(m.correlation(s, s), 1.0);
  }
}

TEST(EmpiricalMomentsTest, SharedNoiseIsCorrelated) {
  for (const ErrorMagnitude mag : {ErrorMagnitude::kNearestPrediction, ErrorMagnitude::kDirect}) {
    const auto samples =
        draw_samples(kRef, isotropic(0.05, CorrelationMode::kSharedPerBox), 8, 2000);
    const auto m = empirical_moments(samples, kRef, mag);
    EXPECT_GT(m.correlation.minCoeff(), 0.95);
  }
}

TEST(EmpiricalMomentsTest, BiasIsMeanErrorNorm) {
  NoiseModel model = isotropic(0.0);
  model.of(PrimitiveType::kFace).bias = Vec3(0.03, 0.04, 0);
  const auto m = empirical_moments(draw_samples(kRef, model, 9, 5), kRef);
  EXPECT_NEAR(m.bias[0], 0.0, 1e-15);
  EXPECT_NEAR(m.bias[3], 0.05, 1e-12);
  EXPECT_NEAR(m.bias[10], 0.0, 1e-15);
}

TEST(DrawSamplesTest, DeterministicPerSeed) {
  const auto a = draw_samples(kRef, isotropic(0.1), 3, 20);
  const auto b = draw_samples(kRef, isotropic(0.1), 3, 20);
  ASSERT_EQ(a.size(), 20u);
  for (std::size_t t = 0; t < a.size(); ++t) {
    EXPECT_EQ(a[t].seed, derive_seed(3, t));
    EXPECT_EQ(a[t].positions, b[t].positions);
  }
}

TEST(DrawSamplesTest, RejectsDropoutAndOutliers) {
  NoiseModel m = isotropic(0.1);
  m.dropout_prob = 0.1;
  EXPECT_THROW(draw_samples(kRef, m, 0, 10), std::invalid_argument);
}

TEST(FusionStudyTest, VarianceFormulaMatchesMonteCarlo) {
  NoiseModel model = isotropic(0.1);
  model.of(PrimitiveType::kFace).std = 0.05;
  model.of(PrimitiveType::kEdge).std = 0.2;
  const auto samples = draw_samples(kRef, model, 10, 10000);
  for (double bf : {0.0, 0.5, 1.0}) {
    for (double be : {0.0, 0.5, 1.0}) {
      const FusionWeights w{bf, be};
      const auto study = fusion_study(samples, kRef, w, model_variances(model),
                                      model_bias_norms(model));
      for (int k = 0; k < 3; ++k) {
        EXPECT_NEAR(study.empirical_variance[k] / study.predicted_variance, 1.0, 0.05)
            << "beta " << bf << "," << be << " axis " << k;
      }
      EXPECT_LE(study.bias_norm, study.bias_bound + 3 * study.bias_standard_error);
    }
  }
}

TEST(FusionStudyTest, BiasBoundHoldsUnderBiasedNoise) {
  NoiseModel model = isotropic(0.05);
  model.of(PrimitiveType::kCenter).bias = Vec3(0.02, 0, 0);
  model.of(PrimitiveType::kFace).bias = Vec3(0, 0.03, 0.01);
  model.of(PrimitiveType::kEdge).bias = Vec3(-0.01, 0, 0.02);
  for (std::uint64_t batch = 0; batch < 5; ++batch) {
    const auto samples = draw_samples(kRef, model, 100 + batch, 2000);
    for (const FusionWeights w : {FusionWeights{0, 0}, FusionWeights{0.5, 1.0},
                                  FusionWeights{1, 1}}) {
      const auto study = fusion_study(samples, kRef, w, model_variances(model),
                                      model_bias_norms(model));
      EXPECT_LE(study.bias_norm, study.bias_bound + 3 * study.bias_standard_error);
    }
  }
}

TEST(FusionStudyTest, EqualVarianceReproducesOneNineteenth) {
  const auto samples = draw_samples(kRef, isotropic(0.1), 11, 10000);
  const auto study = fusion_study(samples, kRef, FusionWeights{1, 1},
                                  constant(0.01), constant(0.0));
  EXPECT_NEAR(study.predicted_variance, 0.01 / 19.0, 1e-18);
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(study.empirical_variance[k] / (0.01 / 19.0), 1.0, 0.05);
  }
}

}  // namespace
}  // namespace hybridfit
