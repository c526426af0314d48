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

/// \file
/// \brief Fusion of the 19 per-primitive center estimates of one box and the
/// Monte Carlo machinery that checks its bias and variance behavior.
///
/// Every face or edge prediction implies a box center once its known offset
/// is removed. The fused center is the weighted mean
///
///   x = (y_c + b_f sum y_f + b_e sum y_e) / (1 + 6 b_f + 12 b_e).
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "hybridfit/geometry.hpp"
#include "hybridfit/scenegen.hpp"

namespace hybridfit {

using PerPrimitive = std::array<double, kNumPrimitives>;
using PrimitivePositions = std::array<Vec3, kNumPrimitives>;
using PrimitiveMatrix = Eigen::Matrix<double, kNumPrimitives, kNumPrimitives>;

struct FusionWeights {
  double beta_face = 1.0;
  double beta_edge = 1.0;

  double weight(int slot) const;
  double denominator() const { return 1.0 + 6.0 * beta_face + 12.0 * beta_edge; }
  void validate() const;
};

/// One Monte Carlo trial: predicted positions of the 19 primitives of a
/// reference box, in canonical slot order.
struct NoisyPrimitiveSample {
  int trial_id = 0;
  std::uint64_t seed = 0;
  PrimitivePositions positions;
};

/// Center implied by a primitive prediction for a box of the given scales
/// and yaw.
Vec3 implied_center(const PrimitiveKind& kind, const Vec3& pred_pos,
                    const Vec3& ref_scales, double ref_yaw);

/// Implied centers of all 19 predictions of a sample.
PrimitivePositions implied_centers(const PrimitivePositions& predictions,
                                   const Vec3& ref_scales, double ref_yaw);

Vec3 fused_center(const PrimitivePositions& implied, const FusionWeights& w);

/// Per-coordinate variance of the fused center when the 19 implied centers
/// are independent with the given per-coordinate variances:
///
///   (V_c + b_f^2 sum V_f + b_e^2 sum V_e) / (1 + 6 b_f + 12 b_e)^2.
double variance_formula(const PerPrimitive& variances, const FusionWeights& w);

/// Triangle-inequality bound on the norm of the fused center's bias:
///
///   (b_c + b_f sum b_f,i + b_e sum b_e,i) / (1 + 6 b_f + 12 b_e).
double bias_bound(const PerPrimitive& bias_norms, const FusionWeights& w);

enum class ErrorMagnitude {
  /// Distance from each true primitive to the nearest same-type prediction.
  kNearestPrediction,
  /// Norm of the prediction error of the primitive's own prediction.
  kDirect,
};

struct EmpiricalMoments {
  PrimitivePositions mean_error;
  /// Norm of the mean error per primitive.
  PerPrimitive bias;
  /// Spectral norm of the 3x3 sample covariance per primitive.
  PerPrimitive variance;
  /// Sample correlation of scalar error magnitudes between primitives. Pairs
  /// involving a constant magnitude are 0 off the diagonal.
  PrimitiveMatrix correlation;
};

/// Throws std::invalid_argument with fewer than 2 samples.
EmpiricalMoments empirical_moments(
    std::span<const NoisyPrimitiveSample> samples, const OrientedBox& truth,
    ErrorMagnitude magnitude = ErrorMagnitude::kNearestPrediction);

/// `n_trials` samples of the exact primitives of `truth` displaced by the
/// noise model (bias, std and correlation mode; dropout and outliers must be
/// zero). Trial t uses seed derive_seed(root_seed, t).
std::vector<NoisyPrimitiveSample> draw_samples(const OrientedBox& truth,
                                               const NoiseModel& model,
                                               std::uint64_t root_seed,
                                               int n_trials);

/// Per-primitive variance and bias norm of the implied centers under a
/// noise model.
PerPrimitive model_variances(const NoiseModel& model);
PerPrimitive model_bias_norms(const NoiseModel& model);

struct FusionStudy {
  FusionWeights weights;
  Vec3 mean_error = Vec3::Zero();
  /// Sample variance of the fused center per coordinate.
  Vec3 empirical_variance = Vec3::Zero();
  double predicted_variance = 0.0;
  double bias_norm = 0.0;
  double bias_bound = 0.0;
  /// Standard error of bias_norm, sqrt(trace(cov) / n).
  double bias_standard_error = 0.0;
  int trials = 0;
};

/// Fuses every sample with reference scales and yaw taken from `truth` and
/// compares the empirical moments against the closed forms.
FusionStudy fusion_study(std::span<const NoisyPrimitiveSample> samples,
                         const OrientedBox& truth, const FusionWeights& w,
                         const PerPrimitive& variances,
                         const PerPrimitive& bias_norms);

}  // namespace hybridfit
