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
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "hybridfit/random.hpp"

namespace hybridfit {

double FusionWeights::weight(int slot) const {
  const PrimitiveType t = PrimitiveKind::from_slot(slot).type();
  if (t == PrimitiveType::kFace) return beta_face;
  if (t == PrimitiveType::kEdge) return beta_edge;
  return 1.0;
}

void FusionWeights::validate() const {
  if (!(beta_face >= 0.0) || !(beta_edge >= 0.0)) {
    throw std::invalid_argument("fusion weights must be >= 0");
  }
}

Vec3 implied_center(const PrimitiveKind& kind, const Vec3& pred_pos,
                    const Vec3& ref_scales, double ref_yaw) {
  const OrientedBox ref(Vec3::Zero(), ref_scales, ref_yaw);
  return pred_pos - primitive_position(ref, kind.slot());
}

PrimitivePositions implied_centers(const PrimitivePositions& predictions,
                                   const Vec3& ref_scales, double ref_yaw) {
  const OrientedBox ref(Vec3::Zero(), ref_scales, ref_yaw);
  PrimitivePositions out;
  for (int s = 0; s < kNumPrimitives; ++s) {
    out[s] = predictions[s] - primitive_position(ref, s);
  }
  return out;
}

Vec3 fused_center(const PrimitivePositions& implied, const FusionWeights& w) {
  w.validate();
  Vec3 faces = Vec3::Zero();
  Vec3 edges = Vec3::Zero();
  for (int s = 1; s <= kNumFaces; ++s) faces += implied[s];
  for (int s = 1 + kNumFaces; s < kNumPrimitives; ++s) edges += implied[s];
  return (implied[0] + w.beta_face * faces + w.beta_edge * edges) /
         w.denominator();
}

double variance_formula(const PerPrimitive& variances, const FusionWeights& w) {
  w.validate();
  double num = 0.0;
  for (int s = 0; s < kNumPrimitives; ++s) {
    if (variances[s] < 0.0) throw std::invalid_argument("negative variance");
    const double beta = w.weight(s);
    num += beta * beta * variances[s];
  }
  const double den = w.denominator();
  return num / (den * den);
}

double bias_bound(const PerPrimitive& bias_norms, const FusionWeights& w) {
  w.validate();
  double num = 0.0;
  for (int s = 0; s < kNumPrimitives; ++s) {
    if (bias_norms[s] < 0.0) throw std::invalid_argument("negative bias norm");
    num += w.weight(s) * bias_norms[s];
  }
  return num / w.denominator();
}

EmpiricalMoments empirical_moments(
    std::span<const NoisyPrimitiveSample> samples, const OrientedBox& truth,
    ErrorMagnitude magnitude) {
  if (samples.size() < 2) {
    throw std::invalid_argument("empirical_moments needs at least 2 samples");
  }
  const auto n = static_cast<double>(samples.size());
  const auto locs = primitive_locations(truth);

  EmpiricalMoments out;
  std::array<Mat3, kNumPrimitives> second{};
  for (auto& m : out.mean_error) m.setZero();
  for (auto& m : second) m.setZero();
  Eigen::MatrixXd mags(static_cast<Eigen::Index>(samples.size()), kNumPrimitives);

  for (std::size_t t = 0; t < samples.size(); ++t) {
    const auto& pos = samples[t].positions;
    for (int s = 0; s < kNumPrimitives; ++s) {
      const Vec3 err = pos[s] - locs[s].position;
      out.mean_error[s] += err;
      second[s] += err * err.transpose();
      double mag = err.norm();
      if (magnitude == ErrorMagnitude::kNearestPrediction) {
        mag = std::numeric_limits<double>::infinity();
        for (int k = 0; k < kNumPrimitives; ++k) {
          if (locs[k].kind.type() != locs[s].kind.type()) continue;
          mag = std::min(mag, (pos[k] - locs[s].position).norm());
        }
      }
      mags(static_cast<Eigen::Index>(t), s) = mag;
    }
  }

  for (int s = 0; s < kNumPrimitives; ++s) {
    out.mean_error[s] /= n;
    out.bias[s] = out.mean_error[s].norm();
    const Mat3 cov =
        (second[s] - n * out.mean_error[s] * out.mean_error[s].transpose()) /
        (n - 1.0);
    const Eigen::SelfAdjointEigenSolver<Mat3> eig(cov, Eigen::EigenvaluesOnly);
    out.variance[s] = std::max(eig.eigenvalues().maxCoeff(), 0.0);
  }

  const Eigen::RowVectorXd mean = mags.colwise().mean();
  const Eigen::MatrixXd centered = mags.rowwise() - mean;
  const Eigen::MatrixXd cov = centered.transpose() * centered / (n - 1.0);
  for (int a = 0; a < kNumPrimitives; ++a) {
    for (int b = 0; b < kNumPrimitives; ++b) {
      const double denom = std::sqrt(cov(a, a) * cov(b, b));
      if (a == b) {
        out.correlation(a, b) = 1.0;
      } else if (denom > 0.0) {
        out.correlation(a, b) = cov(a, b) / denom;
      } else {
        out.correlation(a, b) = 0.0;
      }
    }
  }
  return out;
}

std::vector<NoisyPrimitiveSample> draw_samples(const OrientedBox& truth,
                                               const NoiseModel& model,
                                               std::uint64_t root_seed,
                                               int n_trials) {
  model.validate();
  if (model.dropout_prob != 0.0 || model.outlier_rate != 0.0) {
    throw std::invalid_argument(
        "draw_samples: dropout and outliers must be zero for 19-primitive "
        "samples");
  }
  const auto locs = primitive_locations(truth);
  std::vector<NoisyPrimitiveSample> out;
  out.reserve(static_cast<std::size_t>(std::max(n_trials, 0)));
  for (int t = 0; t < n_trials; ++t) {
    NoisyPrimitiveSample sample;
    sample.trial_id = t;
    sample.seed = derive_seed(root_seed, static_cast<std::uint64_t>(t));
    Rng rng(sample.seed);
    const Vec3 shared = rng.normal3();
    for (int s = 0; s < kNumPrimitives; ++s) {
      const Vec3 draw = model.correlation == CorrelationMode::kSharedPerBox
                            ? shared
                            : rng.normal3();
      sample.positions[s] =
          locs[s].position + noise_displacement(model.of(locs[s].kind.type()), draw);
    }
    out.push_back(sample);
  }
  return out;
}

PerPrimitive model_variances(const NoiseModel& model) {
  PerPrimitive v{};
  for (int s = 0; s < kNumPrimitives; ++s) {
    const double sd = model.of(PrimitiveKind::from_slot(s).type()).std;
    v[s] = sd * sd;
  }
  return v;
}

PerPrimitive model_bias_norms(const NoiseModel& model) {
  PerPrimitive b{};
  for (int s = 0; s < kNumPrimitives; ++s) {
    b[s] = model.of(PrimitiveKind::from_slot(s).type()).bias.norm();
  }
  return b;
}

FusionStudy fusion_study(std::span<const NoisyPrimitiveSample> samples,
                         const OrientedBox& truth, const FusionWeights& w,
                         const PerPrimitive& variances,
                         const PerPrimitive& bias_norms) {
  if (samples.size() < 2) {
    throw std::invalid_argument("fusion_study needs at least 2 samples");
  }
  const auto n = static_cast<double>(samples.size());
  Vec3 sum = Vec3::Zero();
  Mat3 second = Mat3::Zero();
  for (const auto& s : samples) {
    const Vec3 err =
        fused_center(implied_centers(s.positions, truth.scales(), truth.yaw()),
                     w) -
        truth.center();
    sum += err;
    second += err * err.transpose();
  }
  FusionStudy out;
  out.weights = w;
  out.trials = static_cast<int>(samples.size());
  out.mean_error = sum / n;
  const Mat3 cov =
      (second - n * out.mean_error * out.mean_error.transpose()) / (n - 1.0);
  out.empirical_variance = cov.diagonal();
  out.predicted_variance = variance_formula(variances, w);
  out.bias_norm = out.mean_error.norm();
  out.bias_bound = bias_bound(bias_norms, w);
  out.bias_standard_error = std::sqrt(std::max(cov.trace(), 0.0) / n);
  return out;
}

}  // namespace hybridfit
