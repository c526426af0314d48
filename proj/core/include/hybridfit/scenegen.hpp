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
/// \brief Synthetic scenes and noisy primitive predictions.
#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hybridfit/fitfunc.hpp"
#include "hybridfit/geometry.hpp"

namespace hybridfit {

class SceneGenError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Bounds {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3(8.0, 8.0, 3.0);

  Vec3 extent() const { return max - min; }
  /// All 8 corners of the box lie inside (with `tol` slack).
  bool contains(const OrientedBox& box, double tol = 1e-9) const;
};

struct SceneSpec {
  std::uint64_t seed = 0;
  int id = 0;
  int n_boxes = 4;
  Vec3 size_min = Vec3::Constant(0.8);
  Vec3 size_max = Vec3::Constant(1.2);
  Bounds bounds;
  int points_per_box = 200;
  int n_classes = 3;
  /// Minimum clearance between box footprints, meters.
  double min_gap = 0.5;
  /// Uniform room points added, as a fraction of the surface point count.
  double clutter_rate = 0.0;
  int max_attempts = 1000;

  void validate() const;
};

struct Scene {
  int id = 0;
  std::uint64_t seed = 0;
  Bounds bounds;
  std::vector<OrientedBox> boxes;
  std::vector<Vec3> points;
};

/// Boxes rest on the floor of `bounds` with a uniform yaw and footprints at
/// least min_gap apart; points are sampled uniformly by area on box faces.
/// Throws SceneGenError when a box cannot be placed within max_attempts.
Scene generate_scene(const SceneSpec& spec);

/// `count` scenes with ids 0.. and seeds derived from spec.seed.
std::vector<Scene> generate_scenes(const SceneSpec& spec, int count);

enum class CorrelationMode { kIndependent, kSharedPerBox };

struct TypeNoise {
  Vec3 bias = Vec3::Zero();
  /// Isotropic Gaussian standard deviation, meters.
  double std = 0.0;
};

struct NoiseModel {
  std::array<TypeNoise, 3> per_type{};
  double dropout_prob = 0.0;
  /// Expected number of uniform outlier predictions per scene.
  double outlier_rate = 0.0;
  /// Outliers are drawn in the scene bounds grown by this margin, meters.
  double outlier_extent = 0.0;
  CorrelationMode correlation = CorrelationMode::kIndependent;

  TypeNoise& of(PrimitiveType type) {
    return per_type[static_cast<std::size_t>(type)];
  }
  const TypeNoise& of(PrimitiveType type) const {
    return per_type[static_cast<std::size_t>(type)];
  }
  void set_std(double std);
  void validate() const;
};

/// Exact primitives of every box, each dropped with dropout_prob and
/// otherwise displaced by its type's bias plus Gaussian noise (one draw per
/// box under kSharedPerBox, scaled per type), plus uniform outliers. Ids are
/// assigned in generation order.
PrimitiveSet corrupt_primitives(const Scene& scene, const NoiseModel& model,
                                std::uint64_t seed);

/// The noise displacement applied to one primitive. Exposed for the
/// Monte Carlo analysis so it shares the generator's noise model.
Vec3 noise_displacement(const TypeNoise& noise, const Vec3& standard_draw);

}  // namespace hybridfit
