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
#include <numbers>
#include <string>

#include "hybridfit/random.hpp"

namespace hybridfit {

namespace {

Vec3 uniform_vec(Rng& rng, const Vec3& lo, const Vec3& hi) {
  const double x = rng.uniform(lo.x(), hi.x());
  const double y = rng.uniform(lo.y(), hi.y());
  const double z = rng.uniform(lo.z(), hi.z());
  return {x, y, z};
}

Vec3 sample_surface(Rng& rng, const OrientedBox& box) {
  const Vec3 s = box.scales();
  const std::array<double, 3> area = {s.y() * s.z(), s.x() * s.z(),
                                      s.x() * s.y()};
  const double total = 2.0 * (area[0] + area[1] + area[2]);
  double pick = rng.uniform() * total;
  int axis = 2;
  for (int k = 0; k < 3; ++k) {
    if (pick < 2.0 * area[k]) {
      axis = k;
      break;
    }
    pick -= 2.0 * area[k];
  }
  const Vec3 half = box.half_extents();
  Vec3 local;
  for (int k = 0; k < 3; ++k) local[k] = rng.uniform(-half[k], half[k]);
  local[axis] = rng.bernoulli(0.5) ? half[axis] : -half[axis];
  return box.to_world(local);
}

}  // namespace

bool Bounds::contains(const OrientedBox& box, double tol) const {
  const Vec3 half = box.half_extents();
  for (int sx : {-1, 1}) {
    for (int sy : {-1, 1}) {
      for (int sz : {-1, 1}) {
        const Vec3 c = box.to_world(Vec3(sx * half.x(), sy * half.y(), sz * half.z()));
        if ((c.array() < min.array() - tol).any() ||
            (c.array() > max.array() + tol).any()) {
          return false;
        }
      }
    }
  }
  return true;
}

void SceneSpec::validate() const {
  if (n_boxes < 0) throw std::invalid_argument("n_boxes must be >= 0");
  if ((size_min.array() <= 0.0).any() ||
      (size_max.array() < size_min.array()).any()) {
    throw std::invalid_argument("size ranges must be positive and ordered");
  }
  if ((bounds.max.array() <= bounds.min.array()).any()) {
    throw std::invalid_argument("scene bounds must have positive extent");
  }
  if (points_per_box < 0) throw std::invalid_argument("points_per_box < 0");
  if (n_classes < 1) throw std::invalid_argument("n_classes must be >= 1");
  if (min_gap < 0.0) throw std::invalid_argument("min_gap must be >= 0");
  if (clutter_rate < 0.0) throw std::invalid_argument("clutter_rate < 0");
  if (max_attempts < 1) throw std::invalid_argument("max_attempts < 1");
}

Scene generate_scene(const SceneSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  Scene scene;
  scene.id = spec.id;
  scene.seed = spec.seed;
  scene.bounds = spec.bounds;

  for (int b = 0; b < spec.n_boxes; ++b) {
    bool placed = false;
    for (int attempt = 0; attempt < spec.max_attempts && !placed; ++attempt) {
      const Vec3 scales = uniform_vec(rng, spec.size_min, spec.size_max);
      const double yaw = rng.uniform(-std::numbers::pi, std::numbers::pi);
      const int label = static_cast<int>(
          rng.uniform_index(static_cast<std::size_t>(spec.n_classes)));
      const double reach = 0.5 * scales.head<2>().norm();
      const Vec3 lo = spec.bounds.min;
      const Vec3 hi = spec.bounds.max;
      if (hi.x() - lo.x() < 2.0 * reach || hi.y() - lo.y() < 2.0 * reach ||
          hi.z() - lo.z() < scales.z()) {
        continue;
      }
      const Vec3 center(rng.uniform(lo.x() + reach, hi.x() - reach),
                        rng.uniform(lo.y() + reach, hi.y() - reach),
                        lo.z() + 0.5 * scales.z());
      const OrientedBox box(center, scales, yaw, label);
      const OrientedBox grown(
          center, scales + Vec3(2.0 * spec.min_gap, 2.0 * spec.min_gap, 0.0),
          yaw);
      bool clear = true;
      for (const auto& other : scene.boxes) {
        if (footprint_intersection_area(grown, other) > 0.0) {
          clear = false;
          break;
        }
      }
      if (clear) {
        scene.boxes.push_back(box);
        placed = true;
      }
    }
    if (!placed) {
      throw SceneGenError("generate_scene: could not place box " +
                          std::to_string(b) + " of " +
                          std::to_string(spec.n_boxes) + " after " +
                          std::to_string(spec.max_attempts) +
                          " attempts (seed " + std::to_string(spec.seed) + ")");
    }
  }

  for (const auto& box : scene.boxes) {
    for (int i = 0; i < spec.points_per_box; ++i) {
      scene.points.push_back(sample_surface(rng, box));
    }
  }
  const auto clutter = static_cast<std::size_t>(
      std::llround(spec.clutter_rate * static_cast<double>(scene.points.size())));
  for (std::size_t i = 0; i < clutter; ++i) {
    scene.points.push_back(uniform_vec(rng, spec.bounds.min, spec.bounds.max));
  }
  return scene;
}

std::vector<Scene> generate_scenes(const SceneSpec& spec, int count) {
  std::vector<Scene> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    SceneSpec s = spec;
    s.id = i;
    s.seed = derive_seed(spec.seed, static_cast<std::uint64_t>(i));
    out.push_back(generate_scene(s));
  }
  return out;
}

void NoiseModel::set_std(double std) {
  for (auto& t : per_type) t.std = std;
}

void NoiseModel::validate() const {
  for (const auto& t : per_type) {
    if (!(t.std >= 0.0) || !t.bias.allFinite()) {
      throw std::invalid_argument("noise std must be >= 0 and bias finite");
    }
  }
  if (!(dropout_prob >= 0.0 && dropout_prob <= 1.0)) {
    throw std::invalid_argument("dropout_prob must be in [0, 1]");
  }
  if (!(outlier_rate >= 0.0)) throw std::invalid_argument("outlier_rate < 0");
  if (!(outlier_extent >= 0.0)) throw std::invalid_argument("outlier_extent < 0");
}

Vec3 noise_displacement(const TypeNoise& noise, const Vec3& standard_draw) {
  return noise.bias + noise.std * standard_draw;
}

PrimitiveSet corrupt_primitives(const Scene& scene, const NoiseModel& model,
                                std::uint64_t seed) {
  model.validate();
  Rng rng(seed);
  PrimitiveSet out;
  int next_id = 0;
  int max_label = -1;

  for (std::size_t b = 0; b < scene.boxes.size(); ++b) {
    const OrientedBox& box = scene.boxes[b];
    if (box.class_label()) max_label = std::max(max_label, *box.class_label());
    const Vec3 shared = rng.normal3();
    for (const auto& loc : primitive_locations(box)) {
      const bool dropped = rng.bernoulli(model.dropout_prob);
      const Vec3 draw = model.correlation == CorrelationMode::kSharedPerBox
                            ? shared
                            : rng.normal3();
      const int id = next_id++;
      if (dropped) continue;
      out.add({loc.kind.type(),
               loc.position + noise_displacement(model.of(loc.kind.type()), draw),
               id, static_cast<int>(b), box.class_label()});
    }
  }

  const double whole = std::floor(model.outlier_rate);
  std::size_t outliers = static_cast<std::size_t>(whole);
  if (rng.bernoulli(model.outlier_rate - whole)) ++outliers;
  const Vec3 margin = Vec3::Constant(model.outlier_extent);
  for (std::size_t i = 0; i < outliers; ++i) {
    const int slot = static_cast<int>(rng.uniform_index(kNumPrimitives));
    const Vec3 pos =
        uniform_vec(rng, scene.bounds.min - margin, scene.bounds.max + margin);
    std::optional<int> label;
    if (max_label >= 0) {
      label = static_cast<int>(
          rng.uniform_index(static_cast<std::size_t>(max_label + 1)));
    }
    out.add({PrimitiveKind::from_slot(slot).type(), pos, next_id++,
             std::nullopt, label});
  }
  return out;
}

}  // namespace hybridfit
