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
/// \brief Ground-truth primitive targets for scene points and the
/// primitive-level hit-rate metric.
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hybridfit/fitfunc.hpp"
#include "hybridfit/geometry.hpp"

namespace hybridfit {

inline constexpr double kDefaultLabelThreshold = 0.2;

struct FeatureRef {
  int box = -1;
  /// Face index 0..5 or edge index 0..11.
  int feature = -1;

  friend bool operator==(const FeatureRef&, const FeatureRef&) = default;
};

/// Closest face (or edge) of one point over all boxes.
struct FeatureLabel {
  /// distance < threshold.
  bool flag = false;
  /// Assigned feature; absent when there are no boxes.
  std::optional<FeatureRef> index;
  /// Assigned feature center minus the point.
  std::optional<Vec3> offset;
  double distance = 0.0;
};

struct PointLabel {
  FeatureLabel face;
  FeatureLabel edge;
  /// Box containing the point (lowest index if several).
  std::optional<int> owner;
  /// Owner center minus the point.
  std::optional<Vec3> center_offset;
};

using PointLabels = std::vector<PointLabel>;

/// Labels every point against the nearest face and edge of all boxes.
/// Throws std::invalid_argument unless threshold > 0.
PointLabels generate_labels(std::span<const Vec3> points,
                            std::span<const OrientedBox> boxes,
                            double threshold = kDefaultLabelThreshold);

/// Per-type fraction of ground-truth primitives with a same-type prediction
/// within tol. A type with no ground-truth primitives is absent.
struct PrimitiveAccuracy {
  std::optional<double> center;
  std::optional<double> face;
  std::optional<double> edge;

  const std::optional<double>& of(PrimitiveType type) const;
};

PrimitiveAccuracy primitive_accuracy(const PrimitiveSet& predicted,
                                     std::span<const OrientedBox> truth_boxes,
                                     double tol = 0.3);

}  // namespace hybridfit
