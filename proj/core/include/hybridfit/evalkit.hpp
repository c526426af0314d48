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
/// \brief Per-class average precision and mean AP for scored 3D detections.
#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "hybridfit/geometry.hpp"

namespace hybridfit {

/// Scored, labeled detections of one scene.
struct DetectionSet {
  int scene_id = 0;
  std::vector<OrientedBox> detections;

  /// Every detection needs a class label and a score in [0, 1].
  void validate() const;
};

struct GroundTruth {
  int scene_id = 0;
  std::vector<OrientedBox> boxes;
};

enum class Interpolation {
  /// Area under the precision envelope at every recall change.
  kAllPoint,
  /// Mean envelope precision at recall 0, 0.1, ..., 1.
  kElevenPoint,
};

struct ClassEvaluation {
  /// Absent when the class has no ground truth.
  std::optional<double> ap;
  int num_ground_truth = 0;
  int num_detections = 0;
  int true_positives = 0;
  /// Ranked precision / recall after each detection.
  std::vector<double> precision;
  std::vector<double> recall;
};

/// Detections of `class_label` pooled over scenes and ranked by descending
/// score (input order breaks ties). Each detection takes the highest-IoU
/// unmatched ground truth of its scene with IoU >= iou_thresh.
ClassEvaluation evaluate_class(std::span<const DetectionSet> dets,
                               std::span<const GroundTruth> gts,
                               int class_label, double iou_thresh,
                               Interpolation interp = Interpolation::kAllPoint);

std::optional<double> average_precision(
    std::span<const DetectionSet> dets, std::span<const GroundTruth> gts,
    int class_label, double iou_thresh,
    Interpolation interp = Interpolation::kAllPoint);

struct MeanApResult {
  double map = 0.0;
  std::map<int, std::optional<double>> per_class;
};

/// Unweighted mean over the classes with a defined AP. Throws
/// std::invalid_argument when none is defined.
MeanApResult mean_ap(std::span<const DetectionSet> dets,
                     std::span<const GroundTruth> gts,
                     std::span<const int> classes, double iou_thresh,
                     Interpolation interp = Interpolation::kAllPoint);

/// Sorted union of labels appearing in ground truth and detections.
std::vector<int> class_labels(std::span<const DetectionSet> dets,
                              std::span<const GroundTruth> gts);

}  // namespace hybridfit
