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
/// \brief The truncated-L2 proposal distance function between a set of
/// predicted primitives and the 19 primitives of a candidate box, with its
/// active assignment and analytic first and second derivatives.
///
/// For a box o and predictions S,
///
///   F_S(o) = sum_t beta_t sum_{c in S_t} min(min_{i : t_i = t} |c - p_i(o)|^2 - delta, 0)
///
/// Derivatives are taken with the active assignment held fixed, which is
/// exact away from assignment ties and truncation boundaries.
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "hybridfit/geometry.hpp"

namespace hybridfit {

struct Primitive {
  PrimitiveType type = PrimitiveType::kCenter;
  Vec3 position = Vec3::Zero();
  int id = 0;
  /// Index of the box that generated this prediction, when known.
  std::optional<int> source;
  /// Semantic label carried by the prediction, when known.
  std::optional<int> class_label;
};

/// Predicted primitives of one scene. Ids are unique within a set.
class PrimitiveSet {
 public:
  PrimitiveSet() = default;
  explicit PrimitiveSet(std::vector<Primitive> entries);

  void add(Primitive primitive);
  void set_position(std::size_t i, const Vec3& position);

  const std::vector<Primitive>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const Primitive& operator[](std::size_t i) const { return entries_[i]; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  std::size_t count(PrimitiveType type) const;
  int next_id() const;

 private:
  std::vector<Primitive> entries_;
};

/// The 19 exact primitives of `box` as predictions, ids first_id.. in slot
/// order.
PrimitiveSet exact_primitives(const OrientedBox& box, int first_id = 0,
                              std::optional<int> source = std::nullopt);

struct RefineOptions {
  double tol_g = 1e-8;
  double tol_x = 1e-8;
  int max_iters = 100;
  double min_scale = 0.02;
  double initial_damping = 1e-3;
  bool freeze_yaw = false;
};

struct FitConfig {
  double beta_center = 1.0;
  double beta_face = 1.0;
  double beta_edge = 1.0;
  /// Truncation threshold in squared meters.
  double delta = 0.09;
  RefineOptions refine;

  double beta(PrimitiveType type) const;
  /// Throws std::invalid_argument when a field breaks its precondition.
  void validate() const;
};

/// Slack used to flag residuals at the truncation boundary or near-ties
/// between candidate object primitives.
inline constexpr double kBoundaryTolerance = 1e-9;

struct Match {
  /// Object primitive slot (0..18), or empty when truncated.
  std::optional<int> slot;
  /// Squared distance to the nearest same-type object primitive.
  double residual = 0.0;
};

struct Assignment {
  std::vector<Match> matches;
  /// Set when any prediction sits within kBoundaryTolerance of the truncation
  /// threshold or of a tie between two candidates.
  bool boundary = false;

  std::size_t matched_count() const;
};

Assignment assignment(const PrimitiveSet& preds, const OrientedBox& box,
                      const FitConfig& cfg);

double distance_value(const PrimitiveSet& preds, const OrientedBox& box,
                      const FitConfig& cfg);

struct GradientResult {
  BoxParams gradient;
  bool boundary = false;
};

struct HessianResult {
  BoxMatrix hessian;
  bool boundary = false;
};

/// Gradient with respect to (center, scales, yaw).
GradientResult distance_gradient(const PrimitiveSet& preds,
                                 const OrientedBox& box, const FitConfig& cfg);

HessianResult distance_hessian(const PrimitiveSet& preds,
                               const OrientedBox& box, const FitConfig& cfg);

/// Everything above from a single pass over the predictions.
struct FitEvaluation {
  double value = 0.0;
  BoxParams gradient = BoxParams::Zero();
  BoxMatrix hessian = BoxMatrix::Zero();
  Assignment assignment;
};

FitEvaluation evaluate_fit(const PrimitiveSet& preds, const OrientedBox& box,
                           const FitConfig& cfg);

/// Score for a fitted proposal: -F normalized by the value of a box whose
/// 19 primitives are all matched exactly, clamped to [0, 1].
double normalized_score(double value, const FitConfig& cfg);

}  // namespace hybridfit
