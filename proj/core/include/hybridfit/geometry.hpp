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
/// \brief Z-upright oriented boxes, their 19 geometric primitives, surface
/// distance queries and volumetric IoU.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include <Eigen/Core>

namespace hybridfit {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr int kNumBoxParams = 7;
inline constexpr int kNumFaces = 6;
inline constexpr int kNumEdges = 12;
inline constexpr int kNumPrimitives = 1 + kNumFaces + kNumEdges;

/// Box parameter vector: (center_x, center_y, center_z, s_x, s_y, s_z, yaw).
using BoxParams = Eigen::Matrix<double, kNumBoxParams, 1>;
using BoxMatrix = Eigen::Matrix<double, kNumBoxParams, kNumBoxParams>;
/// Derivative of a world-frame primitive position with respect to BoxParams.
using PrimitiveJacobian = Eigen::Matrix<double, 3, kNumBoxParams>;

enum class PrimitiveType : std::uint8_t { kCenter = 0, kFace = 1, kEdge = 2 };

inline constexpr std::array<PrimitiveType, 3> kPrimitiveTypes = {
    PrimitiveType::kCenter, PrimitiveType::kFace, PrimitiveType::kEdge};

std::string_view to_string(PrimitiveType type);
/// Accepts "center", "face" or "edge"; throws std::invalid_argument otherwise.
PrimitiveType parse_primitive_type(std::string_view name);
/// Number of object primitives of the given type on one box (1, 6 or 12).
int primitive_count(PrimitiveType type);

/// Identifies one of the 19 object primitives of a box.
///
/// Canonical slot order: slot 0 is the center, slots 1..6 the faces in the
/// local-frame order (+x, -x, +y, -y, +z, -z), slots 7..18 the edges. Edges
/// are enumerated by axis pair (xy, xz, yz) and then by the sign pair
/// (++, +-, -+, --).
class PrimitiveKind {
 public:
  PrimitiveKind() = default;
  PrimitiveKind(PrimitiveType type, int index);

  static PrimitiveKind from_slot(int slot);

  PrimitiveType type() const { return type_; }
  int index() const { return index_; }
  int slot() const;

  friend bool operator==(const PrimitiveKind&, const PrimitiveKind&) = default;

 private:
  PrimitiveType type_ = PrimitiveType::kCenter;
  int index_ = 0;
};

/// Local-frame sign pattern of a primitive slot; entries are -1, 0 or +1.
/// The local position of the primitive is 0.5 * signs .* scales.
Eigen::Vector3i primitive_signs(int slot);

/// Wraps an angle to [-pi, pi).
double wrap_angle(double radians);

/// Object proposal with an upright z axis.
///
/// Invariants: every scale is finite and strictly positive, yaw is kept in
/// [-pi, pi). Construction throws std::invalid_argument on violation.
class OrientedBox {
 public:
  OrientedBox(const Vec3& center, const Vec3& scales, double yaw,
              std::optional<int> class_label = std::nullopt,
              std::optional<double> score = std::nullopt);

  static OrientedBox from_params(const BoxParams& params,
                                 std::optional<int> class_label = std::nullopt,
                                 std::optional<double> score = std::nullopt);

  BoxParams params() const;

  const Vec3& center() const { return center_; }
  const Vec3& scales() const { return scales_; }
  Vec3 half_extents() const { return 0.5 * scales_; }
  double yaw() const { return yaw_; }
  /// Unit heading (cos yaw, sin yaw) in the xy plane.
  Eigen::Vector2d heading() const;
  Mat3 rotation() const;
  double volume() const { return scales_.prod(); }

  const std::optional<int>& class_label() const { return class_label_; }
  const std::optional<double>& score() const { return score_; }

  OrientedBox with_score(std::optional<double> score) const;
  OrientedBox with_class(std::optional<int> class_label) const;

  Vec3 to_local(const Vec3& world) const;
  Vec3 to_world(const Vec3& local) const;

  /// Closed containment test in the box frame, inflated by `tol` meters.
  bool contains(const Vec3& world, double tol = 0.0) const;

 private:
  Vec3 center_;
  Vec3 scales_;
  double yaw_;
  std::optional<int> class_label_;
  std::optional<double> score_;
};

struct PrimitiveLocation {
  PrimitiveKind kind;
  Vec3 position;
};

/// World positions of the 19 object primitives in canonical slot order.
std::array<PrimitiveLocation, kNumPrimitives> primitive_locations(
    const OrientedBox& box);

Vec3 primitive_position(const OrientedBox& box, int slot);

/// d p_slot / d params.
PrimitiveJacobian primitive_jacobian(const OrientedBox& box, int slot);

/// sum_k weights[k] * d^2 p_slot[k] / d params^2. Symmetric; only the
/// scale/yaw block is nonzero.
BoxMatrix primitive_curvature(const OrientedBox& box, int slot,
                              const Vec3& weights);

struct SurfaceDistance {
  int index = -1;
  double distance = 0.0;
};

/// Distance to the nearest of the six bounded face rectangles. Ties within
/// kTieTolerance go to the lowest face index.
SurfaceDistance point_face_distance(const Vec3& point, const OrientedBox& box);

/// Distance to the nearest of the twelve bounded edge segments, same tie rule.
SurfaceDistance point_edge_distance(const Vec3& point, const OrientedBox& box);

/// Distance to one specific face (0..5) or edge (0..11).
double point_face_distance(const Vec3& point, const OrientedBox& box, int face);
double point_edge_distance(const Vec3& point, const OrientedBox& box, int edge);

/// Absolute distance slack under which two candidates count as tied.
inline constexpr double kTieTolerance = 1e-12;

/// Area of the intersection of the two xy footprints (exact convex clipping).
double footprint_intersection_area(const OrientedBox& a, const OrientedBox& b);

/// Volume intersection-over-union of two z-upright boxes.
double iou3d(const OrientedBox& a, const OrientedBox& b);

}  // namespace hybridfit
