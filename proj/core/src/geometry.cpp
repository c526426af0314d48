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

#include "hybridfit/geometry.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace hybridfit {

namespace {

constexpr std::array<std::array<int, 3>, kNumPrimitives> kSlotSigns = {{
    {0, 0, 0},
    // faces
    {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1},
    // edges: xy
    {1, 1, 0}, {1, -1, 0}, {-1, 1, 0}, {-1, -1, 0},
    // xz
    {1, 0, 1}, {1, 0, -1}, {-1, 0, 1}, {-1, 0, -1},
    // yz
    {0, 1, 1}, {0, 1, -1}, {0, -1, 1}, {0, -1, -1},
}};

constexpr int kFirstFaceSlot = 1;
constexpr int kFirstEdgeSlot = 1 + kNumFaces;

Mat3 yaw_rotation(double yaw) {
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  Mat3 r;
  r << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;
  return r;
}

Mat3 yaw_rotation_d1(double yaw) {
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  Mat3 r;
  r << -s, -c, 0.0, c, -s, 0.0, 0.0, 0.0, 0.0;
  return r;
}

Mat3 yaw_rotation_d2(double yaw) {
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  Mat3 r;
  r << -c, s, 0.0, -s, -c, 0.0, 0.0, 0.0, 0.0;
  return r;
}

Vec3 slot_signs(int slot) {
  const auto& s = kSlotSigns.at(static_cast<std::size_t>(slot));
  return {static_cast<double>(s[0]), static_cast<double>(s[1]),
          static_cast<double>(s[2])};
}

// Distance from a local point to the axis-aligned box feature described by
// `signs`: coordinates with a nonzero sign are pinned to that side, the
// others are free within [-h, h].
double feature_distance(const Vec3& local, const Vec3& half,
                        const Vec3& signs) {
  double sq = 0.0;
  for (int k = 0; k < 3; ++k) {
    double d;
    if (signs[k] != 0.0) {
      d = local[k] - signs[k] * half[k];
    } else {
      d = std::max(std::abs(local[k]) - half[k], 0.0);
    }
    sq += d * d;
  }
  return std::sqrt(sq);
}

template <int Count>
SurfaceDistance nearest_feature(const Vec3& point, const OrientedBox& box,
                                int first_slot) {
  const Vec3 local = box.to_local(point);
  const Vec3 half = box.half_extents();
  std::array<double, Count> dist{};
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < Count; ++i) {
    dist[i] = feature_distance(local, half, slot_signs(first_slot + i));
    best = std::min(best, dist[i]);
  }
  for (int i = 0; i < Count; ++i) {
    if (dist[i] <= best + kTieTolerance) return {i, dist[i]};
  }
  return {};
}

using Polygon = std::vector<Eigen::Vector2d>;

Polygon footprint(const OrientedBox& box) {
  const Eigen::Vector2d c = box.center().head<2>();
  const Eigen::Vector2d u = box.heading() * (0.5 * box.scales().x());
  const Eigen::Vector2d v =
      Eigen::Vector2d(-box.heading().y(), box.heading().x()) *
      (0.5 * box.scales().y());
  return {c + u + v, c - u + v, c - u - v, c + u - v};
}

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

double polygon_area(const Polygon& poly) {
  if (poly.size() < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    twice += cross2(poly[i], poly[(i + 1) % poly.size()]);
  }
  return 0.5 * std::abs(twice);
}

// Sutherland-Hodgman clipping of `subject` by the convex CCW polygon `clip`.
Polygon clip_convex(Polygon subject, const Polygon& clip) {
  for (std::size_t e = 0; e < clip.size() && !subject.empty(); ++e) {
    const Eigen::Vector2d& a = clip[e];
    const Eigen::Vector2d& b = clip[(e + 1) % clip.size()];
    const Eigen::Vector2d edge = b - a;
    auto side = [&](const Eigen::Vector2d& p) { return cross2(edge, p - a); };

    Polygon out;
    out.reserve(subject.size() + 2);
    for (std::size_t i = 0; i < subject.size(); ++i) {
      const Eigen::Vector2d& cur = subject[i];
      const Eigen::Vector2d& prev =
          subject[(i + subject.size() - 1) % subject.size()];
      const double s_cur = side(cur);
      const double s_prev = side(prev);
      const bool in_cur = s_cur >= 0.0;
      const bool in_prev = s_prev >= 0.0;
      if (in_cur != in_prev) {
        const double t = s_prev / (s_prev - s_cur);
        out.push_back(prev + t * (cur - prev));
      }
      if (in_cur) out.push_back(cur);
    }
    subject = std::move(out);
  }
  return subject;
}

}  // namespace

std::string_view to_string(PrimitiveType type) {
  switch (type) {
    case PrimitiveType::kCenter:
      return "center";
    case PrimitiveType::kFace:
      return "face";
    case PrimitiveType::kEdge:
      return "edge";
  }
  return "unknown";
}

PrimitiveType parse_primitive_type(std::string_view name) {
  if (name == "center") return PrimitiveType::kCenter;
  if (name == "face") return PrimitiveType::kFace;
  if (name == "edge") return PrimitiveType::kEdge;
  throw std::invalid_argument("unknown primitive type '" + std::string(name) +
                              "'");
}

int primitive_count(PrimitiveType type) {
  switch (type) {
    case PrimitiveType::kCenter:
      return 1;
    case PrimitiveType::kFace:
      return kNumFaces;
    case PrimitiveType::kEdge:
      return kNumEdges;
  }
  return 0;
}

PrimitiveKind::PrimitiveKind(PrimitiveType type, int index)
    : type_(type), index_(index) {
  if (index < 0 || index >= primitive_count(type)) {
    throw std::out_of_range("primitive index " + std::to_string(index) +
                            " out of range for type " +
                            std::string(to_string(type)));
  }
}

PrimitiveKind PrimitiveKind::from_slot(int slot) {
  if (slot < 0 || slot >= kNumPrimitives) {
    throw std::out_of_range("primitive slot " + std::to_string(slot));
  }
  if (slot == 0) return {PrimitiveType::kCenter, 0};
  if (slot < kFirstEdgeSlot) return {PrimitiveType::kFace, slot - kFirstFaceSlot};
  return {PrimitiveType::kEdge, slot - kFirstEdgeSlot};
}

int PrimitiveKind::slot() const {
  switch (type_) {
    case PrimitiveType::kCenter:
      return 0;
    case PrimitiveType::kFace:
      return kFirstFaceSlot + index_;
    case PrimitiveType::kEdge:
      return kFirstEdgeSlot + index_;
  }
  return 0;
}

Eigen::Vector3i primitive_signs(int slot) {
  const auto& s = kSlotSigns.at(static_cast<std::size_t>(slot));
  return {s[0], s[1], s[2]};
}

double wrap_angle(double radians) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  if (radians >= -std::numbers::pi && radians < std::numbers::pi) return radians;
  double w = std::fmod(radians + std::numbers::pi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  w -= std::numbers::pi;
  // fmod can land exactly on +pi after the shift for inputs just below -pi.
  if (w >= std::numbers::pi) w -= kTwoPi;
  return w;
}

OrientedBox::OrientedBox(const Vec3& center, const Vec3& scales, double yaw,
                         std::optional<int> class_label,
                         std::optional<double> score)
    : center_(center),
      scales_(scales),
      yaw_(wrap_angle(yaw)),
      class_label_(class_label),
      score_(score) {
  if (!center.allFinite() || !std::isfinite(yaw)) {
    throw std::invalid_argument("box center and yaw must be finite");
  }
  if (!scales.allFinite() || (scales.array() <= 0.0).any()) {
    throw std::invalid_argument("box scales must be finite and positive");
  }
}

OrientedBox OrientedBox::from_params(const BoxParams& params,
                                     std::optional<int> class_label,
                                     std::optional<double> score) {
  return {params.head<3>(), params.segment<3>(3), params[6], class_label,
          score};
}

BoxParams OrientedBox::params() const {
  BoxParams p;
  p << center_, scales_, yaw_;
  return p;
}

Eigen::Vector2d OrientedBox::heading() const {
  return {std::cos(yaw_), std::sin(yaw_)};
}

Mat3 OrientedBox::rotation() const { return yaw_rotation(yaw_); }

OrientedBox OrientedBox::with_score(std::optional<double> score) const {
  OrientedBox copy = *this;
  copy.score_ = score;
  return copy;
}

OrientedBox OrientedBox::with_class(std::optional<int> class_label) const {
  OrientedBox copy = *this;
  copy.class_label_ = class_label;
  return copy;
}

Vec3 OrientedBox::to_local(const Vec3& world) const {
  return rotation().transpose() * (world - center_);
}

Vec3 OrientedBox::to_world(const Vec3& local) const {
  return center_ + rotation() * local;
}

bool OrientedBox::contains(const Vec3& world, double tol) const {
  const Vec3 local = to_local(world);
  return (local.cwiseAbs().array() <= (half_extents().array() + tol)).all();
}

std::array<PrimitiveLocation, kNumPrimitives> primitive_locations(
    const OrientedBox& box) {
  std::array<PrimitiveLocation, kNumPrimitives> out;
  const Mat3 r = box.rotation();
  const Vec3 half = box.half_extents();
  for (int slot = 0; slot < kNumPrimitives; ++slot) {
    out[slot].kind = PrimitiveKind::from_slot(slot);
    out[slot].position =
        box.center() + r * slot_signs(slot).cwiseProduct(half);
  }
  return out;
}

Vec3 primitive_position(const OrientedBox& box, int slot) {
  return box.center() +
         box.rotation() * slot_signs(slot).cwiseProduct(box.half_extents());
}

PrimitiveJacobian primitive_jacobian(const OrientedBox& box, int slot) {
  const Vec3 signs = slot_signs(slot);
  const Mat3 r = box.rotation();
  PrimitiveJacobian jac = PrimitiveJacobian::Zero();
  jac.leftCols<3>().setIdentity();
  for (int k = 0; k < 3; ++k) {
    jac.col(3 + k) = r.col(k) * (0.5 * signs[k]);
  }
  jac.col(6) = yaw_rotation_d1(box.yaw()) *
               signs.cwiseProduct(box.half_extents());
  return jac;
}

BoxMatrix primitive_curvature(const OrientedBox& box, int slot,
                              const Vec3& weights) {
  const Vec3 signs = slot_signs(slot);
  const Mat3 d1 = yaw_rotation_d1(box.yaw());
  const Mat3 d2 = yaw_rotation_d2(box.yaw());
  BoxMatrix c = BoxMatrix::Zero();
  for (int k = 0; k < 3; ++k) {
    const double v = weights.dot(d1.col(k)) * (0.5 * signs[k]);
    c(3 + k, 6) = v;
    c(6, 3 + k) = v;
  }
  c(6, 6) = weights.dot(d2 * signs.cwiseProduct(box.half_extents()));
  return c;
}

SurfaceDistance point_face_distance(const Vec3& point, const OrientedBox& box) {
  return nearest_feature<kNumFaces>(point, box, kFirstFaceSlot);
}

SurfaceDistance point_edge_distance(const Vec3& point, const OrientedBox& box) {
  return nearest_feature<kNumEdges>(point, box, kFirstEdgeSlot);
}

double point_face_distance(const Vec3& point, const OrientedBox& box,
                           int face) {
  if (face < 0 || face >= kNumFaces) throw std::out_of_range("face index");
  return feature_distance(box.to_local(point), box.half_extents(),
                          slot_signs(kFirstFaceSlot + face));
}

double point_edge_distance(const Vec3& point, const OrientedBox& box,
                           int edge) {
  if (edge < 0 || edge >= kNumEdges) throw std::out_of_range("edge index");
  return feature_distance(box.to_local(point), box.half_extents(),
                          slot_signs(kFirstEdgeSlot + edge));
}

double footprint_intersection_area(const OrientedBox& a,
                                   const OrientedBox& b) {
  return polygon_area(clip_convex(footprint(a), footprint(b)));
}

double iou3d(const OrientedBox& a, const OrientedBox& b) {
  const double a_lo = a.center().z() - 0.5 * a.scales().z();
  const double a_hi = a.center().z() + 0.5 * a.scales().z();
  const double b_lo = b.center().z() - 0.5 * b.scales().z();
  const double b_hi = b.center().z() + 0.5 * b.scales().z();
  const double dz = std::min(a_hi, b_hi) - std::max(a_lo, b_lo);
  if (dz <= 0.0) return 0.0;

  // Separated footprints: skip clipping.
  const double reach = 0.5 * (a.scales().head<2>().norm() +
                              b.scales().head<2>().norm());
  if ((a.center().head<2>() - b.center().head<2>()).norm() >= reach) {
    return 0.0;
  }

  const double inter = footprint_intersection_area(a, b) * dz;
  const double uni = a.volume() + b.volume() - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

}  // namespace hybridfit
