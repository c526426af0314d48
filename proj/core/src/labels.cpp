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

#include "hybridfit/labels.hpp"

#include <array>
#include <limits>
#include <stdexcept>

namespace hybridfit {

namespace {

constexpr double kContainmentSlack = 1e-9;

struct Candidate {
  FeatureRef ref;
  double distance = std::numeric_limits<double>::infinity();
};

// Keeps the globally closest feature; near-ties go to the lowest
// (box, feature) pair, which is the scan order.
void consider(Candidate& best, int box, const SurfaceDistance& d) {
  if (d.distance < best.distance - kTieTolerance) {
    best.ref = {box, d.index};
    best.distance = d.distance;
  }
}

FeatureLabel finish(const Candidate& best, const Vec3& point,
                    std::span<const OrientedBox> boxes, int first_slot,
                    double threshold) {
  FeatureLabel label;
  if (best.ref.box < 0) return label;
  label.index = best.ref;
  label.distance = best.distance;
  label.flag = best.distance < threshold;
  label.offset =
      primitive_position(boxes[best.ref.box], first_slot + best.ref.feature) -
      point;
  return label;
}

}  // namespace

PointLabels generate_labels(std::span<const Vec3> points,
                            std::span<const OrientedBox> boxes,
                            double threshold) {
  if (!(threshold > 0.0)) {
    throw std::invalid_argument("label threshold must be positive");
  }
  PointLabels out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Vec3& p = points[i];
    Candidate face, edge;
    for (std::size_t b = 0; b < boxes.size(); ++b) {
      const int bi = static_cast<int>(b);
      consider(face, bi, point_face_distance(p, boxes[b]));
      consider(edge, bi, point_edge_distance(p, boxes[b]));
      if (!out[i].owner && boxes[b].contains(p, kContainmentSlack)) {
        out[i].owner = bi;
        out[i].center_offset = boxes[b].center() - p;
      }
    }
    out[i].face = finish(face, p, boxes, 1, threshold);
    out[i].edge = finish(edge, p, boxes, 1 + kNumFaces, threshold);
  }
  return out;
}

const std::optional<double>& PrimitiveAccuracy::of(PrimitiveType type) const {
  switch (type) {
    case PrimitiveType::kCenter:
      return center;
    case PrimitiveType::kFace:
      return face;
    case PrimitiveType::kEdge:
      return edge;
  }
  return center;
}

PrimitiveAccuracy primitive_accuracy(const PrimitiveSet& predicted,
                                     std::span<const OrientedBox> truth_boxes,
                                     double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("accuracy tol must be positive");
  std::array<std::size_t, 3> hits{};
  std::array<std::size_t, 3> total{};
  for (const auto& box : truth_boxes) {
    for (const auto& loc : primitive_locations(box)) {
      const auto t = static_cast<std::size_t>(loc.kind.type());
      ++total[t];
      for (const auto& p : predicted) {
        if (p.type == loc.kind.type() &&
            (p.position - loc.position).norm() <= tol) {
          ++hits[t];
          break;
        }
      }
    }
  }
  auto rate = [&](std::size_t t) -> std::optional<double> {
    if (total[t] == 0) return std::nullopt;
    return static_cast<double>(hits[t]) / static_cast<double>(total[t]);
  };
  return {rate(0), rate(1), rate(2)};
}

}  // namespace hybridfit
