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

#include "hybridfit/fitfunc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace hybridfit {

namespace {

constexpr std::array<std::pair<int, int>, 3> kSlotRange = {{
    {0, 1},
    {1, 1 + kNumFaces},
    {1 + kNumFaces, kNumPrimitives},
}};

std::pair<int, int> slot_range(PrimitiveType type) {
  return kSlotRange[static_cast<std::size_t>(type)];
}

void validate_primitive(const Primitive& p) {
  if (!p.position.allFinite()) {
    throw std::invalid_argument("primitive " + std::to_string(p.id) +
                                " has a non-finite position");
  }
}

struct BoxFrame {
  std::array<Vec3, kNumPrimitives> positions;
};

BoxFrame make_frame(const OrientedBox& box) {
  BoxFrame frame;
  const auto locs = primitive_locations(box);
  for (int s = 0; s < kNumPrimitives; ++s) frame.positions[s] = locs[s].position;
  return frame;
}

// Nearest same-type slot with the lowest-index tie-break, plus whether the
// evaluation point is at a non-generic configuration.
Match match_one(const Primitive& pred, const BoxFrame& frame, double delta,
                bool& boundary) {
  const auto [lo, hi] = slot_range(pred.type);
  double best = std::numeric_limits<double>::infinity();
  double second = std::numeric_limits<double>::infinity();
  int best_slot = lo;
  for (int s = lo; s < hi; ++s) {
    const double r = (pred.position - frame.positions[s]).squaredNorm();
    if (r < best - kTieTolerance) {
      second = best;
      best = r;
      best_slot = s;
    } else {
      second = std::min(second, r);
    }
  }
  if (std::abs(best - delta) <= kBoundaryTolerance) boundary = true;
  if (best < delta + kBoundaryTolerance &&
      second - best <= kBoundaryTolerance) {
    boundary = true;
  }
  Match m;
  m.residual = best;
  if (best < delta) m.slot = best_slot;
  return m;
}

}  // namespace

PrimitiveSet::PrimitiveSet(std::vector<Primitive> entries) {
  entries_.reserve(entries.size());
  for (auto& p : entries) add(std::move(p));
}

void PrimitiveSet::add(Primitive primitive) {
  validate_primitive(primitive);
  for (const auto& e : entries_) {
    if (e.id == primitive.id) {
      throw std::invalid_argument("duplicate primitive id " +
                                  std::to_string(primitive.id));
    }
  }
  entries_.push_back(std::move(primitive));
}

void PrimitiveSet::set_position(std::size_t i, const Vec3& position) {
  if (!position.allFinite()) {
    throw std::invalid_argument("non-finite primitive position");
  }
  entries_.at(i).position = position;
}

std::size_t PrimitiveSet::count(PrimitiveType type) const {
  return static_cast<std::size_t>(
      std::count_if(entries_.begin(), entries_.end(),
                    [type](const Primitive& p) { return p.type == type; }));
}

int PrimitiveSet::next_id() const {
  int id = 0;
  for (const auto& e : entries_) id = std::max(id, e.id + 1);
  return id;
}

PrimitiveSet exact_primitives(const OrientedBox& box, int first_id,
                              std::optional<int> source) {
  std::vector<Primitive> out;
  out.reserve(kNumPrimitives);
  for (const auto& loc : primitive_locations(box)) {
    out.push_back({loc.kind.type(), loc.position, first_id + loc.kind.slot(),
                   source, box.class_label()});
  }
  return PrimitiveSet(std::move(out));
}

double FitConfig::beta(PrimitiveType type) const {
  switch (type) {
    case PrimitiveType::kCenter:
      return beta_center;
    case PrimitiveType::kFace:
      return beta_face;
    case PrimitiveType::kEdge:
      return beta_edge;
  }
  return 0.0;
}

void FitConfig::validate() const {
  for (double b : {beta_center, beta_face, beta_edge}) {
    if (!std::isfinite(b) || b < 0.0) {
      throw std::invalid_argument("beta weights must be finite and >= 0");
    }
  }
  if (beta_center + beta_face + beta_edge <= 0.0) {
    throw std::invalid_argument("at least one beta weight must be positive");
  }
  if (!std::isfinite(delta) || delta < 0.0) {
    throw std::invalid_argument("delta must be finite and >= 0");
  }
  if (!(refine.tol_g > 0.0) || !(refine.tol_x > 0.0)) {
    throw std::invalid_argument("refine tolerances must be positive");
  }
  if (refine.max_iters < 0) {
    throw std::invalid_argument("refine max_iters must be >= 0");
  }
  if (!(refine.min_scale > 0.0)) {
    throw std::invalid_argument("refine min_scale must be positive");
  }
  if (!(refine.initial_damping >= 0.0)) {
    throw std::invalid_argument("refine initial_damping must be >= 0");
  }
}

std::size_t Assignment::matched_count() const {
  return static_cast<std::size_t>(
      std::count_if(matches.begin(), matches.end(),
                    [](const Match& m) { return m.slot.has_value(); }));
}

Assignment assignment(const PrimitiveSet& preds, const OrientedBox& box,
                      const FitConfig& cfg) {
  const BoxFrame frame = make_frame(box);
  Assignment out;
  out.matches.reserve(preds.size());
  for (const auto& p : preds) {
    out.matches.push_back(match_one(p, frame, cfg.delta, out.boundary));
  }
  return out;
}

double distance_value(const PrimitiveSet& preds, const OrientedBox& box,
                      const FitConfig& cfg) {
  const BoxFrame frame = make_frame(box);
  double value = 0.0;
  bool unused = false;
  for (const auto& p : preds) {
    const Match m = match_one(p, frame, cfg.delta, unused);
    if (m.slot) value += cfg.beta(p.type) * (m.residual - cfg.delta);
  }
  return value;
}

FitEvaluation evaluate_fit(const PrimitiveSet& preds, const OrientedBox& box,
                           const FitConfig& cfg) {
  const BoxFrame frame = make_frame(box);
  std::array<std::optional<PrimitiveJacobian>, kNumPrimitives> jacobians;

  FitEvaluation ev;
  ev.assignment.matches.reserve(preds.size());
  for (const auto& p : preds) {
    const Match m = match_one(p, frame, cfg.delta, ev.assignment.boundary);
    ev.assignment.matches.push_back(m);
    if (!m.slot) continue;

    const int slot = *m.slot;
    const double beta = cfg.beta(p.type);
    ev.value += beta * (m.residual - cfg.delta);
    if (beta == 0.0) continue;

    if (!jacobians[slot]) jacobians[slot] = primitive_jacobian(box, slot);
    const PrimitiveJacobian& jac = *jacobians[slot];
    const Vec3 diff = frame.positions[slot] - p.position;
    ev.gradient.noalias() += (2.0 * beta) * jac.transpose() * diff;
    ev.hessian.noalias() += (2.0 * beta) * jac.transpose() * jac;
    ev.hessian += (2.0 * beta) * primitive_curvature(box, slot, diff);
  }
  return ev;
}

GradientResult distance_gradient(const PrimitiveSet& preds,
                                 const OrientedBox& box, const FitConfig& cfg) {
  const FitEvaluation ev = evaluate_fit(preds, box, cfg);
  return {ev.gradient, ev.assignment.boundary};
}

HessianResult distance_hessian(const PrimitiveSet& preds,
                               const OrientedBox& box, const FitConfig& cfg) {
  const FitEvaluation ev = evaluate_fit(preds, box, cfg);
  return {ev.hessian, ev.assignment.boundary};
}

double normalized_score(double value, const FitConfig& cfg) {
  const double full = cfg.delta * (cfg.beta_center + kNumFaces * cfg.beta_face +
                                   kNumEdges * cfg.beta_edge);
  if (full <= 0.0) return 0.0;
  return std::clamp(-value / full, 0.0, 1.0);
}

}  // namespace hybridfit
