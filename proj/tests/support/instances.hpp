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

// Random problem instances shared by the unit and acceptance tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "generators.hpp"
#include "hybridfit/evalkit.hpp"
#include "hybridfit/fitfunc.hpp"
#include "hybridfit/refine.hpp"

namespace hybridfit::testing {

/// Refinement tolerances tight enough for finite differences of minimizers.
inline FitConfig tight_config() {
  FitConfig cfg;
  cfg.refine.tol_g = 1e-12;
  cfg.refine.tol_x = 1e-14;
  cfg.refine.max_iters = 200;
  return cfg;
}

inline PrimitiveSet shifted(const PrimitiveSet& preds, std::size_t j, const Vec3& d) {
  PrimitiveSet out = preds;
  out.set_position(j, out[j].position + d);
  return out;
}

/// Every residual of every prediction at `box` stays at least `margin` away
/// from delta and from a runner-up of the same type.
inline bool is_generic(const PrimitiveSet& preds, const OrientedBox& box,
                       const FitConfig& cfg, double margin) {
  const auto locs = primitive_locations(box);
  for (const auto& p : preds) {
    std::vector<double> r;
    for (const auto& l : locs) {
      if (l.kind.type() == p.type) r.push_back((p.position - l.position).squaredNorm());
    }
    std::sort(r.begin(), r.end());
    if (std::abs(r[0] - cfg.delta) < margin) return false;
    if (r.size() > 1 && r[0] < cfg.delta && r[1] - r[0] < margin) return false;
  }
  return true;
}

struct Instance {
  OrientedBox box;
  PrimitiveSet preds;
};

/// A random box, noisy primitives of a nearby box and a few far outliers,
/// generic at the box.
inline Instance generic_instance(Rng& rng, const FitConfig& cfg) {
  for (;;) {
    Instance in{random_box(rng, 2.0, 0.5, 2.0), {}};
    const OrientedBox truth = perturbed(in.box, rng, 0.05, 0.05, 0.05);
    in.preds = noisy_primitives(truth, rng, 0.08);
    for (int k = 0; k < 3; ++k) {
      in.preds.add({PrimitiveKind::from_slot(static_cast<int>(rng.uniform_index(19))).type(),
                    in.box.center() + uniform3(rng, -3.0, 3.0), 100 + k, std::nullopt, std::nullopt});
    }
    if (is_generic(in.preds, in.box, cfg, 1e-3)) return in;
  }
}

struct Minimum {
  PrimitiveSet preds;
  OrientedBox box;
  OrientedBox truth;
};

/// A noisy instance refined to a stationary point well inside its active set.
inline Minimum random_minimum(Rng& rng, const FitConfig& cfg) {
  for (;;) {
    const OrientedBox truth = random_box(rng, 2.0, 0.5, 2.0);
    PrimitiveSet preds = noisy_primitives(truth, rng, 0.05);
    preds.add({PrimitiveType::kFace, truth.center() + Vec3(4, 0, 0), 50, std::nullopt, std::nullopt});
    const auto trace = refine_proposal(truth, preds, cfg);
    if (!trace.converged) continue;
    if (!is_generic(preds, trace.final_box, cfg, 1e-3)) continue;
    return {preds, trace.final_box, truth};
  }
}

/// Largest parameter difference, yaw wrapped.
inline double param_error(const OrientedBox& a, const OrientedBox& b) {
  BoxParams d = a.params() - b.params();
  d[6] = wrap_angle(d[6]);
  return d.lpNorm<Eigen::Infinity>();
}

/// param_error against the closest of the four quarter-turn twins of `b`
/// (a quarter turn with x and y scales swapped is the same box).
inline double symmetric_param_error(const OrientedBox& a, const OrientedBox& b) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 4; ++k) {
    Vec3 s = b.scales();
    if (k % 2 == 1) std::swap(s.x(), s.y());
    best = std::min(best, param_error(a, OrientedBox(b.center(), s,
                                                     b.yaw() + k * std::numbers::pi / 2)));
  }
  return best;
}

struct ApInstance {
  std::vector<DetectionSet> dets;
  std::vector<GroundTruth> gts;
};

/// One or two scenes, up to 10 detections in total, two classes, coarse
/// scores so that ties occur.
inline ApInstance random_ap_instance(Rng& rng) {
  ApInstance in;
  const int scenes = 1 + static_cast<int>(rng.uniform_index(2));
  int budget = 1 + static_cast<int>(rng.uniform_index(10));
  for (int s = 0; s < scenes; ++s) {
    GroundTruth g{s, {}};
    const int n = static_cast<int>(rng.uniform_index(4));
    for (int k = 0; k < n; ++k) {
      g.boxes.push_back(OrientedBox(Vec3(2.0 * k, 0, 0.5), Vec3::Constant(rng.uniform(0.8, 1.2)),
                                    rng.uniform(-0.3, 0.3), static_cast<int>(rng.uniform_index(2))));
    }
    DetectionSet d{s, {}};
    const int m = s + 1 == scenes ? budget : static_cast<int>(rng.uniform_index(budget + 1));
    budget -= m;
    for (int k = 0; k < m; ++k) {
      const OrientedBox base = g.boxes.empty() || rng.bernoulli(0.2)
                                   ? OrientedBox(uniform3(rng, -1.0, 6.0), Vec3::Ones(), 0.0)
                                   : g.boxes[rng.uniform_index(g.boxes.size())];
      const OrientedBox moved = perturbed(base, rng, 0.3, 0.2, 0.3);
      const double score = static_cast<double>(rng.uniform_index(5)) / 4.0;
      d.detections.push_back(OrientedBox(moved.center(), moved.scales(), moved.yaw(),
                                         static_cast<int>(rng.uniform_index(2)), score));
    }
    in.gts.push_back(g);
    in.dets.push_back(d);
  }
  return in;
}

}  // namespace hybridfit::testing
