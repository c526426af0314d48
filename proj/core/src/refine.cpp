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

#include "hybridfit/refine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>

namespace hybridfit {

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 40;
constexpr double kMinDamping = 1e-12;
constexpr double kMaxDamping = 1e10;

using FreeMask = Eigen::Matrix<double, kNumBoxParams, 1>;

FreeMask free_mask(const FitConfig& cfg) {
  FreeMask m = FreeMask::Ones();
  if (cfg.refine.freeze_yaw) m[6] = 0.0;
  return m;
}

BoxParams project(BoxParams x, double min_scale) {
  for (int k = 3; k < 6; ++k) x[k] = std::max(x[k], min_scale);
  return x;
}

FitEvaluation checked_evaluate(const PrimitiveSet& preds, const BoxParams& x,
                               const OrientedBox& like, const FitConfig& cfg) {
  if (!x.allFinite()) {
    throw RefineError("refine: non-finite box parameters");
  }
  FitEvaluation ev = evaluate_fit(
      preds, OrientedBox::from_params(x, like.class_label(), like.score()),
      cfg);
  if (!std::isfinite(ev.value) || !ev.gradient.allFinite() ||
      !ev.hessian.allFinite()) {
    throw RefineError("refine: non-finite objective at params [" +
                      std::to_string(x[0]) + ", " + std::to_string(x[1]) +
                      ", " + std::to_string(x[2]) + ", ...]");
  }
  return ev;
}

// Damped Newton direction restricted to the free parameters; empty when the
// damped system is not positive definite.
std::optional<BoxParams> newton_direction(const FitEvaluation& ev,
                                          const FreeMask& mask,
                                          double damping) {
  BoxMatrix a = mask.asDiagonal() * ev.hessian * mask.asDiagonal();
  for (int k = 0; k < kNumBoxParams; ++k) {
    a(k, k) += mask[k] > 0.0 ? damping : 1.0;
  }
  const Eigen::LLT<BoxMatrix> llt(a);
  if (llt.info() != Eigen::Success) return std::nullopt;
  BoxParams d = -llt.solve(mask.cwiseProduct(ev.gradient));
  if (!d.allFinite()) return std::nullopt;
  return d;
}

}  // namespace

std::vector<OrientedBox> seed_proposals(const PrimitiveSet& preds,
                                        const Vec3& default_scales,
                                        double default_yaw) {
  if (!(default_scales.array() > 0.0).all()) {
    throw std::invalid_argument("seed_proposals: default scales must be positive");
  }
  std::vector<OrientedBox> out;
  for (const auto& p : preds) {
    if (p.type != PrimitiveType::kCenter) continue;
    out.emplace_back(p.position, default_scales, default_yaw, p.class_label);
  }
  return out;
}

RefineTrace refine_proposal(const OrientedBox& init, const PrimitiveSet& preds,
                            const FitConfig& cfg) {
  cfg.validate();
  const RefineOptions& opt = cfg.refine;
  const FreeMask mask = free_mask(cfg);

  BoxParams x = init.params();
  FitEvaluation ev = checked_evaluate(preds, x, init, cfg);

  RefineTrace trace{.initial = init, .final_box = init};
  trace.initial_value = ev.value;
  double damping = std::max(opt.initial_damping, kMinDamping);

  for (;;) {
    if (ev.assignment.boundary) ++trace.boundary_warnings;
    const BoxParams g = mask.cwiseProduct(ev.gradient);
    if (g.lpNorm<Eigen::Infinity>() < opt.tol_g) {
      trace.converged = true;
      break;
    }
    if (trace.iterations >= opt.max_iters) break;

    std::optional<BoxParams> dir;
    while (!dir && damping <= kMaxDamping) {
      dir = newton_direction(ev, mask, damping);
      if (dir && g.dot(*dir) >= 0.0) dir.reset();
      if (!dir) damping *= 10.0;
    }
    bool gradient_step = false;
    if (!dir) {
      // Damping budget exhausted; take a scaled steepest-descent step.
      const double scale = std::max(1.0, ev.hessian.lpNorm<Eigen::Infinity>());
      dir = -g / scale;
      gradient_step = true;
      damping = std::max(opt.initial_damping, kMinDamping);
    }

    double alpha = 1.0;
    bool accepted = false;
    BoxParams x_new;
    FitEvaluation ev_new;
    for (int bt = 0; bt < kMaxBacktracks; ++bt, alpha *= 0.5) {
      x_new = project(x + alpha * *dir, opt.min_scale);
      ev_new = checked_evaluate(preds, x_new, init, cfg);
      if (ev_new.value <= ev.value + kArmijo * g.dot(x_new - x)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // No decrease along any tried step: treat as stationary at this
      // resolution when the direction was already a gradient step.
      if (gradient_step) break;
      damping *= 10.0;
      continue;
    }

    ++trace.iterations;
    if (gradient_step) ++trace.gradient_steps;
    const double step = (x_new - x).lpNorm<Eigen::Infinity>();
    x = x_new;
    ev = std::move(ev_new);
    damping = alpha == 1.0 ? std::max(damping * 0.1, kMinDamping)
                           : damping * 10.0;
    if (step < opt.tol_x) {
      if (ev.assignment.boundary) ++trace.boundary_warnings;
      trace.converged = true;
      break;
    }
  }

  trace.final_box = OrientedBox::from_params(x, init.class_label(), init.score());
  trace.final_value = ev.value;
  return trace;
}

std::vector<std::size_t> dedup_indices(const std::vector<OrientedBox>& refined,
                                       const std::vector<double>& values,
                                       const DedupTolerances& tol) {
  if (refined.size() != values.size()) {
    throw std::invalid_argument("dedup: boxes and values differ in length");
  }
  std::vector<std::size_t> order(refined.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return values[a] < values[b];
                   });

  auto duplicate = [&](const OrientedBox& a, const OrientedBox& b) {
    return (a.center() - b.center()).norm() < tol.center &&
           (a.scales() - b.scales()).lpNorm<Eigen::Infinity>() < tol.scales &&
           std::abs(wrap_angle(a.yaw() - b.yaw())) < tol.yaw;
  };

  std::vector<std::size_t> kept;
  for (std::size_t i : order) {
    const bool dup = std::any_of(kept.begin(), kept.end(), [&](std::size_t k) {
      return duplicate(refined[i], refined[k]);
    });
    if (!dup) kept.push_back(i);
  }
  return kept;
}

std::vector<OrientedBox> dedup_proposals(const std::vector<OrientedBox>& refined,
                                         const std::vector<double>& values,
                                         const DedupTolerances& tol) {
  std::vector<OrientedBox> out;
  for (std::size_t i : dedup_indices(refined, values, tol)) {
    out.push_back(refined[i]);
  }
  return out;
}

}  // namespace hybridfit
