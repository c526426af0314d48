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
/// \brief Sensitivity of a refined proposal to the predicted primitive
/// positions, and the alignment losses built on top of it.
///
/// At a local minimum x* of F(x; theta) the optimality condition
/// dF/dx(x*(theta); theta) = 0 holds identically in theta, so
///
///   H dx*/dtheta + M = 0,   H = d2F/dx2,   M = d2F/dx dtheta.
///
/// theta stacks the positions of all predictions in PrimitiveSet order, so
/// column 3*j + k belongs to coordinate k of prediction j.
#pragma once

#include <bitset>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "hybridfit/fitfunc.hpp"
#include "hybridfit/geometry.hpp"

namespace hybridfit {

/// Which of the 7 box parameters are free; fixed ones get zero rows.
using ParamMask = std::bitset<kNumBoxParams>;

inline ParamMask all_params() { return ParamMask().set(); }
/// All parameters, minus yaw when cfg.refine.freeze_yaw is set.
ParamMask free_params(const FitConfig& cfg);

/// Thrown when the Hessian at the minimum is singular or indefinite beyond
/// the regularization budget.
class ImplicitDiffError : public std::runtime_error {
 public:
  ImplicitDiffError(const std::string& what, double min_eigenvalue,
                    double condition_estimate)
      : std::runtime_error(what),
        min_eigenvalue_(min_eigenvalue),
        condition_estimate_(condition_estimate) {}

  double min_eigenvalue() const { return min_eigenvalue_; }
  double condition_estimate() const { return condition_estimate_; }

 private:
  double min_eigenvalue_;
  double condition_estimate_;
};

struct ImplicitJacobian {
  /// 7 x (3 * number of predictions).
  Eigen::MatrixXd matrix;
  /// Ratio of extreme eigenvalues of the regularized Hessian (>= 1).
  double condition_estimate = 1.0;
  /// ||H J + M||_F with the unregularized H.
  double identity_residual = 0.0;
  bool boundary = false;
};

struct MixedDerivative {
  Eigen::MatrixXd matrix;
  bool boundary = false;
};

/// Per-parameter weights for the alignment loss; identity by default.
using LossWeights = BoxParams;
inline LossWeights unit_weights() { return LossWeights::Ones(); }

/// x_star - x_gt with the yaw component wrapped to [-pi, pi).
BoxParams param_residual(const OrientedBox& x_star, const OrientedBox& x_gt);

/// Weighted squared distance between the two parameter vectors.
double lm_loss(const OrientedBox& x_star, const OrientedBox& x_gt,
               const LossWeights& weights = unit_weights());

/// d2F / (dx dtheta) with the active assignment held fixed: a matched
/// prediction j of type t at slot i contributes -2 beta_t (dp_i/dx)^T to its
/// 3-column block; truncated predictions contribute zeros.
MixedDerivative mixed_second_derivative(const PrimitiveSet& preds,
                                        const OrientedBox& box,
                                        const FitConfig& cfg);

/// dx*/dtheta = -H^{-1} M at a local minimum `box_star`.
///
/// H is regularized by eps*I with eps = 1e-9 * trace(H) / n before the
/// solve and the result is then refined against the unregularized H. Throws
/// ImplicitDiffError when the regularized Hessian has an eigenvalue below
/// 1e-12, when H has an eigenvalue below eps (a flat direction), or when
/// box_star is not stationary (gradient inf-norm >= 1e-6).
ImplicitJacobian implicit_jacobian(const PrimitiveSet& preds,
                                   const OrientedBox& box_star,
                                   const FitConfig& cfg);
ImplicitJacobian implicit_jacobian(const PrimitiveSet& preds,
                                   const OrientedBox& box_star,
                                   const FitConfig& cfg, ParamMask free);

struct LossPair {
  OrientedBox x_star;
  OrientedBox x_gt;
  ImplicitJacobian jacobian;
};

/// Sum of lm_loss over the pairs.
double lf_loss(const std::vector<LossPair>& pairs,
               const LossWeights& weights = unit_weights());

/// Gradient of lf_loss with respect to theta:
/// sum over pairs of 2 (x* - x_gt)^T W J.
Eigen::VectorXd lf_gradient(const std::vector<LossPair>& pairs,
                            const LossWeights& weights = unit_weights());

/// For each ground-truth box, the index of the minimum with the nearest
/// center (lowest index on ties). Several ground truths may share one
/// minimum. Empty when `minima` is empty.
std::vector<std::pair<std::size_t, std::size_t>> match_gt_to_minima(
    const std::vector<OrientedBox>& gt, const std::vector<OrientedBox>& minima);

}  // namespace hybridfit
