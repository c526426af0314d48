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

#include "hybridfit/igrad.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace hybridfit {

namespace {

constexpr double kStationaryTolerance = 1e-6;
constexpr double kRelativeRegularization = 1e-9;
constexpr double kMinEigenvalue = 1e-12;
constexpr int kRefinementSweeps = 3;

std::vector<int> free_indices(ParamMask free) {
  std::vector<int> idx;
  for (int k = 0; k < kNumBoxParams; ++k) {
    if (free.test(static_cast<std::size_t>(k))) idx.push_back(k);
  }
  return idx;
}

}  // namespace

ParamMask free_params(const FitConfig& cfg) {
  ParamMask m = all_params();
  if (cfg.refine.freeze_yaw) m.reset(6);
  return m;
}

BoxParams param_residual(const OrientedBox& x_star, const OrientedBox& x_gt) {
  BoxParams r = x_star.params() - x_gt.params();
  r[6] = wrap_angle(r[6]);
  return r;
}

double lm_loss(const OrientedBox& x_star, const OrientedBox& x_gt,
               const LossWeights& weights) {
  const BoxParams r = param_residual(x_star, x_gt);
  return r.dot(weights.cwiseProduct(r));
}

MixedDerivative mixed_second_derivative(const PrimitiveSet& preds,
                                        const OrientedBox& box,
                                        const FitConfig& cfg) {
  const Assignment asg = assignment(preds, box, cfg);
  MixedDerivative out;
  out.boundary = asg.boundary;
  out.matrix = Eigen::MatrixXd::Zero(kNumBoxParams,
                                     3 * static_cast<Eigen::Index>(preds.size()));
  for (std::size_t j = 0; j < preds.size(); ++j) {
    const Match& m = asg.matches[j];
    if (!m.slot) continue;
    const double beta = cfg.beta(preds[j].type);
    out.matrix.block<kNumBoxParams, 3>(0, 3 * static_cast<Eigen::Index>(j)) =
        (-2.0 * beta) * primitive_jacobian(box, *m.slot).transpose();
  }
  return out;
}

ImplicitJacobian implicit_jacobian(const PrimitiveSet& preds,
                                   const OrientedBox& box_star,
                                   const FitConfig& cfg) {
  return implicit_jacobian(preds, box_star, cfg, free_params(cfg));
}

ImplicitJacobian implicit_jacobian(const PrimitiveSet& preds,
                                   const OrientedBox& box_star,
                                   const FitConfig& cfg, ParamMask free) {
  cfg.validate();
  const FitEvaluation ev = evaluate_fit(preds, box_star, cfg);
  const std::vector<int> idx = free_indices(free);
  const auto n = static_cast<Eigen::Index>(idx.size());
  const auto cols = 3 * static_cast<Eigen::Index>(preds.size());
  if (n == 0) throw std::invalid_argument("implicit_jacobian: no free params");

  double grad_norm = 0.0;
  for (int k : idx) grad_norm = std::max(grad_norm, std::abs(ev.gradient[k]));
  if (grad_norm >= kStationaryTolerance) {
    std::ostringstream msg;
    msg << "implicit_jacobian: box is not stationary (|grad|_inf = "
        << grad_norm << ")";
    throw ImplicitDiffError(msg.str(), std::numeric_limits<double>::quiet_NaN(),
                            std::numeric_limits<double>::quiet_NaN());
  }

  const MixedDerivative mixed = mixed_second_derivative(preds, box_star, cfg);

  Eigen::MatrixXd h(n, n);
  Eigen::MatrixXd m(n, cols);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) h(a, b) = ev.hessian(idx[a], idx[b]);
    m.row(a) = mixed.matrix.row(idx[a]);
  }

  const double eps = kRelativeRegularization * h.trace() / static_cast<double>(n);
  const double damping = std::max(eps, 0.0);
  Eigen::MatrixXd h_reg = h;
  h_reg.diagonal().array() += damping;

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h_reg);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  const double condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  // A direction whose curvature is below the damping itself is flat.
  if (eig.info() != Eigen::Success || !(lo >= kMinEigenvalue) ||
      !(lo - damping >= damping)) {
    std::ostringstream msg;
    msg << "implicit_jacobian: Hessian singular or indefinite at the minimum "
        << "(min eigenvalue " << lo << ", max " << hi << ", condition "
        << condition << ")";
    throw ImplicitDiffError(msg.str(), lo, condition);
  }

  const Eigen::MatrixXd& v = eig.eigenvectors();
  const Eigen::VectorXd inv = eig.eigenvalues().cwiseInverse();
  auto solve = [&](const Eigen::MatrixXd& rhs) -> Eigen::MatrixXd {
    return v * inv.asDiagonal() * (v.transpose() * rhs);
  };

  Eigen::MatrixXd j = solve(-m);
  for (int sweep = 0; sweep < kRefinementSweeps; ++sweep) {
    j += solve(-m - h * j);
  }

  ImplicitJacobian out;
  out.matrix = Eigen::MatrixXd::Zero(kNumBoxParams, cols);
  for (Eigen::Index a = 0; a < n; ++a) out.matrix.row(idx[a]) = j.row(a);
  out.condition_estimate = std::max(condition, 1.0);
  out.identity_residual = (h * j + m).norm();
  out.boundary = ev.assignment.boundary;
  return out;
}

double lf_loss(const std::vector<LossPair>& pairs, const LossWeights& weights) {
  double total = 0.0;
  for (const auto& p : pairs) total += lm_loss(p.x_star, p.x_gt, weights);
  return total;
}

Eigen::VectorXd lf_gradient(const std::vector<LossPair>& pairs,
                            const LossWeights& weights) {
  if (pairs.empty()) return {};
  const Eigen::Index cols = pairs.front().jacobian.matrix.cols();
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(cols);
  for (const auto& p : pairs) {
    if (p.jacobian.matrix.cols() != cols ||
        p.jacobian.matrix.rows() != kNumBoxParams) {
      throw std::invalid_argument("lf_gradient: Jacobian shape mismatch");
    }
    const BoxParams r = param_residual(p.x_star, p.x_gt);
    grad.noalias() +=
        p.jacobian.matrix.transpose() * (2.0 * weights.cwiseProduct(r));
  }
  return grad;
}

std::vector<std::pair<std::size_t, std::size_t>> match_gt_to_minima(
    const std::vector<OrientedBox>& gt, const std::vector<OrientedBox>& minima) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (minima.empty()) return out;
  out.reserve(gt.size());
  for (std::size_t g = 0; g < gt.size(); ++g) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < minima.size(); ++k) {
      const double d = (gt[g].center() - minima[k].center()).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    out.emplace_back(g, best);
  }
  return out;
}

}  // namespace hybridfit
