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
/// \brief Proposal seeding from center predictions, local minimization of
/// the proposal distance function and deduplication of the minima.
#pragma once

#include <stdexcept>
#include <vector>

#include "hybridfit/fitfunc.hpp"
#include "hybridfit/geometry.hpp"

namespace hybridfit {

/// Raised when the objective becomes non-finite during refinement.
class RefineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RefineTrace {
  int iterations = 0;
  OrientedBox initial;
  OrientedBox final_box;
  double initial_value = 0.0;
  double final_value = 0.0;
  bool converged = false;
  /// Number of visited iterates whose assignment was at a tie or at the
  /// truncation boundary.
  int boundary_warnings = 0;
  /// Number of steps that fell back to a scaled gradient direction.
  int gradient_steps = 0;
};

/// One proposal per center prediction, in input order, carrying that
/// prediction's class label.
std::vector<OrientedBox> seed_proposals(const PrimitiveSet& preds,
                                        const Vec3& default_scales,
                                        double default_yaw);

/// Levenberg-damped Newton descent on F with a backtracking line search.
/// The assignment is recomputed at every iterate and scales are projected to
/// at least cfg.refine.min_scale. Throws RefineError on a non-finite value.
RefineTrace refine_proposal(const OrientedBox& init, const PrimitiveSet& preds,
                            const FitConfig& cfg);

struct DedupTolerances {
  double center = 0.05;
  double scales = 0.05;
  double yaw = 0.05;
};

/// Greedy merge of near-identical minima. Two boxes are duplicates when their
/// centers are closer than tol.center, every scale differs by less than
/// tol.scales and the wrapped yaw difference is below tol.yaw; the box with
/// lower value survives. The yaw -> yaw + pi symmetry is not folded.
/// Returns indices into `refined`, ordered by ascending value.
std::vector<std::size_t> dedup_indices(const std::vector<OrientedBox>& refined,
                                       const std::vector<double>& values,
                                       const DedupTolerances& tol = {});

std::vector<OrientedBox> dedup_proposals(const std::vector<OrientedBox>& refined,
                                         const std::vector<double>& values,
                                         const DedupTolerances& tol = {});

}  // namespace hybridfit
