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
/// \brief Scene-level fitting: seed proposals from center predictions,
/// refine each from several yaw hypotheses, deduplicate and score.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hybridfit/evalkit.hpp"
#include "hybridfit/fitfunc.hpp"
#include "hybridfit/matching.hpp"
#include "hybridfit/refine.hpp"

namespace hybridfit {

struct FitOptions {
  FitConfig cfg;
  Vec3 default_scales = Vec3::Ones();
  double default_yaw = 0.0;
  /// Each seed is refined from default_yaw + k * (pi/2) / yaw_hypotheses,
  /// k = 0..yaw_hypotheses-1, and the lowest minimum is kept.
  int yaw_hypotheses = 4;
  DedupTolerances dedup;
  bool with_matches = false;
  double match_radius = kDefaultMatchRadius;
  int max_samples = kDefaultMaxSamples;
  std::uint64_t match_seed = 0;
  int threads = 1;

  void validate() const;
};

struct SeedFit {
  int seed_id = 0;
  int hypothesis = 0;
  RefineTrace trace;
};

struct SceneFit {
  int scene_id = 0;
  /// One entry per center prediction, input order.
  std::vector<SeedFit> seeds;
  /// Indices into `seeds` that survived deduplication, ascending value.
  std::vector<std::size_t> survivors;
  /// Survivor boxes with class labels and normalized scores.
  DetectionSet detections;
  /// Parallel to detections when FitOptions::with_matches is set.
  std::vector<NeighborhoodSample> matches;
};

SceneFit fit_scene(int scene_id, const PrimitiveSet& preds,
                   const FitOptions& options);

}  // namespace hybridfit
