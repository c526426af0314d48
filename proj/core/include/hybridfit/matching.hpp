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
/// \brief Range query of predicted primitives around each object primitive
/// of a proposal, with fixed-size seeded neighborhood sampling.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "hybridfit/fitfunc.hpp"
#include "hybridfit/geometry.hpp"

namespace hybridfit {

inline constexpr double kDefaultMatchRadius = 0.05;
inline constexpr int kDefaultMaxSamples = 32;

struct NeighborhoodSlot {
  /// Prediction ids; size is 0 or exactly max_samples.
  std::vector<int> ids;
  /// True when fewer than max_samples neighbors existed and ids were padded
  /// by cyclic repetition.
  bool sampled_with_replacement = false;
  /// Number of distinct neighbors found before sampling or padding.
  std::size_t found = 0;
};

struct NeighborhoodSample {
  std::array<NeighborhoodSlot, kNumPrimitives> slots;
};

/// For each of the 19 object primitives of `box`, gathers same-type
/// predictions within `radius` (inclusive). More than max_samples neighbors
/// are subsampled uniformly without replacement; fewer are padded.
NeighborhoodSample range_match(const PrimitiveSet& preds, const OrientedBox& box,
                               double radius = kDefaultMatchRadius,
                               int max_samples = kDefaultMaxSamples,
                               std::uint64_t seed = 0);

}  // namespace hybridfit
