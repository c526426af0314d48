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

#include "hybridfit/matching.hpp"

#include <stdexcept>
#include <utility>

#include "hybridfit/random.hpp"

namespace hybridfit {

NeighborhoodSample range_match(const PrimitiveSet& preds, const OrientedBox& box,
                               double radius, int max_samples,
                               std::uint64_t seed) {
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  if (max_samples < 1) throw std::invalid_argument("max_samples must be >= 1");

  const auto cap = static_cast<std::size_t>(max_samples);
  const double r2 = radius * radius;
  Rng rng(seed);
  NeighborhoodSample out;
  const auto locs = primitive_locations(box);
  for (int s = 0; s < kNumPrimitives; ++s) {
    std::vector<int> found;
    for (const auto& p : preds) {
      if (p.type == locs[s].kind.type() &&
          (p.position - locs[s].position).squaredNorm() <= r2) {
        found.push_back(p.id);
      }
    }
    NeighborhoodSlot& slot = out.slots[s];
    slot.found = found.size();
    if (found.empty()) continue;
    if (found.size() > cap) {
      // Partial Fisher-Yates: the first `cap` entries form the sample.
      for (std::size_t i = 0; i < cap; ++i) {
        const std::size_t j = i + rng.uniform_index(found.size() - i);
        std::swap(found[i], found[j]);
      }
      found.resize(cap);
    } else if (found.size() < cap) {
      slot.sampled_with_replacement = true;
      const std::size_t n = found.size();
      for (std::size_t i = n; i < cap; ++i) found.push_back(found[i % n]);
    }
    slot.ids = std::move(found);
  }
  return out;
}

}  // namespace hybridfit
