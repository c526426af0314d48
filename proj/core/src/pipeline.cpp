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

#include "hybridfit/pipeline.hpp"

#include <numbers>
#include <stdexcept>
#include <string>

#include "hybridfit/parallel.hpp"
#include "hybridfit/random.hpp"

namespace hybridfit {

void FitOptions::validate() const {
  cfg.validate();
  if ((default_scales.array() <= 0.0).any()) {
    throw std::invalid_argument("default scales must be positive");
  }
  if (yaw_hypotheses < 1) {
    throw std::invalid_argument("yaw_hypotheses must be >= 1");
  }
  if (!(match_radius > 0.0)) throw std::invalid_argument("radius must be > 0");
  if (max_samples < 1) throw std::invalid_argument("max_samples must be >= 1");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
}

SceneFit fit_scene(int scene_id, const PrimitiveSet& preds,
                   const FitOptions& options) {
  options.validate();
  const std::vector<OrientedBox> seeds =
      seed_proposals(preds, options.default_scales, options.default_yaw);
  std::vector<int> seed_ids;
  for (const auto& p : preds) {
    if (p.type == PrimitiveType::kCenter) seed_ids.push_back(p.id);
  }

  std::vector<std::optional<SeedFit>> fits(seeds.size());
  parallel_for(seeds.size(), options.threads, [&](std::size_t i) {
    std::optional<SeedFit> best;
    for (int k = 0; k < options.yaw_hypotheses; ++k) {
      const double yaw = seeds[i].yaw() + 0.5 * std::numbers::pi * k /
                                              options.yaw_hypotheses;
      const OrientedBox init(seeds[i].center(), seeds[i].scales(), yaw,
                             seeds[i].class_label());
      try {
        RefineTrace trace = refine_proposal(init, preds, options.cfg);
        if (!best || trace.final_value < best->trace.final_value) {
          best = SeedFit{seed_ids[i], k, std::move(trace)};
        }
      } catch (const RefineError& e) {
        throw RefineError("scene " + std::to_string(scene_id) + ", seed " +
                          std::to_string(seed_ids[i]) + ": " + e.what());
      }
    }
    fits[i] = std::move(best);
  });

  SceneFit out;
  out.scene_id = scene_id;
  out.detections.scene_id = scene_id;
  std::vector<OrientedBox> finals;
  std::vector<double> values;
  for (auto& f : fits) {
    finals.push_back(f->trace.final_box);
    values.push_back(f->trace.final_value);
    out.seeds.push_back(std::move(*f));
  }
  out.survivors = dedup_indices(finals, values, options.dedup);
  for (std::size_t k = 0; k < out.survivors.size(); ++k) {
    const SeedFit& s = out.seeds[out.survivors[k]];
    const OrientedBox& box = s.trace.final_box;
    out.detections.detections.push_back(
        box.with_class(box.class_label().value_or(0))
            .with_score(normalized_score(s.trace.final_value, options.cfg)));
    if (options.with_matches) {
      out.matches.push_back(range_match(
          preds, box, options.match_radius, options.max_samples,
          derive_seed(options.match_seed, static_cast<std::uint64_t>(k))));
    }
  }
  return out;
}

}  // namespace hybridfit
