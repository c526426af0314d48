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

#include <algorithm>
#include <iostream>
#include <map>
#include <string>

#include "commands.hpp"

namespace hybridfit::cli {

int run_fit(Run& run, const FitArgs& args) {
  const RunConfig& cfg = run.cfg();
  std::vector<ScenePrimitives> sets = load_with(args.primitives, scene_primitives_from_json);
  run.add_input(args.primitives);

  std::map<int, PrimitiveSet> by_scene;
  for (auto& s : sets) {
    if (!by_scene.emplace(s.scene_id, std::move(s.primitives)).second) {
      throw FormatError(args.primitives.string() + ": duplicate scene_id " +
                        std::to_string(s.scene_id));
    }
  }
  if (args.scenes) {
    const std::vector<Scene> scenes = load_with(*args.scenes, scenes_from_json);
    run.add_input(*args.scenes);
    std::map<int, PrimitiveSet> known;
    for (const Scene& s : scenes) {
      auto it = by_scene.find(s.id);
      known[s.id] = it == by_scene.end() ? PrimitiveSet{} : std::move(it->second);
      if (it != by_scene.end()) by_scene.erase(it);
    }
    if (!by_scene.empty()) {
      throw FormatError(args.primitives.string() + ": scene_id " +
                        std::to_string(by_scene.begin()->first) +
                        " is not in " + args.scenes->string());
    }
    by_scene = std::move(known);
  }
  sets.clear();
  for (auto& [id, prims] : by_scene) sets.push_back({id, std::move(prims)});

  FitOptions options = cfg.pipeline;
  options.cfg = cfg.fit;
  options.with_matches = options.with_matches || args.matches;
  const std::vector<SceneFit> fits = fit_all(sets, options, cfg.threads);

  std::vector<DetectionSet> dets;
  std::vector<std::vector<NeighborhoodSample>> matches;
  CsvTable table({"scene_id", "detection", "class", "score", "value", "cx", "cy", "cz",
                  "sx", "sy", "sz", "yaw"});
  Json traces = Json::array();
  std::size_t n_dets = 0;
  std::size_t n_seeds = 0;
  for (const SceneFit& f : fits) {
    dets.push_back(f.detections);
    matches.push_back(f.matches);
    for (std::size_t k = 0; k < f.detections.detections.size(); ++k) {
      const OrientedBox& b = f.detections.detections[k];
      std::vector<std::string> row{std::to_string(f.scene_id), std::to_string(k),
                                   std::to_string(b.class_label().value_or(0)),
                                   num(b.score().value_or(0.0)),
                                   num(f.seeds[f.survivors[k]].trace.final_value)};
      for (int c = 0; c < 3; ++c) row.push_back(num(b.center()[c]));
      for (int c = 0; c < 3; ++c) row.push_back(num(b.scales()[c]));
      row.push_back(num(b.yaw()));
      table.add(std::move(row));
    }
    if (args.traces) {
      Json seeds = Json::array();
      for (const SeedFit& s : f.seeds) seeds.push_back(trace_to_json(s));
      traces.push_back({{"scene_id", f.scene_id}, {"seeds", seeds}, {"survivors", f.survivors}});
    }
    n_dets += f.detections.detections.size();
    n_seeds += f.seeds.size();
  }

  run.write_json("detections.json",
                 detections_to_json(dets, options.with_matches ? &matches : nullptr));
  run.write_csv("detections.csv", table);
  if (args.traces) run.write_json("traces.json", {{"scenes", traces}});
  run.finish({{"scenes", fits.size()}, {"seeds", n_seeds}, {"detections", n_dets}});
  std::cout << "fit: " << fits.size() << " scenes, " << n_seeds << " seeds, " << n_dets
            << " detections\n";
  return 0;
}

}  // namespace hybridfit::cli
