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
#include <string>

#include "commands.hpp"

namespace hybridfit::cli {

int run_sweep(Run& run, const SweepArgs& args) {
  const RunConfig& cfg = run.cfg();
  if (args.primitives && !args.scenes) {
    throw std::invalid_argument("--primitives needs --scenes for the ground truth");
  }
  std::vector<Scene> scenes;
  std::vector<ScenePrimitives> sets;
  if (args.scenes) {
    scenes = load_with(*args.scenes, scenes_from_json);
    run.add_input(*args.scenes);
    if (args.primitives) {
      sets = load_with(*args.primitives, scene_primitives_from_json);
      run.add_input(*args.primitives);
    } else {
      sets = corrupt_run_scenes(scenes, cfg.noise);
    }
  } else {
    scenes = generate_run_scenes(cfg, cfg.sweep.count);
    sets = corrupt_run_scenes(scenes, cfg.noise);
  }
  const std::vector<GroundTruth> gts = ground_truth_of(scenes);

  std::vector<std::string> header{"delta"};
  for (double iou : cfg.eval.iou) header.push_back("map@" + num(iou));
  CsvTable table(header);
  Json rows = Json::array();
  std::vector<std::vector<double>> maps(cfg.eval.iou.size());
  for (double delta : cfg.sweep.deltas) {
    FitOptions options = cfg.pipeline;
    options.cfg = cfg.fit;
    options.cfg.delta = delta;
    std::vector<DetectionSet> dets;
    for (const SceneFit& f : fit_all(sets, options, cfg.threads)) dets.push_back(f.detections);
    const auto results = evaluate(dets, gts, cfg.eval.iou, cfg.eval.interpolation);
    std::vector<std::string> row{num(delta)};
    Json jrow = {{"delta", delta}};
    for (std::size_t k = 0; k < results.size(); ++k) {
      row.push_back(num(results[k].map.map));
      jrow["map@" + num(results[k].iou)] = results[k].map.map;
      maps[k].push_back(results[k].map.map);
    }
    table.add(std::move(row));
    rows.push_back(jrow);
    std::cout << "delta " << num(delta);
    for (std::size_t k = 0; k < results.size(); ++k) {
      std::cout << "  mAP@" << num(results[k].iou) << " " << num(results[k].map.map);
    }
    std::cout << "\n";
  }

  Json spread = Json::object();
  bool within = true;
  for (std::size_t k = 0; k < maps.size(); ++k) {
    const auto [lo, hi] = std::minmax_element(maps[k].begin(), maps[k].end());
    spread["map@" + num(cfg.eval.iou[k])] = *hi - *lo;
    if (cfg.eval.iou[k] == 0.25) within = within && (*hi - *lo) < cfg.sweep.max_spread;
  }
  run.write_json("sweep.json", {{"rows", rows},
                                {"spread", spread},
                                {"max_spread", cfg.sweep.max_spread},
                                {"within_bound", within}});
  run.write_csv("sweep.csv", table);
  run.finish({{"spread", spread}, {"within_bound", within}});
  return 0;
}

}  // namespace hybridfit::cli
