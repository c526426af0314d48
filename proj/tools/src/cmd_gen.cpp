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

#include <iostream>
#include <string>

#include "commands.hpp"

namespace hybridfit::cli {

namespace {

void add_box_cells(std::vector<std::string>& row, const OrientedBox& b) {
  for (int k = 0; k < 3; ++k) row.push_back(num(b.center()[k]));
  for (int k = 0; k < 3; ++k) row.push_back(num(b.scales()[k]));
  row.push_back(num(b.yaw()));
}

}  // namespace

int run_gen(Run& run) {
  const RunConfig& cfg = run.cfg();
  const std::vector<Scene> scenes = generate_run_scenes(cfg, cfg.gen.count);
  const std::vector<ScenePrimitives> prims = corrupt_run_scenes(scenes, cfg.noise);

  CsvTable boxes({"scene_id", "box", "class", "cx", "cy", "cz", "sx", "sy", "sz", "yaw"});
  std::size_t n_boxes = 0;
  std::size_t n_prims = 0;
  for (const Scene& s : scenes) {
    for (std::size_t b = 0; b < s.boxes.size(); ++b) {
      std::vector<std::string> row{std::to_string(s.id), std::to_string(b),
                                   std::to_string(s.boxes[b].class_label().value_or(0))};
      add_box_cells(row, s.boxes[b]);
      boxes.add(std::move(row));
    }
    n_boxes += s.boxes.size();
  }
  for (const auto& p : prims) n_prims += p.primitives.size();

  run.write_json("scenes.json", scenes_to_json(scenes));
  run.write_json("primitives.json", scene_primitives_to_json(prims));
  run.write_csv("boxes.csv", boxes);
  run.finish({{"scenes", scenes.size()}, {"boxes", n_boxes}, {"primitives", n_prims}});
  std::cout << "gen: " << scenes.size() << " scenes, " << n_boxes << " boxes, "
            << n_prims << " primitives\n";
  return 0;
}

}  // namespace hybridfit::cli
