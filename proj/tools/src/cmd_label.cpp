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
#include <optional>
#include <string>

#include "commands.hpp"
#include "hybridfit/labels.hpp"
#include "hybridfit/parallel.hpp"

namespace hybridfit::cli {

namespace {

std::string opt_int(const std::optional<int>& v) {
  return v ? std::to_string(*v) : "";
}

void add_feature_cells(std::vector<std::string>& row, const FeatureLabel& f) {
  row.push_back(f.flag ? "1" : "0");
  row.push_back(f.index ? std::to_string(f.index->box) : "");
  row.push_back(f.index ? std::to_string(f.index->feature) : "");
  row.push_back(f.index ? num(f.distance) : "");
}

}  // namespace

int run_label(Run& run, const LabelArgs& args) {
  const RunConfig& cfg = run.cfg();
  std::vector<Scene> scenes = load_with(args.scenes, scenes_from_json);
  run.add_input(args.scenes);
  if (args.points) {
    if (scenes.size() != 1) {
      throw std::invalid_argument("--points needs a scene file with exactly one scene");
    }
    scenes[0].points = load_xyz_points(*args.points);
    run.add_input(*args.points);
  }

  std::vector<PointLabels> labels(scenes.size());
  parallel_for(scenes.size(), cfg.threads, [&](std::size_t i) {
    labels[i] = generate_labels(scenes[i].points, scenes[i].boxes, cfg.label_threshold);
  });

  Json out = Json::array();
  CsvTable table({"scene_id", "point", "face_flag", "face_box", "face_feature",
                  "face_distance", "edge_flag", "edge_box", "edge_feature",
                  "edge_distance", "owner"});
  std::size_t n_points = 0;
  std::size_t face_hits = 0;
  std::size_t edge_hits = 0;
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    out.push_back({{"scene_id", scenes[i].id}, {"labels", labels_to_json(labels[i])}});
    for (std::size_t p = 0; p < labels[i].size(); ++p) {
      const PointLabel& l = labels[i][p];
      std::vector<std::string> row{std::to_string(scenes[i].id), std::to_string(p)};
      add_feature_cells(row, l.face);
      add_feature_cells(row, l.edge);
      row.push_back(opt_int(l.owner));
      table.add(std::move(row));
      face_hits += l.face.flag ? 1 : 0;
      edge_hits += l.edge.flag ? 1 : 0;
    }
    n_points += labels[i].size();
  }

  run.write_json("labels.json", {{"threshold", cfg.label_threshold}, {"scenes", out}});
  run.write_csv("labels.csv", table);
  run.finish({{"points", n_points}, {"face_flags", face_hits}, {"edge_flags", edge_hits}});
  std::cout << "label: " << n_points << " points, " << face_hits << " near a face, "
            << edge_hits << " near an edge\n";
  return 0;
}

}  // namespace hybridfit::cli
