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

#include "commands.hpp"

namespace hybridfit::cli {

int run_eval(Run& run, const EvalArgs& args) {
  const RunConfig& cfg = run.cfg();
  const std::vector<DetectionSet> dets = load_with(args.detections, detections_from_json);
  run.add_input(args.detections);
  const std::vector<Scene> scenes = load_with(args.scenes, scenes_from_json);
  run.add_input(args.scenes);

  const auto results = evaluate(dets, ground_truth_of(scenes), cfg.eval.iou,
                                cfg.eval.interpolation);
  run.write_json("eval.json", eval_to_json(results));
  run.write_csv("eval.csv", eval_to_csv(results));
  Json summary = Json::object();
  for (const auto& r : results) {
    summary["map@" + num(r.iou)] = r.map.map;
    std::cout << "mAP@" << num(r.iou) << " = " << num(r.map.map) << "\n";
  }
  run.finish(summary);
  return 0;
}

}  // namespace hybridfit::cli
