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

#include <string>

#include "commands.hpp"
#include "hybridfit/parallel.hpp"
#include "hybridfit/random.hpp"

namespace hybridfit::cli {

std::vector<Scene> generate_run_scenes(const RunConfig& cfg, int count) {
  SceneSpec spec = cfg.scene;
  spec.seed = cfg.seed;
  return generate_scenes(spec, count);
}

std::vector<ScenePrimitives> corrupt_run_scenes(const std::vector<Scene>& scenes,
                                                const NoiseModel& noise) {
  std::vector<ScenePrimitives> out;
  out.reserve(scenes.size());
  for (const Scene& s : scenes) {
    out.push_back({s.id, corrupt_primitives(s, noise, derive_seed(s.seed, 1))});
  }
  return out;
}

std::vector<SceneFit> fit_all(const std::vector<ScenePrimitives>& sets,
                              const FitOptions& options, int threads) {
  std::vector<std::optional<SceneFit>> slots(sets.size());
  FitOptions serial = options;
  serial.threads = 1;
  parallel_for(sets.size(), threads, [&](std::size_t i) {
    slots[i] = fit_scene(sets[i].scene_id, sets[i].primitives, serial);
  });
  std::vector<SceneFit> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::vector<EvalResult> evaluate(const std::vector<DetectionSet>& dets,
                                 const std::vector<GroundTruth>& gts,
                                 const std::vector<double>& ious,
                                 Interpolation interp) {
  std::vector<EvalResult> out;
  const std::vector<int> classes = class_labels(dets, gts);
  for (double iou : ious) {
    EvalResult r;
    r.iou = iou;
    r.classes = classes;
    for (int c : classes) r.per_class.push_back(evaluate_class(dets, gts, c, iou, interp));
    r.map = mean_ap(dets, gts, classes, iou, interp);
    out.push_back(std::move(r));
  }
  return out;
}

Json eval_to_json(const std::vector<EvalResult>& results) {
  Json thresholds = Json::array();
  for (const auto& r : results) {
    Json classes = Json::array();
    for (std::size_t k = 0; k < r.classes.size(); ++k) {
      const ClassEvaluation& c = r.per_class[k];
      classes.push_back({{"class", r.classes[k]},
                         {"ap", c.ap ? Json(*c.ap) : Json(nullptr)},
                         {"ground_truth", c.num_ground_truth},
                         {"detections", c.num_detections},
                         {"true_positives", c.true_positives}});
    }
    thresholds.push_back({{"iou", r.iou}, {"map", r.map.map}, {"classes", classes}});
  }
  return {{"thresholds", thresholds}};
}

CsvTable eval_to_csv(const std::vector<EvalResult>& results) {
  CsvTable t({"iou", "class", "ap", "ground_truth", "detections", "true_positives"});
  for (const auto& r : results) {
    for (std::size_t k = 0; k < r.classes.size(); ++k) {
      const ClassEvaluation& c = r.per_class[k];
      t.add({num(r.iou), std::to_string(r.classes[k]), c.ap ? num(*c.ap) : "",
             std::to_string(c.num_ground_truth), std::to_string(c.num_detections),
             std::to_string(c.true_positives)});
    }
    t.add({num(r.iou), "mean", num(r.map.map), "", "", ""});
  }
  return t;
}

}  // namespace hybridfit::cli
