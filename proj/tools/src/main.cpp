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

#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "hybridfit/json_io.hpp"
#include "run_config.hpp"

namespace {

namespace fs = std::filesystem;
using namespace hybridfit;
using namespace hybridfit::cli;

template <typename T>
void optional_flag(CLI::App& app, const std::string& name, std::optional<T>& out,
                   const std::string& help) {
  app.add_option_function<T>(name, [&out](const T& v) { out = v; }, help);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid-primitive oriented box fitting"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  fs::path out = ".";
  std::optional<std::string> config;
  optional_flag(app, "--config", config, "JSON run configuration");
  optional_flag(app, "--seed", o.seed, "Root seed");
  optional_flag(app, "--threads", o.threads, "Worker threads");
  optional_flag(app, "--delta", o.delta, "Truncation radius");
  optional_flag(app, "--beta-face", o.beta_face, "Face weight");
  optional_flag(app, "--beta-edge", o.beta_edge, "Edge weight");
  app.add_option("--iou", o.iou, "IoU threshold (repeatable)");
  optional_flag(app, "--radius", o.radius, "Neighborhood radius");
  optional_flag(app, "--max-samples", o.max_samples, "Neighborhood sample count");
  app.add_option("--out", out, "Output directory");

  auto* gen = app.add_subcommand("gen", "Generate scenes and noisy primitives");
  std::optional<int> count;
  optional_flag(*gen, "--count", count, "Number of scenes");

  auto* label = app.add_subcommand("label", "Label points against ground-truth boxes");
  LabelArgs label_args;
  label->add_option("--scenes", label_args.scenes, "Scenes JSON")->required();
  std::optional<std::string> points;
  optional_flag(*label, "--points", points, "Points file, one 'x y z' per line");

  auto* fit = app.add_subcommand("fit", "Fit boxes to primitives");
  FitArgs fit_args;
  std::optional<std::string> fit_scenes;
  fit->add_option("--primitives", fit_args.primitives, "Primitives JSON")->required();
  optional_flag(*fit, "--scenes", fit_scenes, "Scenes JSON selecting which scenes to fit");
  fit->add_flag("--traces", fit_args.traces, "Write per-seed traces");
  fit->add_flag("--matches", fit_args.matches, "Write neighborhood samples");

  auto* eval = app.add_subcommand("eval", "Score detections against ground truth");
  EvalArgs eval_args;
  eval->add_option("--detections", eval_args.detections, "Detections JSON")->required();
  eval->add_option("--scenes", eval_args.scenes, "Scenes JSON")->required();

  auto* gradcheck = app.add_subcommand("gradcheck", "Check derivatives against finite differences");
  auto* analyze = app.add_subcommand("analyze", "Monte Carlo study of primitive error");

  auto* sweep = app.add_subcommand("sweep", "mAP across truncation radii");
  std::optional<std::string> sweep_scenes, sweep_primitives;
  optional_flag(*sweep, "--scenes", sweep_scenes, "Scenes JSON");
  optional_flag(*sweep, "--primitives", sweep_primitives, "Primitives JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (config) o.config = fs::path(*config);
    RunConfig cfg = resolve_config(o);
    if (count) {
      cfg.gen.count = *count;
      cfg.validate();
    }
    CLI::App* sub = app.get_subcommands().front();
    Run run(sub->get_name(), cfg, out);
    if (sub == gen) return run_gen(run);
    if (sub == label) {
      if (points) label_args.points = fs::path(*points);
      return run_label(run, label_args);
    }
    if (sub == fit) {
      if (fit_scenes) fit_args.scenes = fs::path(*fit_scenes);
      return run_fit(run, fit_args);
    }
    if (sub == eval) return run_eval(run, eval_args);
    if (sub == gradcheck) return run_gradcheck(run);
    if (sub == analyze) return run_analyze(run);
    SweepArgs sweep_args;
    if (sweep_scenes) sweep_args.scenes = fs::path(*sweep_scenes);
    if (sweep_primitives) sweep_args.primitives = fs::path(*sweep_primitives);
    return run_sweep(run, sweep_args);
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
