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

#include "run_config.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace hybridfit::cli {

namespace {

std::vector<double> number_list(const Json& j, const char* what) {
  if (!j.is_array()) throw FormatError(std::string(what) + ": expected an array");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw FormatError(std::string(what) + ": expected numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

Interpolation parse_interpolation(const Json& j) {
  if (j == "all-point") return Interpolation::kAllPoint;
  if (j == "11-point") return Interpolation::kElevenPoint;
  throw FormatError("eval.interpolation: expected \"all-point\" or \"11-point\"");
}

ErrorMagnitude parse_magnitude(const Json& j) {
  if (j == "nearest") return ErrorMagnitude::kNearestPrediction;
  if (j == "direct") return ErrorMagnitude::kDirect;
  throw FormatError("analyze.magnitude: expected \"nearest\" or \"direct\"");
}

int parse_threads(const std::string& text, const char* what) {
  std::size_t used = 0;
  int n = 0;
  try {
    n = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || n < 1) {
    throw std::invalid_argument(std::string(what) + ": expected a positive integer, got '" +
                                text + "'");
  }
  return n;
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) throw std::invalid_argument(std::string(what) + " must be > 0");
}

}  // namespace

void RunConfig::validate() const {
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  if (gen.count < 0) throw std::invalid_argument("gen.count must be >= 0");
  scene.validate();
  noise.validate();
  fit.validate();
  FitOptions opt = pipeline;
  opt.cfg = fit;
  opt.validate();
  require_positive(label_threshold, "label.threshold");
  if (eval.iou.empty()) throw std::invalid_argument("eval.iou must not be empty");
  for (double t : eval.iou) {
    if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("eval.iou must lie in (0, 1]");
  }
  if (analyze.trials < 2) throw std::invalid_argument("analyze.trials must be >= 2");
  for (double b : analyze.beta_grid) {
    if (!(b >= 0.0)) throw std::invalid_argument("analyze.beta_grid must be >= 0");
  }
  if (sweep.deltas.empty()) throw std::invalid_argument("sweep.deltas must not be empty");
  for (double d : sweep.deltas) require_positive(d, "sweep.deltas");
  if (sweep.count < 1) throw std::invalid_argument("sweep.count must be >= 1");
  if (gradcheck.instances < 1 || gradcheck.implicit_instances < 1) {
    throw std::invalid_argument("gradcheck instance counts must be >= 1");
  }
  require_positive(gradcheck.sigma, "gradcheck.sigma");
  require_positive(gradcheck.fd_step, "gradcheck.fd_step");
}

Json RunConfig::to_json() const {
  Json grid = analyze.beta_grid;
  return {
      {"seed", seed},
      {"threads", threads},
      {"gen", {{"count", gen.count}}},
      {"scene", scene_spec_to_json(scene)},
      {"noise", noise_model_to_json(noise)},
      {"fit", fit_config_to_json(fit)},
      {"pipeline", fit_options_to_json(pipeline)},
      {"label", {{"threshold", label_threshold}}},
      {"eval",
       {{"iou", eval.iou},
        {"interpolation",
         eval.interpolation == Interpolation::kAllPoint ? "all-point" : "11-point"}}},
      {"analyze",
       {{"trials", analyze.trials},
        {"beta_grid", grid},
        {"magnitude",
         analyze.magnitude == ErrorMagnitude::kNearestPrediction ? "nearest" : "direct"},
        {"reference", box_to_json(analyze.reference)}}},
      {"sweep",
       {{"deltas", sweep.deltas}, {"count", sweep.count}, {"max_spread", sweep.max_spread}}},
      {"gradcheck",
       {{"instances", gradcheck.instances},
        {"implicit_instances", gradcheck.implicit_instances},
        {"sigma", gradcheck.sigma},
        {"fd_step", gradcheck.fd_step}}},
  };
}

void apply_config(const Json& j, RunConfig& cfg) {
  reject_unknown(j,
                 {"seed", "threads", "gen", "scene", "noise", "fit", "pipeline",
                  "label", "eval", "analyze", "sweep", "gradcheck"},
                 "config");
  read_if_present(j, "seed", cfg.seed);
  read_if_present(j, "threads", cfg.threads);
  if (j.contains("gen")) {
    reject_unknown(j["gen"], {"count"}, "gen");
    read_if_present(j["gen"], "count", cfg.gen.count);
  }
  if (j.contains("scene")) scene_spec_from_json(j["scene"], cfg.scene);
  if (j.contains("noise")) noise_model_from_json(j["noise"], cfg.noise);
  if (j.contains("fit")) fit_config_from_json(j["fit"], cfg.fit);
  if (j.contains("pipeline")) fit_options_from_json(j["pipeline"], cfg.pipeline);
  if (j.contains("label")) {
    reject_unknown(j["label"], {"threshold"}, "label");
    read_if_present(j["label"], "threshold", cfg.label_threshold);
  }
  if (j.contains("eval")) {
    const Json& e = j["eval"];
    reject_unknown(e, {"iou", "interpolation"}, "eval");
    if (e.contains("iou")) cfg.eval.iou = number_list(e["iou"], "eval.iou");
    if (e.contains("interpolation")) {
      cfg.eval.interpolation = parse_interpolation(e["interpolation"]);
    }
  }
  if (j.contains("analyze")) {
    const Json& a = j["analyze"];
    reject_unknown(a, {"trials", "beta_grid", "magnitude", "reference"}, "analyze");
    read_if_present(a, "trials", cfg.analyze.trials);
    if (a.contains("beta_grid")) {
      cfg.analyze.beta_grid = number_list(a["beta_grid"], "analyze.beta_grid");
    }
    if (a.contains("magnitude")) cfg.analyze.magnitude = parse_magnitude(a["magnitude"]);
    if (a.contains("reference")) cfg.analyze.reference = box_from_json(a["reference"]);
  }
  if (j.contains("sweep")) {
    const Json& s = j["sweep"];
    reject_unknown(s, {"deltas", "count", "max_spread"}, "sweep");
    if (s.contains("deltas")) cfg.sweep.deltas = number_list(s["deltas"], "sweep.deltas");
    read_if_present(s, "count", cfg.sweep.count);
    read_if_present(s, "max_spread", cfg.sweep.max_spread);
  }
  if (j.contains("gradcheck")) {
    const Json& g = j["gradcheck"];
    reject_unknown(g, {"instances", "implicit_instances", "sigma", "fd_step"}, "gradcheck");
    read_if_present(g, "instances", cfg.gradcheck.instances);
    read_if_present(g, "implicit_instances", cfg.gradcheck.implicit_instances);
    read_if_present(g, "sigma", cfg.gradcheck.sigma);
    read_if_present(g, "fd_step", cfg.gradcheck.fd_step);
  }
}

RunConfig resolve_config(const Overrides& o) {
  RunConfig cfg;
  if (o.config) {
    const Json j = load_json_file(*o.config);
    try {
      apply_config(j, cfg);
    } catch (const FormatError& e) {
      throw FormatError(o.config->string() + ": " + e.what());
    } catch (const Json::exception& e) {
      throw FormatError(o.config->string() + ": " + e.what());
    }
  }
  if (const char* env = std::getenv("HYBRIDFIT_THREADS"); env && *env) {
    cfg.threads = parse_threads(env, "HYBRIDFIT_THREADS");
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.threads) cfg.threads = *o.threads;
  if (o.delta) cfg.fit.delta = *o.delta;
  if (o.beta_face) cfg.fit.beta_face = *o.beta_face;
  if (o.beta_edge) cfg.fit.beta_edge = *o.beta_edge;
  if (!o.iou.empty()) cfg.eval.iou = o.iou;
  if (o.radius) cfg.pipeline.match_radius = *o.radius;
  if (o.max_samples) cfg.pipeline.max_samples = *o.max_samples;
  cfg.pipeline.cfg = cfg.fit;
  cfg.validate();
  return cfg;
}

}  // namespace hybridfit::cli
