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

/// \file
/// \brief Subcommand entry points and the steps they share.
#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "hybridfit/evalkit.hpp"
#include "hybridfit/json_io.hpp"
#include "hybridfit/pipeline.hpp"
#include "hybridfit/scenegen.hpp"
#include "output.hpp"

namespace hybridfit::cli {

struct LabelArgs {
  std::filesystem::path scenes;
  std::optional<std::filesystem::path> points;
};

struct FitArgs {
  std::filesystem::path primitives;
  std::optional<std::filesystem::path> scenes;
  bool traces = false;
  bool matches = false;
};

struct EvalArgs {
  std::filesystem::path detections;
  std::filesystem::path scenes;
};

struct SweepArgs {
  std::optional<std::filesystem::path> scenes;
  std::optional<std::filesystem::path> primitives;
};

int run_gen(Run& run);
int run_label(Run& run, const LabelArgs& args);
int run_fit(Run& run, const FitArgs& args);
int run_eval(Run& run, const EvalArgs& args);
int run_gradcheck(Run& run);
int run_analyze(Run& run);
int run_sweep(Run& run, const SweepArgs& args);

// Shared steps.

/// Loads a JSON document and decodes it, prefixing decode errors with the
/// file name.
template <typename Decode>
auto load_with(const std::filesystem::path& path, Decode decode) {
  const Json j = load_json_file(path);
  try {
    return decode(j);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  } catch (const Json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

/// Scenes of a run, generated from the config.
std::vector<Scene> generate_run_scenes(const RunConfig& cfg, int count);

/// Noisy primitives of every scene; scene s uses seed derive_seed(s.seed, 1).
std::vector<ScenePrimitives> corrupt_run_scenes(const std::vector<Scene>& scenes,
                                                const NoiseModel& noise);

/// Fits every primitive set, in parallel across scenes. Output order follows
/// the input order.
std::vector<SceneFit> fit_all(const std::vector<ScenePrimitives>& sets,
                              const FitOptions& options, int threads);

struct EvalResult {
  double iou = 0.0;
  MeanApResult map;
  std::vector<ClassEvaluation> per_class;
  std::vector<int> classes;
};

std::vector<EvalResult> evaluate(const std::vector<DetectionSet>& dets,
                                 const std::vector<GroundTruth>& gts,
                                 const std::vector<double>& ious,
                                 Interpolation interp);

Json eval_to_json(const std::vector<EvalResult>& results);
CsvTable eval_to_csv(const std::vector<EvalResult>& results);

}  // namespace hybridfit::cli
