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
/// \brief The resolved configuration of one hybridfit invocation.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hybridfit/ensemble.hpp"
#include "hybridfit/evalkit.hpp"
#include "hybridfit/fitfunc.hpp"
#include "hybridfit/json_io.hpp"
#include "hybridfit/pipeline.hpp"
#include "hybridfit/scenegen.hpp"

namespace hybridfit::cli {

struct GenSection {
  int count = 10;
};

struct EvalSection {
  std::vector<double> iou{0.25, 0.5};
  Interpolation interpolation = Interpolation::kAllPoint;
};

struct AnalyzeSection {
  int trials = 10000;
  std::vector<double> beta_grid{0.0, 0.5, 1.0};
  ErrorMagnitude magnitude = ErrorMagnitude::kNearestPrediction;
  OrientedBox reference{Vec3(0, 0, 0.5), Vec3::Ones(), 0.0};
};

struct SweepSection {
  std::vector<double> deltas{0.04, 0.09, 0.16, 0.25};
  int count = 20;
  /// Largest allowed max - min of mAP@0.25 across deltas.
  double max_spread = 0.05;
};

struct GradcheckSection {
  int instances = 100;
  int implicit_instances = 50;
  double sigma = 0.05;
  double fd_step = 1e-5;
};

struct RunConfig {
  std::uint64_t seed = 0;
  int threads = 1;
  GenSection gen;
  SceneSpec scene;
  NoiseModel noise;
  FitConfig fit;
  FitOptions pipeline;
  double label_threshold = 0.2;
  EvalSection eval;
  AnalyzeSection analyze;
  SweepSection sweep;
  GradcheckSection gradcheck;

  /// Checks every section against its module's preconditions.
  void validate() const;
  Json to_json() const;
};

/// Applies a config document on top of the defaults.
void apply_config(const Json& j, RunConfig& cfg);

/// Command-line values that override the config file.
struct Overrides {
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<double> delta;
  std::optional<double> beta_face;
  std::optional<double> beta_edge;
  std::vector<double> iou;
  std::optional<double> radius;
  std::optional<int> max_samples;
};

/// Defaults, then the config file, then HYBRIDFIT_THREADS, then flags.
RunConfig resolve_config(const Overrides& o);

}  // namespace hybridfit::cli
