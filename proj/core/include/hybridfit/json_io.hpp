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
/// \brief JSON encodings of boxes, primitive sets, scenes, detections,
/// labels and configuration sections. Lengths are meters, angles radians.
#pragma once

#include <filesystem>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include <nlohmann/json.hpp>

#include "hybridfit/ensemble.hpp"
#include "hybridfit/evalkit.hpp"
#include "hybridfit/fitfunc.hpp"
#include "hybridfit/labels.hpp"
#include "hybridfit/matching.hpp"
#include "hybridfit/pipeline.hpp"
#include "hybridfit/scenegen.hpp"

namespace hybridfit {

using Json = nlohmann::json;

/// Malformed input. The message starts with "<file>:<line>:<col>:" when
/// the position is known.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json load_json_file(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& value);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Whitespace-separated "x y z" per line; blank lines and '#' comments are
/// skipped.
std::vector<Vec3> load_xyz_points(const std::filesystem::path& path);

Json vec3_to_json(const Vec3& v);
Vec3 vec3_from_json(const Json& j);

/// {center:[x,y,z], scales:[sx,sy,sz], yaw, class?, score?}
Json box_to_json(const OrientedBox& box);
OrientedBox box_from_json(const Json& j);

/// [{type:"center"|"face"|"edge", pos:[x,y,z], id, source?, class?}, ...]
Json primitives_to_json(const PrimitiveSet& set);
PrimitiveSet primitives_from_json(const Json& j);

/// {id, seed, bounds:{min,max}, boxes:[...], points:[[x,y,z],...]}
Json scene_to_json(const Scene& scene);
Scene scene_from_json(const Json& j);

/// {scenes:[scene, ...]}; a single scene object is also accepted on input.
Json scenes_to_json(const std::vector<Scene>& scenes);
std::vector<Scene> scenes_from_json(const Json& j);

struct ScenePrimitives {
  int scene_id = 0;
  PrimitiveSet primitives;
};

/// {scenes:[{scene_id, primitives:[...]}, ...]}; a bare list is scene 0.
Json scene_primitives_to_json(const std::vector<ScenePrimitives>& sets);
std::vector<ScenePrimitives> scene_primitives_from_json(const Json& j);

/// [{slot, ids:[...], padded}, ...] for the non-empty slots.
Json neighborhood_to_json(const NeighborhoodSample& sample);

/// {scenes:[{scene_id, detections:[box...], matches?:[...]}, ...]}
Json detections_to_json(const std::vector<DetectionSet>& sets,
                        const std::vector<std::vector<NeighborhoodSample>>*
                            matches = nullptr);
std::vector<DetectionSet> detections_from_json(const Json& j);

/// One record per refined seed.
Json trace_to_json(const SeedFit& fit);

/// Parallel arrays over the points.
Json labels_to_json(const PointLabels& labels);

std::vector<GroundTruth> ground_truth_of(const std::vector<Scene>& scenes);

/// Throws FormatError unless `j` is an object whose keys are all in `keys`.
void reject_unknown(const Json& j, std::initializer_list<const char*> keys,
                    const char* what);

/// Reads j[key] into `out` when present, checking the JSON type.
template <typename T>
void read_if_present(const Json& j, const char* key, T& out) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  if constexpr (std::is_same_v<T, bool>) {
    if (!it->is_boolean()) {
      throw FormatError(std::string(key) + ": expected a boolean");
    }
    out = it->template get<bool>();
  } else if constexpr (std::is_integral_v<T>) {
    if (!it->is_number_integer() ||
        (std::is_unsigned_v<T> && it->template get<long long>() < 0 &&
         !it->is_number_unsigned())) {
      throw FormatError(std::string(key) + ": expected an integer");
    }
    out = it->template get<T>();
  } else if constexpr (std::is_same_v<T, Vec3>) {
    out = vec3_from_json(*it);
  } else {
    if (!it->is_number()) {
      throw FormatError(std::string(key) + ": expected a number");
    }
    out = it->template get<T>();
  }
}

// Configuration sections. Absent keys keep the value already in `out`;
// unknown keys are rejected.
void fit_config_from_json(const Json& j, FitConfig& out);
Json fit_config_to_json(const FitConfig& cfg);
void noise_model_from_json(const Json& j, NoiseModel& out);
Json noise_model_to_json(const NoiseModel& model);
void scene_spec_from_json(const Json& j, SceneSpec& out);
Json scene_spec_to_json(const SceneSpec& spec);
Json fusion_weights_to_json(const FusionWeights& w);
/// Pipeline options other than the embedded FitConfig.
void fit_options_from_json(const Json& j, FitOptions& out);
Json fit_options_to_json(const FitOptions& opt);

}  // namespace hybridfit
