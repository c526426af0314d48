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

#include "hybridfit/json_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace hybridfit {

namespace {

std::string position_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

const Json& require(const Json& j, const char* key, const char* what) {
  if (!j.is_object()) {
    throw FormatError(std::string(what) + ": expected an object");
  }
  const auto it = j.find(key);
  if (it == j.end()) {
    throw FormatError(std::string(what) + ": missing key '" + key + "'");
  }
  return *it;
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw FormatError(std::string(what) + ": expected a number");
  return j.get<double>();
}

int integer(const Json& j, const char* what) {
  if (!j.is_number_integer()) {
    throw FormatError(std::string(what) + ": expected an integer");
  }
  return j.get<int>();
}

Json slot_json(int slot, const NeighborhoodSlot& s) {
  return {{"slot", slot}, {"ids", s.ids}, {"padded", s.sampled_with_replacement}};
}

Json optional_vec(const std::optional<Vec3>& v) {
  return v ? vec3_to_json(*v) : Json(nullptr);
}

}  // namespace

void reject_unknown(const Json& j, std::initializer_list<const char*> keys,
                    const char* what) {
  if (!j.is_object()) {
    throw FormatError(std::string(what) + ": expected an object");
  }
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) {
      throw FormatError(std::string(what) + ": unknown key '" + k + "'");
    }
  }
}

Json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path.string() + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(path.string() + ":" + position_of(text, e.byte) + ": " +
                      e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& value) {
  write_text_file(path, value.dump(2) + "\n");
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path.string() + ": cannot write file");
  out << text;
}

std::vector<Vec3> load_xyz_points(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path.string() + ": cannot open file");
  std::vector<Vec3> points;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    double x, y, z;
    if (!(ls >> x)) continue;
    std::string rest;
    if (!(ls >> y >> z) || (ls >> rest)) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) +
                        ": expected 'x y z'");
    }
    points.emplace_back(x, y, z);
  }
  return points;
}

Json vec3_to_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Vec3 vec3_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 3) {
    throw FormatError("expected a 3-element array");
  }
  return {number(j[0], "x"), number(j[1], "y"), number(j[2], "z")};
}

Json box_to_json(const OrientedBox& box) {
  Json j = {{"center", vec3_to_json(box.center())},
            {"scales", vec3_to_json(box.scales())},
            {"yaw", box.yaw()}};
  if (box.class_label()) j["class"] = *box.class_label();
  if (box.score()) j["score"] = *box.score();
  return j;
}

OrientedBox box_from_json(const Json& j) {
  reject_unknown(j, {"center", "scales", "yaw", "class", "score"}, "box");
  std::optional<int> label;
  std::optional<double> score;
  if (j.contains("class")) label = integer(j["class"], "box.class");
  if (j.contains("score")) score = number(j["score"], "box.score");
  try {
    return OrientedBox(vec3_from_json(require(j, "center", "box")),
                       vec3_from_json(require(j, "scales", "box")),
                       number(require(j, "yaw", "box"), "box.yaw"), label, score);
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("box: ") + e.what());
  }
}

Json primitives_to_json(const PrimitiveSet& set) {
  Json arr = Json::array();
  for (const auto& p : set) {
    Json j = {{"type", std::string(to_string(p.type))},
              {"pos", vec3_to_json(p.position)},
              {"id", p.id}};
    if (p.source) j["source"] = *p.source;
    if (p.class_label) j["class"] = *p.class_label;
    arr.push_back(std::move(j));
  }
  return arr;
}

PrimitiveSet primitives_from_json(const Json& j) {
  if (!j.is_array()) throw FormatError("primitive set: expected an array");
  PrimitiveSet set;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Json& e = j[i];
    const std::string what = "primitives[" + std::to_string(i) + "]";
    reject_unknown(e, {"type", "pos", "id", "source", "class"}, what.c_str());
    Primitive p;
    const Json& type = require(e, "type", what.c_str());
    if (!type.is_string()) throw FormatError(what + ".type: expected a string");
    try {
      p.type = parse_primitive_type(type.get<std::string>());
      p.position = vec3_from_json(require(e, "pos", what.c_str()));
      p.id = integer(require(e, "id", what.c_str()), "id");
      if (e.contains("source")) p.source = integer(e["source"], "source");
      if (e.contains("class")) p.class_label = integer(e["class"], "class");
      set.add(std::move(p));
    } catch (const std::invalid_argument& ex) {
      throw FormatError(what + ": " + ex.what());
    } catch (const FormatError& ex) {
      throw FormatError(what + ": " + ex.what());
    }
  }
  return set;
}

Json scene_to_json(const Scene& scene) {
  Json boxes = Json::array();
  for (const auto& b : scene.boxes) boxes.push_back(box_to_json(b));
  Json points = Json::array();
  for (const auto& p : scene.points) points.push_back(vec3_to_json(p));
  return {{"id", scene.id},
          {"seed", scene.seed},
          {"bounds",
           {{"min", vec3_to_json(scene.bounds.min)},
            {"max", vec3_to_json(scene.bounds.max)}}},
          {"boxes", std::move(boxes)},
          {"points", std::move(points)}};
}

Scene scene_from_json(const Json& j) {
  reject_unknown(j, {"id", "seed", "bounds", "boxes", "points"}, "scene");
  Scene s;
  if (j.contains("id")) s.id = integer(j["id"], "scene.id");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) {
      throw FormatError("scene.seed: expected an integer");
    }
    s.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("bounds")) {
    const Json& b = j["bounds"];
    reject_unknown(b, {"min", "max"}, "scene.bounds");
    s.bounds.min = vec3_from_json(require(b, "min", "scene.bounds"));
    s.bounds.max = vec3_from_json(require(b, "max", "scene.bounds"));
  }
  const Json& boxes = require(j, "boxes", "scene");
  if (!boxes.is_array()) throw FormatError("scene.boxes: expected an array");
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    try {
      s.boxes.push_back(box_from_json(boxes[i]));
    } catch (const FormatError& e) {
      throw FormatError("scene.boxes[" + std::to_string(i) + "]: " + e.what());
    }
  }
  if (j.contains("points")) {
    const Json& pts = j["points"];
    if (!pts.is_array()) throw FormatError("scene.points: expected an array");
    s.points.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      try {
        s.points.push_back(vec3_from_json(pts[i]));
      } catch (const FormatError& e) {
        throw FormatError("scene.points[" + std::to_string(i) + "]: " + e.what());
      }
    }
  }
  return s;
}

Json scenes_to_json(const std::vector<Scene>& scenes) {
  Json arr = Json::array();
  for (const auto& s : scenes) arr.push_back(scene_to_json(s));
  return {{"scenes", std::move(arr)}};
}

std::vector<Scene> scenes_from_json(const Json& j) {
  if (j.is_object() && j.contains("scenes")) {
    const Json& arr = j["scenes"];
    if (!arr.is_array()) throw FormatError("scenes: expected an array");
    std::vector<Scene> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      try {
        out.push_back(scene_from_json(arr[i]));
      } catch (const FormatError& e) {
        throw FormatError("scenes[" + std::to_string(i) + "]: " + e.what());
      }
    }
    return out;
  }
  return {scene_from_json(j)};
}

Json scene_primitives_to_json(const std::vector<ScenePrimitives>& sets) {
  Json arr = Json::array();
  for (const auto& s : sets) {
    arr.push_back({{"scene_id", s.scene_id},
                   {"primitives", primitives_to_json(s.primitives)}});
  }
  return {{"scenes", std::move(arr)}};
}

std::vector<ScenePrimitives> scene_primitives_from_json(const Json& j) {
  if (j.is_array()) return {{0, primitives_from_json(j)}};
  const Json& arr = require(j, "scenes", "primitive file");
  if (!arr.is_array()) throw FormatError("scenes: expected an array");
  std::vector<ScenePrimitives> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string what = "scenes[" + std::to_string(i) + "]";
    reject_unknown(arr[i], {"scene_id", "primitives"}, what.c_str());
    try {
      out.push_back(
          {integer(require(arr[i], "scene_id", what.c_str()), "scene_id"),
           primitives_from_json(require(arr[i], "primitives", what.c_str()))});
    } catch (const FormatError& e) {
      throw FormatError(what + ": " + e.what());
    }
  }
  return out;
}

Json neighborhood_to_json(const NeighborhoodSample& sample) {
  Json arr = Json::array();
  for (int s = 0; s < kNumPrimitives; ++s) {
    if (!sample.slots[s].ids.empty()) arr.push_back(slot_json(s, sample.slots[s]));
  }
  return arr;
}

Json detections_to_json(
    const std::vector<DetectionSet>& sets,
    const std::vector<std::vector<NeighborhoodSample>>* matches) {
  Json arr = Json::array();
  for (std::size_t i = 0; i < sets.size(); ++i) {
    Json dets = Json::array();
    for (const auto& b : sets[i].detections) dets.push_back(box_to_json(b));
    Json scene = {{"scene_id", sets[i].scene_id}, {"detections", std::move(dets)}};
    if (matches && i < matches->size()) {
      Json m = Json::array();
      for (const auto& n : (*matches)[i]) m.push_back(neighborhood_to_json(n));
      scene["matches"] = std::move(m);
    }
    arr.push_back(std::move(scene));
  }
  return {{"scenes", std::move(arr)}};
}

std::vector<DetectionSet> detections_from_json(const Json& j) {
  const Json& arr = require(j, "scenes", "detection file");
  if (!arr.is_array()) throw FormatError("scenes: expected an array");
  std::vector<DetectionSet> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string what = "scenes[" + std::to_string(i) + "]";
    reject_unknown(arr[i], {"scene_id", "detections", "matches"}, what.c_str());
    DetectionSet set;
    set.scene_id = integer(require(arr[i], "scene_id", what.c_str()), "scene_id");
    const Json& dets = require(arr[i], "detections", what.c_str());
    if (!dets.is_array()) throw FormatError(what + ".detections: expected an array");
    for (std::size_t k = 0; k < dets.size(); ++k) {
      try {
        set.detections.push_back(box_from_json(dets[k]));
      } catch (const FormatError& e) {
        throw FormatError(what + ".detections[" + std::to_string(k) +
                          "]: " + e.what());
      }
    }
    try {
      set.validate();
    } catch (const std::invalid_argument& e) {
      throw FormatError(e.what());
    }
    out.push_back(std::move(set));
  }
  return out;
}

Json trace_to_json(const SeedFit& fit) {
  const RefineTrace& t = fit.trace;
  return {{"seed_id", fit.seed_id},
          {"hypothesis", fit.hypothesis},
          {"iterations", t.iterations},
          {"initial", box_to_json(t.initial)},
          {"final", box_to_json(t.final_box)},
          {"initial_value", t.initial_value},
          {"final_value", t.final_value},
          {"converged", t.converged},
          {"boundary_warnings", t.boundary_warnings},
          {"gradient_steps", t.gradient_steps}};
}

Json labels_to_json(const PointLabels& labels) {
  Json face_flag = Json::array(), face_offset = Json::array(),
       face_index = Json::array(), face_distance = Json::array();
  Json edge_flag = Json::array(), edge_offset = Json::array(),
       edge_index = Json::array(), edge_distance = Json::array();
  Json owner = Json::array(), center_offset = Json::array();
  auto index_json = [](const std::optional<FeatureRef>& r) {
    return r ? Json::array({r->box, r->feature}) : Json(nullptr);
  };
  for (const auto& l : labels) {
    face_flag.push_back(l.face.flag);
    face_offset.push_back(optional_vec(l.face.offset));
    face_index.push_back(index_json(l.face.index));
    face_distance.push_back(l.face.index ? Json(l.face.distance) : Json(nullptr));
    edge_flag.push_back(l.edge.flag);
    edge_offset.push_back(optional_vec(l.edge.offset));
    edge_index.push_back(index_json(l.edge.index));
    edge_distance.push_back(l.edge.index ? Json(l.edge.distance) : Json(nullptr));
    owner.push_back(l.owner ? Json(*l.owner) : Json(nullptr));
    center_offset.push_back(optional_vec(l.center_offset));
  }
  return {{"face_flag", std::move(face_flag)},
          {"face_offset", std::move(face_offset)},
          {"face_index", std::move(face_index)},
          {"face_distance", std::move(face_distance)},
          {"edge_flag", std::move(edge_flag)},
          {"edge_offset", std::move(edge_offset)},
          {"edge_index", std::move(edge_index)},
          {"edge_distance", std::move(edge_distance)},
          {"owner", std::move(owner)},
          {"center_offset", std::move(center_offset)}};
}

std::vector<GroundTruth> ground_truth_of(const std::vector<Scene>& scenes) {
  std::vector<GroundTruth> out;
  out.reserve(scenes.size());
  for (const auto& s : scenes) out.push_back({s.id, s.boxes});
  return out;
}

void fit_config_from_json(const Json& j, FitConfig& out) {
  reject_unknown(j,
                 {"beta_center", "beta_face", "beta_edge", "delta", "tol_g",
                  "tol_x", "max_iters", "min_scale", "initial_damping",
                  "freeze_yaw"},
                 "fit config");
  read_if_present(j, "beta_center", out.beta_center);
  read_if_present(j, "beta_face", out.beta_face);
  read_if_present(j, "beta_edge", out.beta_edge);
  read_if_present(j, "delta", out.delta);
  read_if_present(j, "tol_g", out.refine.tol_g);
  read_if_present(j, "tol_x", out.refine.tol_x);
  read_if_present(j, "max_iters", out.refine.max_iters);
  read_if_present(j, "min_scale", out.refine.min_scale);
  read_if_present(j, "initial_damping", out.refine.initial_damping);
  read_if_present(j, "freeze_yaw", out.refine.freeze_yaw);
}

Json fit_config_to_json(const FitConfig& cfg) {
  return {{"beta_center", cfg.beta_center},
          {"beta_face", cfg.beta_face},
          {"beta_edge", cfg.beta_edge},
          {"delta", cfg.delta},
          {"tol_g", cfg.refine.tol_g},
          {"tol_x", cfg.refine.tol_x},
          {"max_iters", cfg.refine.max_iters},
          {"min_scale", cfg.refine.min_scale},
          {"initial_damping", cfg.refine.initial_damping},
          {"freeze_yaw", cfg.refine.freeze_yaw}};
}

void noise_model_from_json(const Json& j, NoiseModel& out) {
  reject_unknown(j,
                 {"std", "center", "face", "edge", "dropout_prob",
                  "outlier_rate", "outlier_extent", "correlation"},
                 "noise model");
  if (j.contains("std")) out.set_std(number(j["std"], "noise.std"));
  for (PrimitiveType t : kPrimitiveTypes) {
    const std::string key(to_string(t));
    if (!j.contains(key)) continue;
    const Json& tj = j[key];
    reject_unknown(tj, {"bias", "std"}, key.c_str());
    read_if_present(tj, "bias", out.of(t).bias);
    read_if_present(tj, "std", out.of(t).std);
  }
  read_if_present(j, "dropout_prob", out.dropout_prob);
  read_if_present(j, "outlier_rate", out.outlier_rate);
  read_if_present(j, "outlier_extent", out.outlier_extent);
  if (j.contains("correlation")) {
    const Json& c = j["correlation"];
    if (c == "independent") {
      out.correlation = CorrelationMode::kIndependent;
    } else if (c == "shared-per-box") {
      out.correlation = CorrelationMode::kSharedPerBox;
    } else {
      throw FormatError(
          "noise.correlation: expected \"independent\" or \"shared-per-box\"");
    }
  }
}

Json noise_model_to_json(const NoiseModel& model) {
  Json j = {{"dropout_prob", model.dropout_prob},
            {"outlier_rate", model.outlier_rate},
            {"outlier_extent", model.outlier_extent},
            {"correlation", model.correlation == CorrelationMode::kIndependent
                                ? "independent"
                                : "shared-per-box"}};
  for (PrimitiveType t : kPrimitiveTypes) {
    j[std::string(to_string(t))] = {{"bias", vec3_to_json(model.of(t).bias)},
                                    {"std", model.of(t).std}};
  }
  return j;
}

void scene_spec_from_json(const Json& j, SceneSpec& out) {
  reject_unknown(j,
                 {"seed", "n_boxes", "size_min", "size_max", "bounds",
                  "points_per_box", "n_classes", "min_gap", "clutter_rate",
                  "max_attempts"},
                 "scene spec");
  read_if_present(j, "seed", out.seed);
  read_if_present(j, "n_boxes", out.n_boxes);
  read_if_present(j, "size_min", out.size_min);
  read_if_present(j, "size_max", out.size_max);
  if (j.contains("bounds")) {
    reject_unknown(j["bounds"], {"min", "max"}, "scene spec bounds");
    read_if_present(j["bounds"], "min", out.bounds.min);
    read_if_present(j["bounds"], "max", out.bounds.max);
  }
  read_if_present(j, "points_per_box", out.points_per_box);
  read_if_present(j, "n_classes", out.n_classes);
  read_if_present(j, "min_gap", out.min_gap);
  read_if_present(j, "clutter_rate", out.clutter_rate);
  read_if_present(j, "max_attempts", out.max_attempts);
}

Json scene_spec_to_json(const SceneSpec& spec) {
  return {{"seed", spec.seed},
          {"n_boxes", spec.n_boxes},
          {"size_min", vec3_to_json(spec.size_min)},
          {"size_max", vec3_to_json(spec.size_max)},
          {"bounds",
           {{"min", vec3_to_json(spec.bounds.min)},
            {"max", vec3_to_json(spec.bounds.max)}}},
          {"points_per_box", spec.points_per_box},
          {"n_classes", spec.n_classes},
          {"min_gap", spec.min_gap},
          {"clutter_rate", spec.clutter_rate},
          {"max_attempts", spec.max_attempts}};
}

Json fusion_weights_to_json(const FusionWeights& w) {
  return {{"beta_face", w.beta_face}, {"beta_edge", w.beta_edge}};
}

void fit_options_from_json(const Json& j, FitOptions& out) {
  reject_unknown(j,
                 {"default_scales", "default_yaw", "yaw_hypotheses", "dedup",
                  "with_matches", "match_radius", "max_samples", "match_seed"},
                 "pipeline config");
  read_if_present(j, "default_scales", out.default_scales);
  read_if_present(j, "default_yaw", out.default_yaw);
  read_if_present(j, "yaw_hypotheses", out.yaw_hypotheses);
  if (j.contains("dedup")) {
    const Json& d = j["dedup"];
    reject_unknown(d, {"center", "scales", "yaw"}, "pipeline.dedup");
    read_if_present(d, "center", out.dedup.center);
    read_if_present(d, "scales", out.dedup.scales);
    read_if_present(d, "yaw", out.dedup.yaw);
  }
  read_if_present(j, "with_matches", out.with_matches);
  read_if_present(j, "match_radius", out.match_radius);
  read_if_present(j, "max_samples", out.max_samples);
  read_if_present(j, "match_seed", out.match_seed);
}

Json fit_options_to_json(const FitOptions& opt) {
  return {{"default_scales", vec3_to_json(opt.default_scales)},
          {"default_yaw", opt.default_yaw},
          {"yaw_hypotheses", opt.yaw_hypotheses},
          {"dedup",
           {{"center", opt.dedup.center},
            {"scales", opt.dedup.scales},
            {"yaw", opt.dedup.yaw}}},
          {"with_matches", opt.with_matches},
          {"match_radius", opt.match_radius},
          {"max_samples", opt.max_samples},
          {"match_seed", opt.match_seed}};
}

}  // namespace hybridfit
