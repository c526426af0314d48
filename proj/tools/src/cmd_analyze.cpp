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
#include "hybridfit/ensemble.hpp"

namespace hybridfit::cli {

int run_analyze(Run& run) {
  const RunConfig& cfg = run.cfg();
  const AnalyzeSection& a = cfg.analyze;
  if (cfg.noise.dropout_prob != 0.0 || cfg.noise.outlier_rate != 0.0) {
    throw std::invalid_argument("analyze needs noise.dropout_prob = 0 and noise.outlier_rate = 0");
  }
  const auto samples = draw_samples(a.reference, cfg.noise, cfg.seed, a.trials);
  const EmpiricalMoments m = empirical_moments(samples, a.reference, a.magnitude);
  const PerPrimitive variances = model_variances(cfg.noise);
  const PerPrimitive bias_norms = model_bias_norms(cfg.noise);

  CsvTable moments({"slot", "type", "bias", "variance", "model_variance", "model_bias"});
  Json mean_error = Json::array();
  for (int s = 0; s < kNumPrimitives; ++s) {
    moments.add({std::to_string(s),
                 std::string(to_string(PrimitiveKind::from_slot(s).type())), num(m.bias[s]),
                 num(m.variance[s]), num(variances[s]), num(bias_norms[s])});
    mean_error.push_back(vec3_to_json(m.mean_error[s]));
  }

  std::vector<std::string> header{"slot"};
  for (int s = 0; s < kNumPrimitives; ++s) header.push_back(std::to_string(s));
  CsvTable corr(header);
  Json corr_json = Json::array();
  for (int s = 0; s < kNumPrimitives; ++s) {
    std::vector<std::string> row{std::to_string(s)};
    Json jrow = Json::array();
    for (int t = 0; t < kNumPrimitives; ++t) {
      row.push_back(num(m.correlation(s, t)));
      jrow.push_back(m.correlation(s, t));
    }
    corr.add(std::move(row));
    corr_json.push_back(jrow);
  }

  CsvTable fusion({"beta_face", "beta_edge", "var_x", "var_y", "var_z", "predicted_variance",
                   "bias_norm", "bias_bound", "bias_standard_error", "bound_holds"});
  Json fusion_json = Json::array();
  bool bound_holds = true;
  for (double bf : a.beta_grid) {
    for (double be : a.beta_grid) {
      const FusionWeights w{bf, be};
      const FusionStudy st = fusion_study(samples, a.reference, w, variances, bias_norms);
      const bool holds = st.bias_norm <= st.bias_bound + 3.0 * st.bias_standard_error;
      bound_holds = bound_holds && holds;
      fusion.add({num(bf), num(be), num(st.empirical_variance.x()),
                  num(st.empirical_variance.y()), num(st.empirical_variance.z()),
                  num(st.predicted_variance), num(st.bias_norm), num(st.bias_bound),
                  num(st.bias_standard_error), holds ? "1" : "0"});
      fusion_json.push_back({{"weights", fusion_weights_to_json(w)},
                             {"empirical_variance", vec3_to_json(st.empirical_variance)},
                             {"predicted_variance", st.predicted_variance},
                             {"mean_error", vec3_to_json(st.mean_error)},
                             {"bias_norm", st.bias_norm},
                             {"bias_bound", st.bias_bound},
                             {"bias_standard_error", st.bias_standard_error},
                             {"bound_holds", holds}});
    }
  }

  run.write_json("analysis.json",
                 {{"trials", a.trials},
                  {"reference", box_to_json(a.reference)},
                  {"moments", {{"bias", m.bias}, {"variance", m.variance}, {"mean_error", mean_error}}},
                  {"correlation", corr_json},
                  {"fusion", fusion_json}});
  run.write_csv("moments.csv", moments);
  run.write_csv("correlation.csv", corr);
  run.write_csv("fusion.csv", fusion);
  run.finish({{"trials", a.trials}, {"bias_bound_holds", bound_holds}});
  std::cout << "analyze: " << a.trials << " trials, " << fusion_json.size()
            << " weightings, bias bound " << (bound_holds ? "holds" : "violated") << "\n";
  return 0;
}

}  // namespace hybridfit::cli
