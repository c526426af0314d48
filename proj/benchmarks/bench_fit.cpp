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

#include <benchmark/benchmark.h>

#include <vector>

#include "hybridfit/fitfunc.hpp"
#include "hybridfit/pipeline.hpp"
#include "hybridfit/random.hpp"
#include "hybridfit/refine.hpp"
#include "hybridfit/scenegen.hpp"

namespace hybridfit {
namespace {

const OrientedBox kTruth(Vec3(1, 2, 0.5), Vec3(1.2, 0.8, 1.0), 0.6);

PrimitiveSet noisy_set(int extra_outliers) {
  NoiseModel model;
  model.set_std(0.05);
  Scene scene;
  scene.bounds = {Vec3::Zero(), Vec3(4, 4, 2)};
  scene.boxes = {kTruth};
  PrimitiveSet preds = corrupt_primitives(scene, model, 11);
  Rng rng(12);
  for (int k = 0; k < extra_outliers; ++k) {
    preds.add({PrimitiveType::kFace,
               Vec3(rng.uniform(0, 4), rng.uniform(0, 4), rng.uniform(0, 2)),
               1000 + k, std::nullopt, std::nullopt});
  }
  return preds;
}

void BM_EvaluateFit(benchmark::State& state) {
  const PrimitiveSet preds = noisy_set(static_cast<int>(state.range(0)));
  const FitConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_fit(preds, kTruth, cfg));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(preds.size()));
}
BENCHMARK(BM_EvaluateFit)->Arg(0)->Arg(100)->Arg(1000);

void BM_RefineProposal(benchmark::State& state) {
  const PrimitiveSet preds = noisy_set(static_cast<int>(state.range(0)));
  const OrientedBox init(kTruth.center() + Vec3(0.05, -0.04, 0.02),
                         kTruth.scales() * 1.08, kTruth.yaw() + 0.07);
  const FitConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(refine_proposal(init, preds, cfg));
  }
}
BENCHMARK(BM_RefineProposal)->Arg(0)->Arg(100);

void BM_FitScene(benchmark::State& state) {
  SceneSpec spec;
  spec.seed = 5;
  spec.n_boxes = static_cast<int>(state.range(0));
  const Scene scene = generate_scenes(spec, 1).front();
  NoiseModel model;
  model.set_std(0.05);
  model.dropout_prob = 0.1;
  const PrimitiveSet preds = corrupt_primitives(scene, model, 6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_scene(scene.id, preds, FitOptions{}));
  }
}
BENCHMARK(BM_FitScene)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace hybridfit
