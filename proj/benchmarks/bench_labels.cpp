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

#include "hybridfit/labels.hpp"
#include "hybridfit/scenegen.hpp"

namespace hybridfit {
namespace {

void BM_GenerateLabels(benchmark::State& state) {
  SceneSpec spec;
  spec.seed = 3;
  spec.n_boxes = static_cast<int>(state.range(0));
  const Scene scene = generate_scenes(spec, 1).front();
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate_labels(scene.points, scene.boxes));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(scene.points.size()));
}
BENCHMARK(BM_GenerateLabels)->Arg(1)->Arg(4)->Arg(8)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace hybridfit
