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

#include "hybridfit/geometry.hpp"
#include "hybridfit/random.hpp"

namespace hybridfit {
namespace {

std::vector<OrientedBox> random_boxes(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<OrientedBox> out;
  for (int i = 0; i < n; ++i) {
    out.emplace_back(Vec3(rng.uniform(0, 2), rng.uniform(0, 2), rng.uniform(0, 1)),
                     Vec3(rng.uniform(0.5, 1.5), rng.uniform(0.5, 1.5), rng.uniform(0.5, 1.5)),
                     rng.uniform(-3.0, 3.0));
  }
  return out;
}

void BM_Iou3d(benchmark::State& state) {
  const auto boxes = random_boxes(64, 1);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(iou3d(boxes[i % 64], boxes[(i * 7 + 3) % 64]));
    ++i;
  }
}
BENCHMARK(BM_Iou3d);

void BM_PrimitiveLocations(benchmark::State& state) {
  const auto boxes = random_boxes(64, 2);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(primitive_locations(boxes[i++ % 64]));
  }
}
BENCHMARK(BM_PrimitiveLocations);

}  // namespace
}  // namespace hybridfit
