// benchmarks/calib_bench.cc

// Copyright 2026  The Defake Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <vector>

#include <benchmark/benchmark.h>

#include "defake/calib.h"
#include "defake/corpus.h"
#include "defake/rng.h"

namespace {

struct TrainingSet {
  Eigen::MatrixXd x;
  std::vector<defake::ClassLabel> labels;
};

TrainingSet MakeTraining(std::int64_t n_per_class, int n_systems) {
  defake::Rng rng(11);
  TrainingSet out;
  out.x.resize(2 * n_per_class, n_systems);
  out.labels.resize(static_cast<std::size_t>(2 * n_per_class));
  for (std::int64_t i = 0; i < 2 * n_per_class; ++i) {
    const bool bona = i < n_per_class;
    out.labels[static_cast<std::size_t>(i)] =
        bona ? defake::ClassLabel::kBonafide : defake::ClassLabel::kSpoof;
    for (int k = 0; k < n_systems; ++k) {
      out.x(i, k) = (bona ? 1.0 : -1.0) * (1.0 + 0.2 * k) + rng.Gaussian();
    }
  }
  return out;
}

void BM_TrainAffine(benchmark::State& state) {
  const TrainingSet t =
      MakeTraining(state.range(0), static_cast<int>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(defake::TrainAffine(t.x, t.labels, 0.5));
  }
  state.SetItemsProcessed(state.iterations() * 2 * state.range(0));
}
BENCHMARK(BM_TrainAffine)
    ->Args({1 << 10, 1})
    ->Args({1 << 13, 1})
    ->Args({1 << 16, 1})
    ->Args({1 << 13, 3})
    ->Args({1 << 13, 8});

void BM_ApplyAffine(benchmark::State& state) {
  const TrainingSet t = MakeTraining(state.range(0), 4);
  const defake::AffineCalibrator model = defake::TrainAffine(t.x, t.labels, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(defake::ApplyAffine(model, t.x));
  }
  state.SetItemsProcessed(state.iterations() * 2 * state.range(0));
}
BENCHMARK(BM_ApplyAffine)->Range(1 << 10, 1 << 16);

}  // namespace

BENCHMARK_MAIN();
