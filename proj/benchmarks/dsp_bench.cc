// benchmarks/dsp_bench.cc

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

#include "defake/dsp.h"
#include "defake/rng.h"
#include "defake/wave.h"

namespace {

defake::Waveform MakeWave(std::int64_t n_samples) {
  defake::Waveform w;
  defake::Rng rng(7);
  w.samples.resize(static_cast<std::size_t>(n_samples));
  for (double& v : w.samples) v = 0.1 * rng.Gaussian();
  return w;
}

void BM_Spectrogram(benchmark::State& state) {
  const defake::Waveform w = MakeWave(state.range(0));
  const defake::FrameConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(defake::Spectrogram(w, cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Spectrogram)->Range(1 << 14, 1 << 18);

void BM_LfccFeatures(benchmark::State& state) {
  const defake::Waveform w = MakeWave(state.range(0));
  const defake::CepstralConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        defake::CepstralFeatures(w, defake::FeatureKind::kLfcc, cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LfccFeatures)->Range(1 << 14, 1 << 18);

void BM_FftConvolve(benchmark::State& state) {
  const defake::Waveform a = MakeWave(state.range(0));
  const defake::Waveform b = MakeWave(1 << 9);
  for (auto _ : state) {
    benchmark::DoNotOptimize(defake::FftConvolve(a.samples, b.samples));
  }
}
BENCHMARK(BM_FftConvolve)->Range(1 << 12, 1 << 16);

void BM_Resample(benchmark::State& state) {
  defake::Waveform w = MakeWave(state.range(0));
  w.sample_rate_hz = 16000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(defake::Resample(w, 8000));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Resample)->Range(1 << 14, 1 << 17);

}  // namespace

BENCHMARK_MAIN();
