// core/include/defake/rng.h

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

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace defake {

// Seeded random stream with distributions implemented by hand, so a given
// seed produces the same draws on every platform and standard library.
// std::mt19937_64 raw output is fully specified; the std::*_distribution
// wrappers are not, which is why they are not used here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double Uniform();

  // Uniform on [lo, hi).
  double Uniform(double lo, double hi);

  // Uniform integer on [lo, hi], both ends inclusive.  Rejection sampling,
  // no modulo bias.
  std::int64_t UniformInt(std::int64_t lo, std::int64_t hi);

  // Standard normal via Box-Muller; the second draw of each pair is cached.
  double Gaussian();

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Stable 64-bit mix of a global seed and a token (FNV-1a over the token,
// then the seed folded in).  Used to give each utterance or worker its own
// independent stream, so results do not depend on processing order or on
// the number of parallel jobs.
std::uint64_t DeriveSeed(std::uint64_t global_seed, std::string_view token);

}  // namespace defake
