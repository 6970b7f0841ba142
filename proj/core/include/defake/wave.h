// core/include/defake/wave.h

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
#include <span>
#include <string>
#include <vector>

namespace defake {

// Mono audio in [-1, 1] doubles.  16-bit samples are scaled by 1/32768 on
// load, so the int16 grid is represented exactly and write-then-load
// round-trips bit for bit.
struct Waveform {
  std::vector<double> samples;
  int sample_rate_hz = 16000;

  double DurationSec() const {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
};

// RIFF/WAVE PCM 16-bit mono codec.  Decode throws CorruptHeader for
// malformed containers and UnsupportedFormat for anything that is not
// 16-bit mono integer PCM (stereo, float, 8/24/32-bit, compressed).
Waveform DecodeWav(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> EncodeWav(const Waveform& w);

Waveform LoadWav(const std::string& path);

// Atomic: stages to a temporary and renames into place.
void SaveWav(const std::string& path, const Waveform& w);

// Hard-clips samples to [-1, 1] in place; returns how many were clipped.
std::size_t ClipToUnit(Waveform* w);

}  // namespace defake
