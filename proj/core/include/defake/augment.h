// core/include/defake/augment.h

// Copyright 2026  The Defake Authors
//
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

// Seeded waveform and feature corruptions: RawBoost-style disturbances,
// additive noise at exact SNR, room impulse responses, speed perturbation,
// time/frequency masking, and a mu-law codec round trip.  Every stochastic
// operation is a pure function of (input, params, seed).

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "defake/dsp.h"
#include "defake/wave.h"

namespace defake {

enum class RawBoostAlgo { kConvolutive, kImpulsive, kStationary };

// Parameter ranges for the three RawBoost algorithms.  The `series` list is
// applied in order; a degenerate configuration (zero notch filters, zero
// impulse probability, infinite SNR) reduces to the identity.
struct RawBoostParams {
  std::vector<RawBoostAlgo> series = {RawBoostAlgo::kConvolutive,
                                      RawBoostAlgo::kImpulsive,
                                      RawBoostAlgo::kStationary};

  // Convolutive: multiband FIR with random notch/boost bands.
  int notch_count_lo = 1;
  int notch_count_hi = 5;
  double center_lo_hz = 20.0;
  double center_hi_hz = 0.0;  // <= 0 means fs/2 - 1000
  double bandwidth_lo_hz = 100.0;
  double bandwidth_hi_hz = 1000.0;
  double gain_lo_db = -20.0;
  double gain_hi_db = 20.0;
  int fir_taps = 129;         // odd; linear-phase design
  bool nonlinearity = false;  // adds a cubic term after filtering

  // Impulsive: signal-dependent impulses at probability-p positions.
  double impulse_prob = 0.003;

  // Stationary: random-FIR-colored white noise.  Infinite SNR bounds
  // disable the algorithm.
  double snr_lo_db = 10.0;
  double snr_hi_db = 40.0;
  int noise_fir_taps = 11;

  void Validate(double sample_rate_hz) const;
};

struct SpecAugmentParams {
  int max_time_mask_width = 0;  // frames
  int n_time_masks = 0;
  int max_freq_mask_width = 0;  // feature bins
  int n_freq_masks = 0;
  std::uint64_t seed = 0;

  void Validate() const;
};

struct MaskSpan {
  int start = 0;
  int width = 0;
};

struct SpecAugmentResult {
  FeatureMatrix features;
  std::vector<MaskSpan> time_masks;
  std::vector<MaskSpan> freq_masks;
  double fill_value = 0.0;  // per-utterance feature mean
};

// Applies the configured algorithm series.  Length and rate are preserved;
// the result is peak-normalized only when its peak exceeds 1.
Waveform RawBoost(const Waveform& w, const RawBoostParams& p,
                  std::uint64_t seed);

// Adds `noise` (looped or cropped to the signal length) scaled so that
// 10*log10(P_signal / P_scaled_noise) == snr_db exactly, with signal power
// taken over nonzero input samples.  The sum is clipped to [-1, 1]; the
// number of clipped samples is written to *n_clipped when given.  A +inf
// snr_db is the identity sentinel.
Waveform MixAtSnr(const Waveform& w, const Waveform& noise, double snr_db,
                  std::size_t* n_clipped = nullptr);

// Full convolution truncated to the input length, then rescaled so the
// output peak magnitude equals the input peak magnitude.
Waveform ConvolveRir(const Waveform& w, const Waveform& rir);

// Resampling-based speed change: output length round(len/factor), sample
// rate tag unchanged, pitch shifts with speed.  factor must lie in
// (0.5, 2.0); factor 1.0 is the identity.
Waveform SpeedPerturb(const Waveform& w, double factor);

// Time/frequency masking.  Masked entries are set to the mean of the whole
// feature matrix (zero is out of distribution for log features).  Each mask
// width is uniform on [0, max_width]; spans may overlap.
SpecAugmentResult SpecAugment(const FeatureMatrix& f,
                              const SpecAugmentParams& p);

// Mu-law compand, midtread quantization to 2^bits levels, expand.  Zero
// maps to zero; input is treated as [-1, 1] signal.
Waveform MulawCodec(const Waveform& w, double mu = 255.0, int bits = 8);

// Pipes the waveform as a WAV file through `command` (run by /bin/sh with
// the input on stdin) and decodes the command's stdout as the result.
Waveform ExternalCodec(const Waveform& w, const std::string& command);

}  // namespace defake
