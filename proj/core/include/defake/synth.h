// core/include/defake/synth.h

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

// Seeded synthetic corpus of bonafide, fully fake, and partially fake
// utterances, plus a toy linear detector over per-frame cepstra.  The two
// signal recipes share a family (filtered noise plus harmonics) but differ
// in spectral tilt, and the fake recipe adds a narrowband component, so the
// classes are separable by cepstral statistics without any real data.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "defake/calib.h"
#include "defake/corpus.h"
#include "defake/dsp.h"
#include "defake/wave.h"

namespace defake {

struct SynthConfig {
  std::uint64_t seed = 0;
  int n_utterances = 200;
  int sample_rate_hz = 16000;
  double duration_lo_sec = 2.0;
  double duration_hi_sec = 4.0;

  // Class mixture; must sum to 1.
  double frac_bonafide = 0.4;
  double frac_fake = 0.3;
  double frac_partial = 0.3;

  // Signal recipes.  The one-pole noise shaper is dark for bonafide and
  // bright for fake; both carry a harmonic stack, and fake adds a high
  // narrowband tone.
  double bona_noise_pole = 0.93;
  double fake_noise_pole = 0.45;
  double f0_lo_hz = 100.0;
  double f0_hi_hz = 250.0;
  double fake_tone_lo_hz = 3000.0;
  double fake_tone_hi_hz = 4200.0;

  // Splice transitions per partially fake utterance, inclusive range.
  int splice_lo = 1;
  int splice_hi = 3;

  void Validate() const;  // throws kBadArgument
};

struct SynthCorpus {
  std::vector<std::string> utt_order;  // u0000, u0001, ...
  std::unordered_map<std::string, Waveform> waves;
  TrialKey key;
  SegmentAnnotationSet segments;
};

// Deterministic under cfg.seed regardless of `jobs`: every utterance draws
// from its own derived stream.
SynthCorpus GenerateCorpus(const SynthConfig& cfg, int jobs = 1);

// 60/20/20 by position in utt_order; sizes round down for train and dev,
// the remainder goes to eval.
struct CorpusSplit {
  std::vector<std::string> train;
  std::vector<std::string> dev;
  std::vector<std::string> eval;
};
CorpusSplit SplitCorpus(const std::vector<std::string>& utt_order);

// Affine scorer over per-frame LFCCs.  Frame scores are the raw affine
// outputs at the analysis frame rate; the utterance score is their mean.
struct ToyDetector {
  AffineCalibrator model;
  CepstralConfig features;
  int sample_rate_hz = 16000;

  double FrameResolutionSec() const { return features.frame.frame_shift_sec; }
};

// Trains the affine frame model on the listed utterances.  Frame ground
// truth comes from expanding the segment annotations at the analysis frame
// rate with an any-overlap spoof rule; label rows beyond the feature count
// are dropped.  Training balances classes at an effective prior of 1/2.
ToyDetector TrainToyDetector(const SynthCorpus& corpus,
                             const std::vector<std::string>& train_utts,
                             const CepstralConfig& feature_cfg,
                             TrainReport* report = nullptr);

// Per-frame affine outputs, one per analysis frame.
std::vector<double> ScoreFrames(const ToyDetector& d, const Waveform& w);

// Mean of ScoreFrames.
double ScoreUtterance(const ToyDetector& d, const Waveform& w);

// Frame scores mapped to an external resolution: output frame k takes the
// score of the analysis frame whose center is nearest to (k + 1/2) *
// resolution.  Output length is the frame count of the waveform's duration
// at that resolution, so the vector lines up with expanded frame labels.
std::vector<double> FrameScoresAtResolution(const ToyDetector& d,
                                            const Waveform& w,
                                            double resolution_sec);

std::string SerializeToyDetector(const ToyDetector& d);
ToyDetector ParseToyDetector(std::string_view text);

}  // namespace defake
