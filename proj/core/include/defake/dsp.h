// core/include/defake/dsp.h

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

// Resampling, framed spectral analysis, and the cepstral front-ends (Fbank
// on a mel filterbank, LFCC on a linear filterbank) with delta appending.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "defake/wave.h"

namespace defake {

enum class WindowKind { kHamming, kHann, kRect };

enum class FeatureKind { kFbank, kLfcc };

struct FrameConfig {
  double frame_len_sec = 0.025;
  double frame_shift_sec = 0.010;
  WindowKind window = WindowKind::kHamming;
  bool pre_emphasis = false;      // off unless asked for
  double pre_emphasis_coeff = 0.97;
};

struct CepstralConfig {
  FrameConfig frame;
  int n_filters = 20;
  int n_ceps = 20;          // LFCC only; Fbank emits n_filters dims
  double log_floor = 1e-10;
};

struct FeatureMatrix {
  Eigen::MatrixXd frames;  // T x D
  double frame_shift_sec = 0.010;
  double frame_len_sec = 0.025;
  std::string feature_kind;  // "fbank", "lfcc", "lfcc+deltas", ...
};

// Band-limited windowed-sinc resampling (Kaiser window).  Equal rates are
// an exact identity.  Output length = round(len * target / source).
Waveform Resample(const Waveform& w, int target_rate_hz, int filter_taps = 64);

// Resamples so the output has out_len samples covering the same content,
// reading input position n * time_step for output sample n.  The rate tag
// of the result is kept at w.sample_rate_hz; this is the primitive behind
// both Resample and speed perturbation.
Waveform ResampleStream(const Waveform& w, double time_step,
                        std::int64_t out_len, int filter_taps = 64);

// Frame count of the analysis framing: 1 + floor((len - flen) / shift) for
// len >= flen, else 1 (the short input is zero-padded to one frame).
std::int64_t FrameCount(std::int64_t n_samples, std::int64_t frame_len,
                        std::int64_t frame_shift);

// Power spectrogram, T x (Nfft/2 + 1), Nfft = next power of two >= frame
// length in samples.
Eigen::MatrixXd Spectrogram(const Waveform& w, const FrameConfig& cfg);

double HzToMel(double hz);
double MelToHz(double mel);

// Triangular filterbank matrix, n_filters x (nfft/2 + 1).  Centers equally
// spaced in hertz (kLfcc/linear) or in mel (kFbank), spanning [0, fs/2].
Eigen::MatrixXd FilterbankMatrix(FeatureKind kind, int n_filters, int nfft,
                                 int sample_rate_hz);

// Fbank: log(mel filterbank energy + floor).  LFCC: orthonormal DCT-II of
// log(linear filterbank energy + floor), keeping n_ceps coefficients.
FeatureMatrix CepstralFeatures(const Waveform& w, FeatureKind kind,
                               const CepstralConfig& cfg);

// Appends regression deltas (and double deltas for order 2) computed with
// edge replication; output dimensionality is D * (order + 1).
FeatureMatrix AddDeltas(const FeatureMatrix& f, int order = 2,
                        int window_width = 2);

// Text export: header "<utt-id> <T> <D>", then one line of D values per
// frame.  Appendable: concatenating serialized utterances yields one file.
std::string SerializeFeatureMatrix(const std::string& utt_id,
                                   const FeatureMatrix& f);

// Full linear convolution, length |a| + |b| - 1, via FFT.
std::vector<double> FftConvolve(std::span<const double> a,
                                std::span<const double> b);

}  // namespace defake
