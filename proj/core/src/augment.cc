// core/src/augment.cc

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

#include "defake/augment.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include <unistd.h>

#include "defake/error.h"
#include "defake/rng.h"
#include "defake/util.h"

namespace defake {

namespace {

constexpr int kDesignFftSize = 1024;  // frequency-sampling grid for FIR design

// Mean square over nonzero samples; 0 when every sample is zero.  Noise
// scaling references the power of what was actually recorded, so silence
// does not dilute it.
double NonzeroPower(const std::vector<double>& x) {
  double acc = 0.0;
  std::size_t n = 0;
  for (double v : x) {
    if (v != 0.0) {
      acc += v * v;
      ++n;
    }
  }
  return n == 0 ? 0.0 : acc / static_cast<double>(n);
}

double MeanPower(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc / static_cast<double>(x.size());
}

double PeakMagnitude(const std::vector<double>& x) {
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  return peak;
}

// y[m] = sum_i h[i] * x[m + delay - i]: linear convolution with the group
// delay removed, so the output is aligned with and as long as the input.
std::vector<double> SameConvolve(const std::vector<double>& x,
                                 const std::vector<double>& h, int delay) {
  const std::int64_t n = static_cast<std::int64_t>(x.size());
  const std::int64_t taps = static_cast<std::int64_t>(h.size());
  std::vector<double> y(x.size(), 0.0);
  for (std::int64_t m = 0; m < n; ++m) {
    double acc = 0.0;
    const std::int64_t i_lo = std::max<std::int64_t>(0, m + delay - n + 1);
    const std::int64_t i_hi = std::min(taps - 1, m + delay);
    for (std::int64_t i = i_lo; i <= i_hi; ++i) {
      acc += h[i] * x[m + delay - i];
    }
    y[m] = acc;
  }
  return y;
}

// Linear-phase FIR from a sampled magnitude response: inverse DFT of the
// real symmetric spectrum evaluated at the taps, then Hamming-windowed.
// A flat response yields exactly a delayed unit impulse.
std::vector<double> FrequencySampledFir(const std::vector<double>& magnitude,
                                        int taps) {
  const int nfft = kDesignFftSize;
  const int half = nfft / 2;
  const int delay = (taps - 1) / 2;
  std::vector<double> h(static_cast<std::size_t>(taps));
  for (int n = 0; n < taps; ++n) {
    double acc = magnitude[0];
    const double phase0 = 2.0 * M_PI * (n - delay) / nfft;
    for (int k = 1; k < half; ++k) {
      acc += 2.0 * magnitude[static_cast<std::size_t>(k)] *
             std::cos(phase0 * k);
    }
    acc += magnitude[static_cast<std::size_t>(half)] * std::cos(phase0 * half);
    const double window =
        0.54 - 0.46 * std::cos(2.0 * M_PI * n / (taps - 1));
    h[static_cast<std::size_t>(n)] = window * acc / nfft;
  }
  return h;
}

void ApplyConvolutive(std::vector<double>* samples, double sample_rate_hz,
                      const RawBoostParams& p, Rng* rng) {
  const int count =
      static_cast<int>(rng->UniformInt(p.notch_count_lo, p.notch_count_hi));
  if (count == 0) return;

  const double center_hi = p.center_hi_hz > 0.0
                               ? p.center_hi_hz
                               : sample_rate_hz / 2.0 - 1000.0;
  std::vector<double> magnitude(kDesignFftSize / 2 + 1, 1.0);
  const double bin_hz = sample_rate_hz / kDesignFftSize;
  for (int i = 0; i < count; ++i) {
    const double center = rng->Uniform(p.center_lo_hz, center_hi);
    const double bandwidth = rng->Uniform(p.bandwidth_lo_hz, p.bandwidth_hi_hz);
    const double gain =
        std::pow(10.0, rng->Uniform(p.gain_lo_db, p.gain_hi_db) / 20.0);
    const double f_lo = center - bandwidth / 2.0;
    const double f_hi = center + bandwidth / 2.0;
    for (std::size_t k = 0; k < magnitude.size(); ++k) {
      const double f = bin_hz * static_cast<double>(k);
      if (f >= f_lo && f <= f_hi) magnitude[k] *= gain;
    }
  }

  const std::vector<double> fir = FrequencySampledFir(magnitude, p.fir_taps);
  *samples = SameConvolve(*samples, fir, (p.fir_taps - 1) / 2);

  if (p.nonlinearity) {
    const double alpha = rng->Uniform(0.05, 0.3);
    for (double& v : *samples) v += alpha * v * v * v;
  }
}

void ApplyImpulsive(std::vector<double>* samples, const RawBoostParams& p,
                    Rng* rng) {
  if (p.impulse_prob <= 0.0) return;
  for (double& v : *samples) {
    if (rng->Uniform() < p.impulse_prob) {
      const double sign = rng->Uniform() < 0.5 ? 1.0 : -1.0;
      const double amp =
          std::pow(10.0, rng->Uniform(p.gain_lo_db, p.gain_hi_db) / 20.0);
      v += sign * amp * v;
    }
  }
}

void ApplyStationary(std::vector<double>* samples, const RawBoostParams& p,
                     Rng* rng) {
  if (std::isinf(p.snr_lo_db)) return;
  if (samples->empty()) return;

  const double snr_db = rng->Uniform(p.snr_lo_db, p.snr_hi_db);
  std::vector<double> white(samples->size());
  for (double& v : white) v = rng->Gaussian();
  std::vector<double> fir(static_cast<std::size_t>(p.noise_fir_taps));
  for (double& c : fir) c = rng->Uniform(-1.0, 1.0);
  std::vector<double> shaped =
      SameConvolve(white, fir, (p.noise_fir_taps - 1) / 2);

  const double p_signal = NonzeroPower(*samples);
  const double p_noise = MeanPower(shaped);
  if (p_noise == 0.0) return;
  const double scale =
      std::sqrt(p_signal / (p_noise * std::pow(10.0, snr_db / 10.0)));
  for (std::size_t i = 0; i < samples->size(); ++i) {
    (*samples)[i] += scale * shaped[i];
  }
}

}  // namespace

void RawBoostParams::Validate(double sample_rate_hz) const {
  if (sample_rate_hz <= 0.0) {
    throw Error(ErrorCode::kBadArgument, "sample rate must be positive");
  }
  if (notch_count_lo < 0 || notch_count_hi < notch_count_lo) {
    throw Error(ErrorCode::kBadArgument, "notch count range must be ordered");
  }
  if (notch_count_hi > 0) {
    const double hi =
        center_hi_hz > 0.0 ? center_hi_hz : sample_rate_hz / 2.0 - 1000.0;
    if (center_lo_hz <= 0.0 || hi < center_lo_hz) {
      throw Error(ErrorCode::kBadArgument,
                  "notch center range must be ordered and positive");
    }
    if (bandwidth_lo_hz <= 0.0 || bandwidth_hi_hz < bandwidth_lo_hz) {
      throw Error(ErrorCode::kBadArgument,
                  "notch bandwidth range must be ordered and positive");
    }
  }
  if (gain_hi_db < gain_lo_db) {
    throw Error(ErrorCode::kBadArgument, "gain range must be ordered");
  }
  if (fir_taps < 3 || fir_taps % 2 == 0 || fir_taps > kDesignFftSize / 2) {
    throw Error(ErrorCode::kBadArgument, "fir_taps must be odd, in [3, 512]");
  }
  if (!(impulse_prob >= 0.0 && impulse_prob <= 1.0)) {
    throw Error(ErrorCode::kBadArgument, "impulse_prob must be in [0, 1]");
  }
  if (std::isinf(snr_lo_db) != std::isinf(snr_hi_db) || snr_hi_db < snr_lo_db) {
    throw Error(ErrorCode::kBadArgument,
                "SNR range must be ordered (or both bounds infinite)");
  }
  if (noise_fir_taps < 1) {
    throw Error(ErrorCode::kBadArgument, "noise_fir_taps must be positive");
  }
}

void SpecAugmentParams::Validate() const {
  if (max_time_mask_width < 0 || n_time_masks < 0 || max_freq_mask_width < 0 ||
      n_freq_masks < 0) {
    throw Error(ErrorCode::kBadArgument,
                "mask widths and counts must be nonnegative");
  }
}

Waveform RawBoost(const Waveform& w, const RawBoostParams& p,
                  std::uint64_t seed) {
  p.Validate(static_cast<double>(w.sample_rate_hz));
  Waveform out = w;
  Rng rng(seed);
  for (RawBoostAlgo algo : p.series) {
    switch (algo) {
      case RawBoostAlgo::kConvolutive:
        ApplyConvolutive(&out.samples, static_cast<double>(out.sample_rate_hz),
                         p, &rng);
        break;
      case RawBoostAlgo::kImpulsive:
        ApplyImpulsive(&out.samples, p, &rng);
        break;
      case RawBoostAlgo::kStationary:
        ApplyStationary(&out.samples, p, &rng);
        break;
    }
  }
  const double peak = PeakMagnitude(out.samples);
  if (peak > 1.0) {
    const double scale = 1.0 / peak;
    for (double& v : out.samples) v *= scale;
  }
  return out;
}

Waveform MixAtSnr(const Waveform& w, const Waveform& noise, double snr_db,
                  std::size_t* n_clipped) {
  if (n_clipped != nullptr) *n_clipped = 0;
  if (std::isinf(snr_db) && snr_db > 0.0) return w;
  if (noise.sample_rate_hz != w.sample_rate_hz) {
    throw Error(ErrorCode::kSampleRateMismatch,
                "noise rate " + std::to_string(noise.sample_rate_hz) +
                    " != signal rate " + std::to_string(w.sample_rate_hz));
  }
  if (noise.samples.empty()) {
    throw Error(ErrorCode::kZeroPowerNoise, "noise waveform is empty");
  }
  if (!std::isfinite(snr_db)) {
    throw Error(ErrorCode::kBadArgument, "snr_db must be finite or +inf");
  }

  const std::size_t n = w.samples.size();
  std::vector<double> segment(n);
  for (std::size_t i = 0; i < n; ++i) {
    segment[i] = noise.samples[i % noise.samples.size()];
  }
  const double p_noise = MeanPower(segment);
  if (p_noise == 0.0) {
    throw Error(ErrorCode::kZeroPowerNoise,
                "noise power is zero over the mixed span");
  }
  const double p_signal = NonzeroPower(w.samples);
  const double scale =
      std::sqrt(p_signal / (p_noise * std::pow(10.0, snr_db / 10.0)));

  Waveform out = w;
  for (std::size_t i = 0; i < n; ++i) out.samples[i] += scale * segment[i];
  const std::size_t clipped = ClipToUnit(&out);
  if (n_clipped != nullptr) *n_clipped = clipped;
  return out;
}

Waveform ConvolveRir(const Waveform& w, const Waveform& rir) {
  if (rir.sample_rate_hz != w.sample_rate_hz) {
    throw Error(ErrorCode::kSampleRateMismatch,
                "rir rate " + std::to_string(rir.sample_rate_hz) +
                    " != signal rate " + std::to_string(w.sample_rate_hz));
  }
  if (rir.samples.empty()) {
    throw Error(ErrorCode::kEmptyInput, "empty impulse response");
  }
  Waveform out = w;
  if (w.samples.empty()) return out;

  const std::size_t n = w.samples.size();
  if (rir.samples.size() <= 512) {
    // Direct form keeps short impulse responses (and the delta identity)
    // free of FFT round-off.
    const std::int64_t taps = static_cast<std::int64_t>(rir.samples.size());
    for (std::int64_t m = static_cast<std::int64_t>(n) - 1; m >= 0; --m) {
      double acc = 0.0;
      const std::int64_t i_hi = std::min(taps - 1, m);
      for (std::int64_t i = 0; i <= i_hi; ++i) {
        acc += rir.samples[static_cast<std::size_t>(i)] *
               w.samples[static_cast<std::size_t>(m - i)];
      }
      out.samples[static_cast<std::size_t>(m)] = acc;
    }
  } else {
    std::vector<double> full = FftConvolve(w.samples, rir.samples);
    full.resize(n);
    out.samples = std::move(full);
  }

  const double in_peak = PeakMagnitude(w.samples);
  const double out_peak = PeakMagnitude(out.samples);
  if (out_peak > 0.0 && out_peak != in_peak) {
    const double scale = in_peak / out_peak;
    for (double& v : out.samples) v *= scale;
  }
  return out;
}

Waveform SpeedPerturb(const Waveform& w, double factor) {
  if (!(factor > 0.5 && factor < 2.0)) {
    throw Error(ErrorCode::kBadArgument,
                "speed factor must lie in (0.5, 2.0), got " +
                    FormatDouble(factor));
  }
  if (factor == 1.0) return w;
  const std::int64_t out_len =
      std::llround(static_cast<double>(w.samples.size()) / factor);
  return ResampleStream(w, factor, out_len);
}

SpecAugmentResult SpecAugment(const FeatureMatrix& f,
                              const SpecAugmentParams& p) {
  p.Validate();
  SpecAugmentResult result;
  result.features = f;
  const int T = static_cast<int>(f.frames.rows());
  const int D = static_cast<int>(f.frames.cols());
  result.fill_value = f.frames.size() > 0 ? f.frames.mean() : 0.0;

  Rng rng(p.seed);
  for (int i = 0; i < p.n_time_masks; ++i) {
    const int width =
        static_cast<int>(rng.UniformInt(0, std::min(p.max_time_mask_width, T)));
    const int start = static_cast<int>(rng.UniformInt(0, T - width));
    result.time_masks.push_back({start, width});
    if (width > 0) {
      result.features.frames.middleRows(start, width)
          .setConstant(result.fill_value);
    }
  }
  for (int i = 0; i < p.n_freq_masks; ++i) {
    const int width =
        static_cast<int>(rng.UniformInt(0, std::min(p.max_freq_mask_width, D)));
    const int start = static_cast<int>(rng.UniformInt(0, D - width));
    result.freq_masks.push_back({start, width});
    if (width > 0) {
      result.features.frames.middleCols(start, width)
          .setConstant(result.fill_value);
    }
  }
  return result;
}

Waveform MulawCodec(const Waveform& w, double mu, int bits) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw Error(ErrorCode::kBadArgument, "mu must be positive and finite");
  }
  if (bits < 2 || bits > 16) {
    throw Error(ErrorCode::kBadArgument, "bits must lie in [2, 16]");
  }
  const double log_1p_mu = std::log1p(mu);
  const long levels_half = 1L << (bits - 1);
  const double inv_half = 1.0 / static_cast<double>(levels_half);

  Waveform out = w;
  for (double& v : out.samples) {
    const double x = std::clamp(v, -1.0, 1.0);
    const double companded =
        std::copysign(std::log1p(mu * std::abs(x)) / log_1p_mu, x);
    long q = std::lround(companded * static_cast<double>(levels_half));
    q = std::clamp(q, -levels_half, levels_half - 1);
    const double cq = static_cast<double>(q) * inv_half;
    v = std::copysign(std::expm1(std::abs(cq) * log_1p_mu) / mu, cq);
  }
  return out;
}

Waveform ExternalCodec(const Waveform& w, const std::string& command) {
  if (command.empty()) {
    throw Error(ErrorCode::kBadArgument, "empty codec command");
  }
  static std::atomic<std::uint64_t> counter{0};
  const std::uint64_t id = counter.fetch_add(1);
  const std::filesystem::path dir = std::filesystem::temp_directory_path();
  const std::string stem = "defake_codec_" + std::to_string(::getpid()) + "_" +
                           std::to_string(id);
  const std::filesystem::path in_path = dir / (stem + "_in.wav");
  const std::filesystem::path out_path = dir / (stem + "_out.wav");

  const std::vector<std::uint8_t> encoded = EncodeWav(w);
  WriteFileAtomic(in_path.string(),
                  std::string(encoded.begin(), encoded.end()));

  const std::string shell_cmd =
      command + " < '" + in_path.string() + "' > '" + out_path.string() + "'";
  const int rc = std::system(shell_cmd.c_str());

  std::string produced;
  std::error_code ignored;
  if (rc == 0) {
    try {
      produced = ReadFileToString(out_path.string());
    } catch (const Error&) {
      produced.clear();
    }
  }
  std::filesystem::remove(in_path, ignored);
  std::filesystem::remove(out_path, ignored);

  if (rc != 0) {
    throw Error(ErrorCode::kIoError, "codec command failed with status " +
                                         std::to_string(rc) + ": " + command);
  }
  if (produced.empty()) {
    throw Error(ErrorCode::kIoError, "codec command produced no output: " +
                                         command);
  }
  return DecodeWav(std::vector<std::uint8_t>(produced.begin(), produced.end()));
}

}  // namespace defake
