// tests/augment_test.cc

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <limits>
#include <vector>

#include "defake/augment.h"
#include "defake/dsp.h"
#include "defake/error.h"
#include "defake/rng.h"
#include "defake/wave.h"

namespace {

using defake::Error;
using defake::ErrorCode;
using defake::FeatureMatrix;
using defake::RawBoostAlgo;
using defake::RawBoostParams;
using defake::SpecAugmentParams;
using defake::Waveform;

constexpr double kInf = std::numeric_limits<double>::infinity();

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error to be thrown");
  return ErrorCode::kEmptyInput;
}

Waveform RandomWave(std::size_t n, std::uint64_t seed, double amp = 0.1,
                    int rate = 16000) {
  Waveform w;
  w.sample_rate_hz = rate;
  w.samples.resize(n);
  defake::Rng rng(seed);
  for (double& v : w.samples) v = amp * rng.Gaussian();
  return w;
}

bool BitIdentical(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::memcmp(&a[i], &b[i], sizeof(double)) != 0) return false;
  }
  return true;
}

// Mean square over nonzero samples, written independently of the library.
double PowerNonzero(const std::vector<double>& x) {
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

double PowerAll(const std::vector<double>& x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return x.empty() ? 0.0 : acc / static_cast<double>(x.size());
}

}  // namespace

TEST_CASE("rawboost identity configuration returns the input bit for bit") {
  const Waveform w = RandomWave(4000, 11);
  RawBoostParams p;
  p.notch_count_lo = 0;
  p.notch_count_hi = 0;
  p.impulse_prob = 0.0;
  p.snr_lo_db = kInf;
  p.snr_hi_db = kInf;
  const Waveform out = defake::RawBoost(w, p, 77);
  CHECK(out.sample_rate_hz == w.sample_rate_hz);
  CHECK(BitIdentical(out.samples, w.samples));
}

TEST_CASE("rawboost stationary hits the drawn SNR exactly") {
  const Waveform w = RandomWave(16000, 5);
  RawBoostParams p;
  p.series = {RawBoostAlgo::kStationary};
  p.snr_lo_db = 10.0;
  p.snr_hi_db = 10.0;
  const Waveform out = defake::RawBoost(w, p, 123);
  REQUIRE(out.samples.size() == w.samples.size());

  std::vector<double> added(w.samples.size());
  for (std::size_t i = 0; i < added.size(); ++i) {
    added[i] = out.samples[i] - w.samples[i];
  }
  const double measured =
      10.0 * std::log10(PowerNonzero(w.samples) / PowerAll(added));
  CHECK(measured == doctest::Approx(10.0).epsilon(1e-6));
  CHECK(std::abs(measured - 10.0) < 0.5);
}

TEST_CASE("rawboost is a pure function of input, params, and seed") {
  const Waveform w = RandomWave(8000, 21);
  const RawBoostParams p;  // default three-algorithm series
  const Waveform a = defake::RawBoost(w, p, 9001);
  const Waveform b = defake::RawBoost(w, p, 9001);
  const Waveform c = defake::RawBoost(w, p, 9002);
  CHECK(BitIdentical(a.samples, b.samples));
  CHECK_FALSE(BitIdentical(a.samples, c.samples));
}

TEST_CASE("rawboost preserves length and rate for every algorithm") {
  const Waveform w = RandomWave(5000, 3, 0.2, 8000);
  for (RawBoostAlgo algo : {RawBoostAlgo::kConvolutive,
                            RawBoostAlgo::kImpulsive,
                            RawBoostAlgo::kStationary}) {
    RawBoostParams p;
    p.series = {algo};
    p.impulse_prob = 0.05;
    const Waveform out = defake::RawBoost(w, p, 4);
    CHECK(out.samples.size() == w.samples.size());
    CHECK(out.sample_rate_hz == 8000);
    for (double v : out.samples) CHECK(std::isfinite(v));
  }
}

TEST_CASE("rawboost output peak never exceeds one") {
  Waveform w = RandomWave(6000, 8, 0.8);
  w.samples[100] = 0.99;
  RawBoostParams p;
  p.series = {RawBoostAlgo::kConvolutive};
  p.gain_lo_db = 15.0;
  p.gain_hi_db = 20.0;
  p.notch_count_lo = 5;
  p.notch_count_hi = 5;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Waveform out = defake::RawBoost(w, p, seed);
    double peak = 0.0;
    for (double v : out.samples) peak = std::max(peak, std::abs(v));
    CHECK(peak <= 1.0);
  }
}

TEST_CASE("rawboost rejects malformed parameter ranges") {
  const Waveform w = RandomWave(100, 1);
  RawBoostParams p;
  p.notch_count_lo = 3;
  p.notch_count_hi = 1;
  CHECK(CodeOf([&] { defake::RawBoost(w, p, 0); }) == ErrorCode::kBadArgument);

  p = RawBoostParams{};
  p.impulse_prob = 1.5;
  CHECK(CodeOf([&] { defake::RawBoost(w, p, 0); }) == ErrorCode::kBadArgument);

  p = RawBoostParams{};
  p.snr_lo_db = 10.0;
  p.snr_hi_db = kInf;  // mixed finite/infinite bounds
  CHECK(CodeOf([&] { defake::RawBoost(w, p, 0); }) == ErrorCode::kBadArgument);

  p = RawBoostParams{};
  p.fir_taps = 128;  // even
  CHECK(CodeOf([&] { defake::RawBoost(w, p, 0); }) == ErrorCode::kBadArgument);
}

TEST_CASE("mix_at_snr infinite SNR is the identity sentinel") {
  const Waveform w = RandomWave(2000, 31);
  Waveform noise;  // even an empty noise source is acceptable here
  noise.sample_rate_hz = 16000;
  const Waveform out = defake::MixAtSnr(w, noise, kInf);
  CHECK(BitIdentical(out.samples, w.samples));
}

TEST_CASE("mix_at_snr unit powers at 0 dB give scale exactly one") {
  Waveform w;
  w.sample_rate_hz = 16000;
  w.samples.assign(256, 1.0);
  Waveform noise;
  noise.sample_rate_hz = 16000;
  noise.samples.assign(256, -1.0);
  std::size_t clipped = 999;
  const Waveform out = defake::MixAtSnr(w, noise, 0.0, &clipped);
  CHECK(clipped == 0);
  for (double v : out.samples) CHECK(v == 0.0);  // 1 + 1.0 * (-1), exactly
}

TEST_CASE("mix_at_snr achieves the requested SNR on random data") {
  const Waveform w = RandomWave(16000, 41, 0.05);
  const Waveform noise = RandomWave(16000, 42, 0.05);
  const Waveform out = defake::MixAtSnr(w, noise, 7.5);
  std::vector<double> added(w.samples.size());
  for (std::size_t i = 0; i < added.size(); ++i) {
    added[i] = out.samples[i] - w.samples[i];
  }
  const double measured =
      10.0 * std::log10(PowerNonzero(w.samples) / PowerAll(added));
  CHECK(measured == doctest::Approx(7.5).epsilon(1e-9));
}

TEST_CASE("mix_at_snr loops short noise and clips loud mixes") {
  Waveform w;
  w.sample_rate_hz = 16000;
  w.samples.assign(9, 0.5);
  Waveform noise;
  noise.sample_rate_hz = 16000;
  noise.samples = {0.1, -0.2, 0.3};
  const Waveform out = defake::MixAtSnr(w, noise, 20.0);
  for (std::size_t i = 0; i + 3 < out.samples.size(); ++i) {
    CHECK(out.samples[i] == out.samples[i + 3]);  // same looped noise sample
  }

  Waveform loud;
  loud.sample_rate_hz = 16000;
  loud.samples.assign(64, 0.9);
  Waveform ones;
  ones.sample_rate_hz = 16000;
  ones.samples.assign(64, 1.0);
  std::size_t clipped = 0;
  const Waveform mixed = defake::MixAtSnr(loud, ones, 0.0, &clipped);
  CHECK(clipped == 64);  // 0.9 + 0.9 * 1.0 = 1.8 everywhere
  for (double v : mixed.samples) CHECK(v == 1.0);
}

TEST_CASE("mix_at_snr error cases") {
  const Waveform w = RandomWave(100, 51);
  Waveform silent;
  silent.sample_rate_hz = 16000;
  silent.samples.assign(100, 0.0);
  CHECK(CodeOf([&] { defake::MixAtSnr(w, silent, 10.0); }) ==
        ErrorCode::kZeroPowerNoise);

  Waveform empty;
  empty.sample_rate_hz = 16000;
  CHECK(CodeOf([&] { defake::MixAtSnr(w, empty, 10.0); }) ==
        ErrorCode::kZeroPowerNoise);

  Waveform other = RandomWave(100, 52, 0.1, 8000);
  CHECK(CodeOf([&] { defake::MixAtSnr(w, other, 10.0); }) ==
        ErrorCode::kSampleRateMismatch);
}

TEST_CASE("convolve_rir with a unit impulse is the identity") {
  const Waveform w = RandomWave(3000, 61, 0.4);
  Waveform rir;
  rir.sample_rate_hz = 16000;
  rir.samples = {1.0};
  const Waveform out = defake::ConvolveRir(w, rir);
  CHECK(BitIdentical(out.samples, w.samples));
}

TEST_CASE("convolve_rir with a delayed impulse shifts the input") {
  Waveform w = RandomWave(3000, 62, 0.3);
  w.samples[0] = 0.9;  // the peak survives the truncation
  Waveform rir;
  rir.sample_rate_hz = 16000;
  rir.samples.assign(6, 0.0);
  rir.samples[5] = 1.0;
  const Waveform out = defake::ConvolveRir(w, rir);
  REQUIRE(out.samples.size() == w.samples.size());
  for (int m = 0; m < 5; ++m) CHECK(out.samples[m] == 0.0);
  for (std::size_t m = 5; m < out.samples.size(); ++m) {
    CHECK(out.samples[m] == w.samples[m - 5]);
  }
}

TEST_CASE("convolve_rir long responses stay finite and peak-matched") {
  const Waveform w = RandomWave(8000, 63, 0.5);
  const Waveform rir = RandomWave(2000, 64, 1.0);
  const Waveform out = defake::ConvolveRir(w, rir);
  REQUIRE(out.samples.size() == w.samples.size());
  double in_peak = 0.0, out_peak = 0.0;
  for (double v : w.samples) in_peak = std::max(in_peak, std::abs(v));
  for (double v : out.samples) {
    REQUIRE(std::isfinite(v));
    out_peak = std::max(out_peak, std::abs(v));
  }
  CHECK(out_peak == doctest::Approx(in_peak).epsilon(1e-12));
}

TEST_CASE("convolve_rir FFT path agrees with a direct convolution") {
  const Waveform w = RandomWave(1200, 65, 0.3);
  const Waveform rir = RandomWave(600, 66, 1.0);  // > 512 taps: FFT path
  const Waveform out = defake::ConvolveRir(w, rir);

  std::vector<double> direct(w.samples.size(), 0.0);
  for (std::size_t m = 0; m < direct.size(); ++m) {
    double acc = 0.0;
    for (std::size_t i = 0; i <= m && i < rir.samples.size(); ++i) {
      acc += rir.samples[i] * w.samples[m - i];
    }
    direct[m] = acc;
  }
  double in_peak = 0.0, direct_peak = 0.0;
  for (double v : w.samples) in_peak = std::max(in_peak, std::abs(v));
  for (double v : direct) direct_peak = std::max(direct_peak, std::abs(v));
  const double scale = in_peak / direct_peak;
  for (std::size_t m = 0; m < direct.size(); ++m) {
    CHECK(out.samples[m] == doctest::Approx(direct[m] * scale).epsilon(1e-9));
  }
}

TEST_CASE("convolve_rir error cases") {
  const Waveform w = RandomWave(100, 67);
  Waveform rir = RandomWave(10, 68, 0.1, 8000);
  CHECK(CodeOf([&] { defake::ConvolveRir(w, rir); }) ==
        ErrorCode::kSampleRateMismatch);
  Waveform empty;
  empty.sample_rate_hz = 16000;
  CHECK(CodeOf([&] { defake::ConvolveRir(w, empty); }) ==
        ErrorCode::kEmptyInput);
}

TEST_CASE("speed_perturb lengths match round(len/factor)") {
  const Waveform w = RandomWave(16000, 71);
  const Waveform fast = defake::SpeedPerturb(w, 1.1);
  CHECK(fast.samples.size() == 14545);
  CHECK(fast.sample_rate_hz == 16000);
  const Waveform slow = defake::SpeedPerturb(w, 0.9);
  CHECK(slow.samples.size() == 17778);
  CHECK(slow.sample_rate_hz == 16000);
}

TEST_CASE("speed_perturb factor one is the identity") {
  const Waveform w = RandomWave(4000, 72);
  const Waveform out = defake::SpeedPerturb(w, 1.0);
  CHECK(BitIdentical(out.samples, w.samples));
}

TEST_CASE("speed_perturb shifts a tone's frequency by the factor") {
  Waveform w;
  w.sample_rate_hz = 16000;
  w.samples.resize(16000);
  for (std::size_t n = 0; n < w.samples.size(); ++n) {
    w.samples[n] = 0.5 * std::sin(2.0 * M_PI * 440.0 * n / 16000.0);
  }
  const Waveform out = defake::SpeedPerturb(w, 1.1);

  defake::FrameConfig fc;
  fc.frame_len_sec = 0.032;
  fc.window = defake::WindowKind::kHann;
  const Eigen::MatrixXd spec = defake::Spectrogram(out, fc);
  const Eigen::RowVectorXd energy = spec.colwise().sum();
  Eigen::Index arg = 0;
  energy.maxCoeff(&arg);
  // 512-point FFT at 16 kHz: 31.25 Hz per bin; 440 * 1.1 = 484 Hz -> bin 15.5.
  CHECK(arg >= 15);
  CHECK(arg <= 16);
}

TEST_CASE("speed_perturb rejects factors outside (0.5, 2.0)") {
  const Waveform w = RandomWave(100, 73);
  for (double f : {0.5, 2.0, 0.1, -1.0}) {
    CHECK(CodeOf([&] { defake::SpeedPerturb(w, f); }) ==
          ErrorCode::kBadArgument);
  }
}

TEST_CASE("spec_augment zero widths and counts is the identity") {
  FeatureMatrix f;
  f.frames = Eigen::MatrixXd::Random(40, 20);
  const auto result = defake::SpecAugment(f, SpecAugmentParams{});
  CHECK(result.features.frames == f.frames);
  CHECK(result.time_masks.empty());
  CHECK(result.freq_masks.empty());
}

TEST_CASE("spec_augment a width-5 time mask leaves exactly 5 mean rows") {
  FeatureMatrix f;
  defake::Rng rng(303);
  f.frames.resize(100, 20);
  for (Eigen::Index t = 0; t < f.frames.rows(); ++t) {
    for (Eigen::Index j = 0; j < f.frames.cols(); ++j) {
      f.frames(t, j) = rng.Gaussian();
    }
  }

  SpecAugmentParams p;
  p.max_time_mask_width = 5;
  p.n_time_masks = 1;
  // Find a seed whose single drawn width is the maximum, 5.
  bool found = false;
  for (std::uint64_t seed = 0; seed < 64 && !found; ++seed) {
    p.seed = seed;
    const auto result = defake::SpecAugment(f, p);
    REQUIRE(result.time_masks.size() == 1);
    if (result.time_masks[0].width != 5) continue;
    found = true;

    int mean_rows = 0;
    for (Eigen::Index t = 0; t < result.features.frames.rows(); ++t) {
      bool all_mean = true;
      for (Eigen::Index j = 0; j < result.features.frames.cols(); ++j) {
        if (result.features.frames(t, j) != result.fill_value) {
          all_mean = false;
          break;
        }
      }
      if (all_mean) ++mean_rows;
    }
    CHECK(mean_rows == 5);
    CHECK(result.fill_value == f.frames.mean());
  }
  CHECK(found);
}

TEST_CASE("spec_augment masking never increases distance from the mean") {
  FeatureMatrix f;
  defake::Rng rng(304);
  f.frames.resize(60, 24);
  for (Eigen::Index t = 0; t < f.frames.rows(); ++t) {
    for (Eigen::Index j = 0; j < f.frames.cols(); ++j) {
      f.frames(t, j) = rng.Gaussian();
    }
  }
  const double mean = f.frames.mean();
  const double before = (f.frames.array() - mean).abs().sum();

  SpecAugmentParams p;
  p.max_time_mask_width = 10;
  p.n_time_masks = 2;
  p.max_freq_mask_width = 6;
  p.n_freq_masks = 2;
  for (std::uint64_t seed = 0; seed < 32; ++seed) {
    p.seed = seed;
    const auto result = defake::SpecAugment(f, p);
    const double after = (result.features.frames.array() - mean).abs().sum();
    CHECK(after <= before + 1e-12);
  }
}

TEST_CASE("spec_augment frequency masks fill whole columns") {
  FeatureMatrix f;
  f.frames = Eigen::MatrixXd::Random(30, 16);
  SpecAugmentParams p;
  p.max_freq_mask_width = 4;
  p.n_freq_masks = 1;
  bool found = false;
  for (std::uint64_t seed = 0; seed < 64 && !found; ++seed) {
    p.seed = seed;
    const auto result = defake::SpecAugment(f, p);
    REQUIRE(result.freq_masks.size() == 1);
    const auto& mask = result.freq_masks[0];
    if (mask.width == 0) continue;
    found = true;
    for (int j = mask.start; j < mask.start + mask.width; ++j) {
      for (Eigen::Index t = 0; t < result.features.frames.rows(); ++t) {
        CHECK(result.features.frames(t, j) == result.fill_value);
      }
    }
  }
  CHECK(found);
}

TEST_CASE("spec_augment is deterministic and validates its params") {
  FeatureMatrix f;
  f.frames = Eigen::MatrixXd::Random(50, 20);
  SpecAugmentParams p;
  p.max_time_mask_width = 8;
  p.n_time_masks = 2;
  p.seed = 99;
  const auto a = defake::SpecAugment(f, p);
  const auto b = defake::SpecAugment(f, p);
  CHECK(a.features.frames == b.features.frames);

  p.n_time_masks = -1;
  CHECK(CodeOf([&] { defake::SpecAugment(f, p); }) == ErrorCode::kBadArgument);
}

TEST_CASE("mulaw_codec zero in, zero out") {
  Waveform w;
  w.sample_rate_hz = 16000;
  w.samples.assign(400, 0.0);
  const Waveform out = defake::MulawCodec(w);
  CHECK(out.samples.size() == 400);
  CHECK(out.sample_rate_hz == 16000);
  for (double v : out.samples) CHECK(v == 0.0);
}

TEST_CASE("mulaw_codec 8-bit error obeys the companded-step bound") {
  // One quantization step in the companded domain is s = 2 / 2^bits (the
  // positive rail cell reconstructs a full step away; interior cells half).
  // The expander slope is at most ln(1+mu) * (1+mu) / mu, so the sample
  // domain error is bounded by s * ln(1+mu) * (1+mu) / mu.
  const double mu = 255.0;
  const int bits = 8;
  const double step = 2.0 / 256.0;
  const double slope = std::log1p(mu) * (1.0 + mu) / mu;
  const double bound = step * slope;              // ~0.0435
  const double interior_bound = 0.5 * step * slope;  // ~0.0218

  Waveform w;
  w.sample_rate_hz = 16000;
  w.samples.resize(100000);
  defake::Rng rng(505);
  for (double& v : w.samples) v = rng.Uniform(-1.0, 1.0);
  const Waveform out = defake::MulawCodec(w, mu, bits);

  double max_err = 0.0, max_interior_err = 0.0;
  const double rail = 1.0 - 2.0 * step;  // companded magnitude below the rail
  for (std::size_t i = 0; i < w.samples.size(); ++i) {
    const double err = std::abs(out.samples[i] - w.samples[i]);
    max_err = std::max(max_err, err);
    const double companded =
        std::log1p(mu * std::abs(w.samples[i])) / std::log1p(mu);
    if (companded < rail) max_interior_err = std::max(max_interior_err, err);
  }
  CHECK(max_err <= bound);
  CHECK(max_interior_err <= interior_bound);
}

TEST_CASE("mulaw_codec 16-bit round trip is fine") {
  Waveform w;
  w.sample_rate_hz = 16000;
  w.samples.resize(100000);
  defake::Rng rng(506);
  for (double& v : w.samples) v = rng.Uniform(-1.0, 1.0);
  const Waveform out = defake::MulawCodec(w, 255.0, 16);
  double max_err = 0.0;
  for (std::size_t i = 0; i < w.samples.size(); ++i) {
    max_err = std::max(max_err, std::abs(out.samples[i] - w.samples[i]));
  }
  CHECK(max_err < 1e-3);
}

TEST_CASE("mulaw_codec is idempotent and monotone") {
  Waveform w;
  w.sample_rate_hz = 16000;
  w.samples.resize(2048);
  for (std::size_t i = 0; i < w.samples.size(); ++i) {
    w.samples[i] = -1.0 + 2.0 * static_cast<double>(i) / 2047.0;
  }
  const Waveform once = defake::MulawCodec(w, 255.0, 8);
  const Waveform twice = defake::MulawCodec(once, 255.0, 8);
  CHECK(BitIdentical(once.samples, twice.samples));
  for (std::size_t i = 1; i < once.samples.size(); ++i) {
    CHECK(once.samples[i] >= once.samples[i - 1]);
  }
}

TEST_CASE("mulaw_codec rejects bad arguments") {
  const Waveform w = RandomWave(10, 81);
  CHECK(CodeOf([&] { defake::MulawCodec(w, 255.0, 1); }) ==
        ErrorCode::kBadArgument);
  CHECK(CodeOf([&] { defake::MulawCodec(w, 255.0, 17); }) ==
        ErrorCode::kBadArgument);
  CHECK(CodeOf([&] { defake::MulawCodec(w, 0.0, 8); }) ==
        ErrorCode::kBadArgument);
}

TEST_CASE("augmentations chain without error for valid params") {
  Waveform w = RandomWave(16000, 91, 0.2);
  const RawBoostParams p;
  w = defake::RawBoost(w, p, 3);
  w = defake::MulawCodec(w);
  const Waveform noise = RandomWave(4000, 92, 0.2);
  w = defake::MixAtSnr(w, noise, 15.0);
  w = defake::SpeedPerturb(w, 1.1);
  CHECK(w.samples.size() == 14545);
  for (double v : w.samples) CHECK(std::isfinite(v));
}

TEST_CASE("external codec hook pipes through a command") {
  Waveform grid = RandomWave(500, 95, 0.5);
  // Snap to the 16-bit grid first so the WAV round trip is exact.
  const Waveform w = defake::DecodeWav(defake::EncodeWav(grid));

  const Waveform out = defake::ExternalCodec(w, "cat");
  CHECK(out.sample_rate_hz == w.sample_rate_hz);
  CHECK(BitIdentical(out.samples, w.samples));

  CHECK(CodeOf([&] { defake::ExternalCodec(w, "false"); }) ==
        ErrorCode::kIoError);
  CHECK(CodeOf([&] { defake::ExternalCodec(w, "echo not-a-wav"); }) ==
        ErrorCode::kCorruptHeader);
}
