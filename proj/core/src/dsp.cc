// core/src/dsp.cc

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

#include "defake/dsp.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>

#include "defake/error.h"
#include "defake/util.h"

namespace defake {

namespace {

// FFTW plan creation and destruction are not thread safe; execution of
// distinct plans is.
std::mutex& FftwMutex() {
  static std::mutex mu;
  return mu;
}

// Real-to-complex FFT of each row of `frames` (row length nfft), writing
// power spectra (re^2 + im^2) into `power` (nfft/2 + 1 columns).
void PowerSpectra(const Eigen::MatrixXd& frames, Eigen::MatrixXd* power) {
  const int nfft = static_cast<int>(frames.cols());
  const int n_bins = nfft / 2 + 1;

  double* in = fftw_alloc_real(static_cast<std::size_t>(nfft));
  fftw_complex* out = fftw_alloc_complex(static_cast<std::size_t>(n_bins));
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(FftwMutex());
    plan = fftw_plan_dft_r2c_1d(nfft, in, out, FFTW_ESTIMATE);
  }

  power->resize(frames.rows(), n_bins);
  for (Eigen::Index t = 0; t < frames.rows(); ++t) {
    for (int i = 0; i < nfft; ++i) in[i] = frames(t, i);
    fftw_execute(plan);
    for (int k = 0; k < n_bins; ++k) {
      (*power)(t, k) = out[k][0] * out[k][0] + out[k][1] * out[k][1];
    }
  }

  {
    std::lock_guard<std::mutex> lock(FftwMutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);
}

double Sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = M_PI * x;
  return std::sin(px) / px;
}

// Modified Bessel function of the first kind, order zero; power series.
double BesselI0(double x) {
  const double half = x / 2.0;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 64; ++k) {
    term *= (half / k) * (half / k);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

int NextPow2(int n) {
  int p = 1;
  while (p < n) p *= 2;
  return p;
}

std::int64_t SamplesOf(double seconds, int rate_hz) {
  return std::llround(seconds * rate_hz);
}

std::vector<double> WindowCoefficients(WindowKind kind, std::int64_t flen) {
  std::vector<double> win(static_cast<std::size_t>(flen), 1.0);
  switch (kind) {
    case WindowKind::kRect:
      break;
    case WindowKind::kHamming:
      for (std::int64_t i = 0; i < flen; ++i) {
        win[static_cast<std::size_t>(i)] =
            0.54 - 0.46 * std::cos(2.0 * M_PI * i / (flen - 1));
      }
      break;
    case WindowKind::kHann:
      for (std::int64_t i = 0; i < flen; ++i) {
        win[static_cast<std::size_t>(i)] =
            0.5 - 0.5 * std::cos(2.0 * M_PI * i / (flen - 1));
      }
      break;
  }
  return win;
}

}  // namespace

Waveform ResampleStream(const Waveform& w, double time_step,
                        std::int64_t out_len, int filter_taps) {
  if (w.samples.empty()) {
    throw Error(ErrorCode::kEmptyInput, "cannot resample empty waveform");
  }
  if (!(time_step > 0.0) || !std::isfinite(time_step)) {
    throw Error(ErrorCode::kBadArgument, "time step must be positive");
  }
  if (filter_taps < 8) {
    throw Error(ErrorCode::kBadArgument, "resampler needs at least 8 taps");
  }
  if (out_len <= 0) {
    throw Error(ErrorCode::kBadArgument, "output length must be positive");
  }

  if (time_step == 1.0) {
    Waveform out = w;
    out.samples.resize(static_cast<std::size_t>(out_len), 0.0);
    return out;
  }

  // Anti-alias cutoff as a fraction of the input Nyquist rate: full band
  // when upsampling, 1/time_step when downsampling.  The windowed sinc
  // keeps filter_taps/2 zero crossings per side, so its span stretches as
  // the cutoff drops.
  const double cutoff = std::min(1.0, 1.0 / time_step);
  const double half_span = (filter_taps / 2.0) / cutoff;
  constexpr double kKaiserBeta = 8.6;
  const double i0_beta = BesselI0(kKaiserBeta);
  const std::int64_t n = static_cast<std::int64_t>(w.samples.size());

  Waveform out;
  out.sample_rate_hz = w.sample_rate_hz;
  out.samples.resize(static_cast<std::size_t>(out_len));

  for (std::int64_t m = 0; m < out_len; ++m) {
    const double center = static_cast<double>(m) * time_step;
    const std::int64_t k0 =
        std::max<std::int64_t>(0, static_cast<std::int64_t>(
                                      std::ceil(center - half_span)));
    const std::int64_t k1 = std::min<std::int64_t>(
        n - 1, static_cast<std::int64_t>(std::floor(center + half_span)));
    double acc = 0.0, weight = 0.0;
    for (std::int64_t k = k0; k <= k1; ++k) {
      const double t = center - static_cast<double>(k);
      const double u = t / half_span;
      // max() guards the square root against -1e-16 at the kernel edge.
      const double win =
          BesselI0(kKaiserBeta * std::sqrt(std::max(0.0, 1.0 - u * u))) /
          i0_beta;
      const double h = cutoff * Sinc(cutoff * t) * win;
      acc += w.samples[static_cast<std::size_t>(k)] * h;
      weight += h;
    }
    // Per-sample kernel normalization keeps DC gain exactly 1 and softens
    // the edge truncation.
    out.samples[static_cast<std::size_t>(m)] =
        weight != 0.0 ? acc / weight : 0.0;
  }

  for (double& x : out.samples) {
    if (x > 1.0) x = 1.0;
    if (x < -1.0) x = -1.0;
  }
  return out;
}

Waveform Resample(const Waveform& w, int target_rate_hz, int filter_taps) {
  if (target_rate_hz < 1000) {
    throw Error(ErrorCode::kBadArgument,
                "target rate below 1000 Hz is not supported");
  }
  if (target_rate_hz == w.sample_rate_hz) {
    return w;
  }
  const std::int64_t out_len = std::llround(
      static_cast<double>(w.samples.size()) * target_rate_hz /
      w.sample_rate_hz);
  const double time_step =
      static_cast<double>(w.sample_rate_hz) / target_rate_hz;
  Waveform out =
      ResampleStream(w, time_step, std::max<std::int64_t>(1, out_len),
                     filter_taps);
  out.sample_rate_hz = target_rate_hz;
  return out;
}

std::int64_t FrameCount(std::int64_t n_samples, std::int64_t frame_len,
                        std::int64_t frame_shift) {
  if (n_samples < frame_len) return 1;
  return 1 + (n_samples - frame_len) / frame_shift;
}

Eigen::MatrixXd Spectrogram(const Waveform& w, const FrameConfig& cfg) {
  if (w.samples.empty()) {
    throw Error(ErrorCode::kEmptyInput, "cannot analyze empty waveform");
  }
  const std::int64_t flen = SamplesOf(cfg.frame_len_sec, w.sample_rate_hz);
  const std::int64_t shift = SamplesOf(cfg.frame_shift_sec, w.sample_rate_hz);
  if (shift <= 0 || flen < shift) {
    throw Error(ErrorCode::kBadArgument,
                "need frame_len >= frame_shift > 0 at this sample rate");
  }
  if (flen < 2) {
    throw Error(ErrorCode::kBadArgument, "frame length under 2 samples");
  }

  const std::vector<double>* samples = &w.samples;
  std::vector<double> emphasized;
  if (cfg.pre_emphasis) {
    emphasized.resize(w.samples.size());
    emphasized[0] = w.samples[0];
    for (std::size_t i = 1; i < w.samples.size(); ++i) {
      emphasized[i] =
          w.samples[i] - cfg.pre_emphasis_coeff * w.samples[i - 1];
    }
    samples = &emphasized;
  }

  const std::int64_t n = static_cast<std::int64_t>(samples->size());
  const std::int64_t T = FrameCount(n, flen, shift);
  const int nfft = NextPow2(static_cast<int>(flen));

  const std::vector<double> win = WindowCoefficients(cfg.window, flen);
  Eigen::MatrixXd frames = Eigen::MatrixXd::Zero(T, nfft);
  for (std::int64_t t = 0; t < T; ++t) {
    const std::int64_t begin = t * shift;
    const std::int64_t avail = std::min(flen, n - begin);
    for (std::int64_t i = 0; i < avail; ++i) {
      frames(t, i) = (*samples)[static_cast<std::size_t>(begin + i)] *
                     win[static_cast<std::size_t>(i)];
    }
  }

  Eigen::MatrixXd power;
  PowerSpectra(frames, &power);
  return power;
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double MelToHz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

Eigen::MatrixXd FilterbankMatrix(FeatureKind kind, int n_filters, int nfft,
                                 int sample_rate_hz) {
  if (n_filters < 1) {
    throw Error(ErrorCode::kBadArgument, "need at least one filter");
  }
  const int n_bins = nfft / 2 + 1;
  const double nyquist = sample_rate_hz / 2.0;

  // n_filters + 2 edge points spanning [0, nyquist], equally spaced in the
  // warped domain (identity warp for the linear bank).
  std::vector<double> edges_hz(static_cast<std::size_t>(n_filters) + 2);
  for (int i = 0; i < n_filters + 2; ++i) {
    const double frac = static_cast<double>(i) / (n_filters + 1);
    if (kind == FeatureKind::kFbank) {
      edges_hz[static_cast<std::size_t>(i)] =
          MelToHz(frac * HzToMel(nyquist));
    } else {
      edges_hz[static_cast<std::size_t>(i)] = frac * nyquist;
    }
  }

  Eigen::MatrixXd bank = Eigen::MatrixXd::Zero(n_filters, n_bins);
  for (int j = 0; j < n_filters; ++j) {
    const double lo = edges_hz[static_cast<std::size_t>(j)];
    const double mid = edges_hz[static_cast<std::size_t>(j) + 1];
    const double hi = edges_hz[static_cast<std::size_t>(j) + 2];
    for (int k = 0; k < n_bins; ++k) {
      const double f =
          static_cast<double>(k) * sample_rate_hz / nfft;
      if (f > lo && f < mid) {
        bank(j, k) = (f - lo) / (mid - lo);
      } else if (f == mid) {
        bank(j, k) = 1.0;
      } else if (f > mid && f < hi) {
        bank(j, k) = (hi - f) / (hi - mid);
      }
    }
  }
  return bank;
}

FeatureMatrix CepstralFeatures(const Waveform& w, FeatureKind kind,
                               const CepstralConfig& cfg) {
  if (cfg.n_filters < cfg.n_ceps || cfg.n_ceps < 1) {
    throw Error(ErrorCode::kBadArgument,
                "need n_filters >= n_ceps >= 1");
  }
  const Eigen::MatrixXd power = Spectrogram(w, cfg.frame);
  const int nfft = static_cast<int>((power.cols() - 1) * 2);
  const Eigen::MatrixXd bank =
      FilterbankMatrix(kind, cfg.n_filters, nfft, w.sample_rate_hz);

  FeatureMatrix out;
  out.frame_shift_sec = cfg.frame.frame_shift_sec;
  out.frame_len_sec = cfg.frame.frame_len_sec;

  // Orthonormal DCT-II, n_ceps x n_filters (unused for Fbank).
  const int M = cfg.n_filters;
  Eigen::MatrixXd dct;
  if (kind == FeatureKind::kLfcc) {
    dct.resize(cfg.n_ceps, M);
    for (int k = 0; k < cfg.n_ceps; ++k) {
      const double scale = k == 0 ? std::sqrt(1.0 / M) : std::sqrt(2.0 / M);
      for (int j = 0; j < M; ++j) {
        dct(k, j) = scale * std::cos(M_PI * k * (2.0 * j + 1.0) / (2.0 * M));
      }
    }
  }

  // Row-at-a-time products keep each frame's features a function of that
  // frame only; a whole-matrix GEMM would let Eigen's blocking (and hence
  // the accumulation order) vary with the total frame count.
  const int D = kind == FeatureKind::kFbank ? cfg.n_filters : cfg.n_ceps;
  out.frames.resize(power.rows(), D);
  Eigen::VectorXd p_row(power.cols());
  for (Eigen::Index t = 0; t < power.rows(); ++t) {
    p_row = power.row(t).transpose();
    const Eigen::VectorXd log_e =
        ((bank * p_row).array() + cfg.log_floor).log();
    if (kind == FeatureKind::kFbank) {
      out.frames.row(t) = log_e.transpose();
    } else {
      out.frames.row(t) = (dct * log_e).transpose();
    }
  }
  out.feature_kind = kind == FeatureKind::kFbank ? "fbank" : "lfcc";
  return out;
}

namespace {

Eigen::MatrixXd RegressionDelta(const Eigen::MatrixXd& x, int window_width) {
  double denom = 0.0;
  for (int n = 1; n <= window_width; ++n) denom += 2.0 * n * n;
  const Eigen::Index T = x.rows();
  Eigen::MatrixXd d(T, x.cols());
  for (Eigen::Index t = 0; t < T; ++t) {
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(x.cols());
    for (int n = 1; n <= window_width; ++n) {
      const Eigen::Index fwd = std::min<Eigen::Index>(t + n, T - 1);
      const Eigen::Index bwd = std::max<Eigen::Index>(t - n, 0);
      acc += n * (x.row(fwd) - x.row(bwd));
    }
    d.row(t) = acc / denom;
  }
  return d;
}

}  // namespace

FeatureMatrix AddDeltas(const FeatureMatrix& f, int order, int window_width) {
  if (order < 1 || order > 2) {
    throw Error(ErrorCode::kBadArgument, "delta order must be 1 or 2");
  }
  if (window_width < 1) {
    throw Error(ErrorCode::kBadArgument, "delta window must be >= 1");
  }
  const Eigen::Index D = f.frames.cols();
  FeatureMatrix out;
  out.frame_shift_sec = f.frame_shift_sec;
  out.frame_len_sec = f.frame_len_sec;
  out.feature_kind = f.feature_kind + "+deltas";
  out.frames.resize(f.frames.rows(), D * (order + 1));
  out.frames.leftCols(D) = f.frames;

  const Eigen::MatrixXd d1 = RegressionDelta(f.frames, window_width);
  out.frames.middleCols(D, D) = d1;
  if (order == 2) {
    out.feature_kind = f.feature_kind + "+deltas2";
    out.frames.rightCols(D) = RegressionDelta(d1, window_width);
  }
  return out;
}

std::vector<double> FftConvolve(std::span<const double> a,
                                std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw Error(ErrorCode::kEmptyInput, "convolution of an empty sequence");
  }
  const std::size_t out_len = a.size() + b.size() - 1;
  int nfft = 1;
  while (static_cast<std::size_t>(nfft) < out_len) nfft *= 2;
  const int n_bins = nfft / 2 + 1;

  double* buf = fftw_alloc_real(static_cast<std::size_t>(nfft));
  fftw_complex* fa = fftw_alloc_complex(static_cast<std::size_t>(n_bins));
  fftw_complex* fb = fftw_alloc_complex(static_cast<std::size_t>(n_bins));
  fftw_plan fwd, inv;
  {
    std::lock_guard<std::mutex> lock(FftwMutex());
    fwd = fftw_plan_dft_r2c_1d(nfft, buf, fa, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(nfft, fa, buf, FFTW_ESTIMATE);
  }

  std::fill(buf, buf + nfft, 0.0);
  std::copy(a.begin(), a.end(), buf);
  fftw_execute(fwd);
  std::memcpy(fb, fa, sizeof(fftw_complex) * static_cast<std::size_t>(n_bins));

  std::fill(buf, buf + nfft, 0.0);
  std::copy(b.begin(), b.end(), buf);
  fftw_execute(fwd);

  const double scale = 1.0 / nfft;
  for (int k = 0; k < n_bins; ++k) {
    const double re = fa[k][0] * fb[k][0] - fa[k][1] * fb[k][1];
    const double im = fa[k][0] * fb[k][1] + fa[k][1] * fb[k][0];
    fa[k][0] = re * scale;
    fa[k][1] = im * scale;
  }
  fftw_execute(inv);

  std::vector<double> out(buf, buf + out_len);
  {
    std::lock_guard<std::mutex> lock(FftwMutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
  }
  fftw_free(buf);
  fftw_free(fa);
  fftw_free(fb);
  return out;
}

std::string SerializeFeatureMatrix(const std::string& utt_id,
                                   const FeatureMatrix& f) {
  std::string out = utt_id + " " + std::to_string(f.frames.rows()) + " " +
                    std::to_string(f.frames.cols()) + "\n";
  for (Eigen::Index t = 0; t < f.frames.rows(); ++t) {
    for (Eigen::Index j = 0; j < f.frames.cols(); ++j) {
      if (j > 0) out += ' ';
      out += FormatDouble(f.frames(t, j));
    }
    out += '\n';
  }
  return out;
}

}  // namespace defake
