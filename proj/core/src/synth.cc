// core/src/synth.cc

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

#include "defake/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "defake/error.h"
#include "defake/localize.h"
#include "defake/rng.h"
#include "defake/util.h"

namespace defake {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class UttClass { kFullBonafide, kFullFake, kPartialFake };

std::string UttId(int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "u%04d", i);
  return buf;
}

// Fills [i0, i1) with one recipe draw: one-pole shaped noise plus a small
// harmonic stack, and for the fake recipe a high narrowband tone.  Local
// time restarts at i0, so a splice leaves a phase discontinuity, just as a
// cut between two recordings would.
void FillSegment(Rng& rng, const SynthConfig& cfg, bool fake,
                 std::vector<double>* samples, std::int64_t i0,
                 std::int64_t i1) {
  const double pole = fake ? cfg.fake_noise_pole : cfg.bona_noise_pole;
  // Gains chosen so both shaped-noise recipes land near the same loudness
  // even though their tilts differ.
  const double noise_gain = fake ? 0.05 : 0.15;
  const double f0 = rng.Uniform(cfg.f0_lo_hz, cfg.f0_hi_hz);
  double phase[3];
  for (double& ph : phase) ph = rng.Uniform(0.0, kTwoPi);
  double tone_hz = 0.0;
  double tone_phase = 0.0;
  if (fake) {
    tone_hz = rng.Uniform(cfg.fake_tone_lo_hz, cfg.fake_tone_hi_hz);
    tone_phase = rng.Uniform(0.0, kTwoPi);
  }

  const double rate = cfg.sample_rate_hz;
  double state = 0.0;
  for (std::int64_t t = i0; t < i1; ++t) {
    const double local_sec = static_cast<double>(t - i0) / rate;
    state = (1.0 - pole) * (noise_gain * rng.Gaussian()) + pole * state;
    double v = state;
    for (int k = 0; k < 3; ++k) {
      v += 0.08 / (k + 1) *
           std::sin(kTwoPi * f0 * (k + 1) * local_sec + phase[k]);
    }
    if (fake) v += 0.12 * std::sin(kTwoPi * tone_hz * local_sec + tone_phase);
    (*samples)[static_cast<std::size_t>(t)] = v;
  }
}

struct GeneratedUtt {
  Waveform wave;
  UttSegments segments;
};

GeneratedUtt GenerateOne(const SynthConfig& cfg, UttClass cls,
                         std::uint64_t seed) {
  Rng rng(seed);
  const std::int64_t n = std::llround(
      cfg.sample_rate_hz * rng.Uniform(cfg.duration_lo_sec,
                                       cfg.duration_hi_sec));
  GeneratedUtt out;
  out.wave.sample_rate_hz = cfg.sample_rate_hz;
  out.wave.samples.assign(static_cast<std::size_t>(n), 0.0);
  const double rate = cfg.sample_rate_hz;

  // Sample-exact segment boundaries; [b_j, b_{j+1}) alternates recipes for
  // the partial class and is a single span otherwise.
  std::vector<std::int64_t> bounds = {0};
  bool first_fake = cls == UttClass::kFullFake;
  if (cls == UttClass::kPartialFake) {
    const auto n_splices =
        static_cast<int>(rng.UniformInt(cfg.splice_lo, cfg.splice_hi));
    first_fake = rng.UniformInt(0, 1) == 1;
    const double gap = static_cast<double>(n) / (n_splices + 1);
    for (int j = 1; j <= n_splices; ++j) {
      // Jitter below half a gap keeps the boundaries ordered with segments
      // no shorter than 0.8 gaps.
      bounds.push_back(std::llround(gap * j + rng.Uniform(-0.1, 0.1) * gap));
    }
  }
  bounds.push_back(n);

  bool fake = first_fake;
  for (std::size_t j = 0; j + 1 < bounds.size(); ++j) {
    FillSegment(rng, cfg, fake, &out.wave.samples, bounds[j], bounds[j + 1]);
    Segment seg;
    seg.start_sec = static_cast<double>(bounds[j]) / rate;
    seg.end_sec = static_cast<double>(bounds[j + 1]) / rate;
    seg.label = fake ? "spoof" : "bonafide";
    out.segments.segments.push_back(seg);
    fake = !fake;
  }
  out.segments.total_duration_sec = static_cast<double>(n) / rate;

  double peak = 0.0;
  for (const double s : out.wave.samples) peak = std::max(peak, std::abs(s));
  if (peak > 0.99) {
    const double scale = 0.9 / peak;
    for (double& s : out.wave.samples) s *= scale;
  }
  return out;
}

std::int64_t ParseIntField(std::string_view token, std::int64_t line_no) {
  std::int64_t value = 0;
  if (!ParseInt(token, &value)) {
    throw Error(ErrorCode::kMalformedLine,
                "expected an integer, got \"" + std::string(token) + "\"", "",
                line_no);
  }
  return value;
}

double ParseDoubleField(std::string_view token, std::int64_t line_no) {
  double value = 0.0;
  if (!ParseDouble(token, &value)) {
    throw Error(ErrorCode::kMalformedLine,
                "expected a number, got \"" + std::string(token) + "\"", "",
                line_no);
  }
  return value;
}

const char* WindowName(WindowKind w) {
  switch (w) {
    case WindowKind::kHamming:
      return "hamming";
    case WindowKind::kHann:
      return "hann";
    case WindowKind::kRect:
      return "rect";
  }
  throw Error(ErrorCode::kBadArgument, "unknown window kind");
}

WindowKind WindowFromName(std::string_view name, std::int64_t line_no) {
  if (name == "hamming") return WindowKind::kHamming;
  if (name == "hann") return WindowKind::kHann;
  if (name == "rect") return WindowKind::kRect;
  throw Error(ErrorCode::kMalformedLine,
              "unknown window \"" + std::string(name) + "\"", "", line_no);
}

}  // namespace

void SynthConfig::Validate() const {
  if (n_utterances < 1) {
    throw Error(ErrorCode::kBadArgument, "need at least one utterance");
  }
  if (sample_rate_hz < 1) {
    throw Error(ErrorCode::kBadArgument, "sample rate must be positive");
  }
  if (!std::isfinite(duration_lo_sec) || !std::isfinite(duration_hi_sec) ||
      duration_lo_sec <= 0.0 || duration_hi_sec < duration_lo_sec) {
    throw Error(ErrorCode::kBadArgument,
                "duration range must satisfy 0 < lo <= hi");
  }
  const double fracs[] = {frac_bonafide, frac_fake, frac_partial};
  double sum = 0.0;
  for (const double f : fracs) {
    if (!std::isfinite(f) || f < 0.0) {
      throw Error(ErrorCode::kBadArgument,
                  "class fractions must be nonnegative");
    }
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::kBadArgument,
                "class fractions must sum to 1, got " + FormatDouble(sum));
  }
  for (const double p : {bona_noise_pole, fake_noise_pole}) {
    if (!(p >= 0.0) || !(p < 1.0)) {
      throw Error(ErrorCode::kBadArgument,
                  "noise poles must lie in [0, 1)");
    }
  }
  const double nyquist = sample_rate_hz / 2.0;
  if (!(f0_lo_hz > 0.0) || f0_hi_hz < f0_lo_hz || 3.0 * f0_hi_hz >= nyquist) {
    throw Error(ErrorCode::kBadArgument,
                "harmonic range must fit below Nyquist with 3 partials");
  }
  if (!(fake_tone_lo_hz > 0.0) || fake_tone_hi_hz < fake_tone_lo_hz ||
      fake_tone_hi_hz >= nyquist) {
    throw Error(ErrorCode::kBadArgument,
                "tone range must fit below Nyquist");
  }
  if (splice_lo < 1 || splice_hi < splice_lo) {
    throw Error(ErrorCode::kBadArgument,
                "splice range must satisfy 1 <= lo <= hi");
  }
}

SynthCorpus GenerateCorpus(const SynthConfig& cfg, int jobs) {
  cfg.Validate();
  const int n = cfg.n_utterances;

  // Exact class counts from the fractions, then a seeded shuffle so each
  // stretch of the index range carries the full mixture and positional
  // splits stay representative.
  auto n_bona = static_cast<int>(std::llround(cfg.frac_bonafide * n));
  n_bona = std::min(n_bona, n);
  auto n_fake = static_cast<int>(std::llround(cfg.frac_fake * n));
  n_fake = std::min(n_fake, n - n_bona);
  std::vector<UttClass> classes;
  classes.insert(classes.end(), n_bona, UttClass::kFullBonafide);
  classes.insert(classes.end(), n_fake, UttClass::kFullFake);
  classes.insert(classes.end(), n - n_bona - n_fake,
                 UttClass::kPartialFake);
  Rng shuffle_rng(DeriveSeed(cfg.seed, "class-assignment"));
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(shuffle_rng.UniformInt(0, i));
    std::swap(classes[i], classes[j]);
  }

  SynthCorpus corpus;
  corpus.utt_order.reserve(n);
  for (int i = 0; i < n; ++i) corpus.utt_order.push_back(UttId(i));

  std::vector<GeneratedUtt> generated(n);
  ParallelFor(n, jobs, [&](std::int64_t i) {
    generated[i] = GenerateOne(
        cfg, classes[i], DeriveSeed(cfg.seed, corpus.utt_order[i]));
  });

  corpus.segments.vocab = {"bonafide", "spoof"};
  for (int i = 0; i < n; ++i) {
    const std::string& id = corpus.utt_order[i];
    GeneratedUtt& g = generated[i];
    bool any_spoof = false;
    for (const Segment& seg : g.segments.segments) {
      any_spoof = any_spoof || seg.label == "spoof";
    }
    corpus.key.index[id] = corpus.key.entries.size();
    corpus.key.entries.push_back(
        {id, any_spoof ? ClassLabel::kSpoof : ClassLabel::kBonafide});
    corpus.segments.utt_order.push_back(id);
    corpus.segments.utts[id] = std::move(g.segments);
    corpus.waves[id] = std::move(g.wave);
  }
  return corpus;
}

CorpusSplit SplitCorpus(const std::vector<std::string>& utt_order) {
  if (utt_order.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no utterances to split");
  }
  const auto n = static_cast<std::int64_t>(utt_order.size());
  const std::int64_t n_train = n * 6 / 10;
  const std::int64_t n_dev = n * 2 / 10;
  CorpusSplit split;
  for (std::int64_t i = 0; i < n; ++i) {
    const std::string& id = utt_order[static_cast<std::size_t>(i)];
    if (i < n_train) {
      split.train.push_back(id);
    } else if (i < n_train + n_dev) {
      split.dev.push_back(id);
    } else {
      split.eval.push_back(id);
    }
  }
  return split;
}

ToyDetector TrainToyDetector(const SynthCorpus& corpus,
                             const std::vector<std::string>& train_utts,
                             const CepstralConfig& feature_cfg,
                             TrainReport* report) {
  if (train_utts.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no training utterances");
  }
  const double frame_rate_sec = feature_cfg.frame.frame_shift_sec;
  const FrameLabelSet frame_labels =
      ExpandFrameLabels(corpus.segments, frame_rate_sec, 0.0);

  std::vector<FeatureMatrix> features;
  features.reserve(train_utts.size());
  std::int64_t n_rows = 0;
  int dim = 0;
  for (const std::string& utt : train_utts) {
    const auto wave_it = corpus.waves.find(utt);
    if (wave_it == corpus.waves.end() ||
        frame_labels.utts.find(utt) == frame_labels.utts.end()) {
      throw Error(ErrorCode::kMissingInKey, "utterance not in the corpus",
                  utt);
    }
    features.push_back(
        CepstralFeatures(wave_it->second, FeatureKind::kLfcc, feature_cfg));
    dim = static_cast<int>(features.back().frames.cols());
    // The analysis framing stops at the last full window, so it can run a
    // couple of frames short of the label tiling; extra labels are dropped.
    n_rows += std::min<std::int64_t>(
        features.back().frames.rows(),
        static_cast<std::int64_t>(frame_labels.utts.at(utt).size()));
  }

  Eigen::MatrixXd x(n_rows, dim);
  std::vector<ClassLabel> y;
  y.reserve(static_cast<std::size_t>(n_rows));
  std::int64_t row = 0;
  for (std::size_t u = 0; u < train_utts.size(); ++u) {
    const std::vector<ClassLabel>& labels =
        frame_labels.utts.at(train_utts[u]);
    const Eigen::MatrixXd& f = features[u].frames;
    const auto n_use = std::min<std::int64_t>(
        f.rows(), static_cast<std::int64_t>(labels.size()));
    for (std::int64_t t = 0; t < n_use; ++t) {
      x.row(row++) = f.row(t);
      y.push_back(labels[static_cast<std::size_t>(t)]);
    }
  }

  ToyDetector d;
  d.features = feature_cfg;
  d.sample_rate_hz =
      corpus.waves.at(train_utts.front()).sample_rate_hz;
  d.model = TrainAffine(x, y, 0.5, TrainConfig{}, report);
  return d;
}

std::vector<double> ScoreFrames(const ToyDetector& d, const Waveform& w) {
  if (w.sample_rate_hz != d.sample_rate_hz) {
    throw Error(ErrorCode::kSampleRateMismatch,
                "detector trained at " + std::to_string(d.sample_rate_hz) +
                    " Hz, waveform is " + std::to_string(w.sample_rate_hz) +
                    " Hz");
  }
  const FeatureMatrix f = CepstralFeatures(w, FeatureKind::kLfcc, d.features);
  return ApplyAffine(d.model, f.frames);
}

double ScoreUtterance(const ToyDetector& d, const Waveform& w) {
  const std::vector<double> frames = ScoreFrames(d, w);
  double sum = 0.0;
  for (const double s : frames) sum += s;
  return sum / static_cast<double>(frames.size());
}

std::vector<double> FrameScoresAtResolution(const ToyDetector& d,
                                            const Waveform& w,
                                            double resolution_sec) {
  if (!std::isfinite(resolution_sec) || resolution_sec <= 0.0) {
    throw Error(ErrorCode::kBadArgument,
                "frame resolution must be positive, got " +
                    FormatDouble(resolution_sec));
  }
  const std::vector<double> native = ScoreFrames(d, w);
  const double shift = d.features.frame.frame_shift_sec;
  const double half_win = d.features.frame.frame_len_sec / 2.0;
  const auto n_out = static_cast<std::int64_t>(
      std::ceil(w.DurationSec() / resolution_sec - 1e-9));
  const auto last = static_cast<std::int64_t>(native.size()) - 1;

  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_out));
  for (std::int64_t k = 0; k < n_out; ++k) {
    const double center = (static_cast<double>(k) + 0.5) * resolution_sec;
    // Analysis frame j is centered at j * shift + half_win.
    const std::int64_t j = std::clamp<std::int64_t>(
        std::llround((center - half_win) / shift), 0, last);
    out.push_back(native[static_cast<std::size_t>(j)]);
  }
  return out;
}

std::string SerializeToyDetector(const ToyDetector& d) {
  std::string out;
  out += "sample_rate " + std::to_string(d.sample_rate_hz) + "\n";
  out += "frame_len " + FormatDouble(d.features.frame.frame_len_sec) + "\n";
  out +=
      "frame_shift " + FormatDouble(d.features.frame.frame_shift_sec) + "\n";
  out += "window " + std::string(WindowName(d.features.frame.window)) + "\n";
  out += "pre_emphasis " +
         std::string(d.features.frame.pre_emphasis ? "1" : "0") + "\n";
  out += "pre_emphasis_coeff " +
         FormatDouble(d.features.frame.pre_emphasis_coeff) + "\n";
  out += "n_filters " + std::to_string(d.features.n_filters) + "\n";
  out += "n_ceps " + std::to_string(d.features.n_ceps) + "\n";
  out += "log_floor " + FormatDouble(d.features.log_floor) + "\n";
  out += "weights";
  for (const double w : d.model.weights) out += " " + FormatDouble(w);
  out += "\n";
  out += "bias " + FormatDouble(d.model.bias) + "\n";
  out += "prior " + FormatDouble(d.model.trained_prior) + "\n";
  return out;
}

ToyDetector ParseToyDetector(std::string_view text) {
  ToyDetector d;
  bool seen[12] = {};
  enum Field {
    kRate,
    kFrameLen,
    kFrameShift,
    kWindow,
    kPreEmph,
    kPreEmphCoeff,
    kNFilters,
    kNCeps,
    kLogFloor,
    kWeights,
    kBias,
    kPrior,
  };
  const char* names[12] = {
      "sample_rate",  "frame_len", "frame_shift", "window",
      "pre_emphasis", "pre_emphasis_coeff", "n_filters", "n_ceps",
      "log_floor",    "weights",   "bias",        "prior",
  };

  ForEachLine(text, [&](std::int64_t line_no, std::string_view line) {
    const std::vector<std::string_view> fields = SplitFields(line);
    if (fields.empty()) return;
    const std::string_view keyword = fields[0];
    int field = -1;
    for (int i = 0; i < 12; ++i) {
      if (keyword == names[i]) field = i;
    }
    if (field < 0) {
      throw Error(ErrorCode::kMalformedLine,
                  "unknown keyword \"" + std::string(keyword) + "\"", "",
                  line_no);
    }
    if (seen[field]) {
      throw Error(ErrorCode::kMalformedLine,
                  "duplicate \"" + std::string(keyword) + "\"", "", line_no);
    }
    seen[field] = true;
    if (field == kWeights) {
      if (fields.size() < 2) {
        throw Error(ErrorCode::kMalformedLine, "weights line is empty", "",
                    line_no);
      }
      for (std::size_t i = 1; i < fields.size(); ++i) {
        d.model.weights.push_back(ParseDoubleField(fields[i], line_no));
      }
      return;
    }
    if (fields.size() != 2) {
      throw Error(ErrorCode::kMalformedLine,
                  "expected \"" + std::string(keyword) + " <value>\"", "",
                  line_no);
    }
    const std::string_view value = fields[1];
    switch (field) {
      case kRate:
        d.sample_rate_hz = static_cast<int>(ParseIntField(value, line_no));
        break;
      case kFrameLen:
        d.features.frame.frame_len_sec = ParseDoubleField(value, line_no);
        break;
      case kFrameShift:
        d.features.frame.frame_shift_sec = ParseDoubleField(value, line_no);
        break;
      case kWindow:
        d.features.frame.window = WindowFromName(value, line_no);
        break;
      case kPreEmph:
        d.features.frame.pre_emphasis = ParseIntField(value, line_no) != 0;
        break;
      case kPreEmphCoeff:
        d.features.frame.pre_emphasis_coeff =
            ParseDoubleField(value, line_no);
        break;
      case kNFilters:
        d.features.n_filters = static_cast<int>(ParseIntField(value, line_no));
        break;
      case kNCeps:
        d.features.n_ceps = static_cast<int>(ParseIntField(value, line_no));
        break;
      case kLogFloor:
        d.features.log_floor = ParseDoubleField(value, line_no);
        break;
      case kBias:
        d.model.bias = ParseDoubleField(value, line_no);
        break;
      case kPrior:
        d.model.trained_prior = ParseDoubleField(value, line_no);
        break;
      default:
        break;
    }
  });

  for (int i = 0; i < 12; ++i) {
    if (!seen[i]) {
      throw Error(ErrorCode::kEmptyInput,
                  "model file is missing \"" + std::string(names[i]) + "\"");
    }
  }
  if (d.sample_rate_hz < 1 || d.features.n_filters < 1 ||
      d.features.n_ceps < 1 ||
      !(d.features.frame.frame_len_sec > 0.0) ||
      !(d.features.frame.frame_shift_sec > 0.0)) {
    throw Error(ErrorCode::kBadArgument, "model file has degenerate values");
  }
  for (const double w : d.model.weights) {
    if (!std::isfinite(w)) {
      throw Error(ErrorCode::kNonFiniteScore, "non-finite model weight");
    }
  }
  if (!std::isfinite(d.model.bias) ||
      !std::isfinite(d.model.trained_prior) || d.model.trained_prior <= 0.0 ||
      d.model.trained_prior >= 1.0) {
    throw Error(ErrorCode::kBadArgument, "model file has a bad bias or prior");
  }
  return d;
}

}  // namespace defake
