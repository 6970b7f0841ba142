// tests/synth_test.cc

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

#include "defake/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include <doctest.h>

#include "defake/calib.h"
#include "defake/corpus.h"
#include "defake/error.h"
#include "defake/localize.h"
#include "defake/metrics.h"
#include "defake/rng.h"

namespace {

defake::ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const defake::Error& e) {
    return e.code();
  }
  FAIL("expected a defake::Error");
  return defake::ErrorCode::kEmptyInput;
}

bool BitIdentical(const defake::Waveform& a, const defake::Waveform& b) {
  if (a.sample_rate_hz != b.sample_rate_hz ||
      a.samples.size() != b.samples.size()) {
    return false;
  }
  return a.samples.empty() ||
         std::memcmp(a.samples.data(), b.samples.data(),
                     a.samples.size() * sizeof(double)) == 0;
}

const defake::SynthCorpus& DefaultCorpus() {
  static const defake::SynthCorpus corpus =
      defake::GenerateCorpus(defake::SynthConfig{}, 4);
  return corpus;
}

const defake::CorpusSplit& DefaultSplit() {
  static const defake::CorpusSplit split =
      defake::SplitCorpus(DefaultCorpus().utt_order);
  return split;
}

const defake::ToyDetector& DefaultDetector() {
  static const defake::ToyDetector detector = defake::TrainToyDetector(
      DefaultCorpus(), DefaultSplit().train, defake::CepstralConfig{});
  return detector;
}

// Frame scores pooled over the listed utterances and split by expanded
// frame ground truth, reduced to an equal error rate.
double FrameEer(const defake::ToyDetector& d,
                const defake::SynthCorpus& corpus,
                const std::vector<std::string>& utts) {
  const defake::FrameLabelSet labels = defake::ExpandFrameLabels(
      corpus.segments, d.FrameResolutionSec(), 0.0);
  std::vector<double> bona;
  std::vector<double> spoof;
  for (const std::string& utt : utts) {
    const std::vector<double> scores =
        defake::ScoreFrames(d, corpus.waves.at(utt));
    const std::vector<defake::ClassLabel>& l = labels.utts.at(utt);
    const std::size_t n = std::min(scores.size(), l.size());
    for (std::size_t i = 0; i < n; ++i) {
      (l[i] == defake::ClassLabel::kSpoof ? spoof : bona)
          .push_back(scores[i]);
    }
  }
  return defake::ComputeEer(bona, spoof).eer;
}

TEST_CASE("config validation") {
  defake::SynthConfig cfg;
  cfg.frac_partial = 0.2;  // sums to 0.9
  CHECK(CodeOf([&] { cfg.Validate(); }) == defake::ErrorCode::kBadArgument);

  cfg = defake::SynthConfig{};
  cfg.duration_hi_sec = 1.0;  // below lo
  CHECK(CodeOf([&] { cfg.Validate(); }) == defake::ErrorCode::kBadArgument);

  cfg = defake::SynthConfig{};
  cfg.splice_lo = 0;
  CHECK(CodeOf([&] { cfg.Validate(); }) == defake::ErrorCode::kBadArgument);

  cfg = defake::SynthConfig{};
  cfg.n_utterances = 0;
  CHECK(CodeOf([&] { cfg.Validate(); }) == defake::ErrorCode::kBadArgument);

  cfg = defake::SynthConfig{};
  cfg.fake_tone_hi_hz = 9000.0;  // above Nyquist at 16 kHz
  CHECK(CodeOf([&] { cfg.Validate(); }) == defake::ErrorCode::kBadArgument);
}

TEST_CASE("generation is deterministic under the seed and the job count") {
  defake::SynthConfig cfg;
  cfg.n_utterances = 24;
  cfg.seed = 7;
  const defake::SynthCorpus a = defake::GenerateCorpus(cfg, 1);
  const defake::SynthCorpus b = defake::GenerateCorpus(cfg, 4);
  const defake::SynthCorpus c = defake::GenerateCorpus(cfg, 1);

  REQUIRE(a.utt_order == b.utt_order);
  REQUIRE(a.utt_order == c.utt_order);
  for (const std::string& utt : a.utt_order) {
    CHECK(BitIdentical(a.waves.at(utt), b.waves.at(utt)));
    CHECK(BitIdentical(a.waves.at(utt), c.waves.at(utt)));
  }
  CHECK(defake::SerializeTrialKey(a.key) == defake::SerializeTrialKey(b.key));
  CHECK(defake::SerializeSegmentAnnotations(a.segments) ==
        defake::SerializeSegmentAnnotations(b.segments));

  defake::SynthConfig other = cfg;
  other.seed = 8;
  const defake::SynthCorpus d = defake::GenerateCorpus(other, 1);
  CHECK_FALSE(BitIdentical(a.waves.at(a.utt_order[0]),
                           d.waves.at(d.utt_order[0])));
}

TEST_CASE("class fractions turn into exact counts") {
  const defake::SynthCorpus& corpus = DefaultCorpus();
  int n_single_bona = 0;
  int n_single_spoof = 0;
  int n_multi = 0;
  for (const std::string& utt : corpus.utt_order) {
    const defake::UttSegments& segs = corpus.segments.SegmentsOf(utt);
    if (segs.segments.size() == 1) {
      (segs.segments[0].label == "spoof" ? n_single_spoof : n_single_bona)++;
    } else {
      ++n_multi;
    }
  }
  CHECK(n_single_bona == 80);   // 0.4 * 200
  CHECK(n_single_spoof == 60);  // 0.3 * 200
  CHECK(n_multi == 60);
}

TEST_CASE("no partial fraction means one segment per utterance") {
  defake::SynthConfig cfg;
  cfg.n_utterances = 20;
  cfg.frac_bonafide = 0.5;
  cfg.frac_fake = 0.5;
  cfg.frac_partial = 0.0;
  const defake::SynthCorpus corpus = defake::GenerateCorpus(cfg, 2);
  for (const std::string& utt : corpus.utt_order) {
    CHECK(corpus.segments.SegmentsOf(utt).segments.size() == 1);
  }
}

TEST_CASE("partial utterances alternate labels and are keyed spoof") {
  defake::SynthConfig cfg;
  cfg.n_utterances = 30;
  cfg.frac_bonafide = 0.0;
  cfg.frac_fake = 0.0;
  cfg.frac_partial = 1.0;
  cfg.seed = 3;
  const defake::SynthCorpus corpus = defake::GenerateCorpus(cfg, 2);
  for (const std::string& utt : corpus.utt_order) {
    const defake::UttSegments& segs = corpus.segments.SegmentsOf(utt);
    const std::size_t n_segs = segs.segments.size();
    CHECK(n_segs >= static_cast<std::size_t>(cfg.splice_lo) + 1);
    CHECK(n_segs <= static_cast<std::size_t>(cfg.splice_hi) + 1);
    CHECK(segs.segments.front().start_sec == 0.0);
    CHECK(segs.segments.back().end_sec == segs.total_duration_sec);
    for (std::size_t j = 0; j < n_segs; ++j) {
      const defake::Segment& seg = segs.segments[j];
      CHECK(seg.end_sec - seg.start_sec > 0.3);
      if (j > 0) {
        CHECK(seg.start_sec == segs.segments[j - 1].end_sec);
        CHECK(seg.label != segs.segments[j - 1].label);
      }
    }
    CHECK(corpus.key.LabelOf(utt) == defake::ClassLabel::kSpoof);
  }
}

TEST_CASE("key label is spoof exactly when a spoof segment exists") {
  const defake::SynthCorpus& corpus = DefaultCorpus();
  for (const std::string& utt : corpus.utt_order) {
    bool any_spoof = false;
    for (const defake::Segment& seg :
         corpus.segments.SegmentsOf(utt).segments) {
      any_spoof = any_spoof || seg.label == "spoof";
    }
    CHECK((corpus.key.LabelOf(utt) == defake::ClassLabel::kSpoof) ==
          any_spoof);
  }
}

TEST_CASE("annotations survive a serialize-parse round trip") {
  const defake::SynthCorpus& corpus = DefaultCorpus();
  const std::string text =
      defake::SerializeSegmentAnnotations(corpus.segments);
  const defake::SegmentAnnotationSet parsed =
      defake::ParseSegmentAnnotations(text);
  CHECK(parsed.utt_order == corpus.segments.utt_order);
  for (const std::string& utt : parsed.utt_order) {
    const auto& a = parsed.SegmentsOf(utt);
    const auto& b = corpus.segments.SegmentsOf(utt);
    REQUIRE(a.segments.size() == b.segments.size());
    CHECK(a.total_duration_sec == b.total_duration_sec);
    for (std::size_t j = 0; j < a.segments.size(); ++j) {
      CHECK(a.segments[j].start_sec == b.segments[j].start_sec);
      CHECK(a.segments[j].end_sec == b.segments[j].end_sec);
      CHECK(a.segments[j].label == b.segments[j].label);
    }
  }
}

TEST_CASE("durations respect the configured range") {
  const defake::SynthCorpus& corpus = DefaultCorpus();
  for (const std::string& utt : corpus.utt_order) {
    const double dur = corpus.waves.at(utt).DurationSec();
    CHECK(dur >= 2.0 - 1e-4);
    CHECK(dur <= 4.0 + 1e-4);
    CHECK(corpus.segments.SegmentsOf(utt).total_duration_sec ==
          doctest::Approx(dur).epsilon(1e-15));
  }
}

TEST_CASE("split is 60/20/20 by position") {
  const defake::CorpusSplit& split = DefaultSplit();
  CHECK(split.train.size() == 120);
  CHECK(split.dev.size() == 40);
  CHECK(split.eval.size() == 40);
  // Disjoint, ordered, and exhaustive.
  std::vector<std::string> all = split.train;
  all.insert(all.end(), split.dev.begin(), split.dev.end());
  all.insert(all.end(), split.eval.begin(), split.eval.end());
  CHECK(all == DefaultCorpus().utt_order);

  const defake::CorpusSplit odd =
      defake::SplitCorpus({"a", "b", "c", "d", "e", "f", "g"});
  CHECK(odd.train.size() == 4);
  CHECK(odd.dev.size() == 1);
  CHECK(odd.eval.size() == 2);

  CHECK(CodeOf([] { defake::SplitCorpus({}); }) ==
        defake::ErrorCode::kEmptyInput);
}

TEST_CASE("each split sees every class") {
  const defake::SynthCorpus& corpus = DefaultCorpus();
  const defake::CorpusSplit& split = DefaultSplit();
  for (const std::vector<std::string>* part :
       {&split.train, &split.dev, &split.eval}) {
    int n_bona = 0;
    int n_spoof = 0;
    for (const std::string& utt : *part) {
      (corpus.key.LabelOf(utt) == defake::ClassLabel::kSpoof ? n_spoof
                                                             : n_bona)++;
    }
    CHECK(n_bona > 0);
    CHECK(n_spoof > 0);
  }
}

TEST_CASE("trained frame model separates the classes") {
  const double eer =
      FrameEer(DefaultDetector(), DefaultCorpus(), DefaultSplit().train);
  CHECK(eer < 0.10);
}

TEST_CASE("label-shuffled training lands at chance level") {
  // Rebuild the training matrix by hand, shuffle the labels, and train the
  // same affine model; the fit must not find structure that is not there.
  const defake::SynthCorpus& corpus = DefaultCorpus();
  const defake::CepstralConfig fcfg;
  const defake::FrameLabelSet labels = defake::ExpandFrameLabels(
      corpus.segments, fcfg.frame.frame_shift_sec, 0.0);

  std::vector<std::vector<double>> rows;
  std::vector<defake::ClassLabel> y;
  for (const std::string& utt : DefaultSplit().train) {
    const defake::FeatureMatrix f = defake::CepstralFeatures(
        corpus.waves.at(utt), defake::FeatureKind::kLfcc, fcfg);
    const std::vector<defake::ClassLabel>& l = labels.utts.at(utt);
    const auto n = std::min<std::int64_t>(
        f.frames.rows(), static_cast<std::int64_t>(l.size()));
    for (std::int64_t t = 0; t < n; ++t) {
      rows.emplace_back(f.frames.row(t).begin(), f.frames.row(t).end());
      y.push_back(l[static_cast<std::size_t>(t)]);
    }
  }
  defake::Rng rng(1234);
  for (std::size_t i = y.size() - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(
        rng.UniformInt(0, static_cast<std::int64_t>(i)));
    std::swap(y[i], y[j]);
  }
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t jj = 0; jj < rows[i].size(); ++jj) {
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(jj)) =
          rows[i][jj];
    }
  }
  const defake::AffineCalibrator model = defake::TrainAffine(x, y, 0.5);

  std::vector<double> bona;
  std::vector<double> spoof;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double s = defake::ApplyAffine(
        model, std::span<const double>(rows[i].data(), rows[i].size()));
    (y[i] == defake::ClassLabel::kSpoof ? spoof : bona).push_back(s);
  }
  const double eer = defake::ComputeEer(bona, spoof).eer;
  CHECK(eer > 0.45);
  CHECK(eer < 0.55);
}

TEST_CASE("retraining reproduces the weights") {
  const defake::ToyDetector again = defake::TrainToyDetector(
      DefaultCorpus(), DefaultSplit().train, defake::CepstralConfig{});
  const defake::ToyDetector& first = DefaultDetector();
  REQUIRE(again.model.weights.size() == first.model.weights.size());
  for (std::size_t i = 0; i < again.model.weights.size(); ++i) {
    CHECK(std::abs(again.model.weights[i] - first.model.weights[i]) <=
          1e-12);
  }
  CHECK(std::abs(again.model.bias - first.model.bias) <= 1e-12);
}

TEST_CASE("training validates its inputs") {
  const defake::SynthCorpus& corpus = DefaultCorpus();
  CHECK(CodeOf([&] {
          defake::TrainToyDetector(corpus, {}, defake::CepstralConfig{});
        }) == defake::ErrorCode::kEmptyInput);
  CHECK(CodeOf([&] {
          defake::TrainToyDetector(corpus, {"nope"},
                                   defake::CepstralConfig{});
        }) == defake::ErrorCode::kMissingInKey);

  // A corpus without spoofed material has single-class frame labels.
  defake::SynthConfig cfg;
  cfg.n_utterances = 4;
  cfg.frac_bonafide = 1.0;
  cfg.frac_fake = 0.0;
  cfg.frac_partial = 0.0;
  const defake::SynthCorpus pure = defake::GenerateCorpus(cfg, 1);
  CHECK(CodeOf([&] {
          defake::TrainToyDetector(pure, pure.utt_order,
                                   defake::CepstralConfig{});
        }) == defake::ErrorCode::kEmptyClass);
}

TEST_CASE("constant signal scores one value; pooling is the exact mean") {
  const defake::ToyDetector& d = DefaultDetector();
  defake::Waveform dc;
  dc.sample_rate_hz = 16000;
  dc.samples.assign(16000, 0.25);

  const std::vector<double> frames = defake::ScoreFrames(d, dc);
  REQUIRE(!frames.empty());
  for (const double s : frames) CHECK(s == frames[0]);

  double sum = 0.0;
  for (const double s : frames) sum += s;
  const double mean = sum / static_cast<double>(frames.size());
  CHECK(defake::ScoreUtterance(d, dc) == mean);
  CHECK(defake::ScoreUtterance(d, dc) ==
        doctest::Approx(frames[0]).epsilon(1e-12));
}

TEST_CASE("pooled score of a concatenation sits between the parts") {
  const defake::SynthCorpus& corpus = DefaultCorpus();
  const defake::ToyDetector& d = DefaultDetector();
  // One clean and one fully fake utterance, far apart in score.
  std::string bona_utt;
  std::string fake_utt;
  for (const std::string& utt : corpus.utt_order) {
    const auto& segs = corpus.segments.SegmentsOf(utt).segments;
    if (segs.size() != 1) continue;
    if (segs[0].label == "bonafide" && bona_utt.empty()) bona_utt = utt;
    if (segs[0].label == "spoof" && fake_utt.empty()) fake_utt = utt;
  }
  REQUIRE(!bona_utt.empty());
  REQUIRE(!fake_utt.empty());

  const defake::Waveform& a = corpus.waves.at(bona_utt);
  const defake::Waveform& b = corpus.waves.at(fake_utt);
  defake::Waveform joined;
  joined.sample_rate_hz = a.sample_rate_hz;
  joined.samples = a.samples;
  joined.samples.insert(joined.samples.end(), b.samples.begin(),
                        b.samples.end());

  const double sa = defake::ScoreUtterance(d, a);
  const double sb = defake::ScoreUtterance(d, b);
  const double sj = defake::ScoreUtterance(d, joined);
  CHECK(sj > std::min(sa, sb));
  CHECK(sj < std::max(sa, sb));
}

TEST_CASE("frame scores resample to the localization grid") {
  const defake::SynthCorpus& corpus = DefaultCorpus();
  const defake::ToyDetector& d = DefaultDetector();
  const std::string& utt = corpus.utt_order.front();
  const defake::Waveform& w = corpus.waves.at(utt);

  const std::vector<double> native = defake::ScoreFrames(d, w);
  const std::vector<double> mapped =
      defake::FrameScoresAtResolution(d, w, 0.02);
  const auto expected = static_cast<std::size_t>(
      std::ceil(w.DurationSec() / 0.02 - 1e-9));
  CHECK(mapped.size() == expected);
  // Every mapped value is copied from some native frame.
  for (const double s : mapped) {
    bool found = false;
    for (const double n : native) found = found || n == s;
    CHECK(found);
  }
  // The grid lines up with expanded frame labels for the same utterance.
  const defake::FrameLabelSet labels =
      defake::ExpandFrameLabels(corpus.segments, 0.02, 0.0);
  CHECK(mapped.size() == labels.utts.at(utt).size());

  CHECK(CodeOf([&] { defake::FrameScoresAtResolution(d, w, 0.0); }) ==
        defake::ErrorCode::kBadArgument);
}

TEST_CASE("scoring rejects a sample-rate mismatch") {
  const defake::ToyDetector& d = DefaultDetector();
  defake::Waveform w;
  w.sample_rate_hz = 8000;
  w.samples.assign(8000, 0.1);
  CHECK(CodeOf([&] { defake::ScoreFrames(d, w); }) ==
        defake::ErrorCode::kSampleRateMismatch);
}

TEST_CASE("toy detector round-trips through its text form") {
  const defake::ToyDetector& d = DefaultDetector();
  const std::string text = defake::SerializeToyDetector(d);
  const defake::ToyDetector parsed = defake::ParseToyDetector(text);

  CHECK(parsed.sample_rate_hz == d.sample_rate_hz);
  CHECK(parsed.features.n_ceps == d.features.n_ceps);
  CHECK(parsed.features.n_filters == d.features.n_filters);
  CHECK(parsed.features.frame.frame_len_sec == d.features.frame.frame_len_sec);
  CHECK(parsed.features.frame.frame_shift_sec ==
        d.features.frame.frame_shift_sec);
  REQUIRE(parsed.model.weights.size() == d.model.weights.size());
  for (std::size_t i = 0; i < d.model.weights.size(); ++i) {
    CHECK(parsed.model.weights[i] == d.model.weights[i]);
  }
  CHECK(parsed.model.bias == d.model.bias);
  CHECK(parsed.model.trained_prior == d.model.trained_prior);

  // Scoring through the parsed model is bit-identical.
  const defake::Waveform& w =
      DefaultCorpus().waves.at(DefaultCorpus().utt_order.front());
  CHECK(defake::ScoreUtterance(parsed, w) == defake::ScoreUtterance(d, w));
}

TEST_CASE("toy detector parser rejects malformed files") {
  const std::string good = defake::SerializeToyDetector(DefaultDetector());
  CHECK(CodeOf([&] { defake::ParseToyDetector(good + "bogus 1\n"); }) ==
        defake::ErrorCode::kMalformedLine);
  CHECK(CodeOf([&] { defake::ParseToyDetector(good + "bias 0\n"); }) ==
        defake::ErrorCode::kMalformedLine);
  CHECK(CodeOf([&] { defake::ParseToyDetector("sample_rate 16000\n"); }) ==
        defake::ErrorCode::kEmptyInput);
  const std::string bad_window = [&] {
    std::string t = good;
    const auto pos = t.find("window hamming");
    return t.replace(pos, std::strlen("window hamming"), "window square");
  }();
  CHECK(CodeOf([&] { defake::ParseToyDetector(bad_window); }) ==
        defake::ErrorCode::kMalformedLine);
}

TEST_CASE("end to end: utterance and frame error rates on held-out data") {
  const defake::SynthCorpus& corpus = DefaultCorpus();
  const defake::CorpusSplit& split = DefaultSplit();
  const defake::ToyDetector& d = DefaultDetector();

  std::vector<double> bona;
  std::vector<double> spoof;
  defake::FrameScoreSet frame_scores;
  frame_scores.resolution_sec = 0.02;
  defake::SegmentAnnotationSet eval_annot;
  eval_annot.vocab = corpus.segments.vocab;
  for (const std::string& utt : split.eval) {
    const defake::Waveform& w = corpus.waves.at(utt);
    const double s = defake::ScoreUtterance(d, w);
    (corpus.key.LabelOf(utt) == defake::ClassLabel::kSpoof ? spoof : bona)
        .push_back(s);
    frame_scores.utt_order.push_back(utt);
    frame_scores.utts[utt] = defake::FrameScoresAtResolution(d, w, 0.02);
    eval_annot.utt_order.push_back(utt);
    eval_annot.utts[utt] = corpus.segments.SegmentsOf(utt);
  }

  const double utt_eer = defake::ComputeEer(bona, spoof).eer;
  CHECK(utt_eer < 0.05);

  const defake::FrameLabelSet frame_labels =
      defake::ExpandFrameLabels(eval_annot, 0.02, 0.0);
  const defake::PooledEerResult pooled =
      defake::PooledPointEer(frame_scores, frame_labels);
  CHECK(pooled.eer < 0.15);
  CHECK(pooled.n_truncated_frames == 0);
}

TEST_CASE("dev-trained single-score calibration lowers cllr on eval") {
  const defake::SynthCorpus& corpus = DefaultCorpus();
  const defake::CorpusSplit& split = DefaultSplit();
  const defake::ToyDetector& d = DefaultDetector();

  const auto collect = [&](const std::vector<std::string>& utts,
                           std::vector<double>* bona,
                           std::vector<double>* spoof,
                           Eigen::MatrixXd* scores,
                           std::vector<defake::ClassLabel>* labels) {
    if (scores) scores->resize(static_cast<Eigen::Index>(utts.size()), 1);
    Eigen::Index row = 0;
    for (const std::string& utt : utts) {
      const double s = defake::ScoreUtterance(d, corpus.waves.at(utt));
      const defake::ClassLabel label = corpus.key.LabelOf(utt);
      (label == defake::ClassLabel::kSpoof ? spoof : bona)->push_back(s);
      if (scores) (*scores)(row++, 0) = s;
      if (labels) labels->push_back(label);
    }
  };

  Eigen::MatrixXd dev_scores;
  std::vector<defake::ClassLabel> dev_labels;
  std::vector<double> dev_bona;
  std::vector<double> dev_spoof;
  collect(split.dev, &dev_bona, &dev_spoof, &dev_scores, &dev_labels);
  const defake::AffineCalibrator cal =
      defake::TrainAffine(dev_scores, dev_labels, 0.5);

  std::vector<double> eval_bona;
  std::vector<double> eval_spoof;
  collect(split.eval, &eval_bona, &eval_spoof, nullptr, nullptr);

  const double raw = defake::ComputeCllr(eval_bona, eval_spoof);
  std::vector<double> cal_bona;
  std::vector<double> cal_spoof;
  for (const double s : eval_bona) {
    cal_bona.push_back(defake::ApplyAffine(cal, std::span(&s, 1)));
  }
  for (const double s : eval_spoof) {
    cal_spoof.push_back(defake::ApplyAffine(cal, std::span(&s, 1)));
  }
  const double calibrated = defake::ComputeCllr(cal_bona, cal_spoof);
  CHECK(calibrated < raw);
}

}  // namespace
