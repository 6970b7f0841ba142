// core/src/analysis.cc

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

#include "defake/analysis.h"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "defake/error.h"
#include "defake/metrics.h"
#include "defake/util.h"

namespace defake {
namespace {

// Probabilities are clamped to this band before the probit, which caps the
// plotted axis around +-4.75 standard deviations.
constexpr double kProbFloor = 1e-6;

// Relative float-noise tolerance for frame/segment boundary arithmetic,
// matching the frame expansion rules used elsewhere.
constexpr double kRelTol = 1e-9;

std::int64_t FrameCountFor(double duration_sec, double resolution_sec) {
  return static_cast<std::int64_t>(
      std::ceil(duration_sec / resolution_sec - kRelTol));
}

bool IsSpoofLabel(const std::string& label) { return label == "spoof"; }
bool IsSpeechLabel(const std::string& label) { return label == "speech"; }

// Overlap of [a0, a1) and [b0, b1), never negative.
double Overlap(double a0, double a1, double b0, double b1) {
  const double lo = std::max(a0, b0);
  const double hi = std::min(a1, b1);
  return hi > lo ? hi - lo : 0.0;
}

// Fraction of the frame [fs, fe) covered by segments matching `accept`.
template <typename Pred>
double CoveredFraction(const std::vector<Segment>& segments, double fs,
                       double fe, Pred accept) {
  double covered = 0.0;
  for (const Segment& seg : segments) {
    if (seg.start_sec >= fe) break;
    if (seg.end_sec <= fs) continue;
    if (accept(seg.label)) covered += Overlap(fs, fe, seg.start_sec, seg.end_sec);
  }
  const double width = fe - fs;
  return width > 0.0 ? covered / width : 0.0;
}

void RequireVocabLabel(const SegmentAnnotationSet& set,
                       const std::string& label, const char* role) {
  if (std::find(set.vocab.begin(), set.vocab.end(), label) ==
      set.vocab.end()) {
    throw Error(ErrorCode::kBadArgument,
                std::string(role) + " annotation vocabulary lacks \"" + label +
                    "\"");
  }
}

}  // namespace

double Probit(double p) {
  // Wichura's PPND16 rational approximations (central, tail, far tail).
  if (!(p > 0.0) || !(p < 1.0)) {
    throw Error(ErrorCode::kBadArgument,
                "probit argument outside (0, 1): " + FormatDouble(p));
  }
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
              6.7265770927008700853e+4) *
                 r +
             4.5921953931549871457e+4) *
                r +
            1.3731693765509461125e+4) *
               r +
           1.9715909503065514427e+3) *
              r +
          1.3314166789178437745e+2) *
             r +
         3.3871328727963666080e+0);
    const double den =
        (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
              3.9307895800092710610e+4) *
                 r +
             2.1213794301586595867e+4) *
                r +
            5.3941960214247511077e+3) *
               r +
           6.8718700749205790830e+2) *
              r +
          4.2313330701600911252e+1) *
             r +
         1.0);
    return q * num / den;
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) *
                 r +
             1.27045825245236838258e+0) *
                r +
            3.64784832476320460504e+0) *
               r +
           5.76949722146069140550e+0) *
              r +
          4.63033784615654529590e+0) *
             r +
         1.42343711074968357734e+0);
    const double den =
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) *
                 r +
             1.48103976427480074590e-1) *
                r +
            6.89767334985100004550e-1) *
               r +
           1.67638483018380384940e+0) *
              r +
          2.05319162663775882187e+0) *
             r +
         1.0);
    value = num / den;
  } else {
    r -= 5.0;
    const double num =
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) *
                 r +
             2.65321895265761230930e-2) *
                r +
            2.96560571828504891230e-1) *
               r +
           1.78482653991729133580e+0) *
              r +
          5.46378491116411436990e+0) *
             r +
         6.65790464350110377720e+0);
    const double den =
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) *
                  r +
              1.84631831751005468180e-6) *
                 r +
             7.86869131145613259100e-4) *
                r +
            1.48753612908506148525e-2) *
               r +
           1.36929880922735805310e-1) *
              r +
          5.99832206555887937690e-1) *
             r +
         1.0);
    value = num / den;
  }
  return q < 0.0 ? -value : value;
}

std::vector<DetPoint> DetPoints(std::span<const double> bona,
                                std::span<const double> spoof) {
  const DetCurve curve = ComputeDetCurve(bona, spoof);
  const double eer = ComputeEer(bona, spoof).eer;

  // The interpolated EER lies on the segment between the two operating
  // points that bracket the diff = p_miss - p_fa sign change, so inserting
  // it there keeps the polyline geometry and its monotone ordering intact.
  std::size_t cross = 0;
  while (curve.points[cross].p_miss - curve.points[cross].p_fa < 0.0) ++cross;

  std::vector<DetPoint> out;
  out.reserve(curve.points.size() + 1);
  const auto push = [&out](double p_fa, double p_miss) {
    const double fa = std::clamp(p_fa, kProbFloor, 1.0 - kProbFloor);
    const double miss = std::clamp(p_miss, kProbFloor, 1.0 - kProbFloor);
    out.push_back(DetPoint{Probit(fa), Probit(miss)});
  };

  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const auto& pt = curve.points[i];
    if (i == cross && !(pt.p_miss == eer && pt.p_fa == eer)) {
      push(eer, eer);
    }
    push(pt.p_fa, pt.p_miss);
  }
  return out;
}

std::string SerializeDetPoints(const std::vector<DetPoint>& points) {
  std::string out;
  for (const DetPoint& pt : points) {
    out += FormatDouble(pt.probit_fa);
    out += ' ';
    out += FormatDouble(pt.probit_miss);
    out += '\n';
  }
  return out;
}

const char* SegmentTypeName(SegmentType t) {
  switch (t) {
    case SegmentType::kBonafideSpeech:
      return "bonafide-speech";
    case SegmentType::kSpoofedSpeech:
      return "spoofed-speech";
    case SegmentType::kConcatenatedPart:
      return "concatenated-part";
    case SegmentType::kBonafideNonspeech:
      return "bonafide-nonspeech";
    case SegmentType::kSpoofedNonspeech:
      return "spoofed-nonspeech";
  }
  throw Error(ErrorCode::kBadArgument, "unknown segment type");
}

SegmentTypeLabelSet SegmentTypeLabels(const SegmentAnnotationSet& spoof_annot,
                                      const SegmentAnnotationSet& speech_annot,
                                      double boundary_window_sec,
                                      double resolution_sec) {
  if (!std::isfinite(resolution_sec) || resolution_sec <= 0.0) {
    throw Error(ErrorCode::kBadArgument,
                "frame resolution must be positive, got " +
                    FormatDouble(resolution_sec));
  }
  if (!std::isfinite(boundary_window_sec) || boundary_window_sec < 0.0) {
    throw Error(ErrorCode::kBadArgument,
                "boundary window must be nonnegative, got " +
                    FormatDouble(boundary_window_sec));
  }
  if (spoof_annot.utt_order.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no annotated utterances");
  }
  RequireVocabLabel(spoof_annot, "spoof", "spoof");
  RequireVocabLabel(speech_annot, "speech", "speech");
  for (const std::string& utt : spoof_annot.utt_order) {
    if (!speech_annot.Has(utt)) {
      throw Error(ErrorCode::kIdSetMismatch,
                  "utterance missing from speech annotation", utt);
    }
  }
  for (const std::string& utt : speech_annot.utt_order) {
    if (!spoof_annot.Has(utt)) {
      throw Error(ErrorCode::kIdSetMismatch,
                  "utterance missing from spoof annotation", utt);
    }
  }

  SegmentTypeLabelSet out;
  out.resolution_sec = resolution_sec;
  out.utt_order = spoof_annot.utt_order;
  for (const std::string& utt : spoof_annot.utt_order) {
    const UttSegments& spoof_segs = spoof_annot.SegmentsOf(utt);
    const UttSegments& speech_segs = speech_annot.SegmentsOf(utt);
    const std::int64_t n = FrameCountFor(spoof_segs.total_duration_sec,
                                         resolution_sec);
    if (n != FrameCountFor(speech_segs.total_duration_sec, resolution_sec)) {
      throw Error(ErrorCode::kFrameCountMismatch,
                  "spoof and speech annotations cover different durations",
                  utt);
    }

    // Boundary instants where the annotation flips between bonafide and
    // spoof.  Segment tiling is validated at parse, so consecutive segments
    // share their boundary.
    std::vector<double> transitions;
    for (std::size_t j = 1; j < spoof_segs.segments.size(); ++j) {
      if (IsSpoofLabel(spoof_segs.segments[j - 1].label) !=
          IsSpoofLabel(spoof_segs.segments[j].label)) {
        transitions.push_back(spoof_segs.segments[j].start_sec);
      }
    }

    std::vector<SegmentType>& types = out.utts[utt];
    types.reserve(static_cast<std::size_t>(n));
    for (std::int64_t k = 0; k < n; ++k) {
      const double fs = static_cast<double>(k) * resolution_sec;
      const double fe = std::min(fs + resolution_sec,
                                 spoof_segs.total_duration_sec);
      bool concatenated = false;
      for (const double t : transitions) {
        if (Overlap(fs, fe, t - boundary_window_sec, t + boundary_window_sec) >
            kRelTol * resolution_sec) {
          concatenated = true;
          break;
        }
      }
      if (concatenated) {
        types.push_back(SegmentType::kConcatenatedPart);
        continue;
      }
      // Majority coverage decides both axes; an exact split stays on the
      // bonafide / nonspeech side.
      const bool spoofed =
          CoveredFraction(spoof_segs.segments, fs, fe, IsSpoofLabel) >
          0.5 + kRelTol;
      const bool speech =
          CoveredFraction(speech_segs.segments, fs, fe, IsSpeechLabel) >
          0.5 + kRelTol;
      if (spoofed) {
        types.push_back(speech ? SegmentType::kSpoofedSpeech
                               : SegmentType::kSpoofedNonspeech);
      } else {
        types.push_back(speech ? SegmentType::kBonafideSpeech
                               : SegmentType::kBonafideNonspeech);
      }
    }
  }
  return out;
}

RcqResult ComputeRcq(const FrameScoreSet& maps,
                     const SegmentTypeLabelSet& types) {
  if (maps.utt_order.empty() || types.utt_order.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no contribution maps to pool");
  }
  const double max_res = std::max(maps.resolution_sec, types.resolution_sec);
  if (std::abs(maps.resolution_sec - types.resolution_sec) >
      kRelTol * max_res) {
    throw Error(ErrorCode::kResolutionMismatch,
                "contribution maps at " + FormatDouble(maps.resolution_sec) +
                    " s but type labels at " +
                    FormatDouble(types.resolution_sec) + " s");
  }
  for (const std::string& utt : maps.utt_order) {
    if (types.utts.find(utt) == types.utts.end()) {
      throw Error(ErrorCode::kIdSetMismatch,
                  "utterance missing from type labels", utt);
    }
  }
  for (const std::string& utt : types.utt_order) {
    if (!maps.Has(utt)) {
      throw Error(ErrorCode::kIdSetMismatch,
                  "utterance missing from contribution maps", utt);
    }
  }

  RcqResult result;
  double sums[kNumSegmentTypes] = {};
  std::int64_t counts[kNumSegmentTypes] = {};
  double global_sum = 0.0;
  for (const std::string& utt : maps.utt_order) {
    const std::vector<double>& values = maps.utts.at(utt);
    const std::vector<SegmentType>& labels = types.utts.at(utt);
    const std::int64_t n_values = static_cast<std::int64_t>(values.size());
    const std::int64_t n_labels = static_cast<std::int64_t>(labels.size());
    if (std::abs(n_values - n_labels) > 2) {
      throw Error(ErrorCode::kFrameCountMismatch,
                  "contribution map has " + std::to_string(values.size()) +
                      " frames but type labels have " +
                      std::to_string(labels.size()),
                  utt);
    }
    const std::int64_t n = std::min(n_values, n_labels);
    result.n_truncated_frames += (n_values - n) + (n_labels - n);
    for (std::int64_t k = 0; k < n; ++k) {
      const double v = values[static_cast<std::size_t>(k)];
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kNonFiniteScore,
                    "non-finite contribution at frame " + std::to_string(k),
                    utt);
      }
      const int c = static_cast<int>(labels[static_cast<std::size_t>(k)]);
      sums[c] += v;
      counts[c] += 1;
      global_sum += v;
      result.n_frames += 1;
    }
  }
  if (result.n_frames == 0) {
    throw Error(ErrorCode::kEmptyInput, "contribution maps hold no frames");
  }
  result.global_mean = global_sum / static_cast<double>(result.n_frames);
  if (std::abs(result.global_mean) < 1e-12) {
    throw Error(ErrorCode::kZeroGlobalMean,
                "global mean contribution is zero; relative quantification "
                "is undefined");
  }
  for (int c = 0; c < kNumSegmentTypes; ++c) {
    if (counts[c] == 0) continue;
    const double mean_c = sums[c] / static_cast<double>(counts[c]);
    RcqEntry entry;
    entry.type = static_cast<SegmentType>(c);
    entry.rcq_percent =
        100.0 * (mean_c - result.global_mean) / result.global_mean;
    entry.n_frames = counts[c];
    result.entries.push_back(entry);
  }
  return result;
}

std::string FormatRcq(const RcqResult& result) {
  std::string out;
  for (const RcqEntry& entry : result.entries) {
    out += SegmentTypeName(entry.type);
    out += ' ';
    out += FormatDouble(entry.rcq_percent);
    out += "%\n";
  }
  return out;
}

HistogramResult ScoreHistogram(std::span<const double> bona,
                               std::span<const double> spoof, int n_bins) {
  if (n_bins < 1) {
    throw Error(ErrorCode::kBadArgument,
                "histogram needs at least one bin, got " +
                    std::to_string(n_bins));
  }
  if (bona.empty() || spoof.empty()) {
    throw Error(ErrorCode::kEmptyClass,
                bona.empty() ? "no bonafide scores" : "no spoof scores");
  }
  double lo = bona[0];
  double hi = bona[0];
  const auto fold = [&lo, &hi](std::span<const double> scores) {
    for (const double s : scores) {
      if (!std::isfinite(s)) {
        throw Error(ErrorCode::kNonFiniteScore,
                    "non-finite score in histogram input");
      }
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
  };
  fold(bona);
  fold(spoof);

  HistogramResult result;
  result.lo = lo;
  result.hi = hi;
  result.bona_counts.assign(static_cast<std::size_t>(n_bins), 0);
  result.spoof_counts.assign(static_cast<std::size_t>(n_bins), 0);
  const double width = hi - lo;
  const auto bin_of = [&](double s) -> std::size_t {
    // A degenerate range puts everything in bin 0.
    if (width <= 0.0) return 0;
    const double pos = (s - lo) / width * static_cast<double>(n_bins);
    const auto idx = static_cast<std::int64_t>(std::floor(pos));
    return static_cast<std::size_t>(
        std::clamp<std::int64_t>(idx, 0, n_bins - 1));
  };
  for (const double s : bona) result.bona_counts[bin_of(s)] += 1;
  for (const double s : spoof) result.spoof_counts[bin_of(s)] += 1;
  return result;
}

}  // namespace defake
