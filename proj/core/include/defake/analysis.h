// core/include/defake/analysis.h

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

// Result analysis beyond single-number metrics: DET curves in probit space,
// score histograms, frame segment typing around splice boundaries, and
// relative contribution quantification over externally produced per-frame
// relevance maps.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "defake/corpus.h"

namespace defake {

// Inverse standard-normal CDF (Wichura's rational approximations), good to
// about 1e-15 over (0, 1).
double Probit(double p);

struct DetPoint {
  double probit_fa = 0.0;
  double probit_miss = 0.0;
};

// ROC operating points mapped through the probit after clamping each
// probability to [1e-6, 1 - 1e-6], ordered by ascending threshold (p_miss
// rises as p_fa falls).  The interpolated EER is inserted as an explicit
// vertex, so the polyline touches the p_miss = p_fa diagonal exactly.
std::vector<DetPoint> DetPoints(std::span<const double> bona,
                                std::span<const double> spoof);

// Two columns per line: probit(p_fa) probit(p_miss).
std::string SerializeDetPoints(const std::vector<DetPoint>& points);

enum class SegmentType : std::uint8_t {
  kBonafideSpeech = 0,
  kSpoofedSpeech = 1,
  kConcatenatedPart = 2,
  kBonafideNonspeech = 3,
  kSpoofedNonspeech = 4,
};
inline constexpr int kNumSegmentTypes = 5;

const char* SegmentTypeName(SegmentType t);

struct SegmentTypeLabelSet {
  double resolution_sec = 0.02;
  std::vector<std::string> utt_order;
  std::unordered_map<std::string, std::vector<SegmentType>> utts;
};

// Crosses a spoof/bonafide annotation with a speech/nonspeech annotation at
// a frame resolution.  Frames overlapping [t - w, t + w) around any
// bonafide-spoof transition time t become concatenated-part; every other
// frame is typed by majority coverage: spoofed iff spoof covers more than
// half the frame, speech likewise.  Both annotations must cover the same
// utterances with matching durations.
SegmentTypeLabelSet SegmentTypeLabels(const SegmentAnnotationSet& spoof_annot,
                                      const SegmentAnnotationSet& speech_annot,
                                      double boundary_window_sec,
                                      double resolution_sec);

struct RcqEntry {
  SegmentType type = SegmentType::kBonafideSpeech;
  double rcq_percent = 0.0;
  std::int64_t n_frames = 0;
};

struct RcqResult {
  std::vector<RcqEntry> entries;  // present types in enum order
  double global_mean = 0.0;
  std::int64_t n_frames = 0;
  std::int64_t n_truncated_frames = 0;
};

// RCQ_c = 100 * (mean contribution over frames of type c - global mean)
//       / global mean, pooled over all utterances.  Types without frames
// are omitted.  Contribution maps ride the frame-score file format; frame
// counts are reconciled like localization (up to 2 frames truncated).
RcqResult ComputeRcq(const FrameScoreSet& maps,
                     const SegmentTypeLabelSet& types);

// "type value%" lines in enum order.
std::string FormatRcq(const RcqResult& result);

struct HistogramResult {
  double lo = 0.0;  // shared bin range over both classes
  double hi = 0.0;
  std::vector<std::int64_t> bona_counts;
  std::vector<std::int64_t> spoof_counts;
};

// Equal-width bins spanning the pooled score range.  When every score is
// identical the range is degenerate and all mass lands in bin 0.
HistogramResult ScoreHistogram(std::span<const double> bona,
                               std::span<const double> spoof, int n_bins);

}  // namespace defake
