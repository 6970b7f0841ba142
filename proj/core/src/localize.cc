// core/src/localize.cc

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

#include "defake/localize.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "defake/error.h"
#include "defake/util.h"

namespace defake {

namespace {

// Frames whose nominal span rounds within this fraction of a resolution
// step are treated as exact; guards the boundary cases ceil() and the
// overlap ratio would otherwise get wrong by one ulp.
constexpr double kRelTol = 1e-9;

std::int64_t FrameCountFor(double duration_sec, double resolution_sec) {
  return static_cast<std::int64_t>(
      std::ceil(duration_sec / resolution_sec - kRelTol));
}

std::vector<ClassLabel> ExpandOne(const UttSegments& utt, double r,
                                  double threshold) {
  const double duration = utt.total_duration_sec;
  const std::int64_t n_frames = FrameCountFor(duration, r);
  std::vector<ClassLabel> labels(static_cast<std::size_t>(n_frames),
                                 ClassLabel::kBonafide);
  std::size_t seg = 0;
  for (std::int64_t k = 0; k < n_frames; ++k) {
    const double frame_start = static_cast<double>(k) * r;
    const double frame_end = std::min(frame_start + r, duration);
    const double coverage = frame_end - frame_start;
    if (coverage <= 0.0) break;

    // Segments tile the utterance in order; resume from the first one that
    // can still reach this frame.
    while (seg + 1 < utt.segments.size() &&
           utt.segments[seg].end_sec <= frame_start) {
      ++seg;
    }
    double spoof_overlap = 0.0;
    for (std::size_t s = seg; s < utt.segments.size(); ++s) {
      const Segment& segment = utt.segments[s];
      if (segment.start_sec >= frame_end) break;
      if (segment.label != "spoof") continue;
      const double lo = std::max(segment.start_sec, frame_start);
      const double hi = std::min(segment.end_sec, frame_end);
      if (hi > lo) spoof_overlap += hi - lo;
    }
    if (spoof_overlap <= kRelTol * r) continue;  // float sliver, not content
    const double ratio = spoof_overlap / coverage;
    if (ratio > threshold + kRelTol) {
      labels[static_cast<std::size_t>(k)] = ClassLabel::kSpoof;
    }
  }
  return labels;
}

// Reconciled per-utterance frame pair lists, shared by both poolings.
struct Reconciled {
  std::vector<double> bona;
  std::vector<double> spoof;
  std::int64_t n_truncated = 0;
};

Reconciled ReconcileUtterance(const std::string& utt_id,
                              const std::vector<double>& scores,
                              const std::vector<ClassLabel>& labels) {
  const std::int64_t n_s = static_cast<std::int64_t>(scores.size());
  const std::int64_t n_l = static_cast<std::int64_t>(labels.size());
  const std::int64_t diff = std::llabs(n_s - n_l);
  if (diff > 2) {
    throw Error(ErrorCode::kFrameCountMismatch,
                std::to_string(n_s) + " scored vs " + std::to_string(n_l) +
                    " labeled frames",
                utt_id);
  }
  Reconciled out;
  out.n_truncated = diff;
  const std::int64_t n = std::min(n_s, n_l);
  for (std::int64_t k = 0; k < n; ++k) {
    const double score = scores[static_cast<std::size_t>(k)];
    if (labels[static_cast<std::size_t>(k)] == ClassLabel::kBonafide) {
      out.bona.push_back(score);
    } else {
      out.spoof.push_back(score);
    }
  }
  return out;
}

void RequireMatchingSets(const FrameScoreSet& scores,
                         const FrameLabelSet& labels) {
  if (scores.utt_order.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no scored utterances");
  }
  const double r_s = scores.resolution_sec;
  const double r_l = labels.resolution_sec;
  if (std::abs(r_s - r_l) > kRelTol * std::max(r_s, r_l)) {
    throw Error(ErrorCode::kResolutionMismatch,
                "scores at " + FormatDouble(r_s) + " s vs labels at " +
                    FormatDouble(r_l) + " s");
  }
  for (const std::string& utt : scores.utt_order) {
    if (labels.utts.find(utt) == labels.utts.end()) {
      throw Error(ErrorCode::kIdSetMismatch, "utterance has no labels", utt);
    }
  }
  for (const std::string& utt : labels.utt_order) {
    if (!scores.Has(utt)) {
      throw Error(ErrorCode::kIdSetMismatch, "utterance has no scores", utt);
    }
  }
}

}  // namespace

FrameLabelSet ExpandFrameLabels(const SegmentAnnotationSet& annotations,
                                double resolution_sec,
                                double spoof_overlap_threshold) {
  if (!(resolution_sec > 0.0) || !std::isfinite(resolution_sec)) {
    throw Error(ErrorCode::kBadArgument, "resolution must be positive");
  }
  if (!(spoof_overlap_threshold >= 0.0 && spoof_overlap_threshold < 1.0)) {
    throw Error(ErrorCode::kBadArgument,
                "spoof overlap threshold must lie in [0, 1)");
  }
  FrameLabelSet out;
  out.resolution_sec = resolution_sec;
  out.utt_order = annotations.utt_order;
  for (const std::string& utt : annotations.utt_order) {
    out.utts.emplace(utt, ExpandOne(annotations.utts.at(utt), resolution_sec,
                                    spoof_overlap_threshold));
  }
  return out;
}

PooledEerResult PooledPointEer(const FrameScoreSet& scores,
                               const FrameLabelSet& labels) {
  RequireMatchingSets(scores, labels);
  std::vector<double> bona, spoof;
  std::int64_t truncated = 0;
  for (const std::string& utt : scores.utt_order) {
    Reconciled r =
        ReconcileUtterance(utt, scores.utts.at(utt), labels.utts.at(utt));
    truncated += r.n_truncated;
    bona.insert(bona.end(), r.bona.begin(), r.bona.end());
    spoof.insert(spoof.end(), r.spoof.begin(), r.spoof.end());
  }
  const EerResult eer = ComputeEer(bona, spoof);
  PooledEerResult result;
  result.eer = eer.eer;
  result.threshold = eer.threshold;
  result.n_frames = static_cast<std::int64_t>(bona.size() + spoof.size());
  result.n_truncated_frames = truncated;
  return result;
}

PerUtteranceEerResult PerUtteranceEer(const FrameScoreSet& scores,
                                      const FrameLabelSet& labels) {
  RequireMatchingSets(scores, labels);
  PerUtteranceEerResult result;
  double sum = 0.0;
  for (const std::string& utt : scores.utt_order) {
    Reconciled r =
        ReconcileUtterance(utt, scores.utts.at(utt), labels.utts.at(utt));
    result.n_truncated_frames += r.n_truncated;
    if (r.bona.empty() || r.spoof.empty()) {
      ++result.n_skipped;
      continue;
    }
    sum += ComputeEer(r.bona, r.spoof).eer;
    ++result.n_utts;
  }
  if (result.n_utts == 0) {
    throw Error(ErrorCode::kEmptyClass,
                "every utterance has single-class frame labels");
  }
  result.mean_eer = sum / static_cast<double>(result.n_utts);
  return result;
}

}  // namespace defake
