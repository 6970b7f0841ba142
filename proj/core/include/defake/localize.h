// core/include/defake/localize.h

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

// Frame-level localization scoring: segment annotations expanded to frame
// labels at a fixed resolution, evaluated as one pooled point-based EER
// over all frames (with a per-utterance-average variant).

#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "defake/corpus.h"
#include "defake/metrics.h"

namespace defake {

struct FrameLabelSet {
  double resolution_sec = 0.02;
  std::vector<std::string> utt_order;
  std::unordered_map<std::string, std::vector<ClassLabel>> utts;
};

// Frame k covers [k*r, (k+1)*r) clipped to the utterance duration, so the
// final partial frame is judged on its actual coverage.  A frame is spoof
// iff spoofed-overlap / coverage exceeds the threshold; the default 0 means
// any spoofed content flips the frame.  Frame count is ceil(duration / r).
FrameLabelSet ExpandFrameLabels(const SegmentAnnotationSet& annotations,
                                double resolution_sec,
                                double spoof_overlap_threshold = 0.0);

struct PooledEerResult {
  double eer = 0.0;
  double threshold = 0.0;
  std::int64_t n_frames = 0;            // frames pooled into the EER
  std::int64_t n_truncated_frames = 0;  // edge frames dropped to reconcile
};

// Pools every frame of every utterance into a single bona/spoof score pair
// and runs the interpolated EER on it.  Score and label sets must cover the
// same utterances at the same resolution; per-utterance length differences
// of at most 2 frames are reconciled by truncating to the shorter side.
PooledEerResult PooledPointEer(const FrameScoreSet& scores,
                               const FrameLabelSet& labels);

struct PerUtteranceEerResult {
  double mean_eer = 0.0;
  std::int64_t n_utts = 0;     // utterances contributing an EER
  std::int64_t n_skipped = 0;  // single-class utterances, no EER defined
  std::int64_t n_truncated_frames = 0;
};

// Comparison variant: mean of per-utterance frame EERs.  Utterances whose
// frames are all one class are skipped and counted.
PerUtteranceEerResult PerUtteranceEer(const FrameScoreSet& scores,
                                      const FrameLabelSet& labels);

}  // namespace defake
