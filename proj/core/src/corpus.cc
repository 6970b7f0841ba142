// core/src/corpus.cc

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

#include "defake/corpus.h"

#include <algorithm>
#include <cmath>

#include "defake/error.h"
#include "defake/util.h"

namespace defake {

namespace {

// Tolerance for float round-off in annotation times, seconds.
constexpr double kCoverageTolSec = 1e-6;

bool IsCommentOrBlank(std::string_view line) {
  const std::string_view t = TrimWhitespace(line);
  return t.empty() || t.front() == '#';
}

ClassLabel ParseClassLabel(std::string_view token, std::int64_t line_no) {
  if (token == "bonafide") return ClassLabel::kBonafide;
  if (token == "spoof") return ClassLabel::kSpoof;
  throw Error(ErrorCode::kBadLabel,
              "label '" + std::string(token) +
                  "' not in {bonafide, spoof}",
              "", line_no);
}

double ParseFiniteScore(std::string_view token, std::int64_t line_no) {
  double value = 0.0;
  if (!ParseDouble(token, &value)) {
    throw Error(ErrorCode::kMalformedLine,
                "cannot parse score '" + std::string(token) + "'", "",
                line_no);
  }
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::kNonFiniteScore,
                "score '" + std::string(token) + "' is not finite", "",
                line_no);
  }
  return value;
}

}  // namespace

const char* ClassLabelName(ClassLabel label) {
  return label == ClassLabel::kBonafide ? "bonafide" : "spoof";
}

const char* ScoreSemanticsName(ScoreSemantics semantics) {
  switch (semantics) {
    case ScoreSemantics::kRaw: return "raw";
    case ScoreSemantics::kPosterior: return "posterior";
    case ScoreSemantics::kLlr: return "llr";
  }
  return "raw";
}

bool TrialKey::Has(std::string_view utt_id) const {
  return index.find(std::string(utt_id)) != index.end();
}

ClassLabel TrialKey::LabelOf(std::string_view utt_id) const {
  const auto it = index.find(std::string(utt_id));
  if (it == index.end()) {
    throw Error(ErrorCode::kMissingInKey,
                "utterance not present in key", std::string(utt_id));
  }
  return entries[it->second].label;
}

TrialKey ParseTrialKey(std::string_view text) {
  TrialKey key;
  ForEachLine(text, [&](std::int64_t line_no, std::string_view line) {
    if (IsCommentOrBlank(line)) return;
    const auto fields = SplitFields(line);
    if (fields.size() != 2) {
      throw Error(ErrorCode::kMalformedLine,
                  "expected '<utt-id> <label>', got " +
                      std::to_string(fields.size()) + " fields",
                  "", line_no);
    }
    std::string utt_id(fields[0]);
    const ClassLabel label = ParseClassLabel(fields[1], line_no);
    if (!key.index.emplace(utt_id, key.entries.size()).second) {
      throw Error(ErrorCode::kDuplicateUtterance, "duplicate utterance id",
                  utt_id, line_no);
    }
    key.entries.push_back({std::move(utt_id), label});
  });
  if (key.entries.empty()) {
    throw Error(ErrorCode::kEmptyInput, "key file has no entries");
  }
  return key;
}

std::string SerializeTrialKey(const TrialKey& key) {
  std::string out;
  for (const auto& entry : key.entries) {
    out += entry.utt_id;
    out += ' ';
    out += ClassLabelName(entry.label);
    out += '\n';
  }
  return out;
}

bool ScoreSet::Has(std::string_view utt_id) const {
  return index.find(std::string(utt_id)) != index.end();
}

double ScoreSet::ScoreOf(std::string_view utt_id) const {
  const auto it = index.find(std::string(utt_id));
  if (it == index.end()) {
    throw Error(ErrorCode::kMissingInKey,
                "utterance not present in score set", std::string(utt_id));
  }
  return entries[it->second].score;
}

ScoreSet ParseScoreSet(std::string_view text, ScoreSemantics semantics) {
  ScoreSet set;
  set.semantics = semantics;
  ForEachLine(text, [&](std::int64_t line_no, std::string_view line) {
    if (IsCommentOrBlank(line)) return;
    const auto fields = SplitFields(line);
    if (fields.size() != 2) {
      throw Error(ErrorCode::kMalformedLine,
                  "expected '<utt-id> <score>', got " +
                      std::to_string(fields.size()) + " fields",
                  "", line_no);
    }
    std::string utt_id(fields[0]);
    const double score = ParseFiniteScore(fields[1], line_no);
    if (semantics == ScoreSemantics::kPosterior &&
        (score < 0.0 || score > 1.0)) {
      throw Error(ErrorCode::kScoreOutOfRange,
                  "posterior " + FormatDouble(score) + " outside [0, 1]",
                  utt_id, line_no);
    }
    if (!set.index.emplace(utt_id, set.entries.size()).second) {
      throw Error(ErrorCode::kDuplicateUtterance, "duplicate utterance id",
                  utt_id, line_no);
    }
    set.entries.push_back({std::move(utt_id), score});
  });
  if (set.entries.empty()) {
    throw Error(ErrorCode::kEmptyInput, "score file has no entries");
  }
  return set;
}

std::string SerializeScoreSet(const ScoreSet& scores) {
  std::string out;
  for (const auto& entry : scores.entries) {
    out += entry.utt_id;
    out += ' ';
    out += FormatDouble(entry.score);
    out += '\n';
  }
  return out;
}

bool SegmentAnnotationSet::Has(std::string_view utt_id) const {
  return utts.find(std::string(utt_id)) != utts.end();
}

const UttSegments& SegmentAnnotationSet::SegmentsOf(
    std::string_view utt_id) const {
  const auto it = utts.find(std::string(utt_id));
  if (it == utts.end()) {
    throw Error(ErrorCode::kMissingInKey,
                "utterance not present in segment annotations",
                std::string(utt_id));
  }
  return it->second;
}

namespace {

// Sorts one utterance's segments and checks the tiling invariant.
void ValidateUttSegments(const std::string& utt_id, UttSegments* utt) {
  auto& segs = utt->segments;
  std::sort(segs.begin(), segs.end(), [](const Segment& a, const Segment& b) {
    if (a.start_sec != b.start_sec) return a.start_sec < b.start_sec;
    return a.end_sec < b.end_sec;
  });
  if (segs.front().start_sec > kCoverageTolSec) {
    throw Error(ErrorCode::kCoverageGap,
                "coverage gap at 0 (first segment starts at " +
                    FormatDouble(segs.front().start_sec) + ")",
                utt_id);
  }
  for (std::size_t i = 1; i < segs.size(); ++i) {
    const double prev_end = segs[i - 1].end_sec;
    const double next_start = segs[i].start_sec;
    if (prev_end - next_start > kCoverageTolSec) {
      throw Error(ErrorCode::kOverlappingSegments,
                  "segments overlap near " + FormatDouble(next_start) + " s",
                  utt_id);
    }
    if (next_start - prev_end > kCoverageTolSec) {
      throw Error(ErrorCode::kCoverageGap,
                  "coverage gap at " + FormatDouble(prev_end) + " s", utt_id);
    }
  }
  utt->total_duration_sec = segs.back().end_sec;
}

}  // namespace

SegmentAnnotationSet ParseSegmentAnnotations(std::string_view text,
                                             std::vector<std::string> vocab) {
  SegmentAnnotationSet set;
  set.vocab = std::move(vocab);
  ForEachLine(text, [&](std::int64_t line_no, std::string_view line) {
    if (IsCommentOrBlank(line)) return;
    const auto fields = SplitFields(line);
    if (fields.size() != 4) {
      throw Error(ErrorCode::kMalformedLine,
                  "expected '<utt-id> <start> <end> <label>', got " +
                      std::to_string(fields.size()) + " fields",
                  "", line_no);
    }
    Segment seg;
    double start = 0.0, end = 0.0;
    if (!ParseDouble(fields[1], &start) || !ParseDouble(fields[2], &end) ||
        !std::isfinite(start) || !std::isfinite(end)) {
      throw Error(ErrorCode::kMalformedLine, "cannot parse segment times", "",
                  line_no);
    }
    if (start < 0.0) {
      throw Error(ErrorCode::kMalformedLine, "negative segment start", "",
                  line_no);
    }
    if (end <= start) {
      throw Error(ErrorCode::kEndBeforeStart,
                  "segment end " + FormatDouble(end) +
                      " not after start " + FormatDouble(start),
                  "", line_no);
    }
    seg.start_sec = start;
    seg.end_sec = end;
    seg.label = std::string(fields[3]);
    if (std::find(set.vocab.begin(), set.vocab.end(), seg.label) ==
        set.vocab.end()) {
      throw Error(ErrorCode::kBadLabel,
                  "segment label '" + seg.label + "' not in vocabulary", "",
                  line_no);
    }
    std::string utt_id(fields[0]);
    auto [it, inserted] = set.utts.try_emplace(utt_id);
    if (inserted) set.utt_order.push_back(utt_id);
    it->second.segments.push_back(std::move(seg));
  });
  if (set.utts.empty()) {
    throw Error(ErrorCode::kEmptyInput, "segment file has no entries");
  }
  for (const auto& utt_id : set.utt_order) {
    ValidateUttSegments(utt_id, &set.utts.at(utt_id));
  }
  return set;
}

std::string SerializeSegmentAnnotations(const SegmentAnnotationSet& set) {
  std::string out;
  for (const auto& utt_id : set.utt_order) {
    for (const auto& seg : set.utts.at(utt_id).segments) {
      out += utt_id;
      out += ' ';
      out += FormatDouble(seg.start_sec);
      out += ' ';
      out += FormatDouble(seg.end_sec);
      out += ' ';
      out += seg.label;
      out += '\n';
    }
  }
  return out;
}

bool FrameScoreSet::Has(std::string_view utt_id) const {
  return utts.find(std::string(utt_id)) != utts.end();
}

FrameScoreSet ParseFrameScores(std::string_view text) {
  FrameScoreSet set;
  bool have_header = false;
  ForEachLine(text, [&](std::int64_t line_no, std::string_view line) {
    const std::string_view t = TrimWhitespace(line);
    if (t.empty()) return;
    if (t.starts_with("#resolution")) {
      if (have_header) {
        throw Error(ErrorCode::kCorruptHeader, "duplicate resolution header",
                    "", line_no);
      }
      const auto fields = SplitFields(t);
      double res = 0.0;
      if (fields.size() != 2 || !ParseDouble(fields[1], &res) ||
          !std::isfinite(res) || res <= 0.0) {
        throw Error(ErrorCode::kCorruptHeader,
                    "expected '#resolution <seconds>' with positive value",
                    "", line_no);
      }
      set.resolution_sec = res;
      have_header = true;
      return;
    }
    if (t.front() == '#') return;
    if (!have_header) {
      throw Error(ErrorCode::kCorruptHeader,
                  "frame-score data before '#resolution' header", "", line_no);
    }
    const auto fields = SplitFields(t);
    if (fields.size() < 2) {
      throw Error(ErrorCode::kMalformedLine,
                  "expected '<utt-id> <s1> ... <sN>' with at least one score",
                  "", line_no);
    }
    std::string utt_id(fields[0]);
    std::vector<double> scores;
    scores.reserve(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      scores.push_back(ParseFiniteScore(fields[i], line_no));
    }
    if (!set.utts.emplace(utt_id, std::move(scores)).second) {
      throw Error(ErrorCode::kDuplicateUtterance, "duplicate utterance id",
                  utt_id, line_no);
    }
    set.utt_order.push_back(std::move(utt_id));
  });
  if (set.utts.empty()) {
    throw Error(ErrorCode::kEmptyInput, "frame-score file has no entries");
  }
  return set;
}

std::string SerializeFrameScores(const FrameScoreSet& set) {
  std::string out = "#resolution " + FormatDouble(set.resolution_sec) + "\n";
  for (const auto& utt_id : set.utt_order) {
    out += utt_id;
    for (const double s : set.utts.at(utt_id)) {
      out += ' ';
      out += FormatDouble(s);
    }
    out += '\n';
  }
  return out;
}

JoinedScores JoinWithKey(const ScoreSet& scores, const TrialKey& key,
                         bool strict) {
  JoinedScores joined;
  joined.semantics = scores.semantics;
  if (strict) {
    for (const auto& entry : scores.entries) {
      if (!key.Has(entry.utt_id)) {
        throw Error(ErrorCode::kMissingInKey,
                    "scored utterance not present in key", entry.utt_id);
      }
    }
  }
  for (const auto& entry : key.entries) {
    const auto it = scores.index.find(entry.utt_id);
    if (it == scores.index.end()) {
      ++joined.n_unscored_key_entries;
      continue;
    }
    const double s = scores.entries[it->second].score;
    if (entry.label == ClassLabel::kBonafide) {
      joined.bonafide.push_back(s);
    } else {
      joined.spoof.push_back(s);
    }
    ++joined.n_joined;
  }
  joined.n_dropped_scores = scores.entries.size() - joined.n_joined;
  if (joined.bonafide.empty()) {
    throw Error(ErrorCode::kEmptyClass, "no scored bonafide trials");
  }
  if (joined.spoof.empty()) {
    throw Error(ErrorCode::kEmptyClass, "no scored spoof trials");
  }
  return joined;
}

}  // namespace defake
