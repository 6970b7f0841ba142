// core/include/defake/corpus.h

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

// Trial keys, score sets, segment annotations and frame-score sets, with
// text parsers and serializers.  All formats are line-oriented: fields are
// separated by runs of spaces or tabs, lines starting with '#' are comments
// (except the "#resolution" header of frame-score files), and blank lines
// are skipped.  Serializers preserve container order; parse(serialize(x))
// is the identity on every value the validators accept.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace defake {

enum class ClassLabel : std::uint8_t { kBonafide = 0, kSpoof = 1 };

const char* ClassLabelName(ClassLabel label);

// What the numbers in a score file mean.  Detector outputs are kRaw;
// kPosterior is a probability of bonafide in [0, 1]; kLlr is a
// log-likelihood ratio with bonafide as numerator, so larger always means
// more bonafide.  Cost-model metrics that interpret scores as LLRs refuse
// anything not tagged kLlr.
enum class ScoreSemantics : std::uint8_t { kRaw = 0, kPosterior = 1, kLlr = 2 };

const char* ScoreSemanticsName(ScoreSemantics semantics);

// Mapping from utterance id to reference class.  Entries keep file order;
// `index` maps id to its position in `entries`.
struct TrialKey {
  struct Entry {
    std::string utt_id;
    ClassLabel label;
  };
  std::vector<Entry> entries;
  std::unordered_map<std::string, std::size_t> index;

  bool Has(std::string_view utt_id) const;
  ClassLabel LabelOf(std::string_view utt_id) const;  // throws kMissingInKey
};

// Lines: "<utt-id> <label>" with label in {bonafide, spoof}.
TrialKey ParseTrialKey(std::string_view text);
std::string SerializeTrialKey(const TrialKey& key);

// One score per utterance.  Semantics is carried alongside the data and is
// assigned by the caller, not stored in the file.
struct ScoreSet {
  struct Entry {
    std::string utt_id;
    double score;
  };
  std::vector<Entry> entries;
  std::unordered_map<std::string, std::size_t> index;
  ScoreSemantics semantics = ScoreSemantics::kRaw;

  bool Has(std::string_view utt_id) const;
  double ScoreOf(std::string_view utt_id) const;  // throws kMissingInKey
};

// Lines: "<utt-id> <float>".  Scores must be finite; posteriors must also
// lie in [0, 1].
ScoreSet ParseScoreSet(std::string_view text,
                       ScoreSemantics semantics = ScoreSemantics::kRaw);
std::string SerializeScoreSet(const ScoreSet& scores);

// Time span with a label from the annotation's vocabulary.  Times are
// seconds from utterance start.
struct Segment {
  double start_sec = 0.0;
  double end_sec = 0.0;
  std::string label;
};

struct UttSegments {
  std::vector<Segment> segments;       // sorted by start after validation
  double total_duration_sec = 0.0;     // == end of the last segment
};

// Per-utterance segment annotations.  Validation sorts each utterance's
// segments and requires them to tile [0, total_duration] exactly: no
// overlaps, no gaps beyond the float tolerance of 1e-6 s.
struct SegmentAnnotationSet {
  std::vector<std::string> utt_order;  // first-appearance order
  std::unordered_map<std::string, UttSegments> utts;
  std::vector<std::string> vocab;

  bool Has(std::string_view utt_id) const;
  const UttSegments& SegmentsOf(std::string_view utt_id) const;
};

// Lines: "<utt-id> <start-sec> <end-sec> <label>".  Segments of one
// utterance may be scattered through the file; validation runs per
// utterance once the whole file is read.
SegmentAnnotationSet ParseSegmentAnnotations(
    std::string_view text,
    std::vector<std::string> vocab = {"bonafide", "spoof"});
std::string SerializeSegmentAnnotations(const SegmentAnnotationSet& set);

// Fixed-rate frame scores, one utterance per row.  File starts with the
// header "#resolution <seconds>".
struct FrameScoreSet {
  double resolution_sec = 0.0;
  std::vector<std::string> utt_order;
  std::unordered_map<std::string, std::vector<double>> utts;

  bool Has(std::string_view utt_id) const;
};

// Lines: header, then "<utt-id> <s1> <s2> ... <sN>".
FrameScoreSet ParseFrameScores(std::string_view text);
std::string SerializeFrameScores(const FrameScoreSet& set);

// Scores joined against a key and split by reference class, in key order.
struct JoinedScores {
  std::vector<double> bonafide;
  std::vector<double> spoof;
  ScoreSemantics semantics = ScoreSemantics::kRaw;
  std::size_t n_joined = 0;
  std::size_t n_dropped_scores = 0;        // scored ids absent from the key
  std::size_t n_unscored_key_entries = 0;  // key ids without a score
};

// Strict join (the default) requires every scored utterance to be present
// in the key and raises MissingInKey for the first one that is not.
// Lenient join keeps the intersection and counts what it dropped.  Both
// refuse to return an empty class (EmptyClass): metrics over one class are
// meaningless.  Unscored key entries are allowed in either mode and only
// counted.
JoinedScores JoinWithKey(const ScoreSet& scores, const TrialKey& key,
                         bool strict = true);

}  // namespace defake
