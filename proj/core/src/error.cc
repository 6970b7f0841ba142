// core/src/error.cc

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

#include "defake/error.h"

namespace defake {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kDuplicateUtterance: return "DuplicateUtterance";
    case ErrorCode::kBadLabel: return "BadLabel";
    case ErrorCode::kNonFiniteScore: return "NonFiniteScore";
    case ErrorCode::kScoreOutOfRange: return "ScoreOutOfRange";
    case ErrorCode::kEndBeforeStart: return "EndBeforeStart";
    case ErrorCode::kOverlappingSegments: return "OverlappingSegments";
    case ErrorCode::kCoverageGap: return "CoverageGap";
    case ErrorCode::kMissingInKey: return "MissingInKey";
    case ErrorCode::kEmptyClass: return "EmptyClass";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kCorruptHeader: return "CorruptHeader";
    case ErrorCode::kSampleRateMismatch: return "SampleRateMismatch";
    case ErrorCode::kZeroPowerNoise: return "ZeroPowerNoise";
    case ErrorCode::kSemanticsMismatch: return "SemanticsMismatch";
    case ErrorCode::kWidthMismatch: return "WidthMismatch";
    case ErrorCode::kDegenerateRange: return "DegenerateRange";
    case ErrorCode::kIdSetMismatch: return "IdSetMismatch";
    case ErrorCode::kResolutionMismatch: return "ResolutionMismatch";
    case ErrorCode::kFrameCountMismatch: return "FrameCountMismatch";
    case ErrorCode::kZeroGlobalMean: return "ZeroGlobalMean";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kBadConfig: return "BadConfig";
    case ErrorCode::kBadArgument: return "BadArgument";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string Compose(ErrorCode code, const std::string& message,
                    const std::string& utt_id, std::int64_t line) {
  std::string out = ErrorCodeName(code);
  out += ": ";
  if (line > 0) {
    out += "line " + std::to_string(line) + ": ";
  }
  if (!utt_id.empty()) {
    out += "utterance '" + utt_id + "': ";
  }
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::string utt_id,
             std::int64_t line)
    : std::runtime_error(Compose(code, message, utt_id, line)),
      code_(code),
      utt_id_(std::move(utt_id)),
      line_(line) {}

}  // namespace defake
