// core/include/defake/error.h

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

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace defake {

// Every failure the library can diagnose.  New codes are appended, never
// reordered, because the CLI prints the symbolic name as part of its output
// contract.
enum class ErrorCode {
  kEmptyInput,
  kMalformedLine,
  kDuplicateUtterance,
  kBadLabel,
  kNonFiniteScore,
  kScoreOutOfRange,
  kEndBeforeStart,
  kOverlappingSegments,
  kCoverageGap,
  kMissingInKey,
  kEmptyClass,
  kUnsupportedFormat,
  kCorruptHeader,
  kSampleRateMismatch,
  kZeroPowerNoise,
  kSemanticsMismatch,
  kWidthMismatch,
  kDegenerateRange,
  kIdSetMismatch,
  kResolutionMismatch,
  kFrameCountMismatch,
  kZeroGlobalMean,
  kNoConvergence,
  kBadConfig,
  kBadArgument,
  kIoError,
};

const char* ErrorCodeName(ErrorCode code);

// Single exception type for the whole library.  Code plus free-form message;
// utterance id and 1-based line number are attached when they are known.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string utt_id = "",
        std::int64_t line = 0);

  ErrorCode code() const noexcept { return code_; }
  const std::string& utt_id() const noexcept { return utt_id_; }
  std::int64_t line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::string utt_id_;
  std::int64_t line_;
};

}  // namespace defake
