// core/include/defake/util.h

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
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace defake {

// Locale-independent float formatting: shortest decimal string that parses
// back to the identical double (std::to_chars round-trip guarantee).
std::string FormatDouble(double value);

// Locale-independent parses.  Return false unless the whole token is
// consumed.  ParseDouble accepts "inf"/"-inf"/"nan" like std::from_chars.
bool ParseDouble(std::string_view token, double* value);
bool ParseInt(std::string_view token, std::int64_t* value);

std::string_view TrimWhitespace(std::string_view s);

// Splits on runs of spaces and tabs; never yields empty fields.
std::vector<std::string_view> SplitFields(std::string_view line);

// Calls fn(line_number, line) for every line of text, 1-based, with both
// "\n" and "\r\n" endings handled.  The final line needs no terminator.
void ForEachLine(std::string_view text,
                 const std::function<void(std::int64_t, std::string_view)>& fn);

// Whole-file IO.  Both throw Error(kIoError) on failure.  WriteFileAtomic
// stages to a temporary in the same directory and renames into place, so a
// reader never observes a half-written file.
std::string ReadFileToString(const std::string& path);
void WriteFileAtomic(const std::string& path, std::string_view content);

// Runs fn(i) for i in [0, n) on up to `jobs` threads.  Items are claimed
// from a shared counter; fn must be safe to call concurrently for distinct
// i.  The first exception thrown by any worker is rethrown on the caller.
void ParallelFor(std::int64_t n, int jobs,
                 const std::function<void(std::int64_t)>& fn);

}  // namespace defake
