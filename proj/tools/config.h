// tools/config.h

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

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace defake {

// Line-based run configuration: `[section]` headers followed by
// `key = value` lines.  '#' comments and blank lines are skipped, keys and
// values are trimmed, values keep interior spaces.  Keys outside a section,
// duplicate keys within one, and malformed lines are rejected.  One file
// can hold sections for several subcommands; each subcommand checks only
// its own section against its known keys.
class RunConfig {
 public:
  RunConfig() = default;

  static RunConfig Parse(std::string_view text);  // throws kBadConfig

  // Reads and parses `path`; an empty path yields an empty config.
  static RunConfig Load(const std::string& path);

  // Value of section/key, or nullptr when absent.
  const std::string* Find(std::string_view section,
                          std::string_view key) const;

  // Throws kBadConfig naming the first key in `section` that is not listed
  // in `known`.
  void RequireKnown(std::string_view section,
                    std::span<const std::string_view> known) const;

 private:
  struct Entry {
    std::string key;
    std::string value;
  };
  std::map<std::string, std::vector<Entry>, std::less<>> sections_;
};

}  // namespace defake
