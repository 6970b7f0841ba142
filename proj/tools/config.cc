// tools/config.cc

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

#include "config.h"

#include <algorithm>

#include "defake/error.h"
#include "defake/util.h"

namespace defake {

RunConfig RunConfig::Parse(std::string_view text) {
  RunConfig cfg;
  std::string section;
  ForEachLine(text, [&](std::int64_t line_no, std::string_view raw) {
    const std::string_view line = TrimWhitespace(raw);
    if (line.empty() || line.front() == '#') return;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw Error(ErrorCode::kBadConfig, "malformed section header", "",
                    line_no);
      }
      const std::string_view name =
          TrimWhitespace(line.substr(1, line.size() - 2));
      if (name.empty()) {
        throw Error(ErrorCode::kBadConfig, "empty section name", "", line_no);
      }
      section = std::string(name);
      cfg.sections_[section];  // a section may be present but empty
      return;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kBadConfig,
                  "expected \"key = value\", got \"" + std::string(line) +
                      "\"",
                  "", line_no);
    }
    const std::string_view key = TrimWhitespace(line.substr(0, eq));
    const std::string_view value = TrimWhitespace(line.substr(eq + 1));
    if (key.empty()) {
      throw Error(ErrorCode::kBadConfig, "empty key", "", line_no);
    }
    if (section.empty()) {
      throw Error(ErrorCode::kBadConfig,
                  "key \"" + std::string(key) + "\" appears before any "
                  "[section] header",
                  "", line_no);
    }
    std::vector<Entry>& entries = cfg.sections_[section];
    for (const Entry& e : entries) {
      if (e.key == key) {
        throw Error(ErrorCode::kBadConfig,
                    "duplicate key \"" + std::string(key) + "\" in [" +
                        section + "]",
                    "", line_no);
      }
    }
    entries.push_back({std::string(key), std::string(value)});
  });
  return cfg;
}

RunConfig RunConfig::Load(const std::string& path) {
  if (path.empty()) return {};
  return Parse(ReadFileToString(path));
}

const std::string* RunConfig::Find(std::string_view section,
                                   std::string_view key) const {
  const auto it = sections_.find(section);
  if (it == sections_.end()) return nullptr;
  for (const Entry& e : it->second) {
    if (e.key == key) return &e.value;
  }
  return nullptr;
}

void RunConfig::RequireKnown(
    std::string_view section,
    std::span<const std::string_view> known) const {
  const auto it = sections_.find(section);
  if (it == sections_.end()) return;
  for (const Entry& e : it->second) {
    if (std::find(known.begin(), known.end(), e.key) == known.end()) {
      throw Error(ErrorCode::kBadConfig,
                  "unknown key \"" + e.key + "\" in [" +
                      std::string(section) + "]");
    }
  }
}

}  // namespace defake
