// Copyright 2026 The taskdv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Small string helpers shared across modules.

#ifndef TASKDV_TEXT_H_
#define TASKDV_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace taskdv {

// Shortest round-trip decimal form that always contains '.', 'e', or is a
// non-finite token, so reals never re-parse as integers.
std::string FormatReal(double d);

std::string AsciiLower(std::string_view s);
std::string_view Trim(std::string_view s);
std::string Join(const std::vector<std::string>& parts, std::string_view sep);

// Splits into lines, each keeping its terminator ("\n" or "\r\n"). A final
// line without terminator is kept as-is; an empty input yields no lines.
std::vector<std::string> SplitLinesKeepEnds(std::string_view text);

// Separates a line into body and terminator.
std::pair<std::string_view, std::string_view> SplitTerminator(
    std::string_view line);

// Lowercase hex SHA-256 digest.
std::string Sha256Hex(std::string_view data);

}  // namespace taskdv

#endif  // TASKDV_TEXT_H_
