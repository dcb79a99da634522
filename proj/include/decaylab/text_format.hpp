// Copyright 2026 The decaylab Authors
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

#pragma once

#include <cstddef>
#include <string>
#include <vector>

// Line-oriented `key = value` text shared by model files and experiment
// configs. `#` starts a comment; blank lines are ignored.

namespace decaylab {

struct TextLine {
  std::size_t number;  // 1-based
  std::string text;    // comment stripped, trimmed
};

std::vector<TextLine> significant_lines(const std::string& text);
std::string trim(const std::string& s);
std::vector<std::string> split_words(const std::string& s);

/// Parses a decimal double, rejecting trailing garbage and non-finite values.
bool parse_double(const std::string& text, double& out);
bool parse_unsigned(const std::string& text, unsigned long long& out);

/// "%.17g"
std::string format_double(double value);

}  // namespace decaylab
