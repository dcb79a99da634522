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

#include <string>
#include <vector>

#include "decaylab/interior.hpp"

// CSV conventions for every emitted table: one header line, comma separated,
// numbers printed with 17 significant digits, LF line endings.

namespace decaylab {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(const std::vector<double>& values);
  void add_row(std::vector<std::string> cells);
};

std::string format_csv(const CsvTable& table);
CsvTable parse_csv(const std::string& text);

/// Header `t,mean,stderr`.
std::string format_survival_csv(const SurvivalCurve& curve);
SurvivalCurve parse_survival_csv(const std::string& text);

}  // namespace decaylab
