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

#include "decaylab/csv.hpp"

#include <sstream>

#include "decaylab/error.hpp"
#include "decaylab/text_format.hpp"

namespace decaylab {

void CsvTable::add_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (const double v : values) cells.push_back(format_double(v));
  add_row(std::move(cells));
}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header.size()) {
    throw Error(ErrorKind::shape, "csv: row has " + std::to_string(cells.size()) +
                                      " cells, header has " + std::to_string(header.size()));
  }
  rows.push_back(std::move(cells));
}

namespace {

void write_line(std::string& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out += ',';
    out += cells[i];
  }
  out += '\n';
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

std::string format_csv(const CsvTable& table) {
  std::string out;
  write_line(out, table.header);
  for (const auto& row : table.rows) write_line(out, row);
  return out;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_commas(line);
    if (first) {
      table.header = std::move(cells);
      first = false;
    } else {
      table.add_row(std::move(cells));
    }
  }
  if (first) throw Error(ErrorKind::invalid_input, "csv: missing header");
  return table;
}

std::string format_survival_csv(const SurvivalCurve& curve) {
  CsvTable table{{"t", "mean", "stderr"}, {}};
  for (const auto& p : curve) table.add_row({p.t, p.mean, p.standard_error});
  return format_csv(table);
}

SurvivalCurve parse_survival_csv(const std::string& text) {
  const CsvTable table = parse_csv(text);
  if (table.header != std::vector<std::string>{"t", "mean", "stderr"}) {
    throw Error(ErrorKind::invalid_input, "survival csv: header must be t,mean,stderr");
  }
  SurvivalCurve curve;
  for (const auto& row : table.rows) {
    SurvivalPoint p{};
    if (!parse_double(row[0], p.t) || !parse_double(row[1], p.mean) ||
        !parse_double(row[2], p.standard_error)) {
      throw Error(ErrorKind::invalid_input, "survival csv: malformed number");
    }
    curve.push_back(p);
  }
  return curve;
}

}  // namespace decaylab
