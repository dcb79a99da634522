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

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "decaylab/error.hpp"
#include "decaylab/golden_rule.hpp"
#include "decaylab/text_format.hpp"

namespace decaylab {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& message) {
  throw Error(ErrorKind::config, "line " + std::to_string(line) + ": " + message);
}

}  // namespace

ModelParameters parse_model(const std::string& text) {
  ModelParameters params;
  params.couplings.clear();
  std::map<std::size_t, Coupling> couplings;
  bool have_levels = false;
  for (const auto& line : significant_lines(text)) {
    const auto words = split_words(line.text);
    if (words.front() == "coupling") {
      if (words.size() != 5) fail(line.number, "expected `coupling m channel v_re v_im`");
      unsigned long long m = 0;
      double re = 0.0;
      double im = 0.0;
      if (!parse_unsigned(words[1], m)) fail(line.number, "bad level index '" + words[1] + "'");
      if (!parse_double(words[3], re) || !parse_double(words[4], im)) {
        fail(line.number, "malformed coupling value");
      }
      if (!couplings.emplace(m, Coupling{{re, im}, words[2]}).second) {
        fail(line.number, "duplicate coupling for level " + words[1]);
      }
      continue;
    }
    const auto eq = line.text.find('=');
    if (eq == std::string::npos) fail(line.number, "expected `key = value`");
    const std::string key = trim(line.text.substr(0, eq));
    const std::string value = trim(line.text.substr(eq + 1));
    if (key == "M") {
      unsigned long long m = 0;
      if (!parse_unsigned(value, m)) fail(line.number, "malformed integer for M");
      params.levels = m;
      have_levels = true;
      continue;
    }
    double x = 0.0;
    if (!parse_double(value, x)) fail(line.number, "malformed number for " + key);
    if (key == "E_i") {
      params.bound_energy = x;
    } else if (key == "W") {
      params.band_width = x;
    } else if (key == "hbar") {
      params.hbar = x;
    } else {
      fail(line.number, "unknown key '" + key + "'");
    }
  }
  if (!have_levels) throw Error(ErrorKind::config, "model: missing required key M");
  for (const auto& [m, c] : couplings) {
    if (m != params.couplings.size()) {
      throw Error(ErrorKind::config, "model: missing coupling for level " +
                                         std::to_string(params.couplings.size()));
    }
    params.couplings.push_back(c);
  }
  if (params.couplings.size() != params.levels) {
    throw Error(ErrorKind::config, "model: " + std::to_string(params.couplings.size()) +
                                       " coupling lines for M = " + std::to_string(params.levels));
  }
  return params;
}

ModelParameters read_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open model file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

std::string format_model(const ModelParameters& params) {
  std::ostringstream out;
  out << "E_i = " << format_double(params.bound_energy) << '\n'
      << "W = " << format_double(params.band_width) << '\n'
      << "M = " << params.levels << '\n'
      << "hbar = " << format_double(params.hbar) << '\n';
  for (std::size_t m = 0; m < params.couplings.size(); ++m) {
    const auto& c = params.couplings[m];
    out << "coupling " << m << ' ' << c.channel << ' ' << format_double(c.value.real()) << ' '
        << format_double(c.value.imag()) << '\n';
  }
  return out.str();
}

}  // namespace decaylab
