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

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "decaylab/experiments.hpp"
#include "decaylab/interior.hpp"
#include "decaylab/text_format.hpp"

namespace decaylab {
namespace {

enum class Kind {
  real,          // any finite number
  positive,      // > 0
  non_negative,  // >= 0
  count,         // integer >= 1
  index,         // integer >= 0
  count_list,    // comma separated, integers >= 1
  flag,          // true / false
  choice,        // one of `choices`
  path,          // free text, may be empty
  window,        // `auto` or a number >= 0
};

struct Field {
  const char* key;
  const char* fallback;
  Kind kind;
  std::vector<std::string> choices = {};
};

std::vector<Field> common_fields() {
  return {{"seed", "0", Kind::index},
          {"output_dir", "decaylab-out", Kind::path},
          {"plot", "true", Kind::flag}};
}

std::vector<Field> model_fields(const char* levels) {
  return {{"model", "", Kind::path},      {"E_i", "0", Kind::real},
          {"W", "2", Kind::positive},     {"M", levels, Kind::count},
          {"hbar", "1", Kind::positive}};
}

const std::map<std::string, std::vector<Field>>& schemas() {
  static const auto table = [] {
    std::map<std::string, std::vector<Field>> out;
    auto with_common = [](std::vector<Field> fields) {
      auto all = common_fields();
      all.insert(all.end(), fields.begin(), fields.end());
      return all;
    };
    auto with_model = [&](const char* levels, std::vector<Field> extra) {
      auto fields = model_fields(levels);
      fields.insert(fields.end(), extra.begin(), extra.end());
      return with_common(std::move(fields));
    };
    out["qze"] = with_common({{"dim", "8", Kind::count},
                              {"rank", "4", Kind::count},
                              {"norm", "1", Kind::positive},
                              {"hbar", "1", Kind::positive},
                              {"t", "10", Kind::positive},
                              {"steps", "1000000", Kind::count},
                              {"cases", "100", Kind::count},
                              {"points", "11", Kind::count}});
    out["compound"] =
        with_common({{"system", "two_level", Kind::choice, {"two_level", "random"}},
                     {"g", "0.25", Kind::real},
                     {"dim", "4", Kind::count},
                     {"rank", "1", Kind::count},
                     {"norm", "1", Kind::positive},
                     {"hbar", "1", Kind::positive},
                     {"t", "1", Kind::positive},
                     {"n_values", "10,100,1000,10000,100000,1000000", Kind::count_list}});
    out["ensemble"] =
        with_common({{"dim", "2", Kind::count},
                     {"rank", "1", Kind::count},
                     {"mode", "drift", Kind::choice, {"drift", "iid"}},
                     {"policy", "luders", Kind::choice, {"luders", "resample"}},
                     {"gamma", "0.2", Kind::non_negative},
                     {"hamiltonian", "zero", Kind::choice, {"zero", "random"}},
                     {"norm", "1", Kind::positive},
                     {"hbar", "1", Kind::positive},
                     {"t", "1", Kind::positive},
                     {"steps", "1000", Kind::count},
                     {"trajectories", "2000", Kind::count},
                     {"fit_t_min", "auto", Kind::window},
                     {"fit_t_max", "auto", Kind::window},
                     {"workers", "0", Kind::index}});
    out["fgr"] = with_model("201", {{"v", "0.01", Kind::real},
                                    {"fit_t_min", "5", Kind::non_negative},
                                    {"fit_t_max", "40", Kind::positive},
                                    {"samples", "141", Kind::count}});
    out["channels"] = with_model("402", {{"v_k", "0.01", Kind::real},
                                         {"v_l", "0.02", Kind::real},
                                         {"t_max", "50", Kind::positive},
                                         {"samples", "101", Kind::count}});
    out["lineshape"] = with_model("201", {{"v", "0.01", Kind::real},
                                          {"t", "60", Kind::non_negative}});
    out["contrast"] = with_model("201", {{"v", "0.01", Kind::real},
                                         {"t_max", "40", Kind::positive},
                                         {"samples", "201", Kind::count}});
    return out;
  }();
  return table;
}

const std::vector<Field>& schema(const std::string& experiment) {
  const auto it = schemas().find(experiment);
  if (it == schemas().end()) {
    throw ConfigError({"unknown experiment '" + experiment + "'"});
  }
  return it->second;
}

bool uses_model(const std::string& experiment) {
  return experiment == "fgr" || experiment == "channels" || experiment == "lineshape" ||
         experiment == "contrast";
}

std::string where(std::size_t line) {
  return line == 0 ? std::string("default: ") : "line " + std::to_string(line) + ": ";
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) items.push_back(trim(item));
  return items;
}

// Empty on success, otherwise the reason the value does not fit the field.
std::string check_value(const Field& field, const std::string& value) {
  double x = 0.0;
  unsigned long long n = 0;
  switch (field.kind) {
    case Kind::real:
      return parse_double(value, x) ? "" : "malformed number";
    case Kind::positive:
      if (!parse_double(value, x)) return "malformed number";
      return x > 0.0 ? "" : "must be positive";
    case Kind::non_negative:
      if (!parse_double(value, x)) return "malformed number";
      return x >= 0.0 ? "" : "must be >= 0";
    case Kind::window:
      if (value == "auto") return "";
      if (!parse_double(value, x)) return "malformed number (or `auto`)";
      return x >= 0.0 ? "" : "must be >= 0";
    case Kind::count:
      if (!parse_unsigned(value, n)) return "must be a positive integer";
      return n >= 1 ? "" : "must be a positive integer";
    case Kind::index:
      return parse_unsigned(value, n) ? "" : "must be a non-negative integer";
    case Kind::count_list: {
      const auto items = split_list(value);
      if (items.empty()) return "must list positive integers";
      for (const auto& item : items) {
        if (!parse_unsigned(item, n) || n == 0) return "must list positive integers";
      }
      return "";
    }
    case Kind::flag:
      return value == "true" || value == "false" ? "" : "must be true or false";
    case Kind::choice:
      if (std::find(field.choices.begin(), field.choices.end(), value) != field.choices.end()) {
        return "";
      } else {
        std::string list;
        for (const auto& c : field.choices) list += (list.empty() ? "" : ", ") + c;
        return "must be one of " + list;
      }
    case Kind::path:
      return "";
  }
  return "";
}

const ConfigEntry* find_entry(const ExperimentConfig& config, const std::string& key) {
  for (const auto& e : config.entries) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

// Problems with module preconditions that span several keys.
std::vector<std::string> cross_checks(const ExperimentConfig& c) {
  std::vector<std::string> problems;
  auto line_of = [&](const std::string& key) { return where(find_entry(c, key)->line); };
  auto guard = [&](const std::string& key, auto&& check) {
    try {
      check();
    } catch (const Error& e) {
      problems.push_back(line_of(key) + key + ": " + e.what());
    }
  };
  const std::string& name = c.experiment;
  if (name == "qze" || name == "compound" || name == "ensemble") {
    if (name != "compound" || c.text("system") == "random") {
      if (c.integer("rank") > c.integer("dim")) {
        problems.push_back(line_of("rank") + "rank: must not exceed dim");
      }
    }
  }
  if (name == "qze") {
    guard("steps", [&] { SequencePlan(c.real("t"), c.integer("steps")); });
    if (c.integer("points") < 2) problems.push_back(line_of("points") + "points: must be >= 2");
  }
  if (name == "compound") {
    const auto n = c.integers("n_values");
    if (!std::is_sorted(n.begin(), n.end()) ||
        std::adjacent_find(n.begin(), n.end()) != n.end()) {
      problems.push_back(line_of("n_values") + "n_values: must be strictly ascending");
    }
  }
  if (name == "ensemble") {
    guard("mode", [&] {
      InteriorEnsembleConfig ec;
      ec.dim = c.integer("dim");
      ec.undecayed_rank = c.integer("rank");
      ec.mode = parse_ensemble_mode(c.text("mode"));
      ec.update_policy = parse_update_policy(c.text("policy"));
      ec.drift_strength = c.real("gamma");
      ec.hbar = c.real("hbar");
      ec.validate();
    });
    const double t = c.real("t");
    const FitWindow fallback = default_fit_window(t);
    const double lo = c.is_auto("fit_t_min") ? fallback.t_min : c.real("fit_t_min");
    const double hi = c.is_auto("fit_t_max") ? fallback.t_max : c.real("fit_t_max");
    if (!(hi > lo) || hi > t) {
      problems.push_back(line_of("fit_t_max") + "fit window must satisfy fit_t_min < fit_t_max <= t");
    }
  }
  if (uses_model(name)) {
    const auto* model_entry = find_entry(c, "model");
    if (!model_entry->value.empty() && !c.couplings.empty()) {
      problems.push_back(where(model_entry->line) +
                         "model: a model file and inline coupling lines are exclusive");
    } else {
      guard("M", [&] { ContinuumModel(model_from_config(c)); });
    }
    if (name == "fgr" && !(c.real("fit_t_max") > c.real("fit_t_min"))) {
      problems.push_back(line_of("fit_t_max") + "fit_t_max: must exceed fit_t_min");
    }
    if (find_entry(c, "samples") && c.integer("samples") < 2) {
      problems.push_back(line_of("samples") + "samples: must be >= 2");
    }
  }
  return problems;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : Error(ErrorKind::config,
            [&] {
              std::string joined;
              for (const auto& p : problems) joined += (joined.empty() ? "" : "\n") + p;
              return joined;
            }()),
      problems_(std::move(problems)) {}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"qze",      "compound",  "ensemble", "fgr",
                                                 "channels", "lineshape", "contrast"};
  return names;
}

const std::string& ExperimentConfig::text(const std::string& key) const {
  const auto* e = find_entry(*this, key);
  if (!e) throw Error(ErrorKind::config, experiment + ": no parameter '" + key + "'");
  return e->value;
}

double ExperimentConfig::real(const std::string& key) const {
  double x = 0.0;
  if (!parse_double(text(key), x)) throw Error(ErrorKind::config, key + ": malformed number");
  return x;
}

std::uint64_t ExperimentConfig::integer(const std::string& key) const {
  unsigned long long n = 0;
  if (!parse_unsigned(text(key), n)) throw Error(ErrorKind::config, key + ": malformed integer");
  return n;
}

std::vector<std::uint64_t> ExperimentConfig::integers(const std::string& key) const {
  std::vector<std::uint64_t> out;
  for (const auto& item : split_list(text(key))) {
    unsigned long long n = 0;
    if (!parse_unsigned(item, n)) throw Error(ErrorKind::config, key + ": malformed integer");
    out.push_back(n);
  }
  return out;
}

bool ExperimentConfig::flag(const std::string& key) const { return text(key) == "true"; }

bool ExperimentConfig::is_auto(const std::string& key) const { return text(key) == "auto"; }

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  for (const auto& field : schema(experiment)) {
    if (field.key != key) continue;
    const std::string problem = check_value(field, value);
    if (!problem.empty()) throw ConfigError({key + ": " + problem + ", got '" + value + "'"});
    for (auto& e : entries) {
      if (e.key == key) {
        e.value = value;
        e.line = 0;
      }
    }
    validate_config(*this);
    return;
  }
  throw ConfigError({"unknown key '" + key + "' for experiment " + experiment});
}

ExperimentConfig default_config(const std::string& experiment) {
  ExperimentConfig config;
  config.experiment = experiment;
  for (const auto& field : schema(experiment)) config.entries.push_back({field.key, field.fallback, 0});
  return config;
}

ExperimentConfig parse_config(const std::string& text) {
  const auto lines = significant_lines(text);
  if (lines.empty()) throw ConfigError({"empty config: expected an [experiment] header line"});
  const TextLine& header = lines.front();
  if (header.text.size() < 3 || header.text.front() != '[' || header.text.back() != ']') {
    throw ConfigError({where(header.number) + "expected an [experiment] header line"});
  }
  const std::string name = trim(header.text.substr(1, header.text.size() - 2));
  if (!schemas().count(name)) {
    throw ConfigError({where(header.number) + "unknown experiment '" + name + "'"});
  }
  ExperimentConfig config = default_config(name);
  const auto& fields = schema(name);

  std::vector<std::string> problems;
  std::set<std::string> seen;
  std::map<std::size_t, std::pair<std::size_t, Coupling>> couplings;  // level -> (line, value)
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const TextLine& line = lines[i];
    const auto words = split_words(line.text);
    if (words.front() == "coupling") {
      if (!uses_model(name)) {
        problems.push_back(where(line.number) + "coupling lines need a golden-rule experiment");
        continue;
      }
      unsigned long long m = 0;
      double re = 0.0;
      double im = 0.0;
      if (words.size() != 5 || !parse_unsigned(words[1], m) || !parse_double(words[3], re) ||
          !parse_double(words[4], im)) {
        problems.push_back(where(line.number) + "expected `coupling m channel v_re v_im`");
      } else if (!couplings.emplace(m, std::make_pair(line.number, Coupling{{re, im}, words[2]}))
                      .second) {
        problems.push_back(where(line.number) + "duplicate coupling for level " + words[1]);
      }
      continue;
    }
    const auto eq = line.text.find('=');
    if (eq == std::string::npos) {
      problems.push_back(where(line.number) + "expected `key = value`");
      continue;
    }
    const std::string key = trim(line.text.substr(0, eq));
    const std::string value = trim(line.text.substr(eq + 1));
    const auto field = std::find_if(fields.begin(), fields.end(),
                                    [&](const Field& f) { return key == f.key; });
    if (field == fields.end()) {
      problems.push_back(where(line.number) + "unknown key '" + key + "' for experiment " + name);
      continue;
    }
    if (!seen.insert(key).second) {
      problems.push_back(where(line.number) + "repeated key '" + key + "'");
      continue;
    }
    const std::string problem = check_value(*field, value);
    if (!problem.empty()) {
      problems.push_back(where(line.number) + key + ": " + problem + ", got '" + value + "'");
      continue;
    }
    for (auto& e : config.entries) {
      if (e.key == key) {
        e.value = value;
        e.line = line.number;
      }
    }
  }

  if (!couplings.empty()) {
    std::size_t expected = 0;
    for (const auto& [m, entry] : couplings) {
      if (m != expected) {
        problems.push_back(where(entry.first) + "missing coupling for level " +
                           std::to_string(expected));
        break;
      }
      config.couplings.push_back(entry.second);
      ++expected;
    }
    for (const auto& e : config.entries) {
      unsigned long long levels = 0;
      if (e.key == "M" && expected == config.couplings.size() && parse_unsigned(e.value, levels) &&
          expected < levels) {
        problems.push_back(where(e.line) + "missing coupling for level " + std::to_string(expected));
      }
    }
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
  validate_config(config);
  return config;
}

void validate_config(const ExperimentConfig& config) {
  std::vector<std::string> problems;
  for (const auto& field : schema(config.experiment)) {
    const auto* e = find_entry(config, field.key);
    if (!e) {
      problems.push_back(std::string("missing required key '") + field.key + "'");
      continue;
    }
    const std::string problem = check_value(field, e->value);
    if (!problem.empty()) problems.push_back(where(e->line) + field.key + ": " + problem);
  }
  if (problems.empty()) problems = cross_checks(config);
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

std::string format_config(const ExperimentConfig& config) {
  std::string out = "[" + config.experiment + "]\n";
  for (const auto& e : config.entries) out += e.key + " = " + e.value + "\n";
  for (std::size_t m = 0; m < config.couplings.size(); ++m) {
    const auto& c = config.couplings[m];
    out += "coupling " + std::to_string(m) + " " + c.channel + " " + format_double(c.value.real()) +
           " " + format_double(c.value.imag()) + "\n";
  }
  return out;
}

ModelParameters model_from_config(const ExperimentConfig& config) {
  if (!uses_model(config.experiment)) {
    throw Error(ErrorKind::config, config.experiment + " does not describe a continuum model");
  }
  const std::string& path = config.text("model");
  if (!path.empty()) return read_model_file(path);

  const auto levels = static_cast<std::size_t>(config.integer("M"));
  const double width = config.real("W");
  ModelParameters params;
  if (!config.couplings.empty()) {
    params.levels = levels;
    params.band_width = width;
    params.couplings = config.couplings;
  } else if (config.experiment == "channels") {
    params = interleaved_model(levels, width, config.real("v_k"), config.real("v_l"));
  } else {
    params = uniform_model(levels, width, config.real("v"));
  }
  params.bound_energy = config.real("E_i");
  params.hbar = config.real("hbar");
  return params;
}

}  // namespace decaylab
