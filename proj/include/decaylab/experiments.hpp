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
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "decaylab/error.hpp"
#include "decaylab/golden_rule.hpp"

// Experiment configs are `key = value` text opened by a `[name]` header
// line, e.g.
//
//   [fgr]
//   seed = 7
//   M = 201
//   v = 0.01
//
// Every key has a default, so the header alone is a valid config. Golden-rule
// experiments also accept `coupling m channel v_re v_im` lines (one per level)
// or `model = path` naming a model file.

namespace decaylab {

const std::vector<std::string>& experiment_names();

struct ConfigEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;  // 0 when the default was used
};

struct ExperimentConfig {
  std::string experiment;
  std::vector<ConfigEntry> entries;  // schema order, defaults filled in
  std::vector<Coupling> couplings;   // inline coupling lines, if any

  const std::string& text(const std::string& key) const;
  double real(const std::string& key) const;
  std::uint64_t integer(const std::string& key) const;
  std::vector<std::uint64_t> integers(const std::string& key) const;
  bool flag(const std::string& key) const;
  /// True for `auto` values of optional numeric keys.
  bool is_auto(const std::string& key) const;

  std::uint64_t seed() const { return integer("seed"); }
  const std::string& output_dir() const { return text("output_dir"); }

  /// Replaces a value; the result is re-validated.
  void set(const std::string& key, const std::string& value);
};

/// Carries every problem found, one `line N: ...` message each.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

ExperimentConfig default_config(const std::string& experiment);

/// Strict parse: unknown experiment, unknown or repeated key, malformed
/// value, or a violated module precondition all fail with the complete list.
ExperimentConfig parse_config(const std::string& text);

/// Module preconditions for the parsed values; throws ConfigError.
void validate_config(const ExperimentConfig& config);

/// Canonical text that parses back to the same config.
std::string format_config(const ExperimentConfig& config);

/// The continuum model described by a golden-rule experiment config.
ModelParameters model_from_config(const ExperimentConfig& config);

struct Artifact {
  std::string file;
  std::string bytes;
};

struct ExperimentResult {
  std::vector<Artifact> artifacts;
  std::vector<std::pair<std::string, std::string>> summary;
};

/// Runs the experiment in memory; nothing touches the file system apart
/// from reading a model file.
ExperimentResult compute_experiment(const ExperimentConfig& config);

struct ArtifactRecord {
  std::string file;
  std::string sha256;
  std::size_t bytes;
};

struct RunManifest {
  ExperimentConfig config;
  std::vector<ArtifactRecord> artifacts;
  std::vector<std::pair<std::string, std::string>> summary;
  std::string version;
  std::string kernel_isa;
  double wall_clock_seconds = 0.0;

  std::string to_json() const;
};

inline constexpr const char* kManifestFile = "manifest.json";

/// Validates, computes, then writes every artifact and manifest.json into
/// output_dir. Nothing is written unless the computation succeeded.
RunManifest run_experiment(const ExperimentConfig& config);

}  // namespace decaylab
