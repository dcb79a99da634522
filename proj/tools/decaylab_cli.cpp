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

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "decaylab/error.hpp"
#include "decaylab/experiments.hpp"

namespace {

constexpr const char* kExitStatuses =
    "Exit status:\n"
    "  0  success\n"
    "  2  configuration error (bad file, unknown key, malformed or out-of-range value)\n"
    "  3  numerical validation error (non-Hermitian input, rank deficiency, ill conditioning)\n"
    "  4  I/O error (unreadable config or model, unwritable output directory)\n"
    "  5  non-convergence (fit did not converge)\n";

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw decaylab::Error(decaylab::ErrorKind::io, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Options {
  std::string config_path;
  std::string out;
  std::uint64_t seed = 0;
  bool print_config = false;
};

int run(const std::string& name, const Options& opts, const CLI::App& sub) {
  decaylab::ExperimentConfig config;
  if (opts.config_path.empty()) {
    config = decaylab::default_config(name);
    decaylab::validate_config(config);
  } else {
    config = decaylab::parse_config(read_text(opts.config_path));
    if (config.experiment != name) {
      throw decaylab::ConfigError({"config is for experiment '" + config.experiment +
                                   "' but the command was '" + name + "'"});
    }
  }
  if (sub.count("--seed") > 0) config.set("seed", std::to_string(opts.seed));
  if (sub.count("--out") > 0) config.set("output_dir", opts.out);
  if (opts.print_config) {
    std::cout << decaylab::format_config(config);
    return 0;
  }

  const decaylab::RunManifest manifest = decaylab::run_experiment(config);
  for (const auto& [key, value] : manifest.summary) std::cout << key << " = " << value << "\n";
  std::cout << "wrote " << manifest.artifacts.size() + 1 << " files to " << config.output_dir()
            << " in " << manifest.wall_clock_seconds << " s\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decaylab: compound measurement, stochastic interior and golden-rule experiments"};
  app.footer(kExitStatuses);
  app.set_version_flag("--version", std::string("decaylab ") + DECAYLAB_VERSION);
  app.require_subcommand(1);

  Options opts;
  std::string chosen;
  const std::map<std::string, std::string> descriptions = {
      {"qze", "compound survival for commuting state, projector and Hamiltonian"},
      {"compound", "convergence of (1 - delta rate)^N to exp(-rate t)"},
      {"ensemble", "stochastic interior ensemble survival and exponential fit"},
      {"fgr", "golden-rule rate against exact dynamics of a discretized continuum"},
      {"channels", "per-channel golden-rule rates and their additivity"},
      {"lineshape", "final-state populations and Lorentzian fit"},
      {"contrast", "exact survival against exponential and short-time quadratic forms"},
  };
  for (const auto& name : decaylab::experiment_names()) {
    CLI::App* sub = app.add_subcommand(name, descriptions.at(name));
    sub->add_option("--config", opts.config_path, "experiment config file ([" + name + "] header)");
    sub->add_option("--seed", opts.seed, "seed, overrides the config");
    sub->add_option("--out", opts.out, "output directory, overrides the config");
    sub->add_flag("--print-config", opts.print_config, "print the resolved config and exit");
    sub->footer(kExitStatuses);
    sub->callback([&chosen, name] { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : decaylab::exit_status(decaylab::ErrorKind::config);
  }

  try {
    return run(chosen, opts, *app.get_subcommand(chosen));
  } catch (const decaylab::Error& e) {
    std::cerr << "decaylab: " << decaylab::to_string(e.kind()) << ": " << e.what() << "\n";
    return decaylab::exit_status(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "decaylab: internal error: " << e.what() << "\n";
    return 1;
  }
}
