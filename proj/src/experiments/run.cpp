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
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <numbers>

#include "decaylab/csv.hpp"
#include "decaylab/digest.hpp"
#include "decaylab/experiments.hpp"
#include "decaylab/interior.hpp"
#include "decaylab/kernels.hpp"
#include "decaylab/svg_plot.hpp"
#include "decaylab/text_format.hpp"

namespace decaylab {
namespace {

using Summary = std::vector<std::pair<std::string, std::string>>;

// Seed index reserved for the random Hamiltonian of an ensemble run, away
// from the trajectory indices 0..n-1.
constexpr std::uint64_t kHamiltonianStream = ~std::uint64_t{0};

void note(Summary& summary, const std::string& key, double value) {
  summary.emplace_back(key, format_double(value));
}

void note(Summary& summary, const std::string& key, const std::string& value) {
  summary.emplace_back(key, value);
}

std::vector<double> linspace(double hi, std::size_t samples) {
  std::vector<double> out(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    out[k] = hi * static_cast<double>(k) / static_cast<double>(samples - 1);
  }
  return out;
}

bool all_positive(const std::vector<double>& values) {
  return std::all_of(values.begin(), values.end(), [](double v) { return v > 0.0; });
}

std::string format_summary(const Summary& summary) {
  std::string out;
  for (const auto& [key, value] : summary) out += key + " = " + value + "\n";
  return out;
}

void add_plot(ExperimentResult& result, const ExperimentConfig& config,
              const std::vector<PlotSeries>& series, PlotOptions options) {
  if (!config.flag("plot")) return;
  if (options.log_y) {
    for (const auto& s : series) options.log_y = options.log_y && all_positive(s.y);
  }
  if (options.log_x) {
    for (const auto& s : series) options.log_x = options.log_x && all_positive(s.x);
  }
  result.artifacts.push_back({config.experiment + ".svg", render_plot(series, options)});
}

PlotSeries survival_series(const std::string& name, const SurvivalCurve& curve) {
  PlotSeries s{name, {}, {}};
  for (const auto& p : curve) {
    s.x.push_back(p.t);
    s.y.push_back(p.mean);
  }
  return s;
}

// Mean and standard error over cases, accumulated per time point.
struct Accumulator {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  double standard_error() const {
    if (n < 2) return 0.0;
    return std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
  }
};

ExperimentResult run_qze(const ExperimentConfig& c) {
  const auto dim = static_cast<std::size_t>(c.integer("dim"));
  const auto rank = static_cast<std::size_t>(c.integer("rank"));
  const std::uint64_t steps = c.integer("steps");
  const std::uint64_t cases = c.integer("cases");
  const double hbar = c.real("hbar");
  const auto times = linspace(c.real("t"), static_cast<std::size_t>(c.integer("points")));

  std::vector<Accumulator> acc(times.size());
  double worst = 0.0;
  for (std::uint64_t i = 0; i < cases; ++i) {
    RandomStream rng(split_seed(c.seed(), i));
    const CommutingCase cc = random_commuting_case(dim, rank, c.real("norm"), rng);
    acc[0].add(1.0);
    for (std::size_t k = 1; k < times.size(); ++k) {
      const double s =
          compound_survival(cc.lam, cc.rho, cc.hamiltonian, SequencePlan(times[k], steps), hbar);
      worst = std::max(worst, std::abs(s - 1.0));
      acc[k].add(s);
    }
  }
  SurvivalCurve curve;
  for (std::size_t k = 0; k < times.size(); ++k) {
    curve.push_back({times[k], acc[k].mean, acc[k].standard_error()});
  }

  ExperimentResult result;
  result.artifacts.push_back({"qze.csv", format_survival_csv(curve)});
  note(result.summary, "cases", static_cast<double>(cases));
  note(result.summary, "steps", static_cast<double>(steps));
  note(result.summary, "max_deviation_from_one", worst);
  add_plot(result, c, {survival_series("compound survival", curve)},
           {"Zeno limit: commuting state and projector", "t", "survival"});
  return result;
}

ExperimentResult run_compound(const ExperimentConfig& c) {
  const double hbar = c.real("hbar");
  const double t = c.real("t");
  const auto n_values = c.integers("n_values");

  Projector lam = Projector::zero(1);
  DensityOperator rho(Operator::identity(1), Unchecked{});
  Operator h;
  if (c.text("system") == "two_level") {
    const double r = 1.0 / std::sqrt(2.0);
    const std::vector<cplx> plus_x = {r, r};
    lam = Projector(2, std::vector<std::vector<cplx>>{{1.0, 0.0}}, Unchecked{});
    rho = make_density_from_ket(plus_x);
    const double g = c.real("g");
    h = Operator{{0.0, cplx(0.0, -g)}, {cplx(0.0, g), 0.0}};
  } else {
    const auto dim = static_cast<std::size_t>(c.integer("dim"));
    RandomStream rng(split_seed(c.seed(), 0));
    lam = random_projector(dim, static_cast<std::size_t>(c.integer("rank")), rng);
    const Operator u = sample_random_unitary(dim, rng);
    std::vector<cplx> ket(dim);
    for (std::size_t i = 0; i < dim; ++i) ket[i] = u(i, 0);
    rho = make_density_from_ket(ket);
    h = random_hermitian(dim, c.real("norm"), rng);
  }

  const ConvergenceSweep sweep = convergence_sweep(lam, rho, h, t, n_values, hbar);
  CsvTable table{{"N", "survival", "error", "literal"}, {}};
  PlotSeries errors{"|survival - exp(-rate t)|", {}, {}};
  PlotSeries survivals{"survival", {}, {}};
  for (const auto& row : sweep.rows) {
    const double literal = compound_survival(lam, rho, h, SequencePlan(t, row.steps), hbar);
    table.add_row({std::to_string(row.steps), format_double(row.survival), format_double(row.error),
                   format_double(literal)});
    errors.x.push_back(static_cast<double>(row.steps));
    errors.y.push_back(row.error);
    survivals.x.push_back(static_cast<double>(row.steps));
    survivals.y.push_back(row.survival);
  }

  ExperimentResult result;
  result.artifacts.push_back({"compound.csv", format_csv(table)});
  note(result.summary, "branch", to_string(sweep.branch));
  note(result.summary, "rate", sweep.rate);
  note(result.summary, "non_decaying", sweep.non_decaying ? "true" : "false");
  note(result.summary, "limit", std::exp(-t * sweep.rate));
  for (std::size_t k = 1; k < sweep.rows.size(); ++k) {
    if (sweep.rows[k].error > 0.0) {
      note(result.summary, "error_ratio_" + std::to_string(sweep.rows[k].steps),
           sweep.rows[k - 1].error / sweep.rows[k].error);
    }
  }
  if (all_positive(errors.y)) {
    add_plot(result, c, {errors}, {"Convergence to the continuous limit", "N", "error", true, true});
  } else {
    add_plot(result, c, {survivals}, {"Compound survival", "N", "survival", true, false});
  }
  return result;
}

ExperimentResult run_ensemble(const ExperimentConfig& c) {
  InteriorEnsembleConfig ec;
  ec.dim = static_cast<std::size_t>(c.integer("dim"));
  ec.undecayed_rank = static_cast<std::size_t>(c.integer("rank"));
  ec.mode = parse_ensemble_mode(c.text("mode"));
  ec.update_policy = parse_update_policy(c.text("policy"));
  ec.drift_strength = c.real("gamma");
  ec.hbar = c.real("hbar");
  ec.seed = c.seed();
  if (c.text("hamiltonian") == "random") {
    RandomStream rng(split_seed(c.seed(), kHamiltonianStream));
    ec.hamiltonian = random_hermitian(ec.dim, c.real("norm"), rng);
  }
  const double t = c.real("t");
  const SequencePlan plan(t, c.integer("steps"));
  const SurvivalCurve curve =
      ensemble_survival(ec, plan, c.integer("trajectories"),
                        static_cast<std::size_t>(c.integer("workers")));
  const FitWindow fallback = default_fit_window(t);
  const FitWindow window{c.is_auto("fit_t_min") ? fallback.t_min : c.real("fit_t_min"),
                         c.is_auto("fit_t_max") ? fallback.t_max : c.real("fit_t_max")};
  const ExponentialFit fit = fit_exponential(curve, window);

  ExperimentResult result;
  result.artifacts.push_back({"ensemble.csv", format_survival_csv(curve)});
  note(result.summary, "fitted_rate", fit.rate);
  note(result.summary, "tau", fit.tau);
  note(result.summary, "rms_log_residual", fit.rms_log_residual);
  note(result.summary, "fit_t_min", fit.window.t_min);
  note(result.summary, "fit_t_max", fit.window.t_max);
  note(result.summary, "fit_points", static_cast<double>(fit.points));
  // Rate read off the first interaction alone versus the average over the
  // whole sequence; they agree when the per-step loss is homogeneous.
  note(result.summary, "first_step_rate", (1.0 - curve[1].mean) / plan.step());
  note(result.summary, "sequence_average_rate",
       curve.back().mean > 0.0 ? -std::log(curve.back().mean) / t
                               : std::numeric_limits<double>::infinity());
  note(result.summary, "final_survival", curve.back().mean);
  note(result.summary, "final_standard_error", curve.back().standard_error);

  PlotSeries model{"exp(fit)", {}, {}};
  for (const auto& p : curve) {
    model.x.push_back(p.t);
    model.y.push_back(std::exp(fit.intercept - fit.rate * p.t));
  }
  add_plot(result, c, {survival_series("ensemble mean", curve), model},
           {"Ensemble survival", "t", "survival", false, true});
  return result;
}

ExperimentResult run_fgr(const ExperimentConfig& c) {
  const ContinuumModel model(model_from_config(c));
  const RateEstimate formula = fgr_rate(model);
  const ExactDynamics dynamics(model);
  const auto times = linspace(c.real("fit_t_max"), static_cast<std::size_t>(c.integer("samples")));
  const SurvivalCurve exact = dynamics.survival_curve(times);
  const ExponentialFit fit = fit_exponential(exact, {c.real("fit_t_min"), c.real("fit_t_max")});

  CsvTable table{{"t", "exact", "formula"}, {}};
  PlotSeries golden{"exp(-rate t)", {}, {}};
  for (const auto& p : exact) {
    const double predicted = std::exp(-formula.rate * p.t);
    table.add_row({p.t, p.mean, predicted});
    golden.x.push_back(p.t);
    golden.y.push_back(predicted);
  }

  ExperimentResult result;
  result.artifacts.push_back({"fgr.csv", format_csv(table)});
  note(result.summary, "formula_rate", formula.rate);
  note(result.summary, "fitted_rate", fit.rate);
  note(result.summary, "relative_difference",
       formula.rate > 0.0 ? std::abs(fit.rate - formula.rate) / formula.rate
                          : std::numeric_limits<double>::infinity());
  note(result.summary, "fit_t_min", fit.window.t_min);
  note(result.summary, "fit_t_max", fit.window.t_max);
  note(result.summary, "fit_points", static_cast<double>(fit.points));
  note(result.summary, "rms_log_residual", fit.rms_log_residual);
  for (const auto& [key, value] : formula.diagnostics) note(result.summary, key, value);
  note(result.summary, "energy_variance", short_time_coefficients(model).variance);
  note(result.summary, "heisenberg_time",
       2.0 * std::numbers::pi * model.hbar() * model.density_of_states());
  add_plot(result, c, {survival_series("exact", exact), golden},
           {"Exact survival against the golden-rule rate", "t", "survival", false, true});
  return result;
}

ExperimentResult run_channels(const ExperimentConfig& c) {
  const ContinuumModel model(model_from_config(c));
  const auto rates = channel_rates(model, ChannelPartition::from_model(model));
  const RateEstimate total = fgr_rate(model);

  CsvTable table{{"channel", "rate", "levels", "density_of_states", "below_resonance",
                  "separation_residual"},
                 {}};
  std::vector<double> values;
  double sum = 0.0;
  for (const auto& r : rates) {
    const auto& d = r.estimate;
    table.add_row({r.label, format_double(d.rate), format_double(d.diagnostic("levels")),
                   format_double(d.diagnostic("density_of_states")),
                   format_double(d.diagnostic("below_resonance")),
                   format_double(d.diagnostic("separation_residual"))});
    values.push_back(d.rate);
    sum += d.rate;
  }

  CsvTable curve{{"t", "product", "summed"}, {}};
  PlotSeries product{"product of channel exponentials", {}, {}};
  PlotSeries summed{"exp(-t sum of rates)", {}, {}};
  double worst = 0.0;
  for (const double t : linspace(c.real("t_max"), static_cast<std::size_t>(c.integer("samples")))) {
    const double p = multi_channel_survival(values, t);
    const double s = std::exp(-t * sum);
    worst = std::max(worst, std::abs(p - s));
    curve.add_row({t, p, s});
    product.x.push_back(t);
    product.y.push_back(p);
    summed.x.push_back(t);
    summed.y.push_back(s);
  }

  ExperimentResult result;
  result.artifacts.push_back({"channels.csv", format_csv(table)});
  result.artifacts.push_back({"channels_survival.csv", format_csv(curve)});
  for (const auto& r : rates) note(result.summary, "rate_" + r.label, r.estimate.rate);
  note(result.summary, "sum_of_channel_rates", sum);
  note(result.summary, "total_rate", total.rate);
  note(result.summary, "additivity_residual", std::abs(sum - total.rate));
  note(result.summary, "product_vs_summed_max", worst);
  add_plot(result, c, {product, summed},
           {"Two-channel survival", "t", "survival", false, true});
  return result;
}

double lorentzian(const LorentzianFit& fit, double e) {
  const double h = 0.5 * fit.fwhm;
  return fit.amplitude * h * h / ((e - fit.center) * (e - fit.center) + h * h);
}

ExperimentResult run_lineshape(const ExperimentConfig& c) {
  const ContinuumModel model(model_from_config(c));
  const double t = c.real("t");
  const ExactDynamics dynamics(model);
  const auto points = dynamics.lineshape(t);
  const LorentzianFit fit = fit_lorentzian(points);
  const double survival = dynamics.survival(t);
  const RateEstimate formula = fgr_rate(model);

  CsvTable table{{"E", "population", "lorentzian"}, {}};
  PlotSeries data{"populations", {}, {}};
  PlotSeries fitted{"Lorentzian fit", {}, {}};
  double total = 0.0;
  for (const auto& p : points) {
    const double l = lorentzian(fit, p.energy);
    table.add_row({p.energy, p.population, l});
    total += p.population;
    data.x.push_back(p.energy);
    data.y.push_back(p.population);
    fitted.x.push_back(p.energy);
    fitted.y.push_back(l);
  }
  const double width = model.hbar() * formula.rate;

  ExperimentResult result;
  result.artifacts.push_back({"lineshape.csv", format_csv(table)});
  note(result.summary, "center", fit.center);
  note(result.summary, "fwhm", fit.fwhm);
  note(result.summary, "amplitude", fit.amplitude);
  note(result.summary, "rms_residual", fit.rms_residual);
  note(result.summary, "iterations", static_cast<double>(fit.iterations));
  note(result.summary, "golden_rule_width", width);
  note(result.summary, "fwhm_ratio", width > 0.0 ? fit.fwhm / width
                                                 : std::numeric_limits<double>::infinity());
  note(result.summary, "survival", survival);
  note(result.summary, "population_sum", total);
  note(result.summary, "probability_residual", std::abs(total + survival - 1.0));
  add_plot(result, c, {data, fitted}, {"Final-state line shape", "E", "population"});
  return result;
}

ExperimentResult run_contrast(const ExperimentConfig& c) {
  const ContinuumModel model(model_from_config(c));
  const RateEstimate formula = fgr_rate(model);
  const ShortTimeCoefficients moments = short_time_coefficients(model);
  const double hbar = model.hbar();
  const auto times = linspace(c.real("t_max"), static_cast<std::size_t>(c.integer("samples")));
  const SurvivalCurve exact = exact_survival(model, times);

  CsvTable table{{"t", "exact", "exponential", "quadratic"}, {}};
  PlotSeries exponential{"exp(-rate t)", {}, {}};
  PlotSeries quadratic{"1 - var t^2 / hbar^2", {}, {}};
  for (const auto& p : exact) {
    const double e = std::exp(-formula.rate * p.t);
    const double q = 1.0 - moments.variance * p.t * p.t / (hbar * hbar);
    table.add_row({p.t, p.mean, e, q});
    exponential.x.push_back(p.t);
    exponential.y.push_back(e);
    if (q > 0.0) {
      quadratic.x.push_back(p.t);
      quadratic.y.push_back(q);
    }
  }

  ExperimentResult result;
  result.artifacts.push_back({"contrast.csv", format_csv(table)});
  note(result.summary, "formula_rate", formula.rate);
  note(result.summary, "energy_variance", moments.variance);
  note(result.summary, "zeno_time",
       moments.variance > 0.0 ? hbar / std::sqrt(moments.variance)
                              : std::numeric_limits<double>::infinity());
  std::vector<PlotSeries> series = {survival_series("exact", exact), exponential};
  if (!quadratic.x.empty()) series.push_back(quadratic);
  add_plot(result, c, series, {"Short-time and exponential regimes", "t", "survival"});
  return result;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out.flush()) throw Error(ErrorKind::io, "write to '" + path.string() + "' failed");
}

// Writes every file under a temporary name first and renames only once all
// writes succeeded.
void write_all(const std::filesystem::path& dir, const std::vector<Artifact>& files) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(ErrorKind::io, "cannot create output directory '" + dir.string() + "'");
  }
  std::vector<fs::path> staged;
  try {
    for (const auto& f : files) {
      staged.push_back(dir / (f.file + ".partial"));
      write_file(staged.back(), f.bytes);
    }
    for (std::size_t i = 0; i < files.size(); ++i) {
      fs::rename(staged[i], dir / files[i].file);
    }
  } catch (const fs::filesystem_error& e) {
    for (const auto& p : staged) fs::remove(p, ec);
    throw Error(ErrorKind::io, e.what());
  } catch (...) {
    for (const auto& p : staged) fs::remove(p, ec);
    throw;
  }
}

}  // namespace

ExperimentResult compute_experiment(const ExperimentConfig& config) {
  validate_config(config);
  const std::string& name = config.experiment;
  ExperimentResult result;
  if (name == "qze") {
    result = run_qze(config);
  } else if (name == "compound") {
    result = run_compound(config);
  } else if (name == "ensemble") {
    result = run_ensemble(config);
  } else if (name == "fgr") {
    result = run_fgr(config);
  } else if (name == "channels") {
    result = run_channels(config);
  } else if (name == "lineshape") {
    result = run_lineshape(config);
  } else {
    result = run_contrast(config);
  }
  result.artifacts.push_back({"summary.txt", format_summary(result.summary)});
  return result;
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json doc;
  doc["tool"] = "decaylab";
  doc["version"] = version;
  doc["experiment"] = config.experiment;
  doc["seed"] = config.seed();
  nlohmann::ordered_json echo = nlohmann::ordered_json::object();
  for (const auto& e : config.entries) echo[e.key] = e.value;
  if (!config.couplings.empty()) echo["coupling_lines"] = config.couplings.size();
  doc["config"] = echo;
  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  for (const auto& a : artifacts) {
    files.push_back({{"file", a.file}, {"sha256", a.sha256}, {"bytes", a.bytes}});
  }
  doc["artifacts"] = files;
  nlohmann::ordered_json results = nlohmann::ordered_json::object();
  for (const auto& [key, value] : summary) results[key] = value;
  doc["summary"] = results;
  doc["digest_algorithm"] = "sha256";
  doc["kernel_isa"] = kernel_isa;
  doc["wall_clock_seconds"] = wall_clock_seconds;
  return doc.dump(2) + "\n";
}

RunManifest run_experiment(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentResult result = compute_experiment(config);

  RunManifest manifest;
  manifest.config = config;
  manifest.summary = result.summary;
  manifest.version = DECAYLAB_VERSION;
  manifest.kernel_isa = std::string(kernels::isa_name(kernels::active().isa));
  for (const auto& a : result.artifacts) {
    manifest.artifacts.push_back({a.file, sha256_hex(a.bytes), a.bytes.size()});
  }
  manifest.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.artifacts.push_back({kManifestFile, manifest.to_json()});
  write_all(config.output_dir(), result.artifacts);
  return manifest;
}

}  // namespace decaylab
