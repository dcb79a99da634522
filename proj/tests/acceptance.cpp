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

// Acceptance checks. Prints one PASS/FAIL line per criterion; the exit status
// is nonzero when any selected criterion fails.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "decaylab/experiments.hpp"
#include "decaylab/golden_rule.hpp"
#include "decaylab/interior.hpp"
#include "decaylab/measurement.hpp"

using namespace decaylab;

namespace {

// Tolerances and runtime limits.
constexpr double kQzeTol = 1e-9;
constexpr double kQzeSeconds = 10.0;
constexpr double kLimitTol = 3e-6;
constexpr double kSweepRatioTol = 0.20;
constexpr double kLimitSeconds = 5.0;
constexpr double kRateTol = 1e-6;
constexpr double kResidueTol = 1e-12;
constexpr double kRateSeconds = 5.0;
constexpr double kDriftRate = 0.2;
constexpr double kDriftTol = 0.02;
constexpr double kDriftSeconds = 60.0;
constexpr double kFgrFormula = 0.063146;
constexpr double kFgrArithmeticTol = 1e-12;
constexpr double kFgrFitRelTol = 0.05;
constexpr double kShortTimeTol = 1e-5;
constexpr double kFgrSeconds = 10.0;
constexpr double kAdditivityTol = 1e-12;
constexpr double kProductTol = 1e-15;
constexpr double kChannelSeconds = 1.0;
constexpr double kLineWidthRelTol = 0.15;
constexpr double kProbabilityTol = 1e-10;
constexpr double kLineSeconds = 10.0;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = a + (b - a) * static_cast<double>(k) / (n - 1);
  return out;
}

Outcome qze_limit() {
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    RandomStream rng(split_seed(2026, i));
    const CommutingCase c = random_commuting_case(8, 4, 1.0, rng);
    const double s = compound_survival(c.lam, c.rho, c.hamiltonian, SequencePlan(10.0, 1000000));
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return {worst < kQzeTol, fmt("100 cases, N = 1e6, t = 10: max |S - 1| = %.3g (tol %.0e)", worst, kQzeTol)};
}

Outcome exponential_limit() {
  // rho = |+x>, P = |0><0|, H = 0.25 sigma_y: instantaneous rate 0.25.
  const Projector lam = make_projector({{1.0, 0.0}});
  const DensityOperator rho = make_density_from_ket(std::vector<cplx>{1.0, 1.0});
  const Operator h{{0.0, cplx(0.0, -0.25)}, {cplx(0.0, 0.25), 0.0}};
  const std::vector<std::uint64_t> ns{100, 1000, 10000, 100000, 1000000};
  bool pass = true;
  double worst_limit = 0.0;
  double worst_ratio = 0.0;
  for (const double rt : {0.5, 1.0, 2.0}) {
    const ConvergenceSweep sweep = convergence_sweep(lam, rho, h, rt / 0.25, ns);
    pass = pass && sweep.branch == SweepBranch::idealized;
    worst_limit = std::max(worst_limit, sweep.rows.back().error);
    for (std::size_t k = 1; k < sweep.rows.size(); ++k) {
      const double observed = sweep.rows[k - 1].error / sweep.rows[k].error;
      const double expected = static_cast<double>(ns[k]) / static_cast<double>(ns[k - 1]);
      worst_ratio = std::max(worst_ratio, std::abs(observed / expected - 1.0));
    }
  }
  pass = pass && worst_limit < kLimitTol && worst_ratio < kSweepRatioTol;
  return {pass, fmt("rate*t in {0.5,1,2}, N = 1e6: max error %.3g (tol %.0e); "
                    "worst O(1/N) ratio deviation %.3f (tol %.2f)",
                    worst_limit, kLimitTol, worst_ratio, kSweepRatioTol)};
}

Outcome rate_formula() {
  double worst = 0.0;
  double residue = 0.0;
  RandomStream pick(77);
  for (std::uint64_t i = 0; i < 200; ++i) {
    RandomStream rng(split_seed(31337, i));
    const std::size_t dim = 2 + static_cast<std::size_t>(pick.uniform() * 15);  // 2..16
    const std::size_t rank = 1 + static_cast<std::size_t>(pick.uniform() * (dim - 1));
    const Projector lam = random_projector(dim, std::min(rank, dim - 1), rng);
    const DensityOperator rho = random_density(Projector::zero(dim).complement(), rng);
    const Operator h = random_hermitian(dim, pick.uniform(), rng);
    const RateEstimate formula = instantaneous_rate(lam, rho, h);
    const RateEstimate fd = rate_finite_difference(lam, rho, h, 1e-4);
    worst = std::max(worst, std::abs(formula.rate - fd.rate));
    residue = std::max(residue, formula.diagnostic("imaginary_residue"));
  }
  return {worst < kRateTol && residue < kResidueTol,
          fmt("200 triples, dim <= 16: max |formula - fd| = %.3g (tol %.0e), "
              "max residue %.3g (tol %.0e)",
              worst, kRateTol, residue, kResidueTol)};
}

Outcome continuous_limit() {
  InteriorEnsembleConfig c;
  c.dim = 2;
  c.undecayed_rank = 1;
  c.mode = EnsembleMode::drift;
  c.drift_strength = 0.2;
  c.seed = 2026;
  double rates[2];
  int k = 0;
  for (const std::uint64_t n : {1000ULL, 10000ULL}) {
    const SurvivalCurve curve = ensemble_survival(c, SequencePlan(1.0, n), 2000);
    rates[k++] = fit_exponential(curve, default_fit_window(1.0)).rate;
  }
  const bool pass = std::abs(rates[0] - kDriftRate) <= kDriftTol && std::abs(rates[1] - kDriftRate) <= kDriftTol;
  return {pass, fmt("drift, gamma = 0.2, 2000 trajectories: fitted rate %.4f (N = 1e3), %.4f (N = 1e4), "
                    "target %.1f +- %.2f",
                    rates[0], rates[1], kDriftRate, kDriftTol)};
}

Outcome golden_rule() {
  const ContinuumModel model(uniform_model(201, 2.0, 0.01));
  const double formula = fgr_rate(model).rate;
  const double arithmetic = 2.0 * std::numbers::pi * 1e-4 * 100.5;
  const ExactDynamics exact(model);
  const SurvivalCurve curve = exact.survival_curve(linspace(0.0, 40.0, 141));
  const double fitted = fit_exponential(curve, {5.0, 40.0}).rate;
  const double variance = short_time_coefficients(model).variance;
  const double short_gap = std::abs(exact.survival(0.05) - (1.0 - variance * 0.05 * 0.05));
  const double rel = std::abs(fitted / formula - 1.0);
  const bool pass = std::abs(formula - arithmetic) < kFgrArithmeticTol &&
                    std::abs(formula - kFgrFormula) < 5e-7 && rel < kFgrFitRelTol &&
                    short_gap < kShortTimeTol;
  return {pass, fmt("formula %.9f (arithmetic gap %.2g), fit on [5,40] %.6f (%.2f%%, tol 5%%), "
                    "short-time gap %.2g (tol %.0e)",
                    formula, std::abs(formula - arithmetic), fitted, 100 * rel, short_gap,
                    kShortTimeTol)};
}

Outcome channel_additivity() {
  const ContinuumModel model(interleaved_model(402, 2.0, 0.01, 0.02));
  const auto rates = channel_rates(model, ChannelPartition::from_model(model));
  std::vector<double> gammas;
  double sum = 0.0;
  for (const auto& r : rates) {
    gammas.push_back(r.estimate.rate);
    sum += r.estimate.rate;
  }
  const double total = fgr_rate(model).rate;
  double worst = 0.0;
  for (const double t : linspace(0.0, 50.0, 101)) {
    worst = std::max(worst, std::abs(multi_channel_survival(gammas, t) - std::exp(-sum * t)));
  }
  const bool pass = rates.size() == 2 && std::abs(sum - total) < kAdditivityTol && worst < kProductTol;
  return {pass, fmt("M = 402: |G_k + G_l - G_total| = %.3g (tol %.0e), "
                    "max |product - exp(-sum t)| = %.3g (tol %.0e)",
                    std::abs(sum - total), kAdditivityTol, worst, kProductTol)};
}

Outcome lorentzian() {
  const ContinuumModel model(uniform_model(201, 2.0, 0.01));
  const double width = model.hbar() * fgr_rate(model).rate;
  const ExactDynamics exact(model);
  const auto line = exact.lineshape(60.0);
  double total = exact.survival(60.0);
  for (const auto& p : line) total += p.population;
  const LorentzianFit fit = fit_lorentzian(line);
  const double ratio = fit.fwhm / width;
  const double late_ratio = fit_lorentzian(exact.lineshape(150.0)).fwhm / width;
  const bool pass = std::abs(ratio - 1.0) < kLineWidthRelTol && std::abs(total - 1.0) < kProbabilityTol;
  return {pass, fmt("t = 60: FWHM / (hbar G) = %.4f (tol +-%.2f), |sum + S - 1| = %.2g (tol %.0e); "
                    "for reference t = 150 gives %.4f",
                    ratio, kLineWidthRelTol, std::abs(total - 1.0), kProbabilityTol, late_ratio)};
}

Outcome determinism() {
  const auto root = std::filesystem::temp_directory_path() / "decaylab_acceptance";
  std::filesystem::remove_all(root);
  std::size_t mismatches = 0;
  std::size_t files = 0;
  for (const auto& name : experiment_names()) {
    ExperimentConfig c = default_config(name);
    c.set("seed", "2026");
    std::vector<RunManifest> runs;
    for (const char* pass : {"a", "b"}) {
      c.set("output_dir", (root / name / pass).string());
      runs.push_back(run_experiment(c));
    }
    if (runs[0].artifacts.size() != runs[1].artifacts.size()) {
      ++mismatches;
      continue;
    }
    for (std::size_t k = 0; k < runs[0].artifacts.size(); ++k) {
      ++files;
      if (runs[0].artifacts[k].sha256 != runs[1].artifacts[k].sha256) ++mismatches;
    }
  }
  std::filesystem::remove_all(root);
  return {mismatches == 0 && files > 0,
          fmt("7 experiments run twice: %zu artifacts, %zu digest mismatches", files, mismatches)};
}

struct Criterion {
  int id;
  const char* name;
  double seconds;  // runtime limit; 0 when none is stated
  std::function<Outcome()> check;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decaylab acceptance checks"};
  int only = 0;
  app.add_option("--criterion", only, "Run a single criterion (1-8)")->check(CLI::Range(1, 8));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "QZE limit", kQzeSeconds, qze_limit},
      {2, "exponential limit", kLimitSeconds, exponential_limit},
      {3, "rate formula vs derivative", kRateSeconds, rate_formula},
      {4, "stochastic continuous limit", kDriftSeconds, continuous_limit},
      {5, "golden rule", kFgrSeconds, golden_rule},
      {6, "channel additivity", kChannelSeconds, channel_additivity},
      {7, "Lorentzian line shape", kLineSeconds, lorentzian},
      {8, "determinism", 0.0, determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.check();
    } catch (const std::exception& e) {
      out = {false, std::string("error: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.seconds == 0.0 || seconds < c.seconds;
    const bool pass = out.pass && in_time;
    failures += !pass;
    std::string timing = fmt("%.2f s", seconds);
    if (c.seconds > 0.0) timing += fmt(" (limit %.0f s)", c.seconds);
    std::printf("%s [%d] %s: %s; %s\n", pass ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str(),
                timing.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
