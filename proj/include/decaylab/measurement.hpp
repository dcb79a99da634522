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

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "decaylab/operator.hpp"
#include "decaylab/spectral.hpp"
#include "decaylab/state.hpp"

namespace decaylab {

/// N equally spaced interactions over a total time t; the step t/N is derived.
class SequencePlan {
 public:
  SequencePlan(double total_time, std::uint64_t steps);

  double total_time() const noexcept { return total_time_; }
  std::uint64_t steps() const noexcept { return steps_; }
  double step() const noexcept { return total_time_ / static_cast<double>(steps_); }
  /// Time of the k-th interaction, k = 0..N.
  double time_at(std::uint64_t k) const noexcept;

 private:
  double total_time_;
  std::uint64_t steps_;
};

enum class RateMethod { formula, finite_difference, fit };
const char* to_string(RateMethod method) noexcept;

/// A decay rate (1/time) with the method that produced it and free-form
/// numeric diagnostics (imaginary residue, step size, window size, ...).
struct RateEstimate {
  double rate = 0.0;
  RateMethod method = RateMethod::formula;
  std::map<std::string, double> diagnostics;

  double diagnostic(const std::string& key) const;
};

/// Imaginary residue above which the formula rate is treated as corrupted.
inline constexpr double kRateImaginaryLimit = 1e-10;

/// -(d/d delta) Tr(P rho(delta)) at delta = 0, evaluated in closed form as
/// (i/hbar) Tr(rho (P H - H P)).
RateEstimate instantaneous_rate(const Projector& lam, const DensityOperator& rho,
                                const Operator& h, double hbar = 1.0);

/// Central difference -[s(delta) - s(-delta)] / (2 delta) of the per-step
/// survival s.
RateEstimate rate_finite_difference(const Projector& lam, const DensityOperator& rho,
                                    const Operator& h, double delta, double hbar = 1.0);

/// Tr(P rho(delta)).
double per_step_survival(const Projector& lam, const DensityOperator& rho, const Operator& h,
                         double delta, double hbar = 1.0);
double per_step_survival(const Projector& lam, const DensityOperator& rho,
                         const SpectralDecomposition& h, double delta, double hbar = 1.0);

/// 1 - Tr(P rho(delta)) summed over an orthonormal basis of the complement
/// of P. Keeps full relative precision when the loss is tiny.
double per_step_loss(const Projector& lam, const DensityOperator& rho, const Operator& h,
                     double delta, double hbar = 1.0);

/// s^N evaluated as exp(N log s); 0 when s = 0.
double compound_product(double step_survival, std::uint64_t steps);

/// Literal compound survival: the exact per-step survival at delta = t/N,
/// raised to the N-th power as exp(N log1p(-loss)).
double compound_survival(const Projector& lam, const DensityOperator& rho, const Operator& h,
                         const SequencePlan& plan, double hbar = 1.0);

/// Idealized homogeneous branch: (1 - delta * rate)^N.
double idealized_compound_survival(double rate, const SequencePlan& plan);

enum class SweepBranch { literal, idealized };
const char* to_string(SweepBranch branch) noexcept;

struct SweepRow {
  std::uint64_t steps;
  double survival;
  double error;  // |survival - exp(-t * rate)|
};

struct ConvergenceSweep {
  SweepBranch branch;
  double rate;
  bool non_decaying;
  std::vector<SweepRow> rows;
};

/// Survival at fixed t for each N. When rho lies inside the range of P the
/// exact (literal) per-step survival is compounded; otherwise the idealized
/// 1 - delta * rate branch is used with rate from instantaneous_rate. A
/// negative idealized rate is rejected.
ConvergenceSweep convergence_sweep(const Projector& lam, const DensityOperator& rho,
                                   const Operator& h, double t,
                                   const std::vector<std::uint64_t>& n_values,
                                   double hbar = 1.0);

/// Idealized-branch sweep for a known rate.
ConvergenceSweep idealized_sweep(double rate, double t, const std::vector<std::uint64_t>& n_values);

/// True when P rho = rho within `tol` (max elementwise).
bool inside_range(const Projector& lam, const DensityOperator& rho, double tol = 1e-10);

}  // namespace decaylab
