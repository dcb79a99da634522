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
#include <limits>

#include "decaylab/error.hpp"
#include "decaylab/kernels.hpp"
#include "decaylab/measurement.hpp"

namespace decaylab {

SequencePlan::SequencePlan(double total_time, std::uint64_t steps)
    : total_time_(total_time), steps_(steps) {
  if (!(total_time > 0.0) || !std::isfinite(total_time)) {
    throw Error(ErrorKind::invalid_input, "sequence plan: total time must be positive");
  }
  if (steps == 0) throw Error(ErrorKind::invalid_input, "sequence plan: steps must be positive");
}

double SequencePlan::time_at(std::uint64_t k) const noexcept {
  if (k == steps_) return total_time_;
  return total_time_ * (static_cast<double>(k) / static_cast<double>(steps_));
}

const char* to_string(RateMethod method) noexcept {
  switch (method) {
    case RateMethod::formula: return "formula";
    case RateMethod::finite_difference: return "finite_difference";
    case RateMethod::fit: return "fit";
  }
  return "unknown";
}

const char* to_string(SweepBranch branch) noexcept {
  return branch == SweepBranch::literal ? "literal" : "idealized";
}

double RateEstimate::diagnostic(const std::string& key) const {
  const auto it = diagnostics.find(key);
  return it == diagnostics.end() ? std::numeric_limits<double>::quiet_NaN() : it->second;
}

RateEstimate instantaneous_rate(const Projector& lam, const DensityOperator& rho,
                                const Operator& h, double hbar) {
  require_same_dim(lam.op(), rho.op(), "instantaneous_rate");
  require_same_dim(lam.op(), h, "instantaneous_rate");
  if (!(hbar > 0.0)) throw Error(ErrorKind::invalid_input, "hbar must be positive");
  if (h.hermiticity_error() > kDefaultTolerances.hermitian) {
    throw Error(ErrorKind::validation, "instantaneous_rate: Hamiltonian not Hermitian");
  }
  const Operator comm = commutator(lam.op(), h);
  // Tr(rho C) = sum_ij rho_ij C_ji
  const std::size_t n = h.dim();
  cplx tr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) tr += rho.op()(i, j) * comm(j, i);
  }
  // (i/hbar) * tr
  const cplx value = cplx(0.0, 1.0) * tr / hbar;
  RateEstimate out;
  out.rate = value.real();
  out.method = RateMethod::formula;
  out.diagnostics["imaginary_residue"] = std::abs(value.imag());
  if (std::abs(value.imag()) > kRateImaginaryLimit) {
    throw Error(ErrorKind::validation,
                "instantaneous_rate: imaginary residue " + std::to_string(value.imag()) +
                    " exceeds limit");
  }
  return out;
}

double per_step_survival(const Projector& lam, const DensityOperator& rho,
                         const SpectralDecomposition& h, double delta, double hbar) {
  return trace_prob(lam, evolve(rho, h, delta, hbar));
}

double per_step_survival(const Projector& lam, const DensityOperator& rho, const Operator& h,
                         double delta, double hbar) {
  require_same_dim(lam.op(), h, "per_step_survival");
  if (!(delta >= 0.0)) throw Error(ErrorKind::invalid_input, "per_step_survival: delta < 0");
  return per_step_survival(lam, rho, spectral_decompose(h), delta, hbar);
}

RateEstimate rate_finite_difference(const Projector& lam, const DensityOperator& rho,
                                    const Operator& h, double delta, double hbar) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorKind::invalid_input, "rate_finite_difference: delta must be positive");
  }
  require_same_dim(lam.op(), h, "rate_finite_difference");
  const auto spec = spectral_decompose(h);
  const double forward = trace_prob(lam, evolve(rho, spec, delta, hbar));
  const double backward = trace_prob(lam, evolve(rho, spec, -delta, hbar));
  RateEstimate out;
  out.rate = -(forward - backward) / (2.0 * delta);
  out.method = RateMethod::finite_difference;
  out.diagnostics["step"] = delta;
  return out;
}

double compound_product(double step_survival, std::uint64_t steps) {
  if (!(step_survival >= 0.0 && step_survival <= 1.0)) {
    throw Error(ErrorKind::invalid_input, "compound_product: survival outside [0, 1]");
  }
  if (steps == 0) return 1.0;
  if (step_survival == 0.0) return 0.0;
  return std::exp(static_cast<double>(steps) * std::log(step_survival));
}

double per_step_loss(const Projector& lam, const DensityOperator& rho, const Operator& h,
                     double delta, double hbar) {
  require_same_dim(lam.op(), h, "per_step_loss");
  if (!(delta >= 0.0)) throw Error(ErrorKind::invalid_input, "per_step_loss: delta < 0");
  const DensityOperator evolved = evolve(rho, spectral_decompose(h), delta, hbar);
  const Projector decayed = lam.complement();
  double loss = 0.0;
  for (const auto& c : decayed.basis()) {
    const std::vector<cplx> rc = evolved.op().apply(c);
    loss += kernels::dotc(c, rc).real();
  }
  if (loss < -kDefaultTolerances.trace || loss > 1.0 + kDefaultTolerances.trace) {
    throw Error(ErrorKind::validation, "per_step_loss: probability outside [0, 1]");
  }
  return std::clamp(loss, 0.0, 1.0);
}

double compound_survival(const Projector& lam, const DensityOperator& rho, const Operator& h,
                         const SequencePlan& plan, double hbar) {
  const double loss = per_step_loss(lam, rho, h, plan.step(), hbar);
  if (loss >= 1.0) return 0.0;
  return std::exp(static_cast<double>(plan.steps()) * std::log1p(-loss));
}

double idealized_compound_survival(double rate, const SequencePlan& plan) {
  if (!std::isfinite(rate)) throw Error(ErrorKind::invalid_input, "rate must be finite");
  const double loss = plan.step() * rate;
  if (loss >= 1.0) return 0.0;
  const double survival =
      std::exp(static_cast<double>(plan.steps()) * std::log1p(-loss));
  return std::min(survival, 1.0);
}

bool inside_range(const Projector& lam, const DensityOperator& rho, double tol) {
  return (lam.op() * rho.op()).max_abs_diff(rho.op()) <= tol;
}

namespace {

void check_n_values(const std::vector<std::uint64_t>& n_values) {
  if (n_values.empty()) throw Error(ErrorKind::invalid_input, "convergence_sweep: no N values");
  for (std::size_t k = 0; k < n_values.size(); ++k) {
    if (n_values[k] == 0) throw Error(ErrorKind::invalid_input, "convergence_sweep: N = 0");
    if (k > 0 && n_values[k] <= n_values[k - 1]) {
      throw Error(ErrorKind::invalid_input, "convergence_sweep: N values must ascend");
    }
  }
}

}  // namespace

ConvergenceSweep idealized_sweep(double rate, double t, const std::vector<std::uint64_t>& n_values) {
  check_n_values(n_values);
  if (!std::isfinite(rate)) throw Error(ErrorKind::invalid_input, "rate must be finite");
  if (rate < 0.0) {
    throw Error(ErrorKind::validation, "non-decaying: idealized branch needs rate >= 0, got " +
                                           std::to_string(rate));
  }
  ConvergenceSweep sweep{SweepBranch::idealized, rate, rate == 0.0, {}};
  const double limit = std::exp(-t * rate);
  for (const std::uint64_t n : n_values) {
    const double s = idealized_compound_survival(rate, SequencePlan(t, n));
    sweep.rows.push_back({n, s, std::abs(s - limit)});
  }
  return sweep;
}

ConvergenceSweep convergence_sweep(const Projector& lam, const DensityOperator& rho,
                                   const Operator& h, double t,
                                   const std::vector<std::uint64_t>& n_values, double hbar) {
  check_n_values(n_values);
  const RateEstimate rate = instantaneous_rate(lam, rho, h, hbar);
  if (!inside_range(lam, rho)) return idealized_sweep(rate.rate, t, n_values);

  ConvergenceSweep sweep{SweepBranch::literal, rate.rate, true, {}};
  const double limit = std::exp(-t * rate.rate);
  for (const std::uint64_t n : n_values) {
    const double s = compound_survival(lam, rho, h, SequencePlan(t, n), hbar);
    sweep.rows.push_back({n, s, std::abs(s - limit)});
  }
  return sweep;
}

}  // namespace decaylab
