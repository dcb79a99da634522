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

#include "decaylab/error.hpp"
#include "decaylab/golden_rule.hpp"
#include "decaylab/kernels.hpp"

namespace decaylab {

ExactDynamics::ExactDynamics(const ContinuumModel& model)
    : hbar_(model.hbar()),
      continuum_energies_(model.energies()),
      spectrum_(spectral_decompose(model.hamiltonian())) {
  const std::size_t n = spectrum_.dim();
  bound_weights_.resize(n);
  bound_overlaps_.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    const cplx u = spectrum_.eigenvectors(0, a);
    bound_overlaps_[a] = std::conj(u);
    bound_weights_[a] = std::norm(u);
  }
}

std::vector<cplx> ExactDynamics::amplitudes(double t) const {
  if (!std::isfinite(t)) throw Error(ErrorKind::invalid_input, "exact dynamics: time not finite");
  const std::size_t n = spectrum_.dim();
  std::vector<cplx> weighted(n);
  for (std::size_t a = 0; a < n; ++a) {
    const double angle = -spectrum_.eigenvalues[a] * t / hbar_;
    weighted[a] = cplx(std::cos(angle), std::sin(angle)) * bound_overlaps_[a];
  }
  std::vector<cplx> out(n);
  kernels::active().gemv(spectrum_.eigenvectors.data().data(), weighted.data(), out.data(), n, n);
  return out;
}

double ExactDynamics::survival(double t) const {
  if (!std::isfinite(t)) throw Error(ErrorKind::invalid_input, "exact dynamics: time not finite");
  double re = 0.0;
  double im = 0.0;
  for (std::size_t a = 0; a < bound_weights_.size(); ++a) {
    const double angle = -spectrum_.eigenvalues[a] * t / hbar_;
    re += bound_weights_[a] * std::cos(angle);
    im += bound_weights_[a] * std::sin(angle);
  }
  return re * re + im * im;
}

SurvivalCurve ExactDynamics::survival_curve(std::span<const double> times) const {
  SurvivalCurve curve;
  curve.reserve(times.size());
  for (const double t : times) curve.push_back({t, survival(t), 0.0});
  return curve;
}

std::vector<LinePoint> ExactDynamics::lineshape(double t) const {
  if (!(t >= 0.0)) throw Error(ErrorKind::invalid_input, "lineshape: t must be >= 0");
  const auto amps = amplitudes(t);
  std::vector<LinePoint> out;
  out.reserve(continuum_energies_.size());
  for (std::size_t m = 0; m < continuum_energies_.size(); ++m) {
    out.push_back({continuum_energies_[m], std::norm(amps[m + 1])});
  }
  return out;
}

SurvivalCurve exact_survival(const ContinuumModel& model, std::span<const double> times) {
  return ExactDynamics(model).survival_curve(times);
}

std::vector<LinePoint> lineshape(const ContinuumModel& model, double t) {
  return ExactDynamics(model).lineshape(t);
}

}  // namespace decaylab
