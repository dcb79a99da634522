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

#include "decaylab/error.hpp"
#include "decaylab/golden_rule.hpp"

namespace decaylab {

ModelParameters uniform_model(std::size_t levels, double band_width, cplx coupling,
                              double bound_energy, double hbar, const std::string& channel) {
  ModelParameters p;
  p.bound_energy = bound_energy;
  p.band_width = band_width;
  p.levels = levels;
  p.hbar = hbar;
  p.couplings.assign(levels, Coupling{coupling, channel});
  return p;
}

ModelParameters interleaved_model(std::size_t levels, double band_width, cplx first_coupling,
                                  cplx second_coupling, const std::string& first,
                                  const std::string& second) {
  ModelParameters p;
  p.band_width = band_width;
  p.levels = levels;
  p.couplings.reserve(levels);
  for (std::size_t m = 0; m < levels; ++m) {
    p.couplings.push_back(m % 2 == 0 ? Coupling{first_coupling, first}
                                     : Coupling{second_coupling, second});
  }
  return p;
}

ContinuumModel::ContinuumModel(ModelParameters params) : params_(std::move(params)) {
  if (params_.levels == 0) throw Error(ErrorKind::invalid_input, "model: M must be >= 1");
  if (!(params_.band_width > 0.0) || !std::isfinite(params_.band_width)) {
    throw Error(ErrorKind::invalid_input, "model: W must be positive");
  }
  if (!(params_.hbar > 0.0) || !std::isfinite(params_.hbar)) {
    throw Error(ErrorKind::invalid_input, "model: hbar must be positive");
  }
  if (!std::isfinite(params_.bound_energy)) {
    throw Error(ErrorKind::invalid_input, "model: E_i must be finite");
  }
  if (params_.couplings.size() != params_.levels) {
    throw Error(ErrorKind::invalid_input,
                "model: expected " + std::to_string(params_.levels) + " couplings, got " +
                    std::to_string(params_.couplings.size()));
  }
  for (const auto& c : params_.couplings) {
    if (!std::isfinite(c.value.real()) || !std::isfinite(c.value.imag())) {
      throw Error(ErrorKind::invalid_input, "model: couplings must be finite");
    }
    if (c.channel.empty()) throw Error(ErrorKind::invalid_input, "model: empty channel label");
  }
  const double m_count = static_cast<double>(params_.levels);
  const double w = params_.band_width;
  energies_.resize(params_.levels);
  for (std::size_t m = 0; m < params_.levels; ++m) {
    energies_[m] = params_.bound_energy - w / 2.0 + (static_cast<double>(m) + 0.5) * w / m_count;
  }
  for (std::size_t m = 1; m < energies_.size(); ++m) {
    if (!(energies_[m] > energies_[m - 1])) {
      throw Error(ErrorKind::invalid_input, "model: continuum energies not distinct");
    }
  }
}

double ContinuumModel::density_of_states() const noexcept {
  return static_cast<double>(params_.levels) / params_.band_width;
}

std::vector<std::string> ContinuumModel::channels() const {
  std::vector<std::string> labels;
  for (const auto& c : params_.couplings) {
    if (std::find(labels.begin(), labels.end(), c.channel) == labels.end()) {
      labels.push_back(c.channel);
    }
  }
  return labels;
}

std::vector<std::size_t> ContinuumModel::channel_levels(const std::string& label) const {
  std::vector<std::size_t> out;
  for (std::size_t m = 0; m < params_.levels; ++m) {
    if (params_.couplings[m].channel == label) out.push_back(m);
  }
  return out;
}

Operator ContinuumModel::free_hamiltonian() const {
  Operator h0(dim());
  h0(0, 0) = params_.bound_energy;
  for (std::size_t m = 0; m < params_.levels; ++m) h0(m + 1, m + 1) = energies_[m];
  return h0;
}

Operator ContinuumModel::interaction(std::span<const std::size_t> levels) const {
  Operator v(dim());
  auto place = [&](std::size_t m) {
    if (m >= params_.levels) throw Error(ErrorKind::invalid_input, "interaction: level index");
    const cplx c = params_.couplings[m].value;
    v(0, m + 1) = c;
    v(m + 1, 0) = std::conj(c);
  };
  if (levels.empty()) {
    for (std::size_t m = 0; m < params_.levels; ++m) place(m);
  } else {
    for (const std::size_t m : levels) place(m);
  }
  return v;
}

Operator ContinuumModel::hamiltonian() const { return free_hamiltonian() + interaction(); }

BuiltModel build_model(ModelParameters params) {
  ContinuumModel model(std::move(params));
  Operator h0 = model.free_hamiltonian();
  Operator v = model.interaction();
  return {std::move(model), std::move(h0), std::move(v)};
}

ShortTimeCoefficients short_time_coefficients(const ContinuumModel& model) {
  const Operator h = model.hamiltonian();
  const double mean = h(0, 0).real();
  // <H^2> - <H>^2 reduces to the off-diagonal row norm; summing it directly
  // avoids cancellation when E_i is large.
  double variance = 0.0;
  for (std::size_t j = 1; j < h.dim(); ++j) variance += std::norm(h(0, j));
  return {mean, variance};
}

}  // namespace decaylab
