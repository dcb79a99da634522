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
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "decaylab/interior.hpp"
#include "decaylab/measurement.hpp"
#include "decaylab/operator.hpp"
#include "decaylab/spectral.hpp"

namespace decaylab {

// A bound level |phi> = e_0 coupled to a uniform band of M continuum levels:
//   E_m = E_i - W/2 + (m + 1/2) W / M,  m = 0..M-1  (basis index m + 1)
//   H0 = diag(E_i, E_0, ..., E_{M-1}),  V couples e_0 <-> e_{m+1} with v_m.

struct Coupling {
  cplx value;
  std::string channel;
};

struct ModelParameters {
  double bound_energy = 0.0;
  double band_width = 2.0;
  std::size_t levels = 201;
  double hbar = 1.0;
  std::vector<Coupling> couplings;  // one per continuum level
};

/// Every level coupled with the same strength on a single channel.
ModelParameters uniform_model(std::size_t levels, double band_width, cplx coupling,
                              double bound_energy = 0.0, double hbar = 1.0,
                              const std::string& channel = "0");

/// Even levels on channel `first`, odd levels on channel `second`.
ModelParameters interleaved_model(std::size_t levels, double band_width, cplx first_coupling,
                                  cplx second_coupling, const std::string& first = "k",
                                  const std::string& second = "l");

class ContinuumModel {
 public:
  explicit ContinuumModel(ModelParameters params);

  const ModelParameters& parameters() const noexcept { return params_; }
  double bound_energy() const noexcept { return params_.bound_energy; }
  double band_width() const noexcept { return params_.band_width; }
  std::size_t levels() const noexcept { return params_.levels; }
  double hbar() const noexcept { return params_.hbar; }
  std::size_t dim() const noexcept { return params_.levels + 1; }
  const std::vector<double>& energies() const noexcept { return energies_; }
  cplx coupling(std::size_t m) const { return params_.couplings[m].value; }
  /// Final-state density M / W of the whole band.
  double density_of_states() const noexcept;
  /// Channel labels in order of first appearance.
  std::vector<std::string> channels() const;
  std::vector<std::size_t> channel_levels(const std::string& label) const;

  Operator free_hamiltonian() const;
  /// V restricted to the given continuum levels (all when empty).
  Operator interaction(std::span<const std::size_t> levels = {}) const;
  Operator hamiltonian() const;

 private:
  ModelParameters params_;
  std::vector<double> energies_;
};

struct BuiltModel {
  ContinuumModel model;
  Operator h0;
  Operator v;
};

BuiltModel build_model(ModelParameters params);

/// (2 pi / hbar) <|v|^2>_res lambda with the bare bound state as |phi> and
/// |v|^2 averaged over the max(1, round(M/20)) levels nearest E_i. With a
/// channel label, only that channel's levels and density enter.
RateEstimate fgr_rate(const ContinuumModel& model,
                      const std::optional<std::string>& channel = std::nullopt);

struct LippmannSchwingerKet {
  std::vector<cplx> ket;
  double residual;  // ||x - e_m - G0 V x|| / ||x||
  double rcond;     // reciprocal condition estimate of (I - G0 V)
};

/// Solves (I - G0(E_m + i eps) V) x = e_{m+1} for the scattering ket of
/// continuum level m.
LippmannSchwingerKet lippmann_schwinger_solve(const ContinuumModel& model, std::size_t level,
                                              double epsilon);

/// Disjoint, exhaustive assignment of continuum levels to labeled channels.
class ChannelPartition {
 public:
  ChannelPartition(std::vector<std::pair<std::string, std::vector<std::size_t>>> groups,
                   std::size_t levels);
  /// Groups levels by the channel labels carried on the model's couplings.
  static ChannelPartition from_model(const ContinuumModel& model);

  const std::vector<std::pair<std::string, std::vector<std::size_t>>>& groups() const noexcept {
    return groups_;
  }

 private:
  std::vector<std::pair<std::string, std::vector<std::size_t>>> groups_;
};

struct ChannelRate {
  std::string label;
  RateEstimate estimate;
};

/// Golden-rule rate per channel with the channel's own density
/// M_k / W_k. A channel that does not straddle E_i gets rate 0 and a
/// `below_resonance` diagnostic.
std::vector<ChannelRate> channel_rates(const ContinuumModel& model,
                                       const ChannelPartition& partition);

/// prod_c exp(-t Gamma_c).
double multi_channel_survival(std::span<const double> rates, double t);

struct ShortTimeCoefficients {
  double mean_energy;
  double variance;
};

/// <phi|H|phi> and <phi|H^2|phi> - <phi|H|phi>^2.
ShortTimeCoefficients short_time_coefficients(const ContinuumModel& model);

struct LinePoint {
  double energy;
  double population;
};

/// Unitary dynamics of the bound state from one cached diagonalization.
class ExactDynamics {
 public:
  explicit ExactDynamics(const ContinuumModel& model);

  /// <k|exp(-iHt/hbar)|phi> for every basis state k (index 0 is the bound level).
  std::vector<cplx> amplitudes(double t) const;
  /// |<phi|exp(-iHt/hbar)|phi>|^2
  double survival(double t) const;
  SurvivalCurve survival_curve(std::span<const double> times) const;
  std::vector<LinePoint> lineshape(double t) const;

  const SpectralDecomposition& spectrum() const noexcept { return spectrum_; }

 private:
  double hbar_;
  std::vector<double> continuum_energies_;
  SpectralDecomposition spectrum_;
  std::vector<double> bound_weights_;     // |<alpha|phi>|^2
  std::vector<cplx> bound_overlaps_;      // <alpha|phi>
};

SurvivalCurve exact_survival(const ContinuumModel& model, std::span<const double> times);
std::vector<LinePoint> lineshape(const ContinuumModel& model, double t);

struct LorentzianFit {
  double center;
  double fwhm;
  double amplitude;
  double rms_residual;
  int iterations;
};

/// A (G/2)^2 / ((E - E0)^2 + (G/2)^2) by Levenberg-damped Gauss-Newton,
/// started from the empirical peak and half-maximum crossings.
LorentzianFit fit_lorentzian(std::span<const LinePoint> points);

/// Plain-text model format: `key = value` lines for E_i, W, M, hbar and
/// `coupling m channel v_re v_im` lines; `#` starts a comment.
ModelParameters parse_model(const std::string& text);
ModelParameters read_model_file(const std::string& path);
std::string format_model(const ModelParameters& params);

}  // namespace decaylab
