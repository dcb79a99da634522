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
#include <optional>
#include <string>
#include <vector>

#include "decaylab/measurement.hpp"
#include "decaylab/operator.hpp"
#include "decaylab/random.hpp"
#include "decaylab/state.hpp"

namespace decaylab {

// Stochastic sequences of undecayed subspaces. In `iid` mode every
// interaction draws a fresh Haar-random subspace; in `drift` mode the
// subspace is rotated by exp(-i sqrt(gamma*delta) G) with a fresh Gaussian
// Hermitian generator G per step, so the per-step loss vanishes linearly in
// delta and the compound survival has a continuous limit.

enum class EnsembleMode { iid, drift };
enum class UpdatePolicy { luders, resample };

const char* to_string(EnsembleMode mode) noexcept;
const char* to_string(UpdatePolicy policy) noexcept;
EnsembleMode parse_ensemble_mode(const std::string& text);
UpdatePolicy parse_update_policy(const std::string& text);

struct InteriorEnsembleConfig {
  std::size_t dim = 2;
  std::size_t undecayed_rank = 1;
  EnsembleMode mode = EnsembleMode::drift;
  double drift_strength = 0.0;  // gamma, 1/time
  UpdatePolicy update_policy = UpdatePolicy::luders;
  Operator hamiltonian;  // dimension 0 means H = 0
  double hbar = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
  Operator effective_hamiltonian() const;
};

struct InteriorState {
  DensityOperator rho;
  Projector lam;
};

/// P = span(e_0..e_{r-1}), rho = |e_0><e_0|.
InteriorState initial_state(const InteriorEnsembleConfig& config);

/// Haar unitary: Ginibre matrix orthonormalized column by column with the
/// triangular factor's diagonal real positive.
Operator sample_random_unitary(std::size_t dim, RandomStream& rng);

/// Gaussian-ensemble Hermitian matrix rescaled to spectral norm `norm`.
Operator random_hermitian(std::size_t dim, double norm, RandomStream& rng);

/// Projector onto the span of `rank` Haar-random orthonormal vectors.
Projector random_projector(std::size_t dim, std::size_t rank, RandomStream& rng);

/// Mixed state B Z Z^dagger B^dagger / Tr with Z Ginibre and B the basis of
/// `support`, so the state lies inside its range.
DensityOperator random_density(const Projector& support, RandomStream& rng);

/// A Zeno configuration: rho inside the range of P and H block diagonal in
/// (P, 1 - P), so rho, P and H all leave the range of P invariant.
struct CommutingCase {
  Projector lam;
  DensityOperator rho;
  Operator hamiltonian;
};

CommutingCase random_commuting_case(std::size_t dim, std::size_t rank, double norm,
                                    RandomStream& rng);

/// Var_u(G) averaged over Haar-random unit vectors u:
/// (d Tr G^2 - (Tr G)^2) / (d (d + 1)).
double haar_average_variance(const Operator& g);

/// Gaussian-ensemble Hermitian matrix scaled to unit Haar-average variance.
Operator sample_drift_generator(std::size_t dim, RandomStream& rng);

/// Per-interaction quantities that depend only on delta.
struct StepContext {
  double delta = 0.0;
  Operator propagator;  // exp(-iH delta/hbar); empty when H = 0
  bool record_commutator = true;
};

StepContext make_step_context(const InteriorEnsembleConfig& config, double delta);

struct StepOutcome {
  InteriorState next;
  double survival = 1.0;
  double commutator_norm = 0.0;  // ||[rho^n, P^{n+1}]||_F
  bool terminated = false;
};

/// Survival at or below this value ends a trajectory: the system decayed.
inline constexpr double kTerminationFloor = 1e-14;

/// One interaction: evolve, draw the next subspace, record the survival, and
/// update the state by the configured policy.
StepOutcome sample_step(const InteriorEnsembleConfig& config, const InteriorState& previous,
                        const StepContext& context, RandomStream& rng);
StepOutcome sample_step(const InteriorEnsembleConfig& config, const InteriorState& previous,
                        double delta, RandomStream& rng);

struct TrajectoryRecord {
  std::vector<double> step_survivals;
  std::vector<double> running_product;
  std::vector<double> projector_commutator_norms;
  std::uint64_t seed_used = 0;
  bool terminated = false;
};

TrajectoryRecord run_trajectory(const InteriorEnsembleConfig& config, const SequencePlan& plan,
                                RandomStream& rng);

struct SurvivalPoint {
  double t;
  double mean;
  double standard_error;
};
using SurvivalCurve = std::vector<SurvivalPoint>;

/// Ensemble mean and standard error of the running product at t_k = k delta,
/// k = 0..N. Trajectory i uses split_seed(config.seed, i). Trajectories are
/// folded in fixed blocks in index order, so the result does not depend on
/// `workers` (0 picks the hardware concurrency).
SurvivalCurve ensemble_survival(const InteriorEnsembleConfig& config, const SequencePlan& plan,
                                std::size_t n_traj, std::size_t workers = 0);

struct FitWindow {
  double t_min;
  double t_max;
};

/// Skips the first 5% of the total time.
FitWindow default_fit_window(double total_time);

struct ExponentialFit {
  double tau;    // +inf for a flat curve
  double rate;   // -slope of log survival
  double rms_log_residual;
  double intercept;
  FitWindow window;
  std::size_t points;
};

/// Unweighted least squares of log(mean) against t over points in the window.
ExponentialFit fit_exponential(const SurvivalCurve& curve, FitWindow window);

}  // namespace decaylab
