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
#include "decaylab/interior.hpp"
#include "decaylab/kernels.hpp"
#include "decaylab/spectral.hpp"

namespace decaylab {

const char* to_string(EnsembleMode mode) noexcept {
  return mode == EnsembleMode::iid ? "iid" : "drift";
}

const char* to_string(UpdatePolicy policy) noexcept {
  return policy == UpdatePolicy::luders ? "luders" : "resample";
}

EnsembleMode parse_ensemble_mode(const std::string& text) {
  if (text == "iid") return EnsembleMode::iid;
  if (text == "drift") return EnsembleMode::drift;
  throw Error(ErrorKind::invalid_input, "unknown ensemble mode '" + text + "'");
}

UpdatePolicy parse_update_policy(const std::string& text) {
  if (text == "luders") return UpdatePolicy::luders;
  if (text == "resample") return UpdatePolicy::resample;
  throw Error(ErrorKind::invalid_input, "unknown update policy '" + text + "'");
}

void InteriorEnsembleConfig::validate() const {
  if (dim < 2) throw Error(ErrorKind::invalid_input, "ensemble: dim must be at least 2");
  if (undecayed_rank == 0 || undecayed_rank >= dim) {
    throw Error(ErrorKind::invalid_input, "ensemble: undecayed_rank must be in [1, dim)");
  }
  if (!(drift_strength >= 0.0) || !std::isfinite(drift_strength)) {
    throw Error(ErrorKind::invalid_input, "ensemble: drift strength must be >= 0");
  }
  if (!(hbar > 0.0) || !std::isfinite(hbar)) {
    throw Error(ErrorKind::invalid_input, "ensemble: hbar must be positive");
  }
  if (hamiltonian.dim() != 0) {
    if (hamiltonian.dim() != dim) throw Error(ErrorKind::shape, "ensemble: Hamiltonian dimension");
    if (hamiltonian.hermiticity_error() > kDefaultTolerances.hermitian) {
      throw Error(ErrorKind::validation, "ensemble: Hamiltonian not Hermitian");
    }
  }
}

Operator InteriorEnsembleConfig::effective_hamiltonian() const {
  return hamiltonian.dim() == 0 ? Operator(dim) : hamiltonian;
}

InteriorState initial_state(const InteriorEnsembleConfig& config) {
  config.validate();
  std::vector<std::vector<cplx>> basis;
  for (std::size_t k = 0; k < config.undecayed_rank; ++k) {
    std::vector<cplx> e(config.dim);
    e[k] = 1.0;
    basis.push_back(std::move(e));
  }
  std::vector<cplx> ket(config.dim);
  ket[0] = 1.0;
  return {make_density_from_ket(ket), Projector(config.dim, std::move(basis), Unchecked{})};
}

Operator sample_random_unitary(std::size_t dim, RandomStream& rng) {
  if (dim == 0) throw Error(ErrorKind::invalid_input, "sample_random_unitary: dim must be >= 1");
  std::vector<std::vector<cplx>> columns(dim, std::vector<cplx>(dim));
  for (auto& col : columns) {
    for (cplx& z : col) z = rng.complex_normal();
  }
  // Gram-Schmidt leaves R_kk = ||residual_k|| > 0, which is the phase
  // convention that makes Q Haar distributed.
  columns = orthonormalize(std::move(columns), 0.0);
  Operator u(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    for (std::size_t i = 0; i < dim; ++i) u(i, k) = columns[k][i];
  }
  return u;
}

double haar_average_variance(const Operator& g) {
  const double d = static_cast<double>(g.dim());
  const double tr = g.trace().real();
  const double tr_sq = std::pow(g.frobenius_norm(), 2);
  return (d * tr_sq - tr * tr) / (d * (d + 1.0));
}

Operator sample_drift_generator(std::size_t dim, RandomStream& rng) {
  if (dim < 2) throw Error(ErrorKind::invalid_input, "drift generator needs dim >= 2");
  for (;;) {
    Operator g(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      g(i, i) = rng.normal();
      for (std::size_t j = i + 1; j < dim; ++j) {
        const cplx z = rng.complex_normal();
        g(i, j) = z;
        g(j, i) = std::conj(z);
      }
    }
    const double var = haar_average_variance(g);
    // var == 0 only for G proportional to the identity; redraw.
    if (var > 1e-300) return g * cplx(1.0 / std::sqrt(var));
  }
}

StepContext make_step_context(const InteriorEnsembleConfig& config, double delta) {
  config.validate();
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorKind::invalid_input, "sample_step: delta must be >= 0");
  }
  StepContext ctx;
  ctx.delta = delta;
  if (config.hamiltonian.dim() != 0 && !config.hamiltonian.is_zero()) {
    ctx.propagator = spectral_decompose(config.hamiltonian).propagator(delta, config.hbar);
  }
  return ctx;
}

namespace {

std::vector<std::vector<cplx>> next_basis(const InteriorEnsembleConfig& config,
                                          const Projector& previous, double delta,
                                          RandomStream& rng) {
  if (config.mode == EnsembleMode::iid) {
    const Operator u = sample_random_unitary(config.dim, rng);
    std::vector<std::vector<cplx>> basis(config.undecayed_rank, std::vector<cplx>(config.dim));
    for (std::size_t k = 0; k < config.undecayed_rank; ++k) {
      for (std::size_t i = 0; i < config.dim; ++i) basis[k][i] = u(i, k);
    }
    return basis;
  }
  const double theta = std::sqrt(config.drift_strength * delta);
  if (theta == 0.0) return previous.basis();
  const Operator g = sample_drift_generator(config.dim, rng);
  const Operator rotation = hermitian_exponential(g, theta);
  std::vector<std::vector<cplx>> basis;
  basis.reserve(previous.rank());
  for (const auto& b : previous.basis()) basis.push_back(rotation.apply(b));
  return orthonormalize(std::move(basis), 0.0);
}

}  // namespace

StepOutcome sample_step(const InteriorEnsembleConfig& config, const InteriorState& previous,
                        const StepContext& context, RandomStream& rng) {
  require_same_dim(previous.rho.op(), previous.lam.op(), "sample_step");
  if (previous.rho.dim() != config.dim) throw Error(ErrorKind::shape, "sample_step: state dim");

  const DensityOperator evolved = context.propagator.dim() == 0
                                      ? previous.rho
                                      : conjugate(previous.rho, context.propagator);
  Projector lam_next(config.dim, next_basis(config, previous.lam, context.delta, rng), Unchecked{});

  StepOutcome out{{evolved, lam_next}, 1.0, 0.0, false};
  if (context.record_commutator) {
    out.commutator_norm = commutator(previous.rho.op(), lam_next.op()).frobenius_norm();
  }
  out.survival = trace_prob(lam_next, evolved);
  if (out.survival <= kTerminationFloor) {
    out.terminated = true;
    return out;
  }

  if (config.update_policy == UpdatePolicy::luders) {
    if (lam_next.rank() == 1) {
      const auto& b = lam_next.basis().front();
      out.next.rho = make_density_from_ket(b);
    } else {
      Operator updated = lam_next.op() * evolved.op() * lam_next.op();
      updated *= cplx(1.0 / out.survival);
      out.next.rho = DensityOperator(updated.hermitian_part(), Unchecked{});
    }
  } else {
    std::vector<cplx> ket(config.dim);
    for (const auto& b : lam_next.basis()) kernels::axpy(rng.complex_normal(), b, ket);
    out.next.rho = make_density_from_ket(ket);
  }
  out.next.lam = std::move(lam_next);
  return out;
}

StepOutcome sample_step(const InteriorEnsembleConfig& config, const InteriorState& previous,
                        double delta, RandomStream& rng) {
  return sample_step(config, previous, make_step_context(config, delta), rng);
}

TrajectoryRecord run_trajectory(const InteriorEnsembleConfig& config, const SequencePlan& plan,
                                RandomStream& rng) {
  const StepContext ctx = make_step_context(config, plan.step());
  TrajectoryRecord record;
  record.seed_used = rng.seed();
  const auto n = static_cast<std::size_t>(plan.steps());
  record.step_survivals.reserve(n);
  record.running_product.reserve(n);
  record.projector_commutator_norms.reserve(n);

  InteriorState state = initial_state(config);
  double log_product = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    StepOutcome step = sample_step(config, state, ctx, rng);
    record.step_survivals.push_back(step.survival);
    record.projector_commutator_norms.push_back(step.commutator_norm);
    if (step.terminated) {
      record.running_product.push_back(0.0);
      record.terminated = true;
      break;
    }
    log_product += std::log(step.survival);
    record.running_product.push_back(std::exp(log_product));
    state = std::move(step.next);
  }
  return record;
}

}  // namespace decaylab
