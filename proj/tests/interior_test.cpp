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

#include "decaylab/interior.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "decaylab/error.hpp"
#include "oracles.hpp"

using namespace decaylab;
using namespace decaylab::testing;

namespace {

InteriorEnsembleConfig drift_config(double gamma, std::uint64_t seed = 11) {
  InteriorEnsembleConfig c;
  c.dim = 2;
  c.undecayed_rank = 1;
  c.mode = EnsembleMode::drift;
  c.drift_strength = gamma;
  c.seed = seed;
  return c;
}

InteriorEnsembleConfig iid_config(std::uint64_t seed = 12) {
  InteriorEnsembleConfig c = drift_config(0.0, seed);
  c.mode = EnsembleMode::iid;
  return c;
}

double unitarity_error(const Operator& u) {
  return multiply_adjoint(u, u).max_abs_diff(Operator::identity(u.dim()));
}

}  // namespace

TEST(sample_random_unitary, dim_one_is_a_phase) {
  RandomStream rng(1);
  const Operator u = sample_random_unitary(1, rng);
  EXPECT_NEAR(std::abs(u(0, 0)), 1.0, 1e-12);
}

TEST(sample_random_unitary, is_unitary) {
  RandomStream rng(2);
  for (std::size_t n = 1; n <= 24; ++n) EXPECT_LE(unitarity_error(sample_random_unitary(n, rng)), 1e-12);
  EXPECT_THROW(sample_random_unitary(0, rng), Error);
}

TEST(sample_random_unitary, eigenphases_are_uniform) {
  RandomStream rng(3);
  std::vector<double> phases;
  phases.reserve(80000);
  for (int s = 0; s < 10000; ++s) {
    const Operator u = sample_random_unitary(8, rng);
    Eigen::MatrixXcd m(8, 8);
    for (std::size_t i = 0; i < 8; ++i) {
      for (std::size_t j = 0; j < 8; ++j) m(i, j) = u(i, j);
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
    for (const auto& z : solver.eigenvalues()) phases.push_back(std::arg(z));
  }
  std::sort(phases.begin(), phases.end());
  // Kolmogorov-Smirnov distance to the uniform law on (-pi, pi].
  double ks = 0.0;
  const double n = static_cast<double>(phases.size());
  for (std::size_t k = 0; k < phases.size(); ++k) {
    const double cdf = (phases[k] + std::numbers::pi) / (2 * std::numbers::pi);
    ks = std::max({ks, std::abs(cdf - k / n), std::abs(cdf - (k + 1) / n)});
  }
  EXPECT_LT(ks, 0.02);
}

TEST(drift_generator, unit_haar_average_variance) {
  RandomStream rng(4);
  for (std::size_t n = 2; n <= 9; ++n) {
    EXPECT_NEAR(haar_average_variance(sample_drift_generator(n, rng)), 1.0, 1e-12);
  }
  // Oracle: Var_u(sigma_z) over the Bloch sphere is 1 - <z^2> = 2/3.
  EXPECT_NEAR(haar_average_variance(pauli_z()), 2.0 / 3.0, 1e-15);
}

TEST(ensemble_config, validation) {
  InteriorEnsembleConfig c = drift_config(0.2);
  EXPECT_NO_THROW(c.validate());
  c.undecayed_rank = 2;
  EXPECT_THROW(c.validate(), Error);
  c = drift_config(-1.0);
  EXPECT_THROW(c.validate(), Error);
  c = drift_config(0.2);
  c.hamiltonian = Operator(3);
  EXPECT_THROW(c.validate(), Error);
  EXPECT_EQ(parse_ensemble_mode("iid"), EnsembleMode::iid);
  EXPECT_EQ(parse_update_policy("resample"), UpdatePolicy::resample);
  EXPECT_THROW(parse_ensemble_mode("walk"), Error);
}

TEST(sample_step, drift_without_rate_or_hamiltonian_is_frozen) {
  const InteriorEnsembleConfig c = drift_config(0.0);
  RandomStream rng(5);
  const InteriorState s0 = initial_state(c);
  const StepOutcome out = sample_step(c, s0, 0.1, rng);
  EXPECT_EQ(out.survival, 1.0);
  EXPECT_LE(out.next.lam.op().max_abs_diff(s0.lam.op()), 1e-15);
  EXPECT_FALSE(out.terminated);
  EXPECT_THROW(sample_step(c, s0, -0.1, rng), Error);
}

TEST(sample_step, iid_mean_survival_is_one_half) {
  const InteriorEnsembleConfig c = iid_config();
  RandomStream rng(6);
  const InteriorState s0 = initial_state(c);
  const StepContext ctx = make_step_context(c, 0.01);
  double sum = 0.0;
  int positive_commutators = 0;
  const int samples = 100000;
  for (int k = 0; k < samples; ++k) {
    const StepOutcome out = sample_step(c, s0, ctx, rng);
    sum += out.survival;
    if (out.commutator_norm > 0.0) ++positive_commutators;
  }
  EXPECT_NEAR(sum / samples, 0.5, 0.01);
  EXPECT_EQ(positive_commutators, samples);
}

TEST(sample_step, luders_keeps_valid_density_operators) {
  RandomStream rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    InteriorEnsembleConfig c;
    c.dim = 2 + trial % 5;
    c.undecayed_rank = 1 + trial % (c.dim - 1);
    c.mode = trial % 2 ? EnsembleMode::iid : EnsembleMode::drift;
    c.drift_strength = 0.5;
    RandomStream hrng(100 + trial);
    c.hamiltonian = random_hermitian(c.dim, 1.0, hrng);
    InteriorState s = initial_state(c);
    for (int step = 0; step < 50; ++step) {
      const StepOutcome out = sample_step(c, s, 0.05, rng);
      if (out.terminated) break;
      EXPECT_NO_THROW(DensityOperator(out.next.rho.op()));
      EXPECT_NEAR(out.next.rho.op().trace().real(), 1.0, 1e-12);
      EXPECT_NEAR(out.next.lam.op().trace().real(), static_cast<double>(c.undecayed_rank), 1e-10);
      s = out.next;
    }
  }
}

TEST(sample_step, resample_state_lies_in_new_range) {
  InteriorEnsembleConfig c = iid_config();
  c.dim = 4;
  c.undecayed_rank = 2;
  c.update_policy = UpdatePolicy::resample;
  RandomStream rng(8);
  InteriorState s = initial_state(c);
  for (int step = 0; step < 20; ++step) {
    const StepOutcome out = sample_step(c, s, 0.1, rng);
    EXPECT_TRUE(inside_range(out.next.lam, out.next.rho, 1e-10));
    EXPECT_NEAR(trace_prob(out.next.lam, out.next.rho), 1.0, 1e-12);
    s = out.next;
  }
}

TEST(run_trajectory, frozen_drift_keeps_product_at_one) {
  const InteriorEnsembleConfig c = drift_config(0.0);
  RandomStream rng(9);
  const TrajectoryRecord rec = run_trajectory(c, SequencePlan(1.0, 100), rng);
  ASSERT_EQ(rec.running_product.size(), 100u);
  for (const double p : rec.running_product) EXPECT_EQ(p, 1.0);
  EXPECT_EQ(rec.seed_used, 9u);
}

TEST(run_trajectory, running_product_invariants) {
  RandomStream pick(10);
  for (int trial = 0; trial < 40; ++trial) {
    InteriorEnsembleConfig c;
    c.dim = 2 + trial % 4;
    c.undecayed_rank = 1 + trial % (c.dim - 1);
    c.mode = trial % 3 == 0 ? EnsembleMode::iid : EnsembleMode::drift;
    c.update_policy = trial % 2 ? UpdatePolicy::resample : UpdatePolicy::luders;
    c.drift_strength = 2.0 * pick.uniform();
    if (trial % 4 == 1) c.hamiltonian = random_hermitian(c.dim, 1.0, pick);
    RandomStream rng(split_seed(99, trial));
    const TrajectoryRecord rec = run_trajectory(c, SequencePlan(2.0, 64), rng);
    double log_product = 0.0;
    for (std::size_t k = 0; k < rec.running_product.size(); ++k) {
      log_product += std::log(rec.step_survivals[k]);
      EXPECT_NEAR(rec.running_product[k], std::exp(log_product), 1e-12);
      if (k > 0) {
        EXPECT_LE(rec.running_product[k], rec.running_product[k - 1]);
      }
      EXPECT_GE(rec.step_survivals[k], 0.0);
      EXPECT_LE(rec.step_survivals[k], 1.0);
    }
    EXPECT_EQ(rec.projector_commutator_norms.size(), rec.step_survivals.size());
  }
}

TEST(ensemble_survival, frozen_drift_is_flat) {
  const auto curve = ensemble_survival(drift_config(0.0), SequencePlan(1.0, 50), 20);
  ASSERT_EQ(curve.size(), 51u);
  for (const auto& p : curve) {
    EXPECT_EQ(p.mean, 1.0);
    EXPECT_EQ(p.standard_error, 0.0);
  }
  EXPECT_THROW(ensemble_survival(drift_config(0.0), SequencePlan(1.0, 5), 1), Error);
}

TEST(ensemble_survival, zeno_with_commuting_hamiltonian) {
  InteriorEnsembleConfig c = drift_config(0.0);
  c.dim = 4;
  c.undecayed_rank = 2;
  RandomStream rng(13);
  const Operator a = random_hermitian(2, 1.0, rng);
  const Operator b = random_hermitian(2, 1.0, rng);
  c.hamiltonian = Operator(4);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      c.hamiltonian(i, j) = a(i, j);
      c.hamiltonian(i + 2, j + 2) = b(i, j);
    }
  }
  for (const auto& p : ensemble_survival(c, SequencePlan(5.0, 200), 16)) {
    EXPECT_NEAR(p.mean, 1.0, 1e-12);
  }
}

TEST(ensemble_survival, independent_of_worker_count) {
  InteriorEnsembleConfig c = drift_config(0.5, 2024);
  RandomStream rng(14);
  c.hamiltonian = random_hermitian(2, 1.0, rng);
  const SequencePlan plan(1.0, 40);
  const auto one = ensemble_survival(c, plan, 100, 1);
  for (const std::size_t workers : {2u, 3u, 8u}) {
    const auto other = ensemble_survival(c, plan, 100, workers);
    ASSERT_EQ(other.size(), one.size());
    for (std::size_t k = 0; k < one.size(); ++k) {
      EXPECT_EQ(other[k].mean, one[k].mean);
      EXPECT_EQ(other[k].standard_error, one[k].standard_error);
    }
  }
}

TEST(ensemble_survival, standard_error_scales_as_inverse_root_n) {
  const SequencePlan plan(1.0, 2);
  double previous = 0.0;
  for (const std::size_t n : {100u, 400u, 1600u}) {
    const double se = ensemble_survival(iid_config(31), plan, n).back().standard_error;
    if (previous > 0.0) {
      EXPECT_NEAR(previous / se, 2.0, 0.4);
    }
    previous = se;
  }
}

TEST(ensemble_survival, iid_mean_halves_each_step) {
  const auto curve = ensemble_survival(iid_config(15), SequencePlan(1.0, 5), 20000);
  for (std::size_t k = 0; k < curve.size(); ++k) {
    const double expected = std::pow(0.5, static_cast<double>(k));
    EXPECT_NEAR(curve[k].mean, expected, 4.0 * curve[k].standard_error + 1e-15);
  }
}

TEST(ensemble_survival, iid_exponent_grows_with_n_at_fixed_time) {
  // No continuous limit: twice the interactions give twice the exponent.
  const double coarse = -std::log(ensemble_survival(iid_config(16), SequencePlan(1.0, 3), 20000).back().mean);
  const double fine = -std::log(ensemble_survival(iid_config(16), SequencePlan(1.0, 6), 20000).back().mean);
  EXPECT_NEAR(fine / coarse, 2.0, 0.1);
}

TEST(ensemble_survival, drift_final_product_matches_small_angle_limit) {
  const auto curve = ensemble_survival(drift_config(0.2, 17), SequencePlan(1.0, 10000), 2000);
  EXPECT_NEAR(curve.back().mean, std::exp(-0.2), 0.01);
  const ExponentialFit fit = fit_exponential(curve, default_fit_window(1.0));
  EXPECT_NEAR(fit.rate, 0.2, 0.02);
  EXPECT_LT(fit.rms_log_residual, 0.02);
}

TEST(ensemble_survival, drift_rate_survives_refinement) {
  const auto coarse = ensemble_survival(drift_config(0.2, 18), SequencePlan(1.0, 500), 2000);
  const auto fine = ensemble_survival(drift_config(0.2, 18), SequencePlan(1.0, 1000), 2000);
  const double r1 = fit_exponential(coarse, default_fit_window(1.0)).rate;
  const double r2 = fit_exponential(fine, default_fit_window(1.0)).rate;
  // Rate standard error from the final point of each curve.
  const double se1 = coarse.back().standard_error / coarse.back().mean;
  const double se2 = fine.back().standard_error / fine.back().mean;
  EXPECT_LT(std::abs(r1 - r2), 2.0 * std::hypot(se1, se2));
}

TEST(fit_exponential, exact_exponential) {
  SurvivalCurve curve;
  for (int k = 0; k < 50; ++k) {
    const double t = 0.1 * k;
    curve.push_back({t, std::exp(-0.5 * t), 0.0});
  }
  const ExponentialFit fit = fit_exponential(curve, {0.0, 5.0});
  EXPECT_NEAR(fit.rate, 0.5, 1e-9);
  EXPECT_NEAR(fit.tau, 2.0, 1e-8);
  EXPECT_LT(fit.rms_log_residual, 1e-12);
  EXPECT_EQ(fit.points, 50u);
}

TEST(fit_exponential, constant_and_offset) {
  SurvivalCurve flat;
  SurvivalCurve shifted;
  for (int k = 0; k < 10; ++k) {
    flat.push_back({double(k), 1.0, 0.0});
    shifted.push_back({double(k), 0.5 * std::exp(-0.25 * k), 0.0});
  }
  const ExponentialFit f = fit_exponential(flat, {0.0, 9.0});
  EXPECT_EQ(f.rate, 0.0);
  EXPECT_TRUE(std::isinf(f.tau));
  const ExponentialFit g = fit_exponential(shifted, {0.0, 9.0});
  EXPECT_NEAR(g.rate, 0.25, 1e-12);
  EXPECT_NEAR(g.intercept, std::log(0.5), 1e-12);
}

TEST(fit_exponential, errors) {
  SurvivalCurve curve = {{0.0, 1.0, 0.0}, {1.0, 0.5, 0.0}, {2.0, 0.0, 0.0}, {3.0, 0.1, 0.0}};
  EXPECT_THROW(fit_exponential(curve, {0.0, 3.0}), Error);
  EXPECT_THROW(fit_exponential(curve, {0.0, 1.0}), Error);
  EXPECT_THROW(fit_exponential(curve, {2.0, 1.0}), Error);
  EXPECT_EQ(default_fit_window(2.0).t_min, 0.1);
}
