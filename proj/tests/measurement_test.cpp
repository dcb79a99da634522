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

#include "decaylab/measurement.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "decaylab/error.hpp"
#include "decaylab/interior.hpp"
#include "oracles.hpp"

using namespace decaylab;
using namespace decaylab::testing;

namespace {

struct Triple {
  Projector lam;
  DensityOperator rho;
  Operator h;
};

// rho = |+x><+x|, P = |+z><+z|, H = g sigma_y.
Triple two_level(double g) {
  return {make_projector({{1.0, 0.0}}), make_density_from_ket(std::vector<cplx>{1.0, 1.0}),
          pauli_y() * cplx(g)};
}

// Tr(P U rho U^dagger) with U from the Taylor oracle.
double survival_oracle(const Triple& x, double delta) {
  const Matrix u = propagator_taylor(x.h, delta);
  const Matrix evolved = multiply(multiply(u, to_matrix(x.rho.op())), adjoint(u));
  const Matrix p = to_matrix(x.lam.op());
  double tr = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < p.size(); ++j) tr += (p[i][j] * evolved[j][i]).real();
  }
  return tr;
}

Triple random_triple(TestRng& rng, std::size_t n) {
  const std::size_t r = rng.index(0, n);
  std::vector<std::vector<cplx>> vs;
  for (std::size_t k = 0; k < r; ++k) vs.push_back(rng.vector(n));
  Operator rho(n);
  double total = 0.0;
  for (int k = 0; k < 2; ++k) {
    const double w = rng.uniform(0.1, 1.0);
    rho += make_density_from_ket(rng.vector(n)).op() * cplx(w);
    total += w;
  }
  return {r == 0 ? Projector::zero(n) : make_projector(vs), DensityOperator(rho * cplx(1.0 / total)),
          rng.hermitian(n)};
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorKind::invalid_input;
}

}  // namespace

TEST(sequence_plan, derives_step) {
  const SequencePlan plan(2.0, 8);
  EXPECT_EQ(plan.step(), 0.25);
  EXPECT_EQ(plan.time_at(8), 2.0);
  EXPECT_EQ(plan.time_at(4), 1.0);
  EXPECT_EQ(kind_of([] { SequencePlan(0.0, 3); }), ErrorKind::invalid_input);
  EXPECT_EQ(kind_of([] { SequencePlan(1.0, 0); }), ErrorKind::invalid_input);
}

TEST(instantaneous_rate, commuting_pair_is_zero) {
  const Projector lam = make_projector({{1.0, 0.0, 0.0}});
  const DensityOperator rho(Operator::diagonal(std::vector<double>{0.2, 0.5, 0.3}));
  TestRng rng(1);
  EXPECT_NEAR(instantaneous_rate(lam, rho, rng.hermitian(3)).rate, 0.0, 1e-12);
}

TEST(instantaneous_rate, two_level_matches_finite_difference_oracle) {
  const Triple x = two_level(0.25);
  const RateEstimate est = instantaneous_rate(x.lam, x.rho, x.h);
  EXPECT_EQ(est.method, RateMethod::formula);
  // Oracle: central difference of the Taylor-propagated survival.
  const double d = 1e-4;
  const double oracle = -(survival_oracle(x, d) - survival_oracle(x, -d)) / (2 * d);
  EXPECT_NEAR(oracle, 0.25, 1e-8);
  EXPECT_NEAR(est.rate, 0.25, 1e-15);
  EXPECT_LE(est.diagnostic("imaginary_residue"), 1e-12);
}

TEST(instantaneous_rate, hbar_scales_rate) {
  const Triple x = two_level(0.25);
  EXPECT_NEAR(instantaneous_rate(x.lam, x.rho, x.h, 2.0).rate, 0.125, 1e-15);
}

TEST(instantaneous_rate, rejects_non_hermitian_hamiltonian) {
  const Triple x = two_level(0.25);
  const Operator bad{{0.0, 1.0}, {0.0, 0.0}};
  EXPECT_EQ(kind_of([&] { instantaneous_rate(x.lam, x.rho, bad); }), ErrorKind::validation);
}

TEST(instantaneous_rate, imaginary_residue_vanishes_for_hermitian_triples) {
  TestRng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const Triple x = random_triple(rng, rng.index(1, 12));
    EXPECT_LE(instantaneous_rate(x.lam, x.rho, x.h).diagnostic("imaginary_residue"), 1e-12);
  }
}

TEST(instantaneous_rate, zero_when_state_commutes_with_projector_or_lies_inside) {
  TestRng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = rng.index(2, 8);
    const std::size_t r = rng.index(1, n - 1);
    std::vector<std::vector<cplx>> vs;
    for (std::size_t k = 0; k < n; ++k) vs.push_back(rng.vector(n));
    const auto basis = orthonormalize(vs, 1e-12);
    const Projector lam(n, {basis.begin(), basis.begin() + static_cast<long>(r)}, Unchecked{});
    // Commuting: diagonal in the projector's eigenbasis with weights on both sides.
    Operator commuting(n);
    Operator inside(n);
    double total_c = 0.0;
    double total_i = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double w = rng.uniform(0.1, 1.0);
      commuting += Operator::outer(basis[k], basis[k]) * cplx(w);
      total_c += w;
      if (k < r) {
        inside += Operator::outer(basis[k], basis[k]) * cplx(w);
        total_i += w;
      }
    }
    const DensityOperator rho_c((commuting * cplx(1.0 / total_c)).hermitian_part());
    const DensityOperator rho_i((inside * cplx(1.0 / total_i)).hermitian_part());
    ASSERT_LT(commutator(rho_c.op(), lam.op()).frobenius_norm(), 1e-12);
    const Operator h = rng.hermitian(n);
    EXPECT_NEAR(instantaneous_rate(lam, rho_c, h).rate, 0.0, 1e-12);
    EXPECT_NEAR(instantaneous_rate(lam, rho_i, h).rate, 0.0, 1e-12);
  }
}

TEST(rate_finite_difference, examples) {
  const Triple x = two_level(0.25);
  EXPECT_EQ(rate_finite_difference(x.lam, x.rho, Operator(2), 1e-3).rate, 0.0);
  const RateEstimate fd = rate_finite_difference(x.lam, x.rho, x.h, 1e-4);
  EXPECT_EQ(fd.method, RateMethod::finite_difference);
  EXPECT_EQ(fd.diagnostic("step"), 1e-4);
  EXPECT_NEAR(fd.rate, 0.25, 1e-7);
  // Richardson: the central difference error is O(delta^2), so halving the
  // step at a resolvable size quarters it.
  const double e1 = rate_finite_difference(x.lam, x.rho, x.h, 0.2).rate - 0.25;
  const double e2 = rate_finite_difference(x.lam, x.rho, x.h, 0.1).rate - 0.25;
  EXPECT_NEAR(e1 / e2, 4.0, 0.05);

  const Projector lam = make_projector({{1.0, 0.0}});
  const DensityOperator diag(Operator::diagonal(std::vector<double>{0.4, 0.6}));
  EXPECT_NEAR(rate_finite_difference(lam, diag, pauli_z(), 1e-4).rate, 0.0, 1e-12);
  EXPECT_EQ(kind_of([&] { rate_finite_difference(x.lam, x.rho, x.h, 0.0); }),
            ErrorKind::invalid_input);
}

TEST(rate_finite_difference, agrees_with_formula_on_random_triples) {
  TestRng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const Triple x = random_triple(rng, rng.index(1, 16));
    EXPECT_NEAR(instantaneous_rate(x.lam, x.rho, x.h).rate,
                rate_finite_difference(x.lam, x.rho, x.h, 1e-4).rate, 1e-6);
  }
}

TEST(per_step_survival, examples) {
  const Projector lam = make_projector({{1.0, 0.0}});
  const DensityOperator ground(Operator{{1.0, 0.0}, {0.0, 0.0}});
  EXPECT_NEAR(per_step_survival(lam, ground, pauli_x(), 0.0), 1.0, 1e-15);
  const Triple x = two_level(0.25);
  EXPECT_NEAR(per_step_survival(x.lam, x.rho, x.h, 0.0), 0.5, 1e-15);
  const double g = 0.7;
  for (const double d : {0.01, 0.3, 1.1}) {
    EXPECT_NEAR(per_step_survival(lam, ground, pauli_x() * cplx(g), d), std::pow(std::cos(g * d), 2),
                1e-14);
    EXPECT_NEAR(per_step_loss(lam, ground, pauli_x() * cplx(g), d), std::pow(std::sin(g * d), 2),
                1e-14);
  }
}

TEST(compound_product, toy_examples) {
  // s(delta) = 1 - t / (N tau) with t / tau = 1.
  EXPECT_NEAR(compound_product(0.9, 10), 0.3486784401, 1e-14);
  EXPECT_NEAR(idealized_compound_survival(1.0, SequencePlan(1.0, 10)), 0.3486784401, 1e-14);
  EXPECT_NEAR(idealized_compound_survival(1.0, SequencePlan(1.0, 1000000)), std::exp(-1.0), 1e-6);
  EXPECT_EQ(compound_product(0.0, 5), 0.0);
  EXPECT_EQ(compound_product(1.0, 100000000), 1.0);
  EXPECT_EQ(kind_of([] { compound_product(1.5, 2); }), ErrorKind::invalid_input);
}

TEST(compound_survival, zeno_case_stays_at_one) {
  RandomStream rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const CommutingCase c = random_commuting_case(6, 3, 1.0, rng);
    for (const double t : {1.0, 10.0, 1000.0}) {
      for (const std::uint64_t n : {10ULL, 1000ULL, 1000000ULL}) {
        EXPECT_NEAR(compound_survival(c.lam, c.rho, c.hamiltonian, SequencePlan(t, n)), 1.0, 1e-9);
      }
    }
  }
}

TEST(compound_survival, non_increasing_in_time_when_step_survival_is) {
  // s(delta) = cos^2(g delta) decreases on [0, pi / (2g)].
  const Projector lam = make_projector({{1.0, 0.0}});
  const DensityOperator ground(Operator{{1.0, 0.0}, {0.0, 0.0}});
  const Operator h = pauli_x() * cplx(0.5);
  double previous = 1.0;
  for (int k = 1; k <= 30; ++k) {
    const double s = compound_survival(lam, ground, h, SequencePlan(0.1 * k, 20));
    EXPECT_LE(s, previous);
    previous = s;
  }
}

TEST(convergence_sweep, zero_rate_gives_all_ones) {
  const auto sweep = idealized_sweep(0.0, 3.0, {10, 100, 1000});
  EXPECT_TRUE(sweep.non_decaying);
  for (const auto& row : sweep.rows) EXPECT_EQ(row.survival, 1.0);
}

TEST(convergence_sweep, error_shrinks_as_one_over_n) {
  const auto sweep = idealized_sweep(1.0, 1.0, {100, 10000, 1000000});
  ASSERT_EQ(sweep.rows.size(), 3u);
  // Expansion oracle: error ~ e^-1 x^2 / (2N).
  for (const auto& row : sweep.rows) {
    EXPECT_NEAR(row.error / (std::exp(-1.0) / (2.0 * static_cast<double>(row.steps))), 1.0, 0.02);
  }
  EXPECT_NEAR(sweep.rows[0].error / sweep.rows[1].error, 100.0, 20.0);
  EXPECT_NEAR(sweep.rows[1].error / sweep.rows[2].error, 100.0, 20.0);
  EXPECT_LT(sweep.rows.back().error, sweep.rows.front().error);
}

TEST(convergence_sweep, rate_times_t_two) {
  const auto sweep = idealized_sweep(2.0, 1.0, {1000000});
  EXPECT_NEAR(sweep.rows[0].survival, std::exp(-2.0), 2e-6);
  // Relative accuracy of the limit at N = 10^6.
  EXPECT_LT(sweep.rows[0].error / std::exp(-2.0), 1e-4);
}

TEST(convergence_sweep, picks_branch_from_state) {
  const Triple x = two_level(0.25);
  const auto idealized = convergence_sweep(x.lam, x.rho, x.h, 1.0, {10, 100});
  EXPECT_EQ(idealized.branch, SweepBranch::idealized);
  EXPECT_NEAR(idealized.rate, 0.25, 1e-15);

  RandomStream rng(5);
  const CommutingCase c = random_commuting_case(4, 2, 1.0, rng);
  const auto literal = convergence_sweep(c.lam, c.rho, c.hamiltonian, 2.0, {10, 1000});
  EXPECT_EQ(literal.branch, SweepBranch::literal);
  for (const auto& row : literal.rows) EXPECT_NEAR(row.survival, 1.0, 1e-12);
}

TEST(convergence_sweep, rejects_negative_idealized_rate_and_bad_n) {
  // Flipping the sign of H flips the rate.
  const Triple x = two_level(-0.25);
  EXPECT_EQ(kind_of([&] { convergence_sweep(x.lam, x.rho, x.h, 1.0, {10}); }),
            ErrorKind::validation);
  EXPECT_EQ(kind_of([] { idealized_sweep(1.0, 1.0, {100, 10}); }), ErrorKind::invalid_input);
  EXPECT_EQ(kind_of([] { idealized_sweep(1.0, 1.0, {}); }), ErrorKind::invalid_input);
}
