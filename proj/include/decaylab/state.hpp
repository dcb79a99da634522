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

#include <span>
#include <vector>

#include "decaylab/operator.hpp"

namespace decaylab {

/// Tag for constructors that skip validation. Only for values produced by
/// operations that preserve the invariants by construction.
struct Unchecked {
  explicit Unchecked() = default;
};

/// Unit-trace, positive semidefinite, Hermitian operator.
class DensityOperator {
 public:
  /// Validates Hermiticity, unit trace and the spectrum against `tol`.
  explicit DensityOperator(Operator op, const Tolerances& tol = kDefaultTolerances);
  DensityOperator(Operator op, Unchecked) : op_(std::move(op)) {}

  const Operator& op() const noexcept { return op_; }
  std::size_t dim() const noexcept { return op_.dim(); }

 private:
  Operator op_;
};

/// Hermitian idempotent operator together with an orthonormal basis of its
/// range.
class Projector {
 public:
  /// Validates Hermiticity, idempotency and Tr P = rank.
  Projector(Operator op, std::size_t rank, const Tolerances& tol = kDefaultTolerances);
  /// Sum of |e_i><e_i| over an orthonormal basis. Not validated.
  Projector(std::size_t dim, std::vector<std::vector<cplx>> orthonormal_basis, Unchecked);

  static Projector zero(std::size_t dim);

  const Operator& op() const noexcept { return op_; }
  std::size_t dim() const noexcept { return op_.dim(); }
  std::size_t rank() const noexcept { return basis_.size(); }
  const std::vector<std::vector<cplx>>& basis() const noexcept { return basis_; }

  /// I - P
  Projector complement() const;

 private:
  Operator op_;
  std::vector<std::vector<cplx>> basis_;
};

/// |v><v| / <v|v>
DensityOperator make_density_from_ket(std::span<const cplx> v);

/// Projector onto span(vectors). Orthonormalizes by modified Gram-Schmidt
/// with one re-orthogonalization pass; throws rank_deficient when a residual
/// norm falls below tol.dependence.
Projector make_projector(const std::vector<std::vector<cplx>>& vectors,
                         const Tolerances& tol = kDefaultTolerances);

/// Orthonormal basis of span(vectors) by twice-iterated modified
/// Gram-Schmidt. Throws rank_deficient on a dependent set.
std::vector<std::vector<cplx>> orthonormalize(std::vector<std::vector<cplx>> vectors,
                                              double dependence_tol = 1e-12);

/// Tr(P rho), clamped to [0, 1]. Throws validation if the raw value falls
/// outside [-1e-10, 1 + 1e-10].
double trace_prob(const Projector& lam, const DensityOperator& rho);

}  // namespace decaylab
