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

#include <vector>

#include "decaylab/operator.hpp"
#include "decaylab/state.hpp"

namespace decaylab {

/// A = U diag(eigenvalues) U^dagger with ascending eigenvalues. Column k of
/// `eigenvectors` is the eigenvector for eigenvalues[k]; its first component
/// with modulus above 1e-12 is real positive. Equal eigenvalues are ordered
/// lexicographically by their phase-fixed eigenvector entries (re, then im).
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  Operator eigenvectors;

  std::size_t dim() const noexcept { return eigenvalues.size(); }
  std::vector<cplx> column(std::size_t k) const;
  Operator reconstruct() const;
  /// U diag(exp(-i lambda t / hbar)) U^dagger
  Operator propagator(double t, double hbar = 1.0) const;
};

SpectralDecomposition spectral_decompose(const Operator& h, bool require_hermitian = true,
                                         const Tolerances& tol = kDefaultTolerances);

/// exp(-i theta G) for Hermitian G. Two-dimensional generators use the
/// closed form exp(-i theta (a + n.sigma)) = e^{-i theta a} (cos(theta |n|) -
/// i sin(theta |n|) n.sigma / |n|); larger ones go through
/// spectral_decompose.
Operator hermitian_exponential(const Operator& g, double theta);

/// exp(-iHt/hbar) rho exp(iHt/hbar). The result is re-Hermitized to remove
/// rounding asymmetry.
DensityOperator evolve(const DensityOperator& rho, const Operator& h, double t,
                       double hbar = 1.0);
DensityOperator evolve(const DensityOperator& rho, const SpectralDecomposition& h, double t,
                       double hbar = 1.0);
/// Conjugation by a precomputed unitary: U rho U^dagger.
DensityOperator conjugate(const DensityOperator& rho, const Operator& unitary);

}  // namespace decaylab
