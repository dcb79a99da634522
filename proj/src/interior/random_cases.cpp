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
#include "decaylab/interior.hpp"
#include "decaylab/spectral.hpp"

namespace decaylab {
namespace {

Operator gaussian_hermitian(std::size_t dim, RandomStream& rng) {
  Operator g(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    g(i, i) = rng.normal();
    for (std::size_t j = i + 1; j < dim; ++j) {
      const cplx z = rng.complex_normal();
      g(i, j) = z;
      g(j, i) = std::conj(z);
    }
  }
  return g;
}

double spectral_norm(const Operator& h) {
  const auto spec = spectral_decompose(h);
  return std::max(std::abs(spec.eigenvalues.front()), std::abs(spec.eigenvalues.back()));
}

// sum_ab c_a A_ab c_b^dagger for orthonormal columns c.
Operator embed(const std::vector<std::vector<cplx>>& basis, const Operator& block) {
  const std::size_t n = basis.front().size();
  Operator out(n);
  for (std::size_t a = 0; a < basis.size(); ++a) {
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const cplx w = block(a, b);
      if (w == cplx(0.0)) continue;
      for (std::size_t i = 0; i < n; ++i) {
        const cplx left = w * basis[a][i];
        for (std::size_t j = 0; j < n; ++j) out(i, j) += left * std::conj(basis[b][j]);
      }
    }
  }
  return out.hermitian_part();
}

}  // namespace

Operator random_hermitian(std::size_t dim, double norm, RandomStream& rng) {
  if (dim == 0) throw Error(ErrorKind::invalid_input, "random_hermitian: dim must be >= 1");
  if (!(norm >= 0.0)) throw Error(ErrorKind::invalid_input, "random_hermitian: norm must be >= 0");
  Operator g = gaussian_hermitian(dim, rng);
  const double current = spectral_norm(g);
  if (current == 0.0) return g;
  return (g * cplx(norm / current)).hermitian_part();
}

Projector random_projector(std::size_t dim, std::size_t rank, RandomStream& rng) {
  if (rank > dim) throw Error(ErrorKind::invalid_input, "random_projector: rank exceeds dim");
  if (rank == 0) return Projector::zero(dim);
  const Operator u = sample_random_unitary(dim, rng);
  std::vector<std::vector<cplx>> basis(rank, std::vector<cplx>(dim));
  for (std::size_t k = 0; k < rank; ++k) {
    for (std::size_t i = 0; i < dim; ++i) basis[k][i] = u(i, k);
  }
  return Projector(dim, std::move(basis), Unchecked{});
}

DensityOperator random_density(const Projector& support, RandomStream& rng) {
  const std::size_t r = support.rank();
  if (r == 0) throw Error(ErrorKind::invalid_input, "random_density: empty support");
  Operator z(r);
  for (cplx& v : z.data()) v = rng.complex_normal();
  Operator block = multiply_adjoint(z, z);
  block *= cplx(1.0 / block.trace().real());
  Operator rho = embed(support.basis(), block);
  rho *= cplx(1.0 / rho.trace().real());
  return DensityOperator(std::move(rho));
}

CommutingCase random_commuting_case(std::size_t dim, std::size_t rank, double norm,
                                    RandomStream& rng) {
  if (rank == 0 || rank > dim) {
    throw Error(ErrorKind::invalid_input, "random_commuting_case: need 1 <= rank <= dim");
  }
  Projector lam = random_projector(dim, rank, rng);
  DensityOperator rho = random_density(lam, rng);
  Operator h = embed(lam.basis(), random_hermitian(rank, norm, rng));
  if (rank < dim) h += embed(lam.complement().basis(), random_hermitian(dim - rank, norm, rng));
  return {std::move(lam), std::move(rho), std::move(h)};
}

}  // namespace decaylab
