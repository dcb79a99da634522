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
#include <string>

#include "decaylab/error.hpp"
#include "decaylab/kernels.hpp"
#include "decaylab/spectral.hpp"
#include "decaylab/state.hpp"

namespace decaylab {

DensityOperator::DensityOperator(Operator op, const Tolerances& tol) : op_(std::move(op)) {
  if (op_.dim() == 0) throw Error(ErrorKind::invalid_input, "density operator: empty");
  const double herm = op_.hermiticity_error();
  if (herm > tol.hermitian) {
    throw Error(ErrorKind::validation,
                "density operator not Hermitian (error " + std::to_string(herm) + ")");
  }
  const cplx tr = op_.trace();
  if (std::abs(tr - cplx(1.0)) > tol.trace) {
    throw Error(ErrorKind::validation,
                "density operator trace " + std::to_string(tr.real()) + " != 1");
  }
  const auto spec = spectral_decompose(op_, false);
  if (spec.eigenvalues.front() < -tol.eigenvalue) {
    throw Error(ErrorKind::validation, "density operator has negative eigenvalue " +
                                           std::to_string(spec.eigenvalues.front()));
  }
}

Projector::Projector(Operator op, std::size_t rank, const Tolerances& tol) : op_(std::move(op)) {
  if (op_.dim() == 0) throw Error(ErrorKind::invalid_input, "projector: empty");
  if (op_.hermiticity_error() > tol.hermitian) {
    throw Error(ErrorKind::validation, "projector not Hermitian");
  }
  if ((op_ * op_).max_abs_diff(op_) > tol.idempotent) {
    throw Error(ErrorKind::validation, "projector not idempotent");
  }
  if (std::abs(op_.trace().real() - static_cast<double>(rank)) > tol.rank) {
    throw Error(ErrorKind::validation, "projector trace does not equal rank " +
                                           std::to_string(rank));
  }
  const auto spec = spectral_decompose(op_, false);
  for (std::size_t k = op_.dim(); k-- > op_.dim() - rank;) basis_.push_back(spec.column(k));
}

Projector::Projector(std::size_t dim, std::vector<std::vector<cplx>> orthonormal_basis, Unchecked)
    : op_(dim), basis_(std::move(orthonormal_basis)) {
  for (const auto& e : basis_) {
    if (e.size() != dim) throw Error(ErrorKind::shape, "projector basis vector length");
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) op_(i, j) += e[i] * std::conj(e[j]);
    }
  }
}

Projector Projector::zero(std::size_t dim) { return Projector(dim, {}, Unchecked{}); }

Projector Projector::complement() const {
  const std::size_t n = dim();
  if (rank() == 0) {
    std::vector<std::vector<cplx>> basis(n, std::vector<cplx>(n));
    for (std::size_t i = 0; i < n; ++i) basis[i][i] = 1.0;
    return Projector(n, std::move(basis), Unchecked{});
  }
  // Complete the basis with unit vectors, then keep the new directions.
  std::vector<std::vector<cplx>> candidates = basis_;
  const std::size_t first_new = candidates.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<cplx> e(n);
    e[i] = 1.0;
    candidates.push_back(std::move(e));
  }
  std::vector<std::vector<cplx>> kept;
  std::vector<std::vector<cplx>> accepted = basis_;
  for (std::size_t c = first_new; c < candidates.size() && kept.size() < n - rank(); ++c) {
    std::vector<cplx> v = candidates[c];
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : accepted) {
        const cplx proj = kernels::dotc(q, v);
        kernels::axpy(-proj, q, v);
      }
    }
    double norm = std::sqrt(std::real(kernels::dotc(v, v)));
    if (norm < 1e-6) continue;
    for (cplx& z : v) z /= norm;
    accepted.push_back(v);
    kept.push_back(std::move(v));
  }
  return Projector(n, std::move(kept), Unchecked{});
}

DensityOperator make_density_from_ket(std::span<const cplx> v) {
  if (v.empty()) throw Error(ErrorKind::invalid_input, "make_density_from_ket: empty vector");
  const double norm2 = std::real(kernels::dotc(v, v));
  if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
    throw Error(ErrorKind::invalid_input, "make_density_from_ket: zero or non-finite vector");
  }
  std::vector<cplx> unit(v.begin(), v.end());
  const double inv = 1.0 / std::sqrt(norm2);
  for (cplx& z : unit) z *= inv;
  Operator op = Operator::outer(unit, unit);
  for (std::size_t i = 0; i < op.dim(); ++i) op(i, i) = std::norm(unit[i]);
  return DensityOperator(std::move(op), Unchecked{});
}

std::vector<std::vector<cplx>> orthonormalize(std::vector<std::vector<cplx>> vectors,
                                              double dependence_tol) {
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    auto& v = vectors[k];
    if (k > 0 && v.size() != vectors[0].size()) {
      throw Error(ErrorKind::shape, "orthonormalize: vectors differ in length");
    }
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < k; ++j) {
        const cplx proj = kernels::dotc(vectors[j], v);
        kernels::axpy(-proj, vectors[j], v);
      }
    }
    const double norm = std::sqrt(std::real(kernels::dotc(v, v)));
    if (!(norm >= dependence_tol)) {
      throw Error(ErrorKind::rank_deficient,
                  "vector " + std::to_string(k) + " is linearly dependent (residual " +
                      std::to_string(norm) + ")");
    }
    for (cplx& z : v) z /= norm;
  }
  return vectors;
}

Projector make_projector(const std::vector<std::vector<cplx>>& vectors, const Tolerances& tol) {
  if (vectors.empty()) throw Error(ErrorKind::invalid_input, "make_projector: no vectors");
  const std::size_t dim = vectors.front().size();
  if (dim == 0) throw Error(ErrorKind::invalid_input, "make_projector: empty vectors");
  return Projector(dim, orthonormalize(vectors, tol.dependence), Unchecked{});
}

double trace_prob(const Projector& lam, const DensityOperator& rho) {
  require_same_dim(lam.op(), rho.op(), "trace_prob");
  const double p = hermitian_trace_product(lam.op(), rho.op());
  if (!(p >= -1e-10 && p <= 1.0 + 1e-10)) {
    throw Error(ErrorKind::validation,
                "Tr(P rho) = " + std::to_string(p) + " outside [0, 1]");
  }
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace decaylab
