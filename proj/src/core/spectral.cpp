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

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "decaylab/error.hpp"
#include "decaylab/kernels.hpp"
#include "decaylab/spectral.hpp"

namespace decaylab {
namespace {

using RowMajorMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kPhaseFloor = 1e-12;

bool lexicographically_less(const Operator& vecs, std::size_t a, std::size_t b) {
  for (std::size_t i = 0; i < vecs.dim(); ++i) {
    const cplx x = vecs(i, a);
    const cplx y = vecs(i, b);
    if (x.real() != y.real()) return x.real() < y.real();
    if (x.imag() != y.imag()) return x.imag() < y.imag();
  }
  return false;
}

}  // namespace

std::vector<cplx> SpectralDecomposition::column(std::size_t k) const {
  std::vector<cplx> out(dim());
  for (std::size_t i = 0; i < dim(); ++i) out[i] = eigenvectors(i, k);
  return out;
}

Operator SpectralDecomposition::reconstruct() const {
  Operator scaled = eigenvectors;
  for (std::size_t i = 0; i < dim(); ++i) {
    for (std::size_t k = 0; k < dim(); ++k) scaled(i, k) *= eigenvalues[k];
  }
  return multiply_adjoint(scaled, eigenvectors);
}

Operator SpectralDecomposition::propagator(double t, double hbar) const {
  if (!(hbar > 0.0)) throw Error(ErrorKind::invalid_input, "hbar must be positive");
  Operator scaled = eigenvectors;
  std::vector<cplx> phase(dim());
  for (std::size_t k = 0; k < dim(); ++k) {
    const double angle = -eigenvalues[k] * t / hbar;
    phase[k] = cplx(std::cos(angle), std::sin(angle));
  }
  for (std::size_t i = 0; i < dim(); ++i) {
    for (std::size_t k = 0; k < dim(); ++k) scaled(i, k) *= phase[k];
  }
  return multiply_adjoint(scaled, eigenvectors);
}

SpectralDecomposition spectral_decompose(const Operator& h, bool require_hermitian,
                                         const Tolerances& tol) {
  const std::size_t n = h.dim();
  if (n == 0) throw Error(ErrorKind::invalid_input, "spectral_decompose: empty operator");
  if (require_hermitian) {
    const double err = h.hermiticity_error();
    if (err > tol.hermitian) {
      throw Error(ErrorKind::validation,
                  "spectral_decompose: operator not Hermitian (error " + std::to_string(err) + ")");
    }
  }

  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = Operator(n);

  if (n == 1) {
    out.eigenvalues[0] = h(0, 0).real();
    out.eigenvectors(0, 0) = 1.0;
    return out;
  }

  Eigen::Map<const RowMajorMatrix> view(h.data().data(), static_cast<Eigen::Index>(n),
                                        static_cast<Eigen::Index>(n));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(view.template cast<cplx>(),
                                                         Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::non_convergence, "spectral_decompose: eigensolver did not converge");
  }
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();

  Operator raw(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto col = static_cast<Eigen::Index>(k);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      scale = std::max(scale, std::abs(vectors(static_cast<Eigen::Index>(i), col)));
    }
    cplx phase = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx z = vectors(static_cast<Eigen::Index>(i), col);
      if (std::abs(z) > kPhaseFloor * std::max(scale, 1.0)) {
        phase = std::conj(z) / std::abs(z);
        break;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      cplx z = vectors(static_cast<Eigen::Index>(i), col) * phase;
      raw(i, k) = z;
    }
    // The pivot component is real positive by construction; drop rounding.
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(raw(i, k)) > kPhaseFloor * std::max(scale, 1.0)) {
        raw(i, k) = cplx(std::abs(raw(i, k)), 0.0);
        break;
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double va = values(static_cast<Eigen::Index>(a));
    const double vb = values(static_cast<Eigen::Index>(b));
    if (va != vb) return va < vb;
    return lexicographically_less(raw, a, b);
  });

  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = values(static_cast<Eigen::Index>(order[k]));
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = raw(i, order[k]);
  }
  return out;
}

DensityOperator conjugate(const DensityOperator& rho, const Operator& unitary) {
  require_same_dim(rho.op(), unitary, "conjugate");
  const Operator left = unitary * rho.op();
  Operator result = multiply_adjoint(left, unitary).hermitian_part();
  return DensityOperator(std::move(result), Unchecked{});
}

DensityOperator evolve(const DensityOperator& rho, const SpectralDecomposition& h, double t,
                       double hbar) {
  if (h.dim() != rho.dim()) throw Error(ErrorKind::shape, "evolve: dimension mismatch");
  if (!std::isfinite(t)) throw Error(ErrorKind::invalid_input, "evolve: time must be finite");
  return conjugate(rho, h.propagator(t, hbar));
}

Operator hermitian_exponential(const Operator& g, double theta) {
  if (g.dim() != 2) return spectral_decompose(g).propagator(theta);
  if (g.hermiticity_error() > kDefaultTolerances.hermitian) {
    throw Error(ErrorKind::validation, "hermitian_exponential: generator not Hermitian");
  }
  const double a = 0.5 * (g(0, 0).real() + g(1, 1).real());
  const double nz = 0.5 * (g(0, 0).real() - g(1, 1).real());
  const cplx off = g(0, 1);  // nx - i ny
  const double norm = std::sqrt(nz * nz + std::norm(off));
  const cplx global = std::polar(1.0, -theta * a);
  const double c = std::cos(theta * norm);
  // sin(theta |n|) / |n|, finite as |n| -> 0
  const double s = norm > 0.0 ? std::sin(theta * norm) / norm : theta;
  const cplx minus_i(0.0, -1.0);
  Operator u(2);
  u(0, 0) = global * (c + minus_i * s * nz);
  u(1, 1) = global * (c - minus_i * s * nz);
  u(0, 1) = global * minus_i * s * off;
  u(1, 0) = global * minus_i * s * std::conj(off);
  return u;
}

DensityOperator evolve(const DensityOperator& rho, const Operator& h, double t, double hbar) {
  require_same_dim(rho.op(), h, "evolve");
  return evolve(rho, spectral_decompose(h), t, hbar);
}

}  // namespace decaylab
