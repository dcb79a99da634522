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

// Reference computations used only by tests. They deliberately avoid the
// library's spectral and kernel paths so they can check them.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "decaylab/operator.hpp"

namespace decaylab::testing {

using Matrix = std::vector<std::vector<cplx>>;

inline Matrix to_matrix(const Operator& op) {
  Matrix m(op.dim(), std::vector<cplx>(op.dim()));
  for (std::size_t i = 0; i < op.dim(); ++i) {
    for (std::size_t j = 0; j < op.dim(); ++j) m[i][j] = op(i, j);
  }
  return m;
}

inline Operator to_operator(const Matrix& m) {
  Operator op(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) op(i, j) = m[i][j];
  }
  return op;
}

inline Matrix multiply(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size();
  Matrix c(n, std::vector<cplx>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  }
  return c;
}

inline Matrix adjoint(const Matrix& a) {
  Matrix out(a.size(), std::vector<cplx>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) out[j][i] = std::conj(a[i][j]);
  }
  return out;
}

/// exp(-i H t / hbar) by scaling and squaring of a truncated Taylor series.
inline Matrix propagator_taylor(const Operator& h, double t, double hbar = 1.0) {
  const std::size_t n = h.dim();
  Matrix a = to_matrix(h);
  double norm = 0.0;
  for (const auto& row : a) {
    double s = 0.0;
    for (const cplx& z : row) s += std::abs(z);
    norm = std::max(norm, s);
  }
  norm *= std::abs(t) / hbar;
  int squarings = 0;
  while (norm > 0.5) {
    norm /= 2.0;
    ++squarings;
  }
  const cplx scale = cplx(0.0, -t / hbar) / std::pow(2.0, squarings);
  for (auto& row : a) {
    for (cplx& z : row) z *= scale;
  }
  Matrix result(n, std::vector<cplx>(n));
  Matrix term(n, std::vector<cplx>(n));
  for (std::size_t i = 0; i < n; ++i) result[i][i] = term[i][i] = 1.0;
  for (int k = 1; k <= 30; ++k) {
    term = multiply(term, a);
    for (auto& row : term) {
      for (cplx& z : row) z /= static_cast<double>(k);
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) result[i][j] += term[i][j];
    }
  }
  for (int s = 0; s < squarings; ++s) result = multiply(result, result);
  return result;
}

class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : engine_(seed) {}
  double normal() { return normal_(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
  }
  cplx complex() { return {normal(), normal()}; }

  std::vector<cplx> vector(std::size_t n) {
    std::vector<cplx> v(n);
    for (cplx& z : v) z = complex();
    return v;
  }

  /// Hermitian with entries of order one, then scaled by `scale / (Frobenius norm)`.
  Operator hermitian(std::size_t n, double scale = 1.0) {
    Operator h(n);
    for (std::size_t i = 0; i < n; ++i) {
      h(i, i) = normal();
      for (std::size_t j = i + 1; j < n; ++j) {
        h(i, j) = complex();
        h(j, i) = std::conj(h(i, j));
      }
    }
    const double f = h.frobenius_norm();
    return h * cplx(scale / f);
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

inline Operator pauli_x() { return Operator{{0.0, 1.0}, {1.0, 0.0}}; }
inline Operator pauli_y() { return Operator{{0.0, cplx(0.0, -1.0)}, {cplx(0.0, 1.0), 0.0}}; }
inline Operator pauli_z() { return Operator{{1.0, 0.0}, {0.0, -1.0}}; }

}  // namespace decaylab::testing
