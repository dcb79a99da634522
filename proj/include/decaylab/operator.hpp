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

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace decaylab {

using cplx = std::complex<double>;

/// Numerical tolerances shared by the validating constructors. The defaults
/// suit double precision up to dimension ~512.
struct Tolerances {
  double hermitian = 1e-10;       // max |A - A^dagger|
  double trace = 1e-10;           // |Tr rho - 1|
  double eigenvalue = 1e-10;      // smallest admissible eigenvalue is -this
  double idempotent = 1e-10;      // max |P^2 - P|
  double rank = 1e-8;             // |Tr P - rank|
  double reconstruction = 1e-9;   // max |U diag U^dagger - A|
  double unitarity = 1e-10;       // max |U^dagger U - I|
  double dependence = 1e-12;      // Gram-Schmidt residual norm
};

inline constexpr Tolerances kDefaultTolerances{};

/// Dense square complex matrix, row-major. Entries must be finite.
class Operator {
 public:
  Operator() = default;
  explicit Operator(std::size_t dim);
  Operator(std::size_t dim, std::vector<cplx> entries);
  Operator(std::initializer_list<std::initializer_list<cplx>> rows);

  static Operator identity(std::size_t dim);
  static Operator diagonal(std::span<const double> values);
  static Operator diagonal(std::span<const cplx> values);
  /// |a><b|
  static Operator outer(std::span<const cplx> a, std::span<const cplx> b);

  std::size_t dim() const noexcept { return dim_; }
  cplx operator()(std::size_t row, std::size_t col) const { return data_[row * dim_ + col]; }
  cplx& operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
  std::span<const cplx> data() const noexcept { return data_; }
  std::span<cplx> data() noexcept { return data_; }
  std::span<const cplx> row(std::size_t r) const { return {data_.data() + r * dim_, dim_}; }

  Operator adjoint() const;
  cplx trace() const;
  double frobenius_norm() const;
  /// max_ij |A_ij - A_ji^*|
  double hermiticity_error() const;
  double max_abs_diff(const Operator& other) const;
  bool is_zero() const;
  /// (A + A^dagger)/2
  Operator hermitian_part() const;

  Operator& operator+=(const Operator& rhs);
  Operator& operator-=(const Operator& rhs);
  Operator& operator*=(cplx scale);

  friend Operator operator+(Operator lhs, const Operator& rhs) { return lhs += rhs; }
  friend Operator operator-(Operator lhs, const Operator& rhs) { return lhs -= rhs; }
  friend Operator operator*(Operator lhs, cplx scale) { return lhs *= scale; }
  friend Operator operator*(cplx scale, Operator rhs) { return rhs *= scale; }
  friend Operator operator*(const Operator& lhs, const Operator& rhs);

  /// A * x
  std::vector<cplx> apply(std::span<const cplx> x) const;

  bool operator==(const Operator&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<cplx> data_;
};

/// A * B^dagger without materializing the adjoint.
Operator multiply_adjoint(const Operator& a, const Operator& b);

/// AB - BA.
Operator commutator(const Operator& a, const Operator& b);

/// Re Tr(A B) for Hermitian A, B; equal to sum_ij Re(A_ij conj(B_ij)).
double hermitian_trace_product(const Operator& a, const Operator& b);

/// Row-major text dump, one row per line, entries as "re+imi" with 17
/// significant digits separated by single spaces.
void dump(std::ostream& out, const Operator& op);
std::string dump(const Operator& op);

void require_same_dim(const Operator& a, const Operator& b, const char* where);

}  // namespace decaylab
