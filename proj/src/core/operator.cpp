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

#include "decaylab/operator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "decaylab/error.hpp"
#include "decaylab/kernels.hpp"

namespace decaylab {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid input";
    case ErrorKind::shape: return "shape error";
    case ErrorKind::validation: return "validation error";
    case ErrorKind::rank_deficient: return "rank deficiency";
    case ErrorKind::conditioning: return "ill-conditioned system";
    case ErrorKind::non_convergence: return "non-convergence";
    case ErrorKind::io: return "I/O error";
    case ErrorKind::config: return "configuration error";
  }
  return "error";
}

int exit_status(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::config: return 2;
    case ErrorKind::io: return 4;
    case ErrorKind::non_convergence: return 5;
    default: return 3;
  }
}

namespace {

void check_finite(std::span<const cplx> entries) {
  for (const cplx& z : entries) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw Error(ErrorKind::invalid_input, "operator entries must be finite");
    }
  }
}

}  // namespace

Operator::Operator(std::size_t dim) : dim_(dim), data_(dim * dim) {}

Operator::Operator(std::size_t dim, std::vector<cplx> entries)
    : dim_(dim), data_(std::move(entries)) {
  if (data_.size() != dim_ * dim_) {
    throw Error(ErrorKind::shape, "operator needs dim*dim entries, got " +
                                      std::to_string(data_.size()) + " for dim " +
                                      std::to_string(dim_));
  }
  check_finite(data_);
}

Operator::Operator(std::initializer_list<std::initializer_list<cplx>> rows)
    : dim_(rows.size()) {
  data_.reserve(dim_ * dim_);
  for (const auto& r : rows) {
    if (r.size() != dim_) throw Error(ErrorKind::shape, "operator rows must be square");
    data_.insert(data_.end(), r.begin(), r.end());
  }
  check_finite(data_);
}

Operator Operator::identity(std::size_t dim) {
  Operator op(dim);
  for (std::size_t i = 0; i < dim; ++i) op(i, i) = 1.0;
  return op;
}

Operator Operator::diagonal(std::span<const double> values) {
  Operator op(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) op(i, i) = values[i];
  check_finite(op.data());
  return op;
}

Operator Operator::diagonal(std::span<const cplx> values) {
  Operator op(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) op(i, i) = values[i];
  check_finite(op.data());
  return op;
}

Operator Operator::outer(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::shape, "outer: length mismatch");
  Operator op(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) op(i, j) = a[i] * std::conj(b[j]);
  }
  return op;
}

Operator Operator::adjoint() const {
  Operator out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
  }
  return out;
}

cplx Operator::trace() const {
  cplx acc = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) acc += (*this)(i, i);
  return acc;
}

double Operator::frobenius_norm() const {
  const auto* raw = reinterpret_cast<const double*>(data_.data());
  return std::sqrt(kernels::active().real_dot(raw, raw, 2 * data_.size()));
}

double Operator::hermiticity_error() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = i; j < dim_; ++j) {
      worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    }
  }
  return worst;
}

double Operator::max_abs_diff(const Operator& other) const {
  require_same_dim(*this, other, "max_abs_diff");
  double worst = 0.0;
  for (std::size_t k = 0; k < data_.size(); ++k) {
    worst = std::max(worst, std::abs(data_[k] - other.data_[k]));
  }
  return worst;
}

bool Operator::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](cplx z) { return z == cplx(0.0); });
}

Operator Operator::hermitian_part() const {
  Operator out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      out(i, j) = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
    }
  }
  return out;
}

Operator& Operator::operator+=(const Operator& rhs) {
  require_same_dim(*this, rhs, "operator+");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
  return *this;
}

Operator& Operator::operator-=(const Operator& rhs) {
  require_same_dim(*this, rhs, "operator-");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
  return *this;
}

Operator& Operator::operator*=(cplx scale) {
  for (cplx& z : data_) z *= scale;
  return *this;
}

Operator operator*(const Operator& lhs, const Operator& rhs) {
  require_same_dim(lhs, rhs, "operator*");
  Operator out(lhs.dim());
  kernels::active().gemm(lhs.data().data(), rhs.data().data(), out.data().data(), lhs.dim());
  return out;
}

std::vector<cplx> Operator::apply(std::span<const cplx> x) const {
  if (x.size() != dim_) throw Error(ErrorKind::shape, "apply: vector length mismatch");
  std::vector<cplx> y(dim_);
  kernels::active().gemv(data_.data(), x.data(), y.data(), dim_, dim_);
  return y;
}

Operator multiply_adjoint(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "multiply_adjoint");
  Operator out(a.dim());
  kernels::active().gemm_adjoint(a.data().data(), b.data().data(), out.data().data(), a.dim());
  return out;
}

Operator commutator(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "commutator");
  return a * b - b * a;
}

double hermitian_trace_product(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "trace product");
  const auto* pa = reinterpret_cast<const double*>(a.data().data());
  const auto* pb = reinterpret_cast<const double*>(b.data().data());
  return kernels::active().real_dot(pa, pb, 2 * a.data().size());
}

void dump(std::ostream& out, const Operator& op) {
  char buf[96];
  for (std::size_t i = 0; i < op.dim(); ++i) {
    for (std::size_t j = 0; j < op.dim(); ++j) {
      const cplx z = op(i, j);
      std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
      if (j > 0) out << ' ';
      out << buf;
    }
    out << '\n';
  }
}

std::string dump(const Operator& op) {
  std::ostringstream ss;
  dump(ss, op);
  return ss.str();
}

void require_same_dim(const Operator& a, const Operator& b, const char* where) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::shape, std::string(where) + ": dimension mismatch (" +
                                      std::to_string(a.dim()) + " vs " +
                                      std::to_string(b.dim()) + ")");
  }
}

}  // namespace decaylab
