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
#include <span>
#include <string_view>

// Dense complex inner loops. Every kernel has a scalar reference
// implementation; on x86-64 an AVX2/FMA variant is compiled separately and
// selected at runtime when the CPU supports it. The two variants agree to
// rounding (summation order differs) and are equivalence-tested.
//
// All matrices are row-major, n x n, densely packed.

namespace decaylab::kernels {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  // sum_i x[i] * y[i]
  double (*real_dot)(const double* x, const double* y, std::size_t n);
  // sum_i conj(x[i]) * y[i]
  cplx (*dotc)(const cplx* x, const cplx* y, std::size_t n);
  // sum_i x[i] * y[i]
  cplx (*dotu)(const cplx* x, const cplx* y, std::size_t n);
  // y += a * x
  void (*axpy)(cplx a, const cplx* x, cplx* y, std::size_t n);
  // c = a * b
  void (*gemm)(const cplx* a, const cplx* b, cplx* c, std::size_t n);
  // c = a * b^dagger
  void (*gemm_adjoint)(const cplx* a, const cplx* b, cplx* c, std::size_t n);
  // y = a * x, a is rows x cols
  void (*gemv)(const cplx* a, const cplx* x, cplx* y, std::size_t rows,
               std::size_t cols);
};

const KernelTable& scalar_table() noexcept;
#if defined(DECAYLAB_HAVE_AVX2)
const KernelTable& avx2_table() noexcept;
#endif

/// True when the variant was compiled in and the running CPU supports it.
bool isa_available(Isa isa) noexcept;

/// Kernel table used by the library. Chosen once on first use: the widest
/// available ISA unless the environment variable DECAYLAB_ISA=scalar forces
/// the reference path.
const KernelTable& active() noexcept;

/// Overrides the active table (tests and benchmarks). Not thread-safe with
/// respect to concurrently running kernels.
void set_active(Isa isa);

std::string_view isa_name(Isa isa) noexcept;

// Convenience wrappers over active().
double real_dot(std::span<const double> x, std::span<const double> y);
cplx dotc(std::span<const cplx> x, std::span<const cplx> y);
cplx dotu(std::span<const cplx> x, std::span<const cplx> y);
void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y);

}  // namespace decaylab::kernels
