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

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "decaylab/error.hpp"
#include "decaylab/kernels.hpp"

namespace decaylab::kernels {
namespace {

const KernelTable* detect() noexcept {
  const char* forced = std::getenv("DECAYLAB_ISA");
  if (forced != nullptr && std::strcmp(forced, "scalar") == 0) return &scalar_table();
#if defined(DECAYLAB_HAVE_AVX2)
  if (isa_available(Isa::avx2)) return &avx2_table();
#endif
  return &scalar_table();
}

std::atomic<const KernelTable*>& slot() noexcept {
  static std::atomic<const KernelTable*> table{detect()};
  return table;
}

}  // namespace

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(DECAYLAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& active() noexcept { return *slot().load(std::memory_order_acquire); }

void set_active(Isa isa) {
  if (!isa_available(isa)) {
    throw Error(ErrorKind::invalid_input,
                std::string("kernel ISA not available: ") + std::string(isa_name(isa)));
  }
#if defined(DECAYLAB_HAVE_AVX2)
  if (isa == Isa::avx2) {
    slot().store(&avx2_table(), std::memory_order_release);
    return;
  }
#endif
  slot().store(&scalar_table(), std::memory_order_release);
}

std::string_view isa_name(Isa isa) noexcept {
  return isa == Isa::avx2 ? "avx2" : "scalar";
}

double real_dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::shape, "real_dot: length mismatch");
  return active().real_dot(x.data(), y.data(), x.size());
}

cplx dotc(std::span<const cplx> x, std::span<const cplx> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::shape, "dotc: length mismatch");
  return active().dotc(x.data(), y.data(), x.size());
}

cplx dotu(std::span<const cplx> x, std::span<const cplx> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::shape, "dotu: length mismatch");
  return active().dotu(x.data(), y.data(), x.size());
}

void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::shape, "axpy: length mismatch");
  active().axpy(a, x.data(), y.data(), x.size());
}

}  // namespace decaylab::kernels
