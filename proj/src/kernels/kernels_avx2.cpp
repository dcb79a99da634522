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

#include <immintrin.h>

#include "decaylab/kernels.hpp"

// Compiled with -mavx2 -mfma. Only reached through the dispatch table after a
// runtime CPU check, so nothing here may be inlined into generic code.

namespace decaylab::kernels {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// (lane0 - lane1) + (lane2 - lane3)
inline double halt(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_sub_sd(s, _mm_unpackhi_pd(s, s)));
}

inline const double* raw(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* raw(cplx* p) { return reinterpret_cast<double*>(p); }

double real_dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

// Accumulates x*y and x*swap(y) lane-wise over packed complex pairs.
inline void accumulate_products(const cplx* x, const cplx* y, std::size_t n,
                                __m256d& straight, __m256d& crossed, std::size_t& done) {
  __m256d s0 = _mm256_setzero_pd();
  __m256d s1 = _mm256_setzero_pd();
  __m256d c0 = _mm256_setzero_pd();
  __m256d c1 = _mm256_setzero_pd();
  const double* xp = raw(x);
  const double* yp = raw(y);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xa = _mm256_loadu_pd(xp + 2 * i);
    const __m256d ya = _mm256_loadu_pd(yp + 2 * i);
    const __m256d xb = _mm256_loadu_pd(xp + 2 * i + 4);
    const __m256d yb = _mm256_loadu_pd(yp + 2 * i + 4);
    s0 = _mm256_fmadd_pd(xa, ya, s0);
    s1 = _mm256_fmadd_pd(xb, yb, s1);
    c0 = _mm256_fmadd_pd(xa, _mm256_permute_pd(ya, 0x5), c0);
    c1 = _mm256_fmadd_pd(xb, _mm256_permute_pd(yb, 0x5), c1);
  }
  for (; i + 2 <= n; i += 2) {
    const __m256d xa = _mm256_loadu_pd(xp + 2 * i);
    const __m256d ya = _mm256_loadu_pd(yp + 2 * i);
    s0 = _mm256_fmadd_pd(xa, ya, s0);
    c0 = _mm256_fmadd_pd(xa, _mm256_permute_pd(ya, 0x5), c0);
  }
  straight = _mm256_add_pd(s0, s1);
  crossed = _mm256_add_pd(c0, c1);
  done = i;
}

cplx dotc_avx2(const cplx* x, const cplx* y, std::size_t n) {
  __m256d straight;
  __m256d crossed;
  std::size_t i;
  accumulate_products(x, y, n, straight, crossed, i);
  // conj(x)*y: re = xr*yr + xi*yi, im = xr*yi - xi*yr
  double re = hsum(straight);
  double im = halt(crossed);
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

cplx dotu_avx2(const cplx* x, const cplx* y, std::size_t n) {
  __m256d straight;
  __m256d crossed;
  std::size_t i;
  accumulate_products(x, y, n, straight, crossed, i);
  double re = halt(straight);
  double im = hsum(crossed);
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() - x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() + x[i].imag() * y[i].real();
  }
  return {re, im};
}

void axpy_avx2(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  const double* xp = raw(x);
  double* yp = raw(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xp + 2 * i);
    const __m256d cross = _mm256_mul_pd(ai, _mm256_permute_pd(xv, 0x5));
    // even lanes: ar*xr - ai*xi, odd lanes: ar*xi + ai*xr
    const __m256d prod = _mm256_fmaddsub_pd(ar, xv, cross);
    _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(_mm256_loadu_pd(yp + 2 * i), prod));
  }
  for (; i < n; ++i) {
    const double xr = x[i].real();
    const double xi = x[i].imag();
    y[i] = cplx(y[i].real() + a.real() * xr - a.imag() * xi,
                y[i].imag() + a.real() * xi + a.imag() * xr);
  }
}

void gemm_avx2(const cplx* a, const cplx* b, cplx* c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    cplx* row = c + i * n;
    for (std::size_t j = 0; j < n; ++j) row[j] = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const cplx aik = a[i * n + k];
      if (aik == cplx(0.0)) continue;
      axpy_avx2(aik, b + k * n, row, n);
    }
  }
}

void gemm_adjoint_avx2(const cplx* a, const cplx* b, cplx* c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      c[i * n + j] = dotc_avx2(b + j * n, a + i * n, n);
    }
  }
}

void gemv_avx2(const cplx* a, const cplx* x, cplx* y, std::size_t rows,
               std::size_t cols) {
  for (std::size_t i = 0; i < rows; ++i) y[i] = dotu_avx2(a + i * cols, x, cols);
}

constexpr KernelTable kAvx2{
    Isa::avx2, real_dot_avx2, dotc_avx2,  dotu_avx2,
    axpy_avx2, gemm_avx2,     gemm_adjoint_avx2, gemv_avx2,
};

}  // namespace

const KernelTable& avx2_table() noexcept { return kAvx2; }

}  // namespace decaylab::kernels
