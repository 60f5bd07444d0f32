// Copyright 2026 The nsgp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Compiled with -mavx2 -mfma; only reached through the dispatch table after a
// runtime CPU check.

#include <immintrin.h>

#include "nsgp/simd.hpp"

namespace nsgp::simd::detail {
namespace {

// [k0, k0, k1, k1] and [k2, k2, k3, k3] from four consecutive reals.
inline void duplicate4(const double* k, __m256d& lo, __m256d& hi) {
  const __m256d v = _mm256_loadu_pd(k);
  lo = _mm256_permute4x64_pd(v, 0x50);
  hi = _mm256_permute4x64_pd(v, 0xFA);
}

inline __m256d duplicate2(const double* k) {
  return _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(k)), 0x50);
}

inline cplx hsum(__m256d v) {
  const __m128d s = _mm_add_pd(_mm256_castpd256_pd128(v), _mm256_extractf128_pd(v, 1));
  return {_mm_cvtsd_f64(s), _mm_cvtsd_f64(_mm_unpackhi_pd(s, s))};
}

void spread_rows(cplx* grid, std::size_t stride, const double* outer, std::size_t rows,
                 const double* inner, std::size_t width, cplx c) {
  for (std::size_t a = 0; a < rows; ++a) {
    const cplx ca = c * outer[a];
    const __m256d cv = _mm256_setr_pd(ca.real(), ca.imag(), ca.real(), ca.imag());
    double* row = reinterpret_cast<double*>(grid + a * stride);
    std::size_t i = 0;
    for (; i + 4 <= width; i += 4) {
      __m256d klo, khi;
      duplicate4(inner + i, klo, khi);
      double* p = row + 2 * i;
      _mm256_storeu_pd(p, _mm256_fmadd_pd(cv, klo, _mm256_loadu_pd(p)));
      _mm256_storeu_pd(p + 4, _mm256_fmadd_pd(cv, khi, _mm256_loadu_pd(p + 4)));
    }
    for (; i + 2 <= width; i += 2) {
      double* p = row + 2 * i;
      _mm256_storeu_pd(p, _mm256_fmadd_pd(cv, duplicate2(inner + i), _mm256_loadu_pd(p)));
    }
    for (; i < width; ++i) grid[a * stride + i] += ca * inner[i];
  }
}

cplx interp_rows(const cplx* grid, std::size_t stride, const double* outer, std::size_t rows,
                 const double* inner, std::size_t width) {
  cplx tail = 0.0;
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  for (std::size_t a = 0; a < rows; ++a) {
    const double* row = reinterpret_cast<const double*>(grid + a * stride);
    const __m256d oa = _mm256_set1_pd(outer[a]);
    __m256d racc0 = _mm256_setzero_pd(), racc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= width; i += 4) {
      __m256d klo, khi;
      duplicate4(inner + i, klo, khi);
      racc0 = _mm256_fmadd_pd(_mm256_loadu_pd(row + 2 * i), klo, racc0);
      racc1 = _mm256_fmadd_pd(_mm256_loadu_pd(row + 2 * i + 4), khi, racc1);
    }
    for (; i + 2 <= width; i += 2)
      racc0 = _mm256_fmadd_pd(_mm256_loadu_pd(row + 2 * i), duplicate2(inner + i), racc0);
    cplx rtail = 0.0;
    for (; i < width; ++i) rtail += grid[a * stride + i] * inner[i];
    acc0 = _mm256_fmadd_pd(racc0, oa, acc0);
    acc1 = _mm256_fmadd_pd(racc1, oa, acc1);
    tail += rtail * outer[a];
  }
  return hsum(_mm256_add_pd(acc0, acc1)) + tail;
}

void scaled_product_accumulate(cplx* dst, double scale, const double* coef, const cplx* src,
                               std::size_t n) {
  const __m256d s = _mm256_set1_pd(scale);
  double* d = reinterpret_cast<double*>(dst);
  const double* x = reinterpret_cast<const double*>(src);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d klo, khi;
    duplicate4(coef + i, klo, khi);
    klo = _mm256_mul_pd(klo, s);
    khi = _mm256_mul_pd(khi, s);
    _mm256_storeu_pd(d + 2 * i, _mm256_fmadd_pd(_mm256_loadu_pd(x + 2 * i), klo,
                                                 _mm256_loadu_pd(d + 2 * i)));
    _mm256_storeu_pd(d + 2 * i + 4, _mm256_fmadd_pd(_mm256_loadu_pd(x + 2 * i + 4), khi,
                                                     _mm256_loadu_pd(d + 2 * i + 4)));
  }
  for (; i < n; ++i) dst[i] += (scale * coef[i]) * src[i];
}

void real_part_accumulate(double* dst, const double* coef, const cplx* src, std::size_t n) {
  const double* x = reinterpret_cast<const double*>(src);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(x + 2 * i);      // r0 i0 r1 i1
    const __m256d b = _mm256_loadu_pd(x + 2 * i + 4);  // r2 i2 r3 i3
    const __m256d re = _mm256_permute4x64_pd(_mm256_unpacklo_pd(a, b), 0xD8);
    _mm256_storeu_pd(dst + i,
                     _mm256_fmadd_pd(_mm256_loadu_pd(coef + i), re, _mm256_loadu_pd(dst + i)));
  }
  for (; i < n; ++i) dst[i] += coef[i] * src[i].real();
}

void real_product(cplx* dst, const double* a, const double* b, std::size_t n) {
  double* d = reinterpret_cast<double*>(dst);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d lo = _mm256_unpacklo_pd(p, zero);  // p0 0 p2 0
    const __m256d hi = _mm256_unpackhi_pd(p, zero);  // p1 0 p3 0
    _mm256_storeu_pd(d + 2 * i, _mm256_permute2f128_pd(lo, hi, 0x20));
    _mm256_storeu_pd(d + 2 * i + 4, _mm256_permute2f128_pd(lo, hi, 0x31));
  }
  for (; i < n; ++i) dst[i] = cplx(a[i] * b[i], 0.0);
}

}  // namespace

const KernelTable avx2_table = {spread_rows, interp_rows, scaled_product_accumulate,
                                real_part_accumulate, real_product};

}  // namespace nsgp::simd::detail
