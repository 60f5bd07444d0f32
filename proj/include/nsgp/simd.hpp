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

#pragma once

// Data-parallel inner loops shared by the NUFFT spreader/interpolator and the
// Fourier-grid step of the matvec. Every kernel has a scalar reference
// implementation; an AVX2+FMA variant is selected at runtime when the CPU
// supports it. Complex arrays are interleaved (re, im) std::complex<double>.

#include <complex>
#include <cstddef>
#include <string_view>

namespace nsgp::simd {

using cplx = std::complex<double>;

struct KernelTable {
  /// grid[a*stride + i] += c * outer[a] * inner[i],  a < rows, i < width.
  void (*spread_rows)(cplx* grid, std::size_t stride, const double* outer, std::size_t rows,
                      const double* inner, std::size_t width, cplx c);
  /// Sum_{a,i} grid[a*stride + i] * outer[a] * inner[i].
  cplx (*interp_rows)(const cplx* grid, std::size_t stride, const double* outer,
                      std::size_t rows, const double* inner, std::size_t width);
  /// dst[i] += scale * coef[i] * src[i].
  void (*scaled_product_accumulate)(cplx* dst, double scale, const double* coef,
                                    const cplx* src, std::size_t n);
  /// dst[i] += coef[i] * Re(src[i]).
  void (*real_part_accumulate)(double* dst, const double* coef, const cplx* src,
                               std::size_t n);
  /// dst[i] = cplx(a[i] * b[i], 0).
  void (*real_product)(cplx* dst, const double* a, const double* b, std::size_t n);
};

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;
bool isa_supported(Isa isa) noexcept;

/// Table for an explicit ISA; falls back to scalar when unsupported.
const KernelTable& kernels(Isa isa) noexcept;
/// Active table: best supported ISA unless overridden by set_active_isa or
/// the NSGP_SIMD=scalar environment variable.
const KernelTable& kernels() noexcept;
Isa active_isa() noexcept;
/// Returns false (and leaves the selection unchanged) if `isa` is unsupported.
bool set_active_isa(Isa isa) noexcept;

namespace detail {
extern const KernelTable scalar_table;
#if defined(NSGP_HAVE_AVX2_TU)
extern const KernelTable avx2_table;
#endif
}  // namespace detail

}  // namespace nsgp::simd
