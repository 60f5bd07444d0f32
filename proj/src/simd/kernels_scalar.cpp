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

#include "nsgp/simd.hpp"

namespace nsgp::simd::detail {
namespace {

void spread_rows(cplx* grid, std::size_t stride, const double* outer, std::size_t rows,
                 const double* inner, std::size_t width, cplx c) {
  for (std::size_t a = 0; a < rows; ++a) {
    const cplx ca = c * outer[a];
    cplx* row = grid + a * stride;
    for (std::size_t i = 0; i < width; ++i) row[i] += ca * inner[i];
  }
}

cplx interp_rows(const cplx* grid, std::size_t stride, const double* outer, std::size_t rows,
                 const double* inner, std::size_t width) {
  cplx total = 0.0;
  for (std::size_t a = 0; a < rows; ++a) {
    const cplx* row = grid + a * stride;
    cplx acc = 0.0;
    for (std::size_t i = 0; i < width; ++i) acc += row[i] * inner[i];
    total += acc * outer[a];
  }
  return total;
}

void scaled_product_accumulate(cplx* dst, double scale, const double* coef, const cplx* src,
                               std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += (scale * coef[i]) * src[i];
}

void real_part_accumulate(double* dst, const double* coef, const cplx* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += coef[i] * src[i].real();
}

void real_product(cplx* dst, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = cplx(a[i] * b[i], 0.0);
}

}  // namespace

const KernelTable scalar_table = {spread_rows, interp_rows, scaled_product_accumulate,
                                  real_part_accumulate, real_product};

}  // namespace nsgp::simd::detail
