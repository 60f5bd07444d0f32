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

#include <atomic>
#include <cstdlib>
#include <string>

#include "nsgp/simd.hpp"

namespace nsgp::simd {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(NSGP_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() noexcept {
  if (const char* env = std::getenv("NSGP_SIMD"); env && std::string(env) == "scalar")
    return Isa::scalar;
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& active() noexcept {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  return isa == Isa::avx2 ? "avx2" : "scalar";
}

bool isa_supported(Isa isa) noexcept {
  return isa == Isa::scalar || cpu_has_avx2();
}

const KernelTable& kernels(Isa isa) noexcept {
#if defined(NSGP_HAVE_AVX2_TU)
  if (isa == Isa::avx2 && cpu_has_avx2()) return detail::avx2_table;
#endif
  (void)isa;
  return detail::scalar_table;
}

const KernelTable& kernels() noexcept { return kernels(active().load(std::memory_order_relaxed)); }

Isa active_isa() noexcept { return active().load(std::memory_order_relaxed); }

bool set_active_isa(Isa isa) noexcept {
  if (!isa_supported(isa)) return false;
  active().store(isa, std::memory_order_relaxed);
  return true;
}

}  // namespace nsgp::simd
