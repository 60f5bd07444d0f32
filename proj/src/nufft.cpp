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

#include "nsgp/nufft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "nsgp/errors.hpp"
#include "nsgp/simd.hpp"

namespace nsgp {

namespace {

// The FFTW planner is not thread safe; execution with new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwDeleter {
  void operator()(cplx* p) const noexcept { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<cplx[], FftwDeleter>;

FftwBuffer make_buffer(std::size_t n) {
  auto* p = static_cast<cplx*>(fftw_malloc(sizeof(cplx) * n));
  if (!p) throw ResourceError("failed to allocate NUFFT fine grid");
  std::fill(p, p + n, cplx(0.0));
  return FftwBuffer(p);
}

// ESTIMATE keeps plan selection, and therefore rounding, identical run to run.
constexpr unsigned kPlannerFlags = FFTW_ESTIMATE;

inline fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

double es_kernel(double z, double beta) {
  const double s = 1.0 - z * z;
  return s <= 0.0 ? std::exp(-beta) * (s == 0.0) : std::exp(beta * (std::sqrt(s) - 1.0));
}

// (w/2) int_{-1}^{1} phi(z) cos(pi k w z / nf) dz by composite Gauss-Legendre;
// panels cluster toward z = 1 where sqrt(1 - z^2) is not smooth.
double kernel_fourier_series(int k, int width, int nf, double beta) {
  using Gauss = boost::math::quadrature::gauss<double, 30>;
  const double a = std::numbers::pi * k * width / nf;
  auto f = [&](double z) { return es_kernel(z, beta) * std::cos(a * z); };
  static constexpr double edges[] = {0.0, 0.5, 0.8, 0.95, 0.99, 1.0};
  double sum = 0.0;
  for (std::size_t p = 0; p + 1 < std::size(edges); ++p)
    sum += Gauss::integrate(f, edges[p], edges[p + 1]);
  return width * sum;  // (w/2) * 2 * int_0^1
}

}  // namespace

struct NufftPlan::FftPlans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  FftPlans(int dim, int nf) {
    std::size_t total = 1;
    int n[3] = {nf, nf, nf};
    for (int i = 0; i < dim; ++i) total *= static_cast<std::size_t>(nf);
    FftwBuffer scratch = make_buffer(total);
    std::lock_guard<std::mutex> lock(planner_mutex());
    forward = fftw_plan_dft(dim, n, as_fftw(scratch.get()), as_fftw(scratch.get()),
                            FFTW_FORWARD, kPlannerFlags);
    backward = fftw_plan_dft(dim, n, as_fftw(scratch.get()), as_fftw(scratch.get()),
                             FFTW_BACKWARD, kPlannerFlags);
    if (!forward || !backward) throw ResourceError("FFTW planning failed");
  }
  ~FftPlans() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;
};

int NufftPlan::width_for_tolerance(double tol) noexcept {
  const int w = static_cast<int>(std::ceil(-std::log10(tol) - 1e-9)) + 1;
  return std::clamp(w, 2, 16);
}

int NufftPlan::next_smooth_even(int n) noexcept {
  if (n < 2) n = 2;
  if (n % 2) ++n;
  for (;; n += 2) {
    int r = n;
    for (int p : {2, 3, 5})
      while (r % p == 0) r /= p;
    if (r == 1) return n;
  }
}

NufftPlan::NufftPlan(const PointSet& pts, const FourierGrid& grid, double tol)
    : pts_(pts), grid_(grid), tol_(tol) {
  grid_.validate();
  if (pts.dim() != grid.dim) throw ShapeError("point and grid dimensions differ");
  if (!(tol >= 1e-14)) {
    std::ostringstream os;
    os << "NUFFT tolerance " << tol << " is below the achievable 1e-14";
    throw UnsupportedParameter(os.str());
  }
  width_ = width_for_tolerance(tol);
  beta_ = 2.30 * width_;
  nf_ = next_smooth_even(std::max(2 * grid.side(), 2 * width_));

  const std::size_t n = pts.size();
  const int d = pts.dim();
  const double half_w = 0.5 * width_;
  offsets_.resize(n * d);
  kernel_.resize(n * d * width_);
  for (std::size_t p = 0; p < n; ++p) {
    for (int i = 0; i < d; ++i) {
      const double s = grid.delta_omega * pts[p][i];
      if (std::abs(s) > 0.5) {
        std::ostringstream os;
        os << "point " << p << ": |delta_omega * x| = " << std::abs(s)
           << " exceeds 1/2; the NUFFT phase would wrap";
        throw DomainError(os.str());
      }
      double u = s * nf_;
      if (u < 0.0) u += nf_;
      if (u >= nf_) u -= nf_;
      const int l0 = static_cast<int>(std::ceil(u - half_w));
      offsets_[p * d + i] = l0;
      double* ker = kernel_.data() + (p * d + i) * width_;
      for (int a = 0; a < width_; ++a) ker[a] = es_kernel((l0 + a - u) / half_w, beta_);
    }
  }

  deconv_.resize(grid.row_length());
  for (int k = 0; k <= grid.m; ++k) {
    const double inv = 1.0 / kernel_fourier_series(k, width_, nf_, beta_);
    deconv_[grid.m + k] = inv;
    deconv_[grid.m - k] = inv;
  }

  order_.resize(n);
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
    for (int i = 0; i < d; ++i) {
      // Coarse bins along the slow axes, then the contiguous axis.
      const int ka = offsets_[a * d + i] / (i + 1 < d ? 8 : 1);
      const int kb = offsets_[b * d + i] / (i + 1 < d ? 8 : 1);
      if (ka != kb) return ka < kb;
    }
    return false;
  });

  fft_ = std::make_shared<FftPlans>(d, nf_);
}

NufftPlan::~NufftPlan() = default;
NufftPlan::NufftPlan(const NufftPlan&) = default;
NufftPlan& NufftPlan::operator=(const NufftPlan&) = default;
NufftPlan::NufftPlan(NufftPlan&&) noexcept = default;
NufftPlan& NufftPlan::operator=(NufftPlan&&) noexcept = default;

std::size_t NufftPlan::fine_total() const noexcept {
  std::size_t t = 1;
  for (int i = 0; i < grid_.dim; ++i) t *= static_cast<std::size_t>(nf_);
  return t;
}

bool NufftPlan::interior(std::size_t p) const noexcept {
  const int d = grid_.dim;
  for (int i = 0; i < d; ++i) {
    const int l0 = offsets_[p * d + i];
    if (l0 < 0 || l0 + width_ > nf_) return false;
  }
  return true;
}

namespace {

inline int wrap(int l, int nf) noexcept {
  l %= nf;
  return l < 0 ? l + nf : l;
}

}  // namespace

std::vector<cplx> NufftPlan::type1(std::span<const cplx> c) const {
  std::vector<cplx> out(grid_.size());
  type1(c, out);
  return out;
}

void NufftPlan::type1(std::span<const cplx> c, std::span<cplx> out) const {
  if (c.size() != pts_.size()) throw ShapeError("type-1 NUFFT: input length != number of points");
  if (out.size() != grid_.size()) throw ShapeError("type-1 NUFFT: output is not grid-sized");
  const simd::KernelTable& kt = simd::kernels();
  const int d = grid_.dim;
  const std::size_t w = static_cast<std::size_t>(width_);
  const std::size_t nf = static_cast<std::size_t>(nf_);
  FftwBuffer fine = make_buffer(fine_total());
  cplx* g = fine.get();
  const double one = 1.0;

  for (std::size_t p : order_) {
    const int* off = offsets_.data() + p * d;
    const double* ker = kernel_.data() + p * d * w;
    const cplx cp = c[p];
    if (interior(p)) {
      if (d == 1) {
        kt.spread_rows(g + off[0], 0, &one, 1, ker, w, cp);
      } else if (d == 2) {
        kt.spread_rows(g + off[0] * nf + off[1], nf, ker, w, ker + w, w, cp);
      } else {
        for (std::size_t a = 0; a < w; ++a)
          kt.spread_rows(g + ((off[0] + a) * nf + off[1]) * nf + off[2], nf, ker + w, w,
                         ker + 2 * w, w, cp * ker[a]);
      }
      continue;
    }
    // Periodic wrap-around near the fine-grid edge.
    if (d == 1) {
      for (std::size_t a = 0; a < w; ++a) g[wrap(off[0] + a, nf_)] += cp * ker[a];
    } else if (d == 2) {
      for (std::size_t a = 0; a < w; ++a) {
        const std::size_t r = wrap(off[0] + a, nf_) * nf;
        for (std::size_t b = 0; b < w; ++b) g[r + wrap(off[1] + b, nf_)] += cp * ker[a] * ker[w + b];
      }
    } else {
      for (std::size_t a = 0; a < w; ++a)
        for (std::size_t b = 0; b < w; ++b) {
          const std::size_t r = (wrap(off[0] + a, nf_) * nf + wrap(off[1] + b, nf_)) * nf;
          const cplx cab = cp * ker[a] * ker[w + b];
          for (std::size_t e = 0; e < w; ++e) g[r + wrap(off[2] + e, nf_)] += cab * ker[2 * w + e];
        }
    }
  }

  fftw_execute_dft(fft_->forward, as_fftw(g), as_fftw(g));

  const int m = grid_.m;
  const std::size_t side = grid_.row_length();
  if (d == 1) {
    for (int n0 = -m; n0 <= m; ++n0) out[n0 + m] = g[wrap(n0, nf_)] * deconv_[n0 + m];
  } else if (d == 2) {
    for (int n0 = -m; n0 <= m; ++n0) {
      const std::size_t src = wrap(n0, nf_) * nf;
      cplx* dst = out.data() + (n0 + m) * side;
      for (int n1 = -m; n1 <= m; ++n1)
        dst[n1 + m] = g[src + wrap(n1, nf_)] * (deconv_[n0 + m] * deconv_[n1 + m]);
    }
  } else {
    for (int n0 = -m; n0 <= m; ++n0)
      for (int n1 = -m; n1 <= m; ++n1) {
        const std::size_t src = (wrap(n0, nf_) * nf + wrap(n1, nf_)) * nf;
        const double c01 = deconv_[n0 + m] * deconv_[n1 + m];
        cplx* dst = out.data() + ((n0 + m) * side + (n1 + m)) * side;
        for (int n2 = -m; n2 <= m; ++n2) dst[n2 + m] = g[src + wrap(n2, nf_)] * (c01 * deconv_[n2 + m]);
      }
  }
}

std::vector<cplx> NufftPlan::type2(std::span<const cplx> a) const {
  std::vector<cplx> out(pts_.size());
  type2(a, out);
  return out;
}

void NufftPlan::type2(std::span<const cplx> a, std::span<cplx> out) const {
  if (a.size() != grid_.size()) throw ShapeError("type-2 NUFFT: input is not grid-sized");
  if (out.size() != pts_.size()) throw ShapeError("type-2 NUFFT: output length != number of points");
  const simd::KernelTable& kt = simd::kernels();
  const int d = grid_.dim;
  const std::size_t w = static_cast<std::size_t>(width_);
  const std::size_t nf = static_cast<std::size_t>(nf_);
  FftwBuffer fine = make_buffer(fine_total());
  cplx* g = fine.get();

  const int m = grid_.m;
  const std::size_t side = grid_.row_length();
  if (d == 1) {
    for (int n0 = -m; n0 <= m; ++n0) g[wrap(n0, nf_)] = a[n0 + m] * deconv_[n0 + m];
  } else if (d == 2) {
    for (int n0 = -m; n0 <= m; ++n0) {
      const std::size_t dst = wrap(n0, nf_) * nf;
      const cplx* src = a.data() + (n0 + m) * side;
      for (int n1 = -m; n1 <= m; ++n1)
        g[dst + wrap(n1, nf_)] = src[n1 + m] * (deconv_[n0 + m] * deconv_[n1 + m]);
    }
  } else {
    for (int n0 = -m; n0 <= m; ++n0)
      for (int n1 = -m; n1 <= m; ++n1) {
        const std::size_t dst = (wrap(n0, nf_) * nf + wrap(n1, nf_)) * nf;
        const double c01 = deconv_[n0 + m] * deconv_[n1 + m];
        const cplx* src = a.data() + ((n0 + m) * side + (n1 + m)) * side;
        for (int n2 = -m; n2 <= m; ++n2) g[dst + wrap(n2, nf_)] = src[n2 + m] * (c01 * deconv_[n2 + m]);
      }
  }

  fftw_execute_dft(fft_->backward, as_fftw(g), as_fftw(g));

  const double one = 1.0;
  for (std::size_t p : order_) {
    const int* off = offsets_.data() + p * d;
    const double* ker = kernel_.data() + p * d * w;
    cplx acc = 0.0;
    if (interior(p)) {
      if (d == 1) {
        acc = kt.interp_rows(g + off[0], 0, &one, 1, ker, w);
      } else if (d == 2) {
        acc = kt.interp_rows(g + off[0] * nf + off[1], nf, ker, w, ker + w, w);
      } else {
        for (std::size_t e = 0; e < w; ++e)
          acc += ker[e] * kt.interp_rows(g + ((off[0] + e) * nf + off[1]) * nf + off[2], nf,
                                         ker + w, w, ker + 2 * w, w);
      }
    } else if (d == 1) {
      for (std::size_t e = 0; e < w; ++e) acc += g[wrap(off[0] + e, nf_)] * ker[e];
    } else if (d == 2) {
      for (std::size_t e = 0; e < w; ++e) {
        const std::size_t r = wrap(off[0] + e, nf_) * nf;
        cplx row = 0.0;
        for (std::size_t b = 0; b < w; ++b) row += g[r + wrap(off[1] + b, nf_)] * ker[w + b];
        acc += row * ker[e];
      }
    } else {
      for (std::size_t e = 0; e < w; ++e)
        for (std::size_t b = 0; b < w; ++b) {
          const std::size_t r = (wrap(off[0] + e, nf_) * nf + wrap(off[1] + b, nf_)) * nf;
          cplx row = 0.0;
          for (std::size_t q = 0; q < w; ++q) row += g[r + wrap(off[2] + q, nf_)] * ker[2 * w + q];
          acc += row * (ker[e] * ker[w + b]);
        }
    }
    out[p] = acc;
  }
}

}  // namespace nsgp
