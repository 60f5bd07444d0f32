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

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "nsgp/fourier_grid.hpp"
#include "nsgp/kernel.hpp"

namespace nsgp {

using cplx = std::complex<double>;

/// Non-uniform FFTs between scattered points x_j and the rescaled lattice
/// n * delta_omega, n in {-M..M}^d:
///   type 1:  a[n] = Sum_j c_j exp(-2 pi i (n dw) . x_j)
///   type 2:  f_j  = Sum_n a[n] exp(+2 pi i (n dw) . x_j)
/// (formal adjoints, not inverses). Implemented by exponential-of-semicircle
/// spreading onto a 2x oversampled periodic grid, an FFT, and deconvolution.
class NufftPlan {
 public:
  /// Throws UnsupportedParameter for tol < 1e-14, DomainError when some
  /// |dw * x_j| exceeds 1/2 (the phase would leave one period).
  NufftPlan(const PointSet& pts, const FourierGrid& grid, double tol);
  ~NufftPlan();
  NufftPlan(const NufftPlan&);
  NufftPlan& operator=(const NufftPlan&);
  NufftPlan(NufftPlan&&) noexcept;
  NufftPlan& operator=(NufftPlan&&) noexcept;

  const PointSet& points() const noexcept { return pts_; }
  std::size_t num_points() const noexcept { return pts_.size(); }
  const FourierGrid& grid() const noexcept { return grid_; }
  double tol() const noexcept { return tol_; }
  int spread_width() const noexcept { return width_; }
  double oversample() const noexcept { return 2.0; }
  double shape_param() const noexcept { return beta_; }
  int fine_size() const noexcept { return nf_; }
  /// Point visiting order used for spreading (sorted by fine-grid cell).
  const std::vector<std::size_t>& order() const noexcept { return order_; }

  std::vector<cplx> type1(std::span<const cplx> c) const;
  void type1(std::span<const cplx> c, std::span<cplx> out) const;
  std::vector<cplx> type2(std::span<const cplx> a) const;
  void type2(std::span<const cplx> a, std::span<cplx> out) const;

  /// Spreading width for a tolerance: ceil(-log10 tol) + 1 clipped to [2, 16].
  static int width_for_tolerance(double tol) noexcept;
  /// Smallest even integer >= n whose only prime factors are 2, 3, 5.
  static int next_smooth_even(int n) noexcept;

 private:
  struct FftPlans;

  bool interior(std::size_t p) const noexcept;
  std::size_t fine_total() const noexcept;

  PointSet pts_;
  FourierGrid grid_;
  double tol_;
  int width_;
  double beta_;
  int nf_;
  std::vector<int> offsets_;        // N x d first fine-grid index touched
  std::vector<double> kernel_;      // N x d x width kernel samples
  std::vector<double> deconv_;      // 1 / kernel Fourier series at n = -M..M
  std::vector<std::size_t> order_;  // spreading order (sorted by fine-grid cell)
  std::shared_ptr<FftPlans> fft_;
};

}  // namespace nsgp
