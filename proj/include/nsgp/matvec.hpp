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

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "nsgp/chebyshev.hpp"
#include "nsgp/fourier_grid.hpp"
#include "nsgp/kernel.hpp"
#include "nsgp/nufft.hpp"
#include "nsgp/params.hpp"
#include "nsgp/quadrature.hpp"

namespace nsgp {

enum class CouplingStrategy { automatic, streaming, coupled };

struct MatvecOptions {
  CouplingStrategy strategy = CouplingStrategy::automatic;
  std::size_t coupling_memory_cap = kDefaultCouplingCap;
};

/// Optional per-call diagnostics of apply().
struct MatvecDiagnostics {
  /// max_i |Sum_k w_k(x_i) Im(beta_k,i)|; zero in exact arithmetic.
  double imaginary_residue = 0.0;
};

/// Grid coefficients a_k, k = 0..N_sigma, flattened as (basis index, grid index).
struct FourierCoefficients {
  std::size_t n_basis = 0;
  std::size_t grid_size = 0;
  std::vector<cplx> data;
  std::span<const cplx> operator[](std::size_t k) const {
    return {data.data() + k * grid_size, grid_size};
  }
};

/// Fast approximate kernel matrix K~ for one point set. Immutable once
/// built; apply() may be called concurrently with distinct inputs.
///
///   K~(x,y) = Sum_j v~_j Sum_{k',k} w_k'(x) w_k(y) Sum_n G_k'j[n] G_kj[n] e^{2 pi i n dw (x-y)}
///
/// Any change to points, fields or parameters needs a fresh build.
class MatvecPlan {
 public:
  static MatvecPlan build(const KernelSpec& spec, const PointSet& pts, const ApproxParams& params,
                          const MatvecOptions& options = {});

  std::vector<double> apply(std::span<const double> alpha,
                            MatvecDiagnostics* diag = nullptr) const;
  /// K~ alpha + eta_sq alpha.
  std::vector<double> apply_regularized(std::span<const double> alpha, double eta_sq,
                                        MatvecDiagnostics* diag = nullptr) const;

  /// Steps 1-3: a_k' = Sum_j v~_j G_k'j Sum_k G_kj type1(w_k alpha).
  FourierCoefficients fourier_side(std::span<const double> alpha) const;
  /// Steps 4-5 at arbitrary targets: out_i = Sum_k weights(k,i) Re(type2(a_k))_i.
  static std::vector<double> synthesize(const FourierCoefficients& a, const NufftPlan& target,
                                        const RowMatrix& weights,
                                        MatvecDiagnostics* diag = nullptr);

  const KernelSpec& spec() const noexcept { return spec_; }
  const PointSet& points() const noexcept { return pts_; }
  std::size_t size() const noexcept { return pts_.size(); }
  const ApproxParams& params() const noexcept { return params_; }
  const ChebBasis& basis() const noexcept { return *basis_; }
  const QuadratureScheme& scheme() const noexcept { return scheme_; }
  const FourierGrid& grid() const noexcept { return grid_; }
  /// w_k(x_i) with columns in the internal (spreading) point order.
  const RowMatrix& weights() const noexcept { return weights_; }
  /// NUFFT plan over the points in internal order; see permutation().
  const NufftPlan& nufft() const noexcept { return *nufft_; }
  /// Internal position i holds input point permutation()[i].
  const std::vector<std::size_t>& permutation() const noexcept { return perm_; }
  /// Resolved strategy, never `automatic`.
  CouplingStrategy strategy() const noexcept { return strategy_; }
  /// Deterministic 64-bit hash of every precomputed array.
  std::uint64_t digest() const;

 private:
  MatvecPlan() = default;
  void step3(const std::vector<cplx>& b, std::vector<cplx>& a) const;

  KernelSpec spec_;
  PointSet pts_;
  std::vector<std::size_t> perm_;
  ApproxParams params_;
  std::shared_ptr<const ChebBasis> basis_;
  QuadratureScheme scheme_;
  FourierGrid grid_;
  RowMatrix weights_;
  std::shared_ptr<const SymbolTable> symbols_;
  std::shared_ptr<const CouplingTensor> coupling_;
  std::shared_ptr<const NufftPlan> nufft_;
  CouplingStrategy strategy_ = CouplingStrategy::streaming;
};

/// Basis used by a plan: Chebyshev on [sigma_min, sigma_max], or a single
/// node when the declared range is degenerate.
ChebBasis plan_basis(const KernelSpec& spec, int n_sigma);

}  // namespace nsgp
