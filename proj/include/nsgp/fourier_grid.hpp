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
#include <span>
#include <vector>

#include "nsgp/chebyshev.hpp"
#include "nsgp/kernel.hpp"
#include "nsgp/quadrature.hpp"

namespace nsgp {

/// Frequency lattice {n * delta_omega : n in {-M..M}^d}. Grid functions are
/// stored row-major with the last axis contiguous; axis index n maps to n + M.
struct FourierGrid {
  int m = 1;
  double delta_omega = 0.125;
  int dim = 1;

  int side() const noexcept { return 2 * m + 1; }
  std::size_t size() const noexcept;
  std::size_t row_length() const noexcept { return static_cast<std::size_t>(side()); }
  std::size_t rows() const noexcept { return size() / row_length(); }
  /// Throws InvalidArgument for m < 1, delta_omega <= 0 or bad dim; warns
  /// when delta_omega > 1/8 (outside the regime of the discretization bound).
  void validate() const;
};

/// (sqrt(2 pi) rho)^d exp(-(2 pi rho)^2 |omega_n|^2 / 2) over the full grid.
std::vector<double> gaussian_symbol(double rho, const FourierGrid& grid);

/// One axis factor of the separable symbol: entry n + M is
/// sqrt(2 pi) rho exp(-(2 pi rho delta_omega n)^2 / 2).
std::vector<double> gaussian_symbol_axis(double rho, const FourierGrid& grid);

/// Axis factors for every (basis node k, quadrature node j): rho = sigma_k chi_j.
class SymbolTable {
 public:
  SymbolTable(const QuadratureScheme& scheme, const ChebBasis& basis, const FourierGrid& grid);

  std::size_t n_basis() const noexcept { return n_basis_; }
  std::size_t n_nodes() const noexcept { return n_nodes_; }
  const FourierGrid& grid() const noexcept { return grid_; }
  std::span<const double> axis(std::size_t k, std::size_t j) const {
    const std::size_t len = grid_.row_length();
    return {data_.data() + (j * n_basis_ + k) * len, len};
  }
  /// Node weights v_j scaled by delta_omega^d.
  const std::vector<double>& scaled_weights() const noexcept { return scaled_weights_; }

  /// Symbol values along one grid row (fixed leading indices `lead`, size d-1).
  void row(std::size_t k, std::size_t j, std::span<const int> lead, std::span<double> out) const;

 private:
  FourierGrid grid_;
  std::size_t n_basis_ = 0;
  std::size_t n_nodes_ = 0;
  std::vector<double> data_;
  std::vector<double> scaled_weights_;
};

inline constexpr std::size_t kDefaultCouplingCap = std::size_t{2} << 30;

/// A_{k',k}[n] = Sum_j dw^d v_j G_{k',j}[n] G_{k,j}[n], stored as packed
/// (k' <= k) planes over the full grid.
class CouplingTensor {
 public:
  CouplingTensor(std::size_t n_basis, FourierGrid grid);

  std::size_t n_basis() const noexcept { return n_basis_; }
  const FourierGrid& grid() const noexcept { return grid_; }
  std::span<const double> plane(std::size_t kp, std::size_t k) const;
  std::span<double> plane(std::size_t kp, std::size_t k);
  double operator()(std::size_t kp, std::size_t k, std::size_t n) const {
    return plane(kp, k)[n];
  }

 private:
  std::size_t pair_index(std::size_t kp, std::size_t k) const noexcept;
  std::size_t n_basis_;
  FourierGrid grid_;
  std::vector<double> data_;
};

std::size_t coupling_bytes(std::size_t n_basis, const FourierGrid& grid) noexcept;

/// Throws ResourceError (suggesting the streaming strategy) when the tensor
/// would exceed memory_cap bytes.
CouplingTensor build_coupling(const SymbolTable& symbols,
                              std::size_t memory_cap = kDefaultCouplingCap);
CouplingTensor build_coupling(const QuadratureScheme& scheme, const ChebBasis& basis,
                              const FourierGrid& grid,
                              std::size_t memory_cap = kDefaultCouplingCap);

/// lambda^d exp(-(2 pi rho_min M dw)^2) + exp(-(1 / (4 rho_max dw))^2).
double eps_F(const FourierGrid& grid, const DerivedConstants& consts);

/// dw = min(1/8, (1/4) rho_max^{-1} ln(1/eps)^{-1/2}); M is the caller's.
FourierGrid default_grid(double eps, const DerivedConstants& consts, int m, int dim);

namespace fault {
/// Multiplies every Gaussian symbol; 1.0 in normal operation. Used by the
/// validation suite to check that it detects a corrupted pipeline.
void set_symbol_scale(double scale) noexcept;
double symbol_scale() noexcept;
}  // namespace fault

}  // namespace nsgp
