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

#include "nsgp/fourier_grid.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nsgp/errors.hpp"

namespace nsgp {

namespace fault {
namespace {
std::atomic<double> g_symbol_scale{1.0};
}
void set_symbol_scale(double scale) noexcept { g_symbol_scale.store(scale); }
double symbol_scale() noexcept { return g_symbol_scale.load(); }
}  // namespace fault

std::size_t FourierGrid::size() const noexcept {
  std::size_t n = 1;
  for (int i = 0; i < dim; ++i) n *= static_cast<std::size_t>(side());
  return n;
}

void FourierGrid::validate() const {
  if (m < 1) throw InvalidArgument("Fourier grid requires M >= 1");
  if (!(delta_omega > 0.0) || !std::isfinite(delta_omega))
    throw InvalidArgument("Fourier grid spacing must be positive");
  if (dim < 1 || dim > 3) throw InvalidArgument("Fourier grid dimension must be 1, 2 or 3");
  if (delta_omega > 0.125) {
    std::ostringstream os;
    os << "Fourier grid spacing " << delta_omega << " exceeds 1/8";
    warn(os.str());
  }
}

std::vector<double> gaussian_symbol_axis(double rho, const FourierGrid& grid) {
  const double c = 2.0 * std::numbers::pi * rho * grid.delta_omega;
  const double amp = std::sqrt(2.0 * std::numbers::pi) * rho * fault::symbol_scale();
  std::vector<double> out(grid.row_length());
  for (int n = -grid.m; n <= grid.m; ++n) {
    const double a = c * n;
    out[n + grid.m] = amp * std::exp(-0.5 * a * a);
  }
  return out;
}

std::vector<double> gaussian_symbol(double rho, const FourierGrid& grid) {
  if (!(rho > 0.0)) throw InvalidArgument("symbol width must be positive");
  const std::vector<double> axis = gaussian_symbol_axis(rho, grid);
  const std::size_t side = grid.row_length();
  std::vector<double> out(grid.size());
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    std::size_t rem = flat;
    double v = 1.0;
    for (int i = 0; i < grid.dim; ++i) {
      v *= axis[rem % side];
      rem /= side;
    }
    out[flat] = v;
  }
  return out;
}

SymbolTable::SymbolTable(const QuadratureScheme& scheme, const ChebBasis& basis,
                         const FourierGrid& grid)
    : grid_(grid), n_basis_(basis.size()), n_nodes_(scheme.size()) {
  if (scheme.dim != grid.dim) throw InvalidArgument("scheme and grid dimensions differ");
  const std::size_t len = grid.row_length();
  data_.resize(n_basis_ * n_nodes_ * len);
  for (std::size_t j = 0; j < n_nodes_; ++j) {
    for (std::size_t k = 0; k < n_basis_; ++k) {
      const std::vector<double> ax =
          gaussian_symbol_axis(basis.nodes()[k] * scheme.chi[j], grid);
      std::copy(ax.begin(), ax.end(), data_.begin() + (j * n_basis_ + k) * len);
    }
  }
  const double dwd = std::pow(grid.delta_omega, grid.dim);
  scaled_weights_.resize(n_nodes_);
  for (std::size_t j = 0; j < n_nodes_; ++j) scaled_weights_[j] = dwd * scheme.v_weights[j];
}

void SymbolTable::row(std::size_t k, std::size_t j, std::span<const int> lead,
                      std::span<double> out) const {
  const std::span<const double> ax = axis(k, j);
  double outer = 1.0;
  for (int idx : lead) outer *= ax[idx];
  for (std::size_t l = 0; l < ax.size(); ++l) out[l] = outer * ax[l];
}

CouplingTensor::CouplingTensor(std::size_t n_basis, FourierGrid grid)
    : n_basis_(n_basis), grid_(grid), data_(n_basis * (n_basis + 1) / 2 * grid.size(), 0.0) {}

std::size_t CouplingTensor::pair_index(std::size_t kp, std::size_t k) const noexcept {
  if (kp > k) std::swap(kp, k);
  // Row-major upper triangle: pairs (kp, kp..n-1) for each kp.
  return kp * n_basis_ - kp * (kp - 1) / 2 + (k - kp);
}

std::span<const double> CouplingTensor::plane(std::size_t kp, std::size_t k) const {
  return {data_.data() + pair_index(kp, k) * grid_.size(), grid_.size()};
}

std::span<double> CouplingTensor::plane(std::size_t kp, std::size_t k) {
  return {data_.data() + pair_index(kp, k) * grid_.size(), grid_.size()};
}

std::size_t coupling_bytes(std::size_t n_basis, const FourierGrid& grid) noexcept {
  return n_basis * (n_basis + 1) / 2 * grid.size() * sizeof(double);
}

namespace {

void lead_indices(std::size_t row, const FourierGrid& grid, std::array<int, 2>& lead) {
  // Leading d-1 axis offsets of a row, slowest axis first.
  const std::size_t side = grid.row_length();
  for (int i = grid.dim - 2; i >= 0; --i) {
    lead[i] = static_cast<int>(row % side);
    row /= side;
  }
}

}  // namespace

CouplingTensor build_coupling(const SymbolTable& symbols, std::size_t memory_cap) {
  const FourierGrid& grid = symbols.grid();
  const std::size_t nb = symbols.n_basis();
  const std::size_t bytes = coupling_bytes(nb, grid);
  if (bytes > memory_cap) {
    std::ostringstream os;
    os << "coupling tensor needs " << bytes << " bytes, above the cap of " << memory_cap
       << "; use the streaming strategy";
    throw ResourceError(os.str());
  }
  CouplingTensor tensor(nb, grid);
  const std::size_t len = grid.row_length();
  const std::size_t rows = grid.rows();
  const auto& vt = symbols.scaled_weights();
  const long lrows = static_cast<long>(rows);
#pragma omp parallel
  {
    std::vector<double> g(nb * len);
    std::array<int, 2> lead{};
#pragma omp for schedule(static)
    for (long r = 0; r < lrows; ++r) {
      lead_indices(static_cast<std::size_t>(r), grid, lead);
      const std::span<const int> lead_span(lead.data(), static_cast<std::size_t>(grid.dim - 1));
      for (std::size_t j = 0; j < symbols.n_nodes(); ++j) {
        for (std::size_t k = 0; k < nb; ++k)
          symbols.row(k, j, lead_span, std::span<double>(g.data() + k * len, len));
        for (std::size_t kp = 0; kp < nb; ++kp) {
          const double* gp = g.data() + kp * len;
          for (std::size_t k = kp; k < nb; ++k) {
            const double* gk = g.data() + k * len;
            double* dst = tensor.plane(kp, k).data() + r * len;
            const double v = vt[j];
            for (std::size_t l = 0; l < len; ++l) dst[l] += v * gp[l] * gk[l];
          }
        }
      }
    }
  }
  return tensor;
}

CouplingTensor build_coupling(const QuadratureScheme& scheme, const ChebBasis& basis,
                              const FourierGrid& grid, std::size_t memory_cap) {
  grid.validate();
  return build_coupling(SymbolTable(scheme, basis, grid), memory_cap);
}

double eps_F(const FourierGrid& grid, const DerivedConstants& consts) {
  const double a = 2.0 * std::numbers::pi * consts.rho_min * grid.m * grid.delta_omega;
  const double b = 1.0 / (4.0 * consts.rho_max * grid.delta_omega);
  return std::pow(consts.lambda, grid.dim) * std::exp(-a * a) + std::exp(-b * b);
}

FourierGrid default_grid(double eps, const DerivedConstants& consts, int m, int dim) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("tolerance must lie in (0, 1)");
  FourierGrid g;
  g.m = m;
  g.dim = dim;
  g.delta_omega =
      std::min(0.125, 0.25 / (consts.rho_max * std::sqrt(std::log(1.0 / eps))));
  return g;
}

}  // namespace nsgp
