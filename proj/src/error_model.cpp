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

#include "nsgp/error_model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "nsgp/chebyshev.hpp"
#include "nsgp/errors.hpp"
#include "nsgp/fourier_grid.hpp"
#include "nsgp/quadrature.hpp"

namespace nsgp {

namespace {
constexpr int kMaxNSigma = 256;
constexpr double kDelta = 0.1;
constexpr double kLargeGrid = 134217728.0;  // 2^27 points, 2 GiB of complex doubles
}  // namespace

double eps_trap(double t_min, double t_max, int n_t, double nu, double alpha, double delta) {
  if (n_t < 1) throw InvalidArgument("eps_trap requires N_t >= 1");
  const double dt = (t_max - t_min) / n_t;
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return std::exp(-alpha * t_max) + std::exp(nu * t_min) + std::exp(-(1.0 - delta) * pi2 / dt);
}

ErrorBudget theorem_bound(const KernelSpec& spec, const ApproxParams& params,
                          const DerivedConstants& consts, double lebesgue, int dim) {
  ErrorBudget b;
  if (params.delta_omega > 0.125) {
    std::ostringstream os;
    os << "error bound assumes delta_omega <= 1/8 (got " << params.delta_omega << ")";
    warn(os.str());
  }
  if (!spec.is_squared_exponential()) {
    const double dt = (params.t_max - params.t_min) / params.n_t;
    if (dt > 1.0) {
      std::ostringstream os;
      os << "error bound assumes delta_t = O(1) (got " << dt << ")";
      warn(os.str());
    }
    const double nu = spec.nu();
    b.eps_trap = eps_trap(params.t_min, params.t_max, params.n_t, nu, nu, kDelta);
    b.term_trap = std::pow(spec.sigma_min, -dim) * b.eps_trap;
  }
  b.eps_cheb = eps_cheb(params.n_sigma, consts.kappa);
  b.term_cheb = lebesgue * std::pow(consts.rho_max, dim) * b.eps_cheb;
  b.eps_F = eps_F(FourierGrid{params.m, params.delta_omega, dim}, consts);
  const double ns = params.n_sigma;
  b.term_F = ns * ns * std::pow(consts.kappa, dim) *
             std::pow(consts.chi_max / spec.sigma_min, dim) * b.eps_F;
  b.total = b.term_trap + b.term_cheb + b.term_F;
  return b;
}

ApproxParams select_params(double eps, const KernelSpec& spec, int dim) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("tolerance must lie in (0, 1)");
  spec.validate();
  ApproxParams p;
  p.nufft_tol = eps / 10.0;

  if (!spec.is_squared_exponential()) {
    const TRange tr = default_t_range(eps, spec.nu());
    p.t_min = tr.t_min;
    p.t_max = tr.t_max;
    p.n_t = tr.n_t;
  }
  const DerivedConstants c = derived_constants(spec, p);

  if (c.kappa == 1.0) {
    p.n_sigma = 1;
  } else {
    const double rho_d = std::pow(c.rho_max, dim);
    int n = 1;
    for (; n < kMaxNSigma; ++n) {
      const double lam = lebesgue_estimate(ChebBasis(spec.sigma_min, spec.sigma_max, n));
      if (lam * rho_d * eps_cheb(n, c.kappa) <= eps / 3.0) break;
    }
    if (n == kMaxNSigma) warn("N_sigma search hit its cap; interpolation target not met");
    p.n_sigma = n;
  }

  // Solve pref lambda^d exp(-(2 pi rho_min M dw)^2) = eps / 3 for M. The
  // aliasing part of eps_F is fixed by the rule for dw alone.
  const FourierGrid g = default_grid(eps, c, 1, dim);
  p.delta_omega = g.delta_omega;
  const double ns = p.n_sigma;
  const double pref = ns * ns * std::pow(c.kappa * c.chi_max / spec.sigma_min, dim);
  const double arg = std::log(3.0 * pref * std::pow(c.lambda, dim) / eps);
  const double scale = 2.0 * std::numbers::pi * c.rho_min * p.delta_omega;
  int m = arg > 0.0 ? static_cast<int>(std::ceil(std::sqrt(arg) / scale)) : 1;
  m = std::max(m, 1);
  auto trunc = [&](int mm) {
    const double a = scale * mm;
    return pref * std::pow(c.lambda, dim) * std::exp(-a * a);
  };
  while (m > 1 && trunc(m - 1) <= eps / 3.0) --m;
  while (trunc(m) > eps / 3.0) ++m;
  p.m = m;
  const double grid_points = std::pow(2.0 * m + 1.0, dim);
  if (grid_points > kLargeGrid) {
    std::ostringstream os;
    os << "selected Fourier grid has " << grid_points
       << " points (small quadrature widths force a large M); it may not fit in memory";
    warn(os.str());
  }
  return p;
}

}  // namespace nsgp
