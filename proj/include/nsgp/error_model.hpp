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

#include "nsgp/kernel.hpp"
#include "nsgp/params.hpp"

namespace nsgp {

/// e^{-alpha t_max} + e^{nu t_min} + e^{-(1 - delta) pi^2 / dt},
/// dt = (t_max - t_min) / n_t. Requires n_t >= 1.
double eps_trap(double t_min, double t_max, int n_t, double nu, double alpha, double delta);

/// The three summands of the composite max-entry error bound with every
/// hidden constant set to 1. `total` is an indicator of the error scale,
/// not a guarantee.
struct ErrorBudget {
  double eps_trap = 0.0;
  double eps_cheb = 0.0;
  double eps_F = 0.0;
  double term_trap = 0.0;  // sigma_min^{-d} eps_trap (zero for the squared exponential)
  double term_cheb = 0.0;  // Lambda rho_max^d eps_cheb
  double term_F = 0.0;     // N_sigma^2 kappa^d (chi_max / sigma_min)^d eps_F
  double total = 0.0;
};

/// Warns when dt > 1 or dw > 1/8, outside the regime where the bound is stated.
ErrorBudget theorem_bound(const KernelSpec& spec, const ApproxParams& params,
                          const DerivedConstants& consts, double lebesgue, int dim);

/// Three-stage parameter choice for a target max-entry error eps:
///  1. t-range and N_t from default_t_range(eps, nu) (none for the squared exponential);
///  2. the smallest N_sigma with term_cheb <= eps / 3;
///  3. dw from the grid rule, then the smallest M whose truncation part of
///     term_F is <= eps / 3.
/// nufft_tol is set to eps / 10.
ApproxParams select_params(double eps, const KernelSpec& spec, int dim);

}  // namespace nsgp
