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

#include <vector>

#include "nsgp/kernel.hpp"

namespace nsgp {

/// Matern presentation phi(r) = int exp(-r^2 / (2 chi(t)^2)) u(t) dt with
///   chi(t) = nu^{-1/2} e^{t/2},  u(t) = e^{nu t - e^t} / Gamma(nu),
/// and the kernel mixture density v(t) = chi(t)^{-d} u(t).
struct SchoenbergSample {
  double chi;
  double u;
  double v;
};
SchoenbergSample chi_u_v(double nu, double t, int dim);

/// Trapezoidal discretization of the t integral. Node j carries
///   v_weights[j] = v(t_j) * h_j,  h_j = delta_t (interior) or delta_t / 2 (ends).
/// The squared exponential is the single node t = 0, chi = 1, v = 1.
struct QuadratureScheme {
  std::vector<double> t_nodes;
  std::vector<double> chi;
  std::vector<double> v_weights;
  std::vector<double> trapezoid_weights;
  double delta_t = 0.0;
  int dim = 1;

  std::size_t size() const noexcept { return t_nodes.size(); }
};

/// n_t >= 1 for Matern; n_t == 0 is only valid for the squared exponential,
/// whose scheme ignores t_min and t_max.
QuadratureScheme build_scheme(const KernelFamily& family, double t_min, double t_max, int n_t,
                              int dim);

/// Sum_j exp(-r^2 / (2 chi_j^2)) u(t_j) h_j, the quadrature estimate of phi_nu(r).
double reconstruct_phi(const QuadratureScheme& scheme, double nu, double r);

struct TRange {
  double t_min;
  double t_max;
  int n_t;
};

/// t_min = (1 + ln eps) / nu, t_max = ln(-2 ln eps), n_t = ceil(2 (t_max - t_min))
/// so that delta_t <= 1/2.
TRange default_t_range(double eps, double nu);

}  // namespace nsgp
