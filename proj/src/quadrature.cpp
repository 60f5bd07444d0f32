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

#include "nsgp/quadrature.hpp"

#include <cmath>

#include "nsgp/errors.hpp"

namespace nsgp {

SchoenbergSample chi_u_v(double nu, double t, int dim) {
  SchoenbergSample s{};
  s.chi = std::exp(0.5 * t) / std::sqrt(nu);
  s.u = std::exp(nu * t - std::exp(t) - std::lgamma(nu));
  // chi^{-d} u evaluated in log space so deep tails underflow cleanly to 0.
  s.v = std::exp(nu * t - std::exp(t) - std::lgamma(nu) - dim * std::log(s.chi));
  return s;
}

QuadratureScheme build_scheme(const KernelFamily& family, double t_min, double t_max, int n_t,
                              int dim) {
  if (dim < 1 || dim > 3) throw InvalidArgument("dimension must be 1, 2 or 3");
  QuadratureScheme q;
  q.dim = dim;
  if (std::holds_alternative<SquaredExponential>(family)) {
    if (n_t != 0) throw InvalidArgument("squared-exponential scheme requires n_t = 0");
    q.t_nodes = {0.0};
    q.chi = {1.0};
    q.v_weights = {1.0};
    q.trapezoid_weights = {1.0};
    q.delta_t = 0.0;
    return q;
  }
  const double nu = std::get<Matern>(family).nu;
  if (!(nu > 0.0)) throw InvalidArgument("Matern nu must be positive");
  if (n_t < 1) throw InvalidArgument("Matern scheme requires n_t >= 1");
  if (!(t_min < t_max)) throw InvalidArgument("scheme requires t_min < t_max");

  q.delta_t = (t_max - t_min) / n_t;
  q.t_nodes.resize(n_t + 1);
  q.chi.resize(n_t + 1);
  q.v_weights.resize(n_t + 1);
  q.trapezoid_weights.resize(n_t + 1);
  for (int j = 0; j <= n_t; ++j) {
    const double t = t_min + (t_max - t_min) * j / n_t;
    const double h = (j == 0 || j == n_t) ? 0.5 * q.delta_t : q.delta_t;
    const SchoenbergSample s = chi_u_v(nu, t, dim);
    q.t_nodes[j] = t;
    q.chi[j] = s.chi;
    q.v_weights[j] = s.v * h;
    q.trapezoid_weights[j] = h;
  }
  return q;
}

double reconstruct_phi(const QuadratureScheme& scheme, double nu, double r) {
  double sum = 0.0;
  for (std::size_t j = 0; j < scheme.size(); ++j) {
    const double u = std::exp(nu * scheme.t_nodes[j] - std::exp(scheme.t_nodes[j]) - std::lgamma(nu));
    const double chi = scheme.chi[j];
    sum += std::exp(-r * r / (2.0 * chi * chi)) * u * scheme.trapezoid_weights[j];
  }
  return sum;
}

TRange default_t_range(double eps, double nu) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("tolerance must lie in (0, 1)");
  if (!(nu > 0.0)) throw InvalidArgument("Matern nu must be positive");
  TRange r{};
  r.t_min = (1.0 + std::log(eps)) / nu;
  r.t_max = std::log(-2.0 * std::log(eps));
  r.n_t = static_cast<int>(std::ceil(2.0 * (r.t_max - r.t_min)));
  if (r.n_t < 1) r.n_t = 1;
  return r;
}

}  // namespace nsgp
