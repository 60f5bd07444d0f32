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

#include "nsgp/kernel.hpp"
#include "nsgp/matvec.hpp"

namespace nsgp {

struct Observations {
  std::vector<double> y;
  double eta_sq = 0.0;  // noise variance
};

struct SolveReport {
  std::vector<double> alpha;
  int iterations = 0;
  double final_residual = 0.0;  // ||(K~ + eta^2 I) alpha - y|| / ||y||, recomputed explicitly
  bool converged = false;
  std::vector<double> residual_history;  // recurrence residual after each iteration
};

/// Plain (unpreconditioned) conjugate gradients on (K~ + eta^2 I) alpha = y,
/// starting from alpha = 0. Running out of iterations is reported through
/// `converged`, not thrown.
SolveReport cg_solve(const MatvecPlan& plan, const Observations& obs, double tol = 1e-6,
                     int max_iter = 1000);

/// mu(x_q) = Sum_n alpha_n K(x_q, x_n) by direct summation.
std::vector<double> posterior_mean_dense(const KernelSpec& spec, const PointSet& train,
                                         std::span<const double> alpha, const PointSet& query,
                                         std::size_t oracle_cap = kDefaultOracleCap);

/// Same sum through the fast factorization: grid coefficients from the
/// training side, synthesis (type-2 NUFFT and basis weights) at the queries.
std::vector<double> posterior_mean_fast(const MatvecPlan& plan, std::span<const double> alpha,
                                        const PointSet& query);

}  // namespace nsgp
