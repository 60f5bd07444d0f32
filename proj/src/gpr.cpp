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

#include "nsgp/gpr.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "nsgp/errors.hpp"

namespace nsgp {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

SolveReport cg_solve(const MatvecPlan& plan, const Observations& obs, double tol, int max_iter) {
  const std::size_t n = plan.size();
  if (obs.y.size() != n) {
    std::ostringstream os;
    os << "observation vector has length " << obs.y.size() << ", expected " << n;
    throw ShapeError(os.str());
  }
  if (!(obs.eta_sq > 0.0)) throw InvalidArgument("CG requires eta^2 > 0");
  if (!(tol > 0.0)) throw InvalidArgument("CG tolerance must be positive");
  if (max_iter < 0) throw InvalidArgument("max_iter must be nonnegative");

  SolveReport rep;
  rep.alpha.assign(n, 0.0);
  const double ynorm = std::sqrt(dot(obs.y, obs.y));
  if (ynorm == 0.0) {
    rep.converged = true;
    return rep;
  }

  std::vector<double> r = obs.y;
  std::vector<double> p = r;
  double rr = dot(r, r);
  auto true_residual = [&] {
    std::vector<double> ax = plan.apply_regularized(rep.alpha, obs.eta_sq);
    for (std::size_t i = 0; i < n; ++i) r[i] = obs.y[i] - ax[i];
    rr = dot(r, r);
    return std::sqrt(rr) / ynorm;
  };

  while (rep.iterations < max_iter) {
    const std::vector<double> ap = plan.apply_regularized(p, obs.eta_sq);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) break;  // breakdown: operator not positive definite along p
    const double step = rr / pap;
    for (std::size_t i = 0; i < n; ++i) {
      rep.alpha[i] += step * p[i];
      r[i] -= step * ap[i];
    }
    ++rep.iterations;
    const double rr_new = dot(r, r);
    rep.residual_history.push_back(std::sqrt(rr_new) / ynorm);
    if (std::sqrt(rr_new) / ynorm <= tol) {
      // The recurrence can drift below the true residual; confirm, and
      // restart from the explicit residual if it has.
      if (true_residual() <= tol) break;
      p = r;
      continue;
    }
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
  }
  rep.final_residual = true_residual();
  rep.converged = rep.final_residual <= tol;
  return rep;
}

std::vector<double> posterior_mean_dense(const KernelSpec& spec, const PointSet& train,
                                         std::span<const double> alpha, const PointSet& query,
                                         std::size_t oracle_cap) {
  return dense_cross_matvec(spec, train, alpha, query, oracle_cap);
}

std::vector<double> posterior_mean_fast(const MatvecPlan& plan, std::span<const double> alpha,
                                        const PointSet& query) {
  if (query.dim() != plan.points().dim()) throw ShapeError("query and training dimensions differ");
  const FourierCoefficients a = plan.fourier_side(alpha);
  const NufftPlan target(query, plan.grid(), plan.params().nufft_tol);
  const RowMatrix w = diag_weights(plan.spec(), plan.basis(), query);
  return MatvecPlan::synthesize(a, target, w);
}

}  // namespace nsgp
