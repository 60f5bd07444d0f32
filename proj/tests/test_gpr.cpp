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

#include <doctest.h>

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>

#include "nsgp/error_model.hpp"
#include "nsgp/errors.hpp"
#include "nsgp/gpr.hpp"
#include "nsgp/harness.hpp"
#include "test_util.hpp"

using namespace nsgp;
using nsgp::testing::rel_error;
using nsgp::testing::sigma_ref_matern;
using nsgp::testing::uniform_vector;

namespace {

std::vector<double> dense_solve(const KernelSpec& spec, const PointSet& p,
                                const std::vector<double>& y, double eta_sq) {
  Eigen::MatrixXd k = dense_kernel_matrix(spec, p);
  k.diagonal().array() += eta_sq;
  const Eigen::VectorXd x =
      k.llt().solve(Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<long>(y.size())));
  return {x.data(), x.data() + x.size()};
}

ApproxParams reference_params(const KernelSpec& spec, int dim) {
  RunConfig cfg;
  cfg.dim = dim;
  return resolve_params(cfg, spec);
}

}  // namespace

TEST_CASE("vanishing weight makes the system diagonal") {
  const KernelSpec spec = make_matern(1.5, constant_field(0.3), constant_field(0.0), 0.2, 0.4);
  const PointSet p = gen_dataset(1, 80, 2);
  const MatvecPlan plan = MatvecPlan::build(spec, p, reference_params(spec, 1));
  const std::vector<double> y = uniform_vector(80, 3);
  const SolveReport r = cg_solve(plan, {y, 0.5});
  CHECK(r.converged);
  CHECK(r.iterations == 1);
  for (std::size_t i = 0; i < y.size(); ++i) CHECK(r.alpha[i] == doctest::Approx(2 * y[i]));
}

TEST_CASE("CG matches the dense Cholesky solve") {
  const KernelSpec spec = sigma_ref_matern(1.5);
  const PointSet p = gen_dataset(1, 200, 31);
  const MatvecPlan plan = MatvecPlan::build(spec, p, select_params(1e-6, spec, 1));
  const std::vector<double> y = uniform_vector(200, 4);
  const double eta_sq = 0.1;
  const SolveReport r = cg_solve(plan, {y, eta_sq}, 1e-6);
  const double err = rel_error(r.alpha, dense_solve(spec, p, y, eta_sq));
  INFO("err=" << err << " it=" << r.iterations);
  CHECK(r.converged);
  CHECK(r.final_residual <= 1e-6);
  CHECK(err <= 1e-4);
}

TEST_CASE("large noise converges quickly") {
  const KernelSpec spec = sigma_ref_matern(0.5);
  const PointSet p = gen_dataset(1, 300, 5);
  const MatvecPlan plan = MatvecPlan::build(spec, p, reference_params(spec, 1));
  const SolveReport r = cg_solve(plan, {uniform_vector(300, 6), 100.0});
  CHECK(r.converged);
  CHECK(r.iterations <= 10);
}

TEST_CASE("iteration cap reports non-convergence") {
  const KernelSpec spec = sigma_ref_matern(1.5);
  const PointSet p = gen_dataset(1, 300, 7);
  const MatvecPlan plan = MatvecPlan::build(spec, p, reference_params(spec, 1));
  const SolveReport r = cg_solve(plan, {uniform_vector(300, 8), 1e-6}, 1e-12, 3);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 3);
  CHECK(r.residual_history.size() == 3);
  CHECK(r.final_residual > 1e-12);
}

TEST_CASE("residual history trends downward") {
  const KernelSpec spec = sigma_ref_matern(1.5);
  const PointSet p = gen_dataset(2, 400, 9);
  const MatvecPlan plan = MatvecPlan::build(spec, p, reference_params(spec, 2));
  const SolveReport r = cg_solve(plan, {uniform_vector(400, 1), 0.1}, 1e-8);
  REQUIRE(r.residual_history.size() >= 10);
  const auto& h = r.residual_history;
  // CG residuals are not monotone, but a new record low appears in every
  // window of 20 iterations.
  double best = h.front();
  for (std::size_t i = 0; i + 20 <= h.size(); i += 20) {
    const double window = *std::min_element(h.begin() + i + 1, h.begin() + i + 21);
    CHECK(window < best);
    best = std::min(best, window);
  }
  CHECK(h.back() < h.front());
}

TEST_CASE("solver argument errors") {
  const KernelSpec spec = sigma_ref_matern(1.5);
  const PointSet p = gen_dataset(1, 20, 1);
  const MatvecPlan plan = MatvecPlan::build(spec, p, reference_params(spec, 1));
  CHECK_THROWS_AS(cg_solve(plan, {std::vector<double>(19, 1.0), 1.0}), ShapeError);
  CHECK_THROWS_AS(cg_solve(plan, {std::vector<double>(20, 1.0), 0.0}), InvalidArgument);
  const SolveReport zero = cg_solve(plan, {std::vector<double>(20, 0.0), 1.0});
  CHECK(zero.converged);
  for (double a : zero.alpha) CHECK(a == 0.0);
}

TEST_CASE("dense posterior mean") {
  const KernelSpec spec = sigma_ref_matern(1.5);
  const PointSet train = gen_dataset(1, 30, 1);
  const PointSet query = gen_dataset(1, 10, 2);
  for (double v : posterior_mean_dense(spec, train, std::vector<double>(30, 0.0), query))
    CHECK(v == 0.0);
  std::vector<double> e1(30, 0.0);
  e1[0] = 1.0;
  const std::vector<double> col = posterior_mean_dense(spec, train, e1, query);
  for (std::size_t q = 0; q < query.size(); ++q)
    CHECK(col[q] == doctest::Approx(kernel_eval(spec, query[q], train[0])).epsilon(1e-14));
}

TEST_CASE("fast posterior mean") {
  const KernelSpec spec = sigma_ref_matern(1.5);
  const PointSet train = gen_dataset(1, 2000, 3);
  const ApproxParams prm = select_params(1e-6, spec, 1);
  const MatvecPlan plan = MatvecPlan::build(spec, train, prm);
  const std::vector<double> alpha = uniform_vector(2000, 4, -1, 1);

  const std::vector<double> self = posterior_mean_fast(plan, alpha, train);
  CHECK(rel_error(self, plan.apply(alpha)) <= 1e-12);

  const PointSet query = gen_dataset(1, 100, 5);
  const double err = rel_error(posterior_mean_fast(plan, alpha, query),
                               posterior_mean_dense(spec, train, alpha, query));
  INFO("err=" << err);
  CHECK(err <= 1e-4);

  // sigma_ref stays inside its bounds on the box, so leave the declared range instead.
  const KernelSpec tight = make_matern(1.5, [](std::span<const double> x) { return sigma_ref(x); },
                                       constant_field(1.0), 0.3, kSigmaRefMax);
  const PointSet inside(1, {0.0});
  const MatvecPlan tplan = MatvecPlan::build(tight, inside, reference_params(tight, 1));
  CHECK_THROWS_AS(posterior_mean_fast(tplan, std::vector<double>{1.0}, PointSet(1, {0.9})),
                  DomainError);
}
