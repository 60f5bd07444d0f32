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

#include <Eigen/Cholesky>

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "nsgp/chebyshev.hpp"
#include "nsgp/error_model.hpp"
#include "nsgp/errors.hpp"
#include "nsgp/fourier_grid.hpp"
#include "nsgp/gpr.hpp"
#include "nsgp/harness.hpp"
#include "nsgp/matvec.hpp"
#include "nsgp/nufft.hpp"
#include "nsgp/quadrature.hpp"
#include "nsgp/simd.hpp"

namespace nsgp {

namespace {

// A suite returns an empty string on success and a reason otherwise.
using Suite = std::function<std::string()>;

std::string check(bool ok, const std::string& what, double got, double limit) {
  if (ok) return {};
  std::ostringstream os;
  os << what << ": " << got << " (limit " << limit << ")";
  return os.str();
}

double rel2(std::span<const double> a, std::span<const double> b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / den);
}

KernelSpec ref_spec(double nu) {
  return make_matern(nu, [](std::span<const double> x) { return sigma_ref(x); },
                     constant_field(1.0), kSigmaRefMin, kSigmaRefMax);
}

ApproxParams ref_params(const KernelSpec& spec, int m, int dim) {
  const TRange tr = default_t_range(1e-6, spec.nu());
  ApproxParams p;
  p.t_min = tr.t_min;
  p.t_max = tr.t_max;
  p.n_t = 20;
  p.n_sigma = 20;
  p.m = m;
  p.nufft_tol = 1e-7;
  p.delta_omega = default_grid(1e-6, derived_constants(spec, p), m, dim).delta_omega;
  return p;
}

std::string suite_kernel() {
  const KernelSpec s = make_matern(0.5, constant_field(0.5), constant_field(1.0), 0.5, 0.5);
  const double x[] = {0.0}, y[] = {0.3};
  const double v = kernel_eval(s, x, y);
  if (auto e = check(std::abs(v - 0.36912165104794686) < 1e-14, "kernel_eval", v, 1e-14); !e.empty())
    return e;
  const double a = matern_phi(1.5, 1.0, PhiMode::closed_form);
  const double b = matern_phi(1.5, 1.0, PhiMode::quadrature_oracle);
  return check(std::abs(a - b) < 1e-10, "closed form vs oracle", std::abs(a - b), 1e-10);
}

std::string suite_quadrature() {
  for (double nu : {0.5, 1.5, 2.5}) {
    const TRange tr = default_t_range(1e-8, nu);
    const QuadratureScheme sch = build_scheme(Matern{nu}, tr.t_min, tr.t_max, tr.n_t, 1);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const double r = 5.0 * i / 49.0;
      worst = std::max(worst, std::abs(reconstruct_phi(sch, nu, r) -
                                       matern_phi(nu, r, PhiMode::closed_form)));
    }
    if (auto e = check(worst <= 1e-6, "phi reconstruction", worst, 1e-6); !e.empty()) return e;
  }
  return {};
}

std::string suite_chebyshev() {
  const double kappa = kSigmaRefMax / kSigmaRefMin;
  SplitMix64 rng(7);
  for (int n : {5, 10, 20}) {
    const ChebBasis basis(kSigmaRefMin, kSigmaRefMax, n);
    const double bound = eps_cheb(n, kappa);
    for (int i = 0; i < 100; ++i) {
      const double s = rng.uniform(kSigmaRefMin, kSigmaRefMax);
      const double x = rng.uniform(-2.0, 2.0);
      const std::vector<double> p = basis.eval(s);
      double interp = 0.0;
      for (std::size_t k = 0; k < p.size(); ++k) {
        const double sk = basis.nodes()[k];
        interp += p[k] * std::exp(-x * x / (2 * sk * sk));
      }
      const double err = std::abs(interp - std::exp(-x * x / (2 * s * s)));
      if (auto e = check(err <= bound, "interpolation error vs bound", err, bound); !e.empty())
        return e;
    }
  }
  return {};
}

std::string suite_fourier() {
  FourierGrid g{4, 1.0, 1};
  const double v = gaussian_symbol_axis(1.0 / (2 * std::numbers::pi), g)[5];
  return check(std::abs(v - 0.24197072451914335) < 1e-12, "symbol value", v, 1e-12);
}

std::string suite_nufft() {
  const PointSet pts = gen_dataset(2, 200, 11);
  const FourierGrid g{12, 0.125, 2};
  const NufftPlan plan(pts, g, 1e-9);
  SplitMix64 rng(3);
  std::vector<cplx> c(pts.size());
  for (auto& v : c) v = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
  const std::vector<cplx> a = plan.type1(c);
  double num = 0.0, den = 0.0;
  const int side = g.side();
  for (int n0 = -g.m; n0 <= g.m; ++n0)
    for (int n1 = -g.m; n1 <= g.m; ++n1) {
      cplx s = 0.0;
      for (std::size_t j = 0; j < pts.size(); ++j) {
        const double ph = -2 * std::numbers::pi * g.delta_omega * (n0 * pts[j][0] + n1 * pts[j][1]);
        s += c[j] * std::polar(1.0, ph);
      }
      num += std::norm(a[(n0 + g.m) * side + n1 + g.m] - s);
      den += std::norm(s);
    }
  const double err = std::sqrt(num / den);
  return check(err <= 1e-8, "type-1 vs direct", err, 1e-8);
}

std::string suite_simd() {
  if (!simd::isa_supported(simd::Isa::avx2)) return {};
  const simd::KernelTable& s = simd::kernels(simd::Isa::scalar);
  const simd::KernelTable& v = simd::kernels(simd::Isa::avx2);
  SplitMix64 rng(5);
  std::vector<double> coef(37);
  std::vector<cplx> src(37), d1(37), d2(37);
  for (std::size_t i = 0; i < 37; ++i) {
    coef[i] = rng.uniform(-1, 1);
    src[i] = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
  }
  s.scaled_product_accumulate(d1.data(), 0.7, coef.data(), src.data(), 37);
  v.scaled_product_accumulate(d2.data(), 0.7, coef.data(), src.data(), 37);
  double worst = 0.0;
  for (std::size_t i = 0; i < 37; ++i) worst = std::max(worst, std::abs(d1[i] - d2[i]));
  return check(worst <= 1e-15, "scalar vs avx2", worst, 1e-15);
}

std::string suite_matvec() {
  const KernelSpec spec = ref_spec(1.5);
  const PointSet pts = gen_dataset(1, 500, 21);
  const ApproxParams p = ref_params(spec, 400, 1);
  SplitMix64 rng(4);
  std::vector<double> alpha(pts.size());
  for (double& a : alpha) a = rng.uniform();
  const std::vector<double> exact = dense_matvec(spec, pts, alpha);
  const MatvecPlan coupled = MatvecPlan::build(spec, pts, p, {CouplingStrategy::coupled});
  const MatvecPlan stream = MatvecPlan::build(spec, pts, p, {CouplingStrategy::streaming});
  const std::vector<double> yc = coupled.apply(alpha);
  const std::vector<double> ys = stream.apply(alpha);
  const double err = rel2(yc, exact);
  if (auto e = check(err <= 1e-4, "coupled matvec vs dense", err, 1e-4); !e.empty()) return e;
  const double agree = rel2(ys, yc);
  return check(agree <= 1e-12, "streaming vs coupled", agree, 1e-12);
}

std::string suite_gpr() {
  const KernelSpec spec = ref_spec(1.5);
  const PointSet pts = gen_dataset(1, 200, 31);
  // A solve magnifies max-entry error by the condition number, so use the
  // automatically selected (large-M) parameters here.
  const MatvecPlan plan = MatvecPlan::build(spec, pts, select_params(1e-6, spec, 1));
  SplitMix64 rng(8);
  Observations obs;
  obs.eta_sq = 0.1;
  obs.y.resize(pts.size());
  for (double& v : obs.y) v = rng.uniform();
  const SolveReport rep = cg_solve(plan, obs, 1e-6, 1000);
  if (!rep.converged) return "CG did not converge";
  Eigen::MatrixXd k = dense_kernel_matrix(spec, pts);
  k.diagonal().array() += obs.eta_sq;
  const Eigen::VectorXd ref = k.llt().solve(Eigen::Map<const Eigen::VectorXd>(obs.y.data(), obs.y.size()));
  const double err = rel2(rep.alpha, std::span<const double>(ref.data(), ref.size()));
  return check(err <= 1e-4, "CG vs dense solve", err, 1e-4);
}

std::string suite_error_model() {
  const double v = eps_trap(-10, 3, 100, 1, 1, 0.1);
  if (auto e = check(std::abs(v - 0.04983246829762643) < 1e-12, "eps_trap", v, 1e-12); !e.empty())
    return e;
  const KernelSpec spec = ref_spec(1.5);
  const ApproxParams p = select_params(1e-6, spec, 1);
  return check(p.n_sigma >= 10 && p.n_sigma <= 40, "auto N_sigma", p.n_sigma, 40);
}

std::string suite_harness() {
  const PointSet a = gen_dataset(2, 100, 9), b = gen_dataset(2, 100, 9);
  for (std::size_t i = 0; i < a.coords().size(); ++i)
    if (a.coords()[i] != b.coords()[i]) return "gen_dataset is not deterministic";
  ResultRow r;
  r.command = "matvec";
  r.delta_omega = 0.1;
  r.rel_error = 1.0 / 3.0;
  std::stringstream ss;
  write_csv(ss, {r});
  const std::vector<ResultRow> back = read_csv(ss);
  if (back.size() != 1 || !(back[0] == r)) return "CSV round trip changed a row";
  return {};
}

}  // namespace

int run_validate(std::ostream& os, const ValidateOptions& opts) {
  const std::pair<const char*, Suite> suites[] = {
      {"kernel-core", suite_kernel},       {"schoenberg-quadrature", suite_quadrature},
      {"cheb-interp", suite_chebyshev},    {"fourier-grid", suite_fourier},
      {"nufft", suite_nufft},              {"simd", suite_simd},
      {"fast-matvec", suite_matvec},       {"gpr-solver", suite_gpr},
      {"error-model", suite_error_model},  {"harness-cli", suite_harness},
  };
  if (opts.inject_fault) {
    fault::set_symbol_scale(1.01);
    os << "fault injection: Gaussian symbols scaled by 1.01\n";
  }
  int failed = 0;
  for (const auto& [name, run] : suites) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string why;
    try {
      why = run();
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    os << (why.empty() ? "PASS " : "FAIL ") << std::left << std::setw(22) << name << std::right
       << std::fixed << std::setprecision(3) << std::setw(8) << dt << " s";
    if (!why.empty()) os << "  " << why;
    os << '\n';
    os.unsetf(std::ios::floatfield);
    failed += !why.empty();
  }
  if (opts.inject_fault) fault::set_symbol_scale(1.0);
  os << (failed ? "validation FAILED: " : "validation passed: ") << failed << " of "
     << std::size(suites) << " suites failed\n";
  return failed ? 2 : 0;
}

}  // namespace nsgp
