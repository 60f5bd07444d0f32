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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails.

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "nsgp/chebyshev.hpp"
#include "nsgp/error_model.hpp"
#include "nsgp/gpr.hpp"
#include "nsgp/harness.hpp"
#include "nsgp/matvec.hpp"
#include "nsgp/nufft.hpp"
#include "nsgp/quadrature.hpp"

using namespace nsgp;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const char* what, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("%s criterion %2d: %s | %s | %.2f s\n", o.pass ? "PASS" : "FAIL", id, what,
              o.detail.c_str(), since(t0));
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double rel(std::span<const cplx> a, std::span<const cplx> b) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

double rel(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / den);
}

std::vector<cplx> random_complex(std::size_t n, std::uint64_t seed) {
  SplitMix64 g(seed);
  std::vector<cplx> v(n);
  for (auto& x : v) x = {g.uniform(-1, 1), g.uniform(-1, 1)};
  return v;
}

std::vector<double> random_real(std::size_t n, std::uint64_t seed) {
  SplitMix64 g(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = g.uniform();
  return v;
}

KernelSpec reference_matern() {
  return make_matern(1.5, [](std::span<const double> x) { return sigma_ref(x); },
                     constant_field(1.0), kSigmaRefMin, kSigmaRefMax);
}

ApproxParams reference_params(int dim) {
  RunConfig cfg;
  cfg.dim = dim;
  return resolve_params(cfg, reference_matern());
}

Outcome reference_matvec(int dim, double limit_s) {
  RunConfig cfg;
  cfg.dim = dim;
  cfg.n = 10000;
  cfg.n_t = 20;
  cfg.n_sigma = 20;
  cfg.m = dim == 1 ? 400 : 200;
  cfg.eps = 1e-6;
  const auto t0 = Clock::now();
  const ResultRow r = run_matvec_bench(cfg).at(0);
  const double total = since(t0);
  const double err = r.rel_error.value_or(INFINITY);
  return {err <= 1e-4 && total < limit_s,
          fmt("rel error %.3g (<= 1e-4), apply %.3f s, total %.1f s (< %.0f s)", err, r.run_s,
              total, limit_s)};
}

// Direct sums for the NUFFT check.
std::vector<cplx> direct(const PointSet& p, const FourierGrid& g, std::span<const cplx> in,
                         bool type1) {
  const std::size_t side = g.row_length();
  std::vector<cplx> out(type1 ? g.size() : p.size(), 0.0);
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    int n[3] = {0, 0, 0};
    std::size_t rem = flat;
    for (int i = g.dim - 1; i >= 0; --i) {
      n[i] = static_cast<int>(rem % side) - g.m;
      rem /= side;
    }
    for (std::size_t j = 0; j < p.size(); ++j) {
      double ph = 0;
      for (int i = 0; i < g.dim; ++i) ph += n[i] * p[j][i];
      const cplx e = std::polar(1.0, 2 * std::numbers::pi * g.delta_omega * ph);
      if (type1) out[flat] += in[j] * std::conj(e);
      else out[j] += in[flat] * e;
    }
  }
  return out;
}

Outcome ablation(AblationAxis axis, std::vector<double> values) {
  RunConfig cfg;
  cfg.command = Command::ablate;
  cfg.n = 2000;
  cfg.axis = axis;
  cfg.values = std::move(values);
  const std::vector<ResultRow> rows = run_ablation(cfg);
  std::vector<double> e;
  for (const ResultRow& r : rows) e.push_back(*r.rel_error);
  const double floor = *std::min_element(e.begin(), e.end());
  // Saturation starts at the first value within 2x of the best error.
  std::size_t sat = 0;
  while (e[sat] > 2 * floor) ++sat;
  bool monotone = true;
  for (std::size_t i = 1; i <= sat; ++i) monotone &= e[i] <= 2 * e[i - 1];
  const bool drop = e[sat] <= 1e-2 * e[0];
  std::string seq;
  for (std::size_t i = 0; i < e.size(); ++i)
    seq += fmt("%g:%.2g ", rows[i].value.value(), e[i]);
  return {drop && monotone, std::string(to_string(axis)) + " " + seq +
                                fmt("| plateau at %g, drop %.2g (<= 1e-2), monotone %g",
                                    rows[sat].value.value(), e[sat] / e[0], monotone)};
}

double apply_time(const MatvecPlan& plan, const std::vector<double>& alpha) {
  double best = INFINITY;
  for (int rep = 0; rep < 3; ++rep) {
    const auto t0 = Clock::now();
    (void)plan.apply(alpha);
    best = std::min(best, since(t0));
  }
  return best;
}

}  // namespace

int main() {
  report(1, "Matern matvec accuracy, d=1, N=10000", [] { return reference_matvec(1, 60); });
  report(2, "Matern matvec accuracy, d=2, N=10000", [] { return reference_matvec(2, 300); });

  report(3, "exponential convergence ablations", [] {
    const Outcome a = ablation(AblationAxis::n_t, {2, 4, 6, 8, 10, 12, 16, 20});
    const Outcome b = ablation(AblationAxis::n_sigma, {2, 4, 6, 8, 10, 12, 16, 20});
    const Outcome c = ablation(AblationAxis::m, {25, 50, 75, 100, 150, 200, 300, 400});
    return Outcome{a.pass && b.pass && c.pass, a.detail + " || " + b.detail + " || " + c.detail};
  });

  report(4, "phi reconstruction from the t quadrature", [] {
    const auto t0 = Clock::now();
    double worst = 0;
    for (double nu : {0.5, 1.5, 2.5}) {
      const TRange tr = default_t_range(1e-8, nu);
      const QuadratureScheme s = build_scheme(Matern{nu}, tr.t_min, tr.t_max, tr.n_t, 1);
      for (int i = 0; i < 50; ++i) {
        const double r = 5.0 * i / 49.0;
        worst = std::max(worst, std::abs(reconstruct_phi(s, nu, r) -
                                         matern_phi(nu, r, PhiMode::closed_form)));
      }
    }
    const double t = since(t0);
    return Outcome{worst <= 1e-6 && t < 1.0,
                   fmt("max abs error %.3g (<= 1e-6) in %.3f s (< 1 s)", worst, t)};
  });

  report(5, "Chebyshev interpolation bound in sigma", [] {
    SplitMix64 g(2024);
    const double kappa = kSigmaRefMax / kSigmaRefMin;
    bool ok = true;
    double worst_ratio = 0;
    for (int n : {5, 10, 20}) {
      const ChebBasis basis(kSigmaRefMin, kSigmaRefMax, n);
      const double bound = eps_cheb(n, kappa);
      for (int trial = 0; trial < 100; ++trial) {
        const double s = g.uniform(kSigmaRefMin, kSigmaRefMax);
        const double x = g.uniform(-2, 2);
        auto f = [x](double sig) { return std::exp(-x * x / (2 * sig * sig)); };
        const std::vector<double> p = basis.eval(s);
        double interp = 0;
        for (std::size_t k = 0; k < p.size(); ++k) interp += p[k] * f(basis.nodes()[k]);
        const double err = std::abs(interp - f(s));
        ok &= err <= bound;
        worst_ratio = std::max(worst_ratio, err / bound);
      }
    }
    return Outcome{ok, fmt("300 cases, worst error / bound %.3g (<= 1)", worst_ratio)};
  });

  report(6, "NUFFT type 1/2 and adjoint vs direct sums", [] {
    bool ok = true;
    double worst = 0;
    for (int d : {1, 2}) {
      const PointSet p = gen_dataset(d, 500, 600 + d);
      const FourierGrid g{50, 0.125, d};
      const std::vector<cplx> c = random_complex(p.size(), 1);
      const std::vector<cplx> a = random_complex(g.size(), 2);
      const std::vector<cplx> r1 = direct(p, g, c, true), r2 = direct(p, g, a, false);
      double cn = 0, an = 0;
      for (auto v : c) cn += std::norm(v);
      for (auto v : a) an += std::norm(v);
      for (double tol : {1e-4, 1e-7, 1e-10}) {
        const NufftPlan plan(p, g, tol);
        const std::vector<cplx> t1 = plan.type1(c), t2 = plan.type2(a);
        const double e1 = rel(t1, r1), e2 = rel(t2, r2);
        cplx lhs = 0, rhs = 0;
        for (std::size_t i = 0; i < t1.size(); ++i) lhs += t1[i] * std::conj(a[i]);
        for (std::size_t i = 0; i < t2.size(); ++i) rhs += c[i] * std::conj(t2[i]);
        const double adj = std::abs(lhs - rhs) / std::sqrt(cn * an * p.size());
        ok &= e1 <= 10 * tol && e2 <= 10 * tol && adj <= 10 * tol;
        worst = std::max({worst, e1 / tol, e2 / tol, adj / tol});
      }
    }
    return Outcome{ok, fmt("worst error / tol %.3g (<= 10)", worst)};
  });

  report(7, "approximate kernel matrix is PSD", [] {
    bool ok = true;
    std::string detail;
    for (bool sqexp : {false, true}) {
      for (int d : {1, 2}) {
        const KernelSpec spec =
            sqexp ? make_squared_exponential(
                        [](std::span<const double> x) { return sigma_ref(x); },
                        constant_field(1.0), kSigmaRefMin, kSigmaRefMax)
                  : reference_matern();
        RunConfig cfg;
        cfg.dim = d;
        const PointSet p = gen_dataset(d, 200, 700 + d);
        const MatvecPlan plan = MatvecPlan::build(spec, p, resolve_params(cfg, spec));
        Eigen::MatrixXd k(200, 200);
        std::vector<double> e(200, 0.0);
        for (int i = 0; i < 200; ++i) {
          e[i] = 1;
          const std::vector<double> col = plan.apply(e);
          for (int r = 0; r < 200; ++r) k(r, i) = col[r];
          e[i] = 0;
        }
        const Eigen::VectorXd ev =
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(0.5 * (k + k.transpose())).eigenvalues();
        const double ratio = ev.minCoeff() / ev.maxCoeff();
        ok &= ratio >= -1e-6;
        detail += std::string(sqexp ? "sqexp" : "matern") + fmt(" d=%g min/max %.3g; ", d, ratio);
      }
    }
    return Outcome{ok, detail + "(>= -1e-6)"};
  });

  report(8, "CG solve matches dense factorization", [] {
    const KernelSpec spec = reference_matern();
    const PointSet p = gen_dataset(1, 200, 800);
    const MatvecPlan plan = MatvecPlan::build(spec, p, select_params(1e-6, spec, 1));
    const std::vector<double> y = random_real(200, 801);
    const SolveReport r = cg_solve(plan, {y, 0.1}, 1e-6);
    Eigen::MatrixXd k = dense_kernel_matrix(spec, p);
    k.diagonal().array() += 0.1;
    const Eigen::VectorXd x = k.llt().solve(Eigen::Map<const Eigen::VectorXd>(y.data(), 200));
    const double err = rel(r.alpha, std::vector<double>(x.data(), x.data() + 200));
    return Outcome{r.converged && err <= 1e-4,
                   fmt("rel error %.3g (<= 1e-4), %g iterations", err, r.iterations)};
  });

  report(9, "near-linear matvec scaling in N", [] {
    const KernelSpec spec = reference_matern();
    const ApproxParams prm = reference_params(1);
    auto measure = [&] {
      std::vector<double> t;
      for (std::size_t n : {25000u, 100000u, 400000u}) {
        const MatvecPlan plan = MatvecPlan::build(spec, gen_dataset(1, n, 900 + n), prm);
        t.push_back(apply_time(plan, random_real(n, 901)));
      }
      return t;
    };
    std::vector<double> t = measure();
    auto ok = [](const std::vector<double>& v) { return v[1] / v[0] <= 6 && v[2] / v[1] <= 6; };
    int attempts = 1;
    if (!ok(t)) {  // one retry for machine variance
      t = measure();
      ++attempts;
    }
    return Outcome{ok(t), fmt("t = %.3f, %.3f, %.3f s; ratios ", t[0], t[1], t[2]) +
                              fmt("%.2f, %.2f (<= 6), attempts %g", t[1] / t[0], t[2] / t[1],
                                  attempts)};
  });

  report(10, "regime 1 solves converge with stable iteration counts", [] {
    std::vector<int> its;
    bool conv = true;
    for (std::size_t n : {2500u, 10000u, 40000u}) {
      RunConfig cfg;
      cfg.command = Command::solve;
      cfg.kernel = KernelKind::sqexp;
      cfg.dim = 2;
      cfg.n = n;
      cfg.regime = 1;
      const ResultRow r = run_solve_bench(cfg).at(0);
      conv &= r.converged.value();
      its.push_back(r.iterations.value());
    }
    const int lo = *std::min_element(its.begin(), its.end());
    const int hi = *std::max_element(its.begin(), its.end());
    return Outcome{conv && hi <= 2 * lo,
                   fmt("iterations %g, %g, %g; converged %g (max/min <= 2)", its[0], its[1],
                       its[2], conv)};
  });

  report(11, "squared-exponential path on constant sigma", [] {
    RunConfig cfg;
    cfg.kernel = KernelKind::sqexp;
    cfg.field = FieldChoice::constant;
    cfg.sigma_value = 0.3;
    cfg.sigma_bounds_lo = 0.29;  // a proper interval, so the 8-degree basis is exercised
    cfg.sigma_bounds_hi = 0.31;
    cfg.n_t = 0;
    cfg.n_sigma = 8;
    cfg.n = 2000;
    const ResultRow r = run_matvec_bench(cfg).at(0);
    const double err = r.rel_error.value_or(INFINITY);
    return Outcome{err <= 1e-5, fmt("rel error %.3g (<= 1e-5), M %g, dw %.4g", err, r.m,
                                    r.delta_omega)};
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
