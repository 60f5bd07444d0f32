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

// nsgp: benchmarks and validation for the fast non-stationary kernel matvec.
//
// Exit codes: 0 success, 1 usage error, 2 validation failure, 3 resource error.

#include <omp.h>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>

#include "nsgp/errors.hpp"
#include "nsgp/harness.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitResource = 3;

struct Flags {
  nsgp::RunConfig cfg;
  std::string kernel;
  std::string field = "sigma_ref";
  std::string axis = "nsigma";
  std::string out;
  int threads = 0;
  bool inject_fault = false;
  int n_t = -1, n_sigma = -1, m = -1;
  double delta_omega = -1, auto_eps = -1, nufft_tol = -1, eta_sq = -1;
  std::vector<double> bounds;
};

void add_problem_flags(CLI::App* sub, Flags& f) {
  nsgp::RunConfig& c = f.cfg;
  sub->add_option("--dim", c.dim, "Spatial dimension (1, 2 or 3)")->capture_default_str();
  sub->add_option("--n", c.n, "Number of points")->capture_default_str();
  sub->add_option("--kernel", f.kernel, "Kernel family")
      ->check(CLI::IsMember({"matern", "sqexp"}));
  sub->add_option("--nu", c.nu, "Matern smoothness")->capture_default_str();
  sub->add_option("--field", f.field, "Length-scale field")
      ->check(CLI::IsMember({"sigma_ref", "constant", "csv"}))
      ->capture_default_str();
  sub->add_option("--sigma", c.sigma_value, "Value of the constant length-scale field")
      ->capture_default_str();
  sub->add_option("--sigma-bounds", f.bounds, "Declared sigma_min,sigma_max")
      ->expected(2)
      ->delimiter(',');
  sub->add_option("--nt", f.n_t, "Quadrature intervals N_t");
  sub->add_option("--nsigma", f.n_sigma, "Chebyshev degree N_sigma");
  sub->add_option("--m", f.m, "Fourier grid half-width M");
  sub->add_option("--domega", f.delta_omega, "Fourier grid spacing");
  sub->add_option("--auto-eps", f.auto_eps, "Choose all parameters for this target error");
  sub->add_option("--eps", c.eps, "Target used for default t-range, spacing and NUFFT tolerance")
      ->capture_default_str();
  sub->add_option("--nufft-tol", f.nufft_tol, "NUFFT tolerance (default eps/10)");
  sub->add_option("--seed", c.seed, "64-bit seed")->capture_default_str();
  sub->add_option("--data", c.data_path, "CSV with header x1,...,xd[,y][,sigma]");
  sub->add_flag("--normalize", c.normalize, "Affinely map --data into [-1,1]^d");
  sub->add_option("--out", f.out, "Output CSV (default stdout)");
  sub->add_option("--threads", f.threads, "Worker thread cap (0 = runtime default)");
  sub->add_option("--oracle-cap", c.oracle_cap, "Largest N for the dense oracle")
      ->capture_default_str();
}

void finalize(Flags& f) {
  nsgp::RunConfig& c = f.cfg;
  if (f.kernel.empty()) f.kernel = c.command == nsgp::Command::solve ? "sqexp" : "matern";
  c.kernel = f.kernel == "sqexp" ? nsgp::KernelKind::sqexp : nsgp::KernelKind::matern;
  static const std::map<std::string, nsgp::FieldChoice> fields = {
      {"sigma_ref", nsgp::FieldChoice::sigma_ref},
      {"constant", nsgp::FieldChoice::constant},
      {"csv", nsgp::FieldChoice::csv}};
  c.field = fields.at(f.field);
  static const std::map<std::string, nsgp::AblationAxis> axes = {
      {"nt", nsgp::AblationAxis::n_t},
      {"nsigma", nsgp::AblationAxis::n_sigma},
      {"m", nsgp::AblationAxis::m},
      {"n", nsgp::AblationAxis::n}};
  c.axis = axes.at(f.axis);
  if (f.n_t >= 0) c.n_t = f.n_t;
  if (f.n_sigma >= 0) c.n_sigma = f.n_sigma;
  if (f.m >= 0) c.m = f.m;
  if (f.delta_omega >= 0) c.delta_omega = f.delta_omega;
  if (f.auto_eps >= 0) c.auto_eps = f.auto_eps;
  if (f.nufft_tol >= 0) c.nufft_tol = f.nufft_tol;
  if (f.eta_sq >= 0) c.eta_sq = f.eta_sq;
  if (f.bounds.size() == 2) {
    c.sigma_bounds_lo = f.bounds[0];
    c.sigma_bounds_hi = f.bounds[1];
  }
  if (c.kernel == nsgp::KernelKind::sqexp && !c.n_t) c.n_t = 0;
  if (f.threads > 0) omp_set_num_threads(f.threads);
}

void emit(const Flags& f, const std::vector<nsgp::ResultRow>& rows) {
  if (f.out.empty()) {
    nsgp::write_csv(std::cout, rows);
    return;
  }
  std::ofstream os(f.out);
  if (!os) throw nsgp::InvalidArgument("cannot write '" + f.out + "'");
  nsgp::write_csv(os, rows);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fast non-stationary Gaussian-process kernel matvec: benchmarks and validation"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* matvec = app.add_subcommand("matvec", "Time one matvec and measure its error");
  CLI::App* ablate = app.add_subcommand("ablate", "Sweep one parameter with the rest fixed");
  CLI::App* solve = app.add_subcommand("solve", "CG solve in one of the two noise regimes");
  CLI::App* validate = app.add_subcommand("validate", "Run every module's property suite");
  CLI::App* phi = app.add_subcommand("phi", "Tabulate the quadrature reconstruction of phi");
  for (CLI::App* s : {matvec, ablate, solve}) add_problem_flags(s, f);
  ablate->add_option("--axis", f.axis, "Parameter to sweep")
      ->check(CLI::IsMember({"nt", "nsigma", "m", "n"}))
      ->capture_default_str();
  ablate->add_option("--values", f.cfg.values, "Ascending comma-separated values")
      ->delimiter(',')
      ->required();
  solve->add_option("--regime", f.cfg.regime, "1: eta^2 = N/2e6; 2: eta^2 = 0.1, rescaled kernel")
      ->check(CLI::IsMember({1, 2}))
      ->capture_default_str();
  solve->add_option("--eta-sq", f.eta_sq, "Not allowed: the regime fixes eta^2");
  solve->add_option("--cg-tol", f.cfg.cg_tol, "Relative residual target")->capture_default_str();
  solve->add_option("--max-iter", f.cfg.max_iter, "CG iteration cap")->capture_default_str();
  validate->add_flag("--inject-fault", f.inject_fault,
                     "Perturb the Gaussian symbols; the suite must then fail");
  validate->add_option("--threads", f.threads, "Worker thread cap");
  phi->add_option("--nu", f.cfg.nu, "Matern smoothness")->capture_default_str();
  phi->add_option("--eps", f.cfg.eps, "Target for default_t_range")->capture_default_str();
  phi->add_option("--out", f.out, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (matvec->parsed()) f.cfg.command = nsgp::Command::matvec;
    if (ablate->parsed()) f.cfg.command = nsgp::Command::ablate;
    if (solve->parsed()) f.cfg.command = nsgp::Command::solve;
    if (validate->parsed()) f.cfg.command = nsgp::Command::validate;
    if (phi->parsed()) f.cfg.command = nsgp::Command::phi;
    finalize(f);

    switch (f.cfg.command) {
      case nsgp::Command::matvec: emit(f, nsgp::run_matvec_bench(f.cfg)); break;
      case nsgp::Command::ablate: emit(f, nsgp::run_ablation(f.cfg)); break;
      case nsgp::Command::solve: emit(f, nsgp::run_solve_bench(f.cfg)); break;
      case nsgp::Command::validate:
        return nsgp::run_validate(std::cout, {f.inject_fault});
      case nsgp::Command::phi:
        if (f.out.empty()) {
          nsgp::write_phi_table(std::cout, f.cfg.nu, f.cfg.eps);
        } else {
          std::ofstream os(f.out);
          if (!os) throw nsgp::InvalidArgument("cannot write '" + f.out + "'");
          nsgp::write_phi_table(os, f.cfg.nu, f.cfg.eps);
        }
        break;
    }
  } catch (const nsgp::ResourceError& e) {
    std::cerr << "nsgp: resource error: " << e.what() << '\n';
    return kExitResource;
  } catch (const nsgp::OracleSizeError& e) {
    std::cerr << "nsgp: resource error: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::bad_alloc&) {
    std::cerr << "nsgp: resource error: out of memory\n";
    return kExitResource;
  } catch (const std::exception& e) {
    std::cerr << "nsgp: error: " << e.what() << '\n';
    return kExitUsage;
  }
  return 0;
}
