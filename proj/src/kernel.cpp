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

#include "nsgp/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "nsgp/errors.hpp"

namespace nsgp {

PointSet::PointSet(int dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
  if (dim < 1 || dim > 3) throw InvalidArgument("point dimension must be 1, 2 or 3");
  if (coords_.empty()) throw InvalidArgument("point set must contain at least one point");
  if (coords_.size() % static_cast<std::size_t>(dim) != 0)
    throw InvalidArgument("coordinate count is not a multiple of the dimension");
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    const double c = coords_[i];
    if (!(c >= -1.0 && c <= 1.0)) {
      std::ostringstream os;
      os << "point " << i / dim << " has coordinate " << c << " outside [-1, 1]";
      throw DomainError(os.str());
    }
  }
}

double KernelSpec::nu() const {
  if (const auto* m = std::get_if<Matern>(&family)) return m->nu;
  throw InvalidArgument("squared-exponential kernel has no Matern parameter");
}

void KernelSpec::validate() const {
  if (!sigma || !weight) throw InvalidArgument("kernel needs both sigma and weight fields");
  if (!(sigma_min > 0.0) || !(sigma_max >= sigma_min) || !std::isfinite(sigma_max))
    throw InvalidArgument("sigma bounds must satisfy 0 < sigma_min <= sigma_max");
  if (const auto* m = std::get_if<Matern>(&family); m && !(m->nu > 0.0))
    throw InvalidArgument("Matern nu must be positive");
}

KernelSpec make_matern(double nu, ScalarField sigma, ScalarField weight, double sigma_min,
                       double sigma_max) {
  KernelSpec spec{Matern{nu}, std::move(sigma), std::move(weight), sigma_min, sigma_max};
  spec.validate();
  return spec;
}

KernelSpec make_squared_exponential(ScalarField sigma, ScalarField weight, double sigma_min,
                                    double sigma_max) {
  KernelSpec spec{SquaredExponential{}, std::move(sigma), std::move(weight), sigma_min,
                  sigma_max};
  spec.validate();
  return spec;
}

ScalarField constant_field(double value) {
  return [value](std::span<const double>) { return value; };
}

namespace {

void check_sigma(const KernelSpec& spec, double s, std::size_t index) {
  if (!(s >= spec.sigma_min && s <= spec.sigma_max)) {
    std::ostringstream os;
    os << "sigma(x_" << index << ") = " << s << " outside declared bounds [" << spec.sigma_min
       << ", " << spec.sigma_max << "]";
    throw DomainError(os.str());
  }
}

double matern_quadrature_oracle(double nu, double r) {
  // phi(r) = int exp(-r^2 nu e^{-t} / 2) u(t) dt, u(t) = e^{nu t - e^t} / Gamma(nu).
  // Fine trapezoid over the window where log u exceeds its peak minus 55.
  const double lg = std::lgamma(nu);
  auto log_u = [&](double t) { return nu * t - std::exp(t) - lg; };
  const double t_mode = std::log(nu);
  const double h = 0.1 / std::sqrt(std::max(1.0, nu));
  const double cutoff = log_u(t_mode) - 55.0;
  long lo = 0, hi = 0;
  while (log_u(t_mode + lo * h) > cutoff) --lo;
  while (log_u(t_mode + hi * h) > cutoff) ++hi;
  const double half_r2_nu = 0.5 * r * r * nu;
  double sum = 0.0;
  for (long k = lo; k <= hi; ++k) {
    const double t = t_mode + k * h;
    sum += std::exp(log_u(t) - half_r2_nu * std::exp(-t));
  }
  return sum * h;
}

enum class Profile { sqexp, m12, m32, m52, m72, oracle };

Profile profile_of(const KernelFamily& family) {
  if (std::holds_alternative<SquaredExponential>(family)) return Profile::sqexp;
  const double nu = std::get<Matern>(family).nu;
  if (nu == 0.5) return Profile::m12;
  if (nu == 1.5) return Profile::m32;
  if (nu == 2.5) return Profile::m52;
  if (nu == 3.5) return Profile::m72;
  return Profile::oracle;
}

inline double eval_profile(Profile p, double nu, double r) {
  switch (p) {
    case Profile::sqexp:
      return std::exp(-0.5 * r * r);
    case Profile::m12:
      return std::exp(-r);
    case Profile::m32: {
      const double z = std::sqrt(3.0) * r;
      return (1.0 + z) * std::exp(-z);
    }
    case Profile::m52: {
      const double z = std::sqrt(5.0) * r;
      return (1.0 + z + z * z / 3.0) * std::exp(-z);
    }
    case Profile::m72: {
      const double z = std::sqrt(7.0) * r;
      return (1.0 + z + 0.4 * z * z + z * z * z / 15.0) * std::exp(-z);
    }
    case Profile::oracle:
      return matern_quadrature_oracle(nu, r);
  }
  return 0.0;
}

struct PairEvaluator {
  Profile profile;
  double nu;
  int dim;

  explicit PairEvaluator(const KernelSpec& spec, int d)
      : profile(profile_of(spec.family)),
        nu(spec.is_squared_exponential() ? 0.0 : spec.nu()),
        dim(d) {}

  double operator()(std::span<const double> x, std::span<const double> y, double sx,
                    double sy, double wx, double wy) const {
    double dist2 = 0.0;
    for (int i = 0; i < dim; ++i) {
      const double diff = x[i] - y[i];
      dist2 += diff * diff;
    }
    const double s2 = sx * sx + sy * sy;
    const double base = 2.0 * std::numbers::pi * s2;
    double pref = wx * wy;
    if (dim == 1)
      pref /= std::sqrt(base);
    else if (dim == 2)
      pref /= base;
    else
      pref /= base * std::sqrt(base);
    return pref * eval_profile(profile, nu, std::sqrt(dist2 / s2));
  }
};

void check_cap(std::size_t n, std::size_t cap) {
  if (n > cap) {
    std::ostringstream os;
    os << "dense oracle refused: N = " << n << " exceeds the oracle cap " << cap;
    throw OracleSizeError(os.str());
  }
}

}  // namespace

FieldSamples sample_fields(const KernelSpec& spec, const PointSet& pts) {
  FieldSamples out;
  out.sigma.resize(pts.size());
  out.weight.resize(pts.size());
  bool warned = false;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double s = spec.sigma(pts[i]);
    check_sigma(spec, s, i);
    out.sigma[i] = s;
    const double w = spec.weight(pts[i]);
    if (!std::isfinite(w)) throw DomainError("weight field is not finite at x_" + std::to_string(i));
    if (std::abs(w) > 1.0 && !warned) {
      warn("|w(x_" + std::to_string(i) + ")| > 1; error bounds assume |w| <= 1");
      warned = true;
    }
    out.weight[i] = w;
  }
  return out;
}

DerivedConstants derived_constants(const KernelSpec& spec, const ApproxParams& params) {
  DerivedConstants c{};
  c.kappa = spec.sigma_max / spec.sigma_min;
  if (spec.is_squared_exponential()) {
    c.chi_min = c.chi_max = 1.0;
  } else {
    const double inv_sqrt_nu = 1.0 / std::sqrt(spec.nu());
    c.chi_min = inv_sqrt_nu * std::exp(0.5 * params.t_min);
    c.chi_max = inv_sqrt_nu * std::exp(0.5 * params.t_max);
  }
  c.rho_min = spec.sigma_min * c.chi_min;
  c.rho_max = spec.sigma_max * c.chi_max;
  c.lambda = c.rho_max / c.rho_min;
  return c;
}

bool has_closed_form(double nu) noexcept {
  return nu == 0.5 || nu == 1.5 || nu == 2.5 || nu == 3.5;
}

double matern_phi(double nu, double r, PhiMode mode) {
  if (!(nu > 0.0)) throw InvalidArgument("Matern nu must be positive");
  if (!(r >= 0.0)) throw InvalidArgument("radius must be nonnegative");
  if (mode == PhiMode::quadrature_oracle) return matern_quadrature_oracle(nu, r);
  if (!has_closed_form(nu)) {
    std::ostringstream os;
    os << "no closed form for Matern nu = " << nu << " (supported: 1/2, 3/2, 5/2, 7/2)";
    throw UnsupportedParameter(os.str());
  }
  return eval_profile(profile_of(Matern{nu}), nu, r);
}

double radial_profile(const KernelFamily& family, double r) {
  const Profile p = profile_of(family);
  const double nu = p == Profile::sqexp ? 0.0 : std::get<Matern>(family).nu;
  return eval_profile(p, nu, r);
}

double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty() || x.size() > 3)
    throw ShapeError("kernel_eval needs two points of equal dimension 1..3");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(std::abs(x[i]) <= 1.0 && std::abs(y[i]) <= 1.0))
      throw DomainError("kernel_eval point outside [-1, 1]^d");
  const double sx = spec.sigma(x), sy = spec.sigma(y);
  check_sigma(spec, sx, 0);
  check_sigma(spec, sy, 1);
  const PairEvaluator eval(spec, static_cast<int>(x.size()));
  return eval(x, y, sx, sy, spec.weight(x), spec.weight(y));
}

Eigen::MatrixXd dense_kernel_matrix(const KernelSpec& spec, const PointSet& pts,
                                    std::size_t oracle_cap) {
  const std::size_t n = pts.size();
  check_cap(n, oracle_cap);
  const FieldSamples f = sample_fields(spec, pts);
  const PairEvaluator eval(spec, pts.dim());
  Eigen::MatrixXd k(n, n);
  const long ln = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < ln; ++i) {
    for (long j = i; j < ln; ++j) {
      const double v = eval(pts[i], pts[j], f.sigma[i], f.sigma[j], f.weight[i], f.weight[j]);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

std::vector<double> dense_matvec(const KernelSpec& spec, const PointSet& pts,
                                 std::span<const double> alpha, std::size_t oracle_cap) {
  if (alpha.size() != pts.size()) throw ShapeError("dense_matvec: alpha length mismatch");
  return dense_cross_matvec(spec, pts, alpha, pts, oracle_cap);
}

std::vector<double> dense_cross_matvec(const KernelSpec& spec, const PointSet& train,
                                       std::span<const double> alpha, const PointSet& query,
                                       std::size_t oracle_cap) {
  if (alpha.size() != train.size()) throw ShapeError("dense_cross_matvec: alpha length mismatch");
  if (train.dim() != query.dim()) throw ShapeError("train and query dimensions differ");
  check_cap(std::max(train.size(), query.size()), oracle_cap);
  const FieldSamples ft = sample_fields(spec, train);
  const FieldSamples fq = sample_fields(spec, query);
  const PairEvaluator eval(spec, train.dim());
  std::vector<double> out(query.size(), 0.0);
  const long nq = static_cast<long>(query.size());
#pragma omp parallel for schedule(static)
  for (long q = 0; q < nq; ++q) {
    double acc = 0.0;
    for (std::size_t j = 0; j < train.size(); ++j)
      acc += alpha[j] * eval(query[q], train[j], fq.sigma[q], ft.sigma[j], fq.weight[q],
                             ft.weight[j]);
    out[q] = acc;
  }
  return out;
}

}  // namespace nsgp
