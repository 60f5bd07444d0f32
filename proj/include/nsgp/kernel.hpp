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
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "nsgp/params.hpp"

namespace nsgp {

/// N points in [-1, 1]^d, stored row-major (point i occupies
/// coords()[i*dim, (i+1)*dim)).
class PointSet {
 public:
  PointSet() = default;
  /// Throws InvalidArgument for d outside {1,2,3}, empty sets or ragged input,
  /// DomainError for coordinates outside the box.
  PointSet(int dim, std::vector<double> coords);

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  std::span<const double> operator[](std::size_t i) const {
    return {coords_.data() + i * dim_, static_cast<std::size_t>(dim_)};
  }
  std::span<const double> coords() const noexcept { return coords_; }

 private:
  int dim_ = 0;
  std::vector<double> coords_;
};

using ScalarField = std::function<double(std::span<const double>)>;

struct Matern {
  double nu;
};
struct SquaredExponential {};
using KernelFamily = std::variant<Matern, SquaredExponential>;

/// Non-stationary isotropic kernel
///   K(x,y) = w(x) w(y) (2 pi [s(x)^2 + s(y)^2])^{-d/2} phi(|x-y| / sqrt(s(x)^2 + s(y)^2))
/// where s is the length-scale field, declared to lie in [sigma_min, sigma_max].
struct KernelSpec {
  KernelFamily family;
  ScalarField sigma;
  ScalarField weight;
  double sigma_min = 0.0;
  double sigma_max = 0.0;

  bool is_squared_exponential() const noexcept {
    return std::holds_alternative<SquaredExponential>(family);
  }
  /// Matern smoothness; throws InvalidArgument for the squared exponential.
  double nu() const;
  /// Checks sigma bounds and nu > 0.
  void validate() const;
  double kappa() const noexcept { return sigma_max / sigma_min; }
};

KernelSpec make_matern(double nu, ScalarField sigma, ScalarField weight,
                       double sigma_min, double sigma_max);
KernelSpec make_squared_exponential(ScalarField sigma, ScalarField weight,
                                    double sigma_min, double sigma_max);
ScalarField constant_field(double value);

/// sigma and w sampled once per point. Throws DomainError naming the first
/// index whose sigma leaves [sigma_min, sigma_max]; warns once if |w| > 1.
struct FieldSamples {
  std::vector<double> sigma;
  std::vector<double> weight;
};
FieldSamples sample_fields(const KernelSpec& spec, const PointSet& pts);

struct DerivedConstants {
  double kappa;
  double chi_min, chi_max;
  double rho_min, rho_max;
  double lambda;
};
DerivedConstants derived_constants(const KernelSpec& spec, const ApproxParams& params);

enum class PhiMode { closed_form, quadrature_oracle };

/// Matern radial function normalized so phi(0) = 1. closed_form covers
/// nu in {1/2, 3/2, 5/2, 7/2} and throws UnsupportedParameter otherwise.
double matern_phi(double nu, double r, PhiMode mode);
bool has_closed_form(double nu) noexcept;

/// Radial profile of the family: exp(-r^2/2) for the squared exponential,
/// the Matern closed form when available and the quadrature oracle otherwise.
double radial_profile(const KernelFamily& family, double r);

double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                   std::span<const double> y);

inline constexpr std::size_t kDefaultOracleCap = 20000;

/// Exact N x N kernel matrix; each unordered pair is evaluated once.
Eigen::MatrixXd dense_kernel_matrix(const KernelSpec& spec, const PointSet& pts,
                                    std::size_t oracle_cap = kDefaultOracleCap);

/// Exact K * alpha without storing K (O(N) memory, O(N^2) time).
std::vector<double> dense_matvec(const KernelSpec& spec, const PointSet& pts,
                                 std::span<const double> alpha,
                                 std::size_t oracle_cap = kDefaultOracleCap);

/// Exact K(query, train) * alpha.
std::vector<double> dense_cross_matvec(const KernelSpec& spec, const PointSet& train,
                                       std::span<const double> alpha,
                                       const PointSet& query,
                                       std::size_t oracle_cap = kDefaultOracleCap);

}  // namespace nsgp
