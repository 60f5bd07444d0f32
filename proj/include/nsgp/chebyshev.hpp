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

#include <span>
#include <vector>

#include <Eigen/Core>

#include "nsgp/kernel.hpp"

namespace nsgp {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Lagrange basis on the Chebyshev-Lobatto nodes of [sigma_min, sigma_max],
///   sigma_k = (cos(pi k / N) + 1) / 2 * (sigma_max - sigma_min) + sigma_min,
/// k = 0..N (descending). Evaluated with the second barycentric formula.
class ChebBasis {
 public:
  /// Throws InvalidArgument unless 0 < sigma_min < sigma_max and n_sigma >= 1.
  ChebBasis(double sigma_min, double sigma_max, int n_sigma);

  /// One node, P_0 == 1: used when the scale field is constant.
  static ChebBasis single(double sigma);

  int degree() const noexcept { return static_cast<int>(nodes_.size()) - 1; }
  std::size_t size() const noexcept { return nodes_.size(); }
  double sigma_min() const noexcept { return sigma_min_; }
  double sigma_max() const noexcept { return sigma_max_; }
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& barycentric_weights() const noexcept { return weights_; }

  /// (P_0(s), ..., P_N(s)); exact unit vector at a node. DomainError outside range.
  std::vector<double> eval(double sigma) const;
  void eval_into(double sigma, std::span<double> out) const;

 private:
  ChebBasis() = default;
  double sigma_min_ = 0.0;
  double sigma_max_ = 0.0;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

inline ChebBasis cheb_nodes(double sigma_min, double sigma_max, int n_sigma) {
  return ChebBasis(sigma_min, sigma_max, n_sigma);
}

/// max over `samples` equispaced sigma of Sum_k |P_k(sigma)|.
double lebesgue_estimate(const ChebBasis& basis, int samples = 1000);

/// Row k, column i: w(x_i) (2 pi sigma(x_i)^2)^{-d/2} P_k(sigma(x_i)).
RowMatrix diag_weights(const KernelSpec& spec, const ChebBasis& basis, const PointSet& pts);
RowMatrix diag_weights(const FieldSamples& fields, const ChebBasis& basis, int dim);

/// 2 (kappa - 1) ((kappa - 1) / (kappa + 1))^N.
double eps_cheb(int n_sigma, double kappa);

}  // namespace nsgp
