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

#include "nsgp/chebyshev.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "nsgp/errors.hpp"

namespace nsgp {

ChebBasis::ChebBasis(double sigma_min, double sigma_max, int n_sigma)
    : sigma_min_(sigma_min), sigma_max_(sigma_max) {
  if (!(sigma_min > 0.0) || !(sigma_min < sigma_max))
    throw InvalidArgument("Chebyshev interval requires 0 < sigma_min < sigma_max");
  if (n_sigma < 1) throw InvalidArgument("Chebyshev basis requires n_sigma >= 1");
  const double len = sigma_max - sigma_min;
  nodes_.resize(n_sigma + 1);
  weights_.resize(n_sigma + 1);
  for (int k = 0; k <= n_sigma; ++k) {
    // sin form of cos(pi k / N): exactly antisymmetric in k <-> N - k.
    const double c = std::sin(std::numbers::pi * (n_sigma - 2 * k) / (2.0 * n_sigma));
    nodes_[k] = 0.5 * (c + 1.0) * len + sigma_min;
    weights_[k] = (k % 2 == 0) ? 1.0 : -1.0;
  }
  nodes_.front() = sigma_max;
  nodes_.back() = sigma_min;
  weights_.front() *= 0.5;
  weights_.back() *= 0.5;
}

ChebBasis ChebBasis::single(double sigma) {
  if (!(sigma > 0.0)) throw InvalidArgument("single-node basis requires sigma > 0");
  ChebBasis b;
  b.sigma_min_ = b.sigma_max_ = sigma;
  b.nodes_ = {sigma};
  b.weights_ = {1.0};
  return b;
}

void ChebBasis::eval_into(double sigma, std::span<double> out) const {
  if (out.size() != nodes_.size()) throw ShapeError("basis output has wrong length");
  if (!(sigma >= sigma_min_ && sigma <= sigma_max_)) {
    std::ostringstream os;
    os << "sigma = " << sigma << " outside interpolation range [" << sigma_min_ << ", "
       << sigma_max_ << "]";
    throw DomainError(os.str());
  }
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    if (sigma == nodes_[k]) {
      std::fill(out.begin(), out.end(), 0.0);
      out[k] = 1.0;
      return;
    }
  }
  double denom = 0.0;
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    out[k] = weights_[k] / (sigma - nodes_[k]);
    denom += out[k];
  }
  for (double& p : out) p /= denom;
}

std::vector<double> ChebBasis::eval(double sigma) const {
  std::vector<double> out(nodes_.size());
  eval_into(sigma, out);
  return out;
}

double lebesgue_estimate(const ChebBasis& basis, int samples) {
  if (basis.size() == 1) return 1.0;
  if (samples < 2) samples = 2;
  std::vector<double> p(basis.size());
  double best = 1.0;
  const double lo = basis.sigma_min(), hi = basis.sigma_max();
  for (int s = 0; s < samples; ++s) {
    const double sigma = (s == samples - 1) ? hi : lo + (hi - lo) * s / (samples - 1);
    basis.eval_into(sigma, p);
    double sum = 0.0;
    for (double v : p) sum += std::abs(v);
    best = std::max(best, sum);
  }
  return best;
}

RowMatrix diag_weights(const FieldSamples& fields, const ChebBasis& basis, int dim) {
  const std::size_t n = fields.sigma.size();
  RowMatrix w(basis.size(), n);
  std::vector<double> p(basis.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double s = fields.sigma[i];
    try {
      basis.eval_into(s, p);
    } catch (const DomainError& e) {
      throw DomainError("point " + std::to_string(i) + ": " + e.what());
    }
    const double scale = fields.weight[i] * std::pow(2.0 * std::numbers::pi * s * s, -0.5 * dim);
    for (std::size_t k = 0; k < basis.size(); ++k) w(k, i) = scale * p[k];
  }
  return w;
}

RowMatrix diag_weights(const KernelSpec& spec, const ChebBasis& basis, const PointSet& pts) {
  return diag_weights(sample_fields(spec, pts), basis, pts.dim());
}

double eps_cheb(int n_sigma, double kappa) {
  if (!(kappa >= 1.0)) throw InvalidArgument("kappa must be >= 1");
  return 2.0 * (kappa - 1.0) * std::pow((kappa - 1.0) / (kappa + 1.0), n_sigma);
}

}  // namespace nsgp
