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

#include "nsgp/matvec.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <sstream>

#include "nsgp/errors.hpp"
#include "nsgp/simd.hpp"

namespace nsgp {

namespace {

class Fnv1a {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h_ ^= c[i];
      h_ *= 0x100000001b3ull;
    }
  }
  template <class T>
  void value(const T& v) {
    bytes(&v, sizeof(T));
  }
  void doubles(std::span<const double> v) { bytes(v.data(), v.size_bytes()); }
  std::uint64_t get() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ull;
};

}  // namespace

ChebBasis plan_basis(const KernelSpec& spec, int n_sigma) {
  if (spec.sigma_min == spec.sigma_max) return ChebBasis::single(spec.sigma_min);
  return ChebBasis(spec.sigma_min, spec.sigma_max, n_sigma);
}

MatvecPlan MatvecPlan::build(const KernelSpec& spec, const PointSet& pts,
                             const ApproxParams& params, const MatvecOptions& options) {
  spec.validate();
  if (!(params.t_min <= params.t_max)) throw InvalidArgument("t_min must not exceed t_max");
  if (params.n_sigma < 1) throw InvalidArgument("N_sigma must be >= 1");

  MatvecPlan plan;
  plan.spec_ = spec;
  plan.params_ = params;
  plan.grid_ = FourierGrid{params.m, params.delta_omega, pts.dim()};
  plan.grid_.validate();
  plan.scheme_ = build_scheme(spec.family, params.t_min, params.t_max, params.n_t, pts.dim());
  plan.basis_ = std::make_shared<const ChebBasis>(plan_basis(spec, params.n_sigma));
  plan.pts_ = pts;

  // Store points in spreading order so the per-k passes stream through memory;
  // apply() gathers alpha and scatters the result once.
  plan.perm_ = NufftPlan(pts, plan.grid_, params.nufft_tol).order();
  const int d = pts.dim();
  std::vector<double> sorted(pts.size() * d);
  for (std::size_t i = 0; i < pts.size(); ++i)
    std::copy_n(pts[plan.perm_[i]].data(), d, sorted.begin() + i * d);
  const PointSet sorted_pts(d, std::move(sorted));
  plan.weights_ = diag_weights(spec, *plan.basis_, sorted_pts);
  plan.nufft_ = std::make_shared<const NufftPlan>(sorted_pts, plan.grid_, params.nufft_tol);

  const std::size_t nb = plan.basis_->size();
  const std::size_t nodes = plan.scheme_.size();
  CouplingStrategy s = options.strategy;
  if (s == CouplingStrategy::automatic) {
    const bool crossover = 2 * nodes >= nb;
    const bool fits = coupling_bytes(nb, plan.grid_) <= options.coupling_memory_cap;
    s = (crossover && fits) ? CouplingStrategy::coupled : CouplingStrategy::streaming;
  }
  plan.strategy_ = s;
  auto symbols = std::make_shared<const SymbolTable>(plan.scheme_, *plan.basis_, plan.grid_);
  if (s == CouplingStrategy::coupled)
    plan.coupling_ =
        std::make_shared<const CouplingTensor>(build_coupling(*symbols, options.coupling_memory_cap));
  else
    plan.symbols_ = std::move(symbols);
  return plan;
}

void MatvecPlan::step3(const std::vector<cplx>& b, std::vector<cplx>& a) const {
  const simd::KernelTable& kt = simd::kernels();
  const std::size_t nb = basis_->size();
  const std::size_t gsize = grid_.size();
  const std::size_t len = grid_.row_length();
  const long rows = static_cast<long>(grid_.rows());

  if (strategy_ == CouplingStrategy::coupled) {
    const CouplingTensor& A = *coupling_;
#pragma omp parallel for schedule(static)
    for (long r = 0; r < rows; ++r) {
      const std::size_t off = static_cast<std::size_t>(r) * len;
      for (std::size_t kp = 0; kp < nb; ++kp)
        for (std::size_t k = 0; k < nb; ++k)
          kt.scaled_product_accumulate(a.data() + kp * gsize + off, 1.0,
                                       A.plane(kp, k).data() + off, b.data() + k * gsize + off,
                                       len);
    }
    return;
  }

  const SymbolTable& sym = *symbols_;
  const auto& vt = sym.scaled_weights();
#pragma omp parallel
  {
    std::vector<double> g(nb * len);
    std::vector<cplx> s(len);
    std::array<int, 2> lead{};
#pragma omp for schedule(static)
    for (long r = 0; r < rows; ++r) {
      std::size_t rem = static_cast<std::size_t>(r);
      for (int i = grid_.dim - 2; i >= 0; --i) {
        lead[i] = static_cast<int>(rem % len);
        rem /= len;
      }
      const std::span<const int> lead_span(lead.data(), static_cast<std::size_t>(grid_.dim - 1));
      const std::size_t off = static_cast<std::size_t>(r) * len;
      for (std::size_t j = 0; j < sym.n_nodes(); ++j) {
        for (std::size_t k = 0; k < nb; ++k)
          sym.row(k, j, lead_span, std::span<double>(g.data() + k * len, len));
        std::fill(s.begin(), s.end(), cplx(0.0));
        for (std::size_t k = 0; k < nb; ++k)
          kt.scaled_product_accumulate(s.data(), 1.0, g.data() + k * len,
                                       b.data() + k * gsize + off, len);
        for (std::size_t kp = 0; kp < nb; ++kp)
          kt.scaled_product_accumulate(a.data() + kp * gsize + off, vt[j], g.data() + kp * len,
                                       s.data(), len);
      }
    }
  }
}

FourierCoefficients MatvecPlan::fourier_side(std::span<const double> alpha) const {
  const std::size_t n = size();
  if (alpha.size() != n) {
    std::ostringstream os;
    os << "matvec input has length " << alpha.size() << ", expected " << n;
    throw ShapeError(os.str());
  }
  std::vector<double> ordered(n);
  for (std::size_t i = 0; i < n; ++i) ordered[i] = alpha[perm_[i]];
  const std::size_t nb = basis_->size();
  const std::size_t gsize = grid_.size();
  std::vector<cplx> b(nb * gsize);
  const long lnb = static_cast<long>(nb);
#pragma omp parallel
  {
    std::vector<cplx> c(n);
#pragma omp for schedule(dynamic, 1)
    for (long k = 0; k < lnb; ++k) {
      const double* wk = weights_.row(k).data();
      for (std::size_t i = 0; i < n; ++i) c[i] = cplx(wk[i] * ordered[i], 0.0);
      nufft_->type1(c, std::span<cplx>(b.data() + k * gsize, gsize));
    }
  }
  FourierCoefficients a;
  a.n_basis = nb;
  a.grid_size = gsize;
  a.data.assign(nb * gsize, cplx(0.0));
  step3(b, a.data);
  return a;
}

std::vector<double> MatvecPlan::synthesize(const FourierCoefficients& a, const NufftPlan& target,
                                           const RowMatrix& weights, MatvecDiagnostics* diag) {
  const std::size_t n = target.num_points();
  const std::size_t nb = a.n_basis;
  if (static_cast<std::size_t>(weights.rows()) != nb ||
      static_cast<std::size_t>(weights.cols()) != n || a.grid_size != target.grid().size())
    throw ShapeError("synthesis inputs have inconsistent shapes");
  std::vector<cplx> beta(nb * n);
  const long lnb = static_cast<long>(nb);
#pragma omp parallel for schedule(dynamic, 1)
  for (long k = 0; k < lnb; ++k)
    target.type2(a[k], std::span<cplx>(beta.data() + k * n, n));

  // Fixed k order keeps the reduction deterministic.
  const simd::KernelTable& kt = simd::kernels();
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < nb; ++k)
    kt.real_part_accumulate(out.data(), weights.row(k).data(), beta.data() + k * n, n);
  if (diag) {
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double im = 0.0;
      for (std::size_t k = 0; k < nb; ++k) im += weights(k, i) * beta[k * n + i].imag();
      worst = std::max(worst, std::abs(im));
    }
    diag->imaginary_residue = worst;
  }
  return out;
}

std::vector<double> MatvecPlan::apply(std::span<const double> alpha, MatvecDiagnostics* diag) const {
  const std::vector<double> ordered = synthesize(fourier_side(alpha), *nufft_, weights_, diag);
  std::vector<double> out(ordered.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[perm_[i]] = ordered[i];
  return out;
}

std::vector<double> MatvecPlan::apply_regularized(std::span<const double> alpha, double eta_sq,
                                                  MatvecDiagnostics* diag) const {
  if (!(eta_sq >= 0.0)) throw InvalidArgument("eta^2 must be nonnegative");
  std::vector<double> out = apply(alpha, diag);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += eta_sq * alpha[i];
  return out;
}

std::uint64_t MatvecPlan::digest() const {
  Fnv1a h;
  h.value(params_.t_min);
  h.value(params_.t_max);
  h.value(params_.n_t);
  h.value(params_.n_sigma);
  h.value(params_.m);
  h.value(params_.delta_omega);
  h.value(params_.nufft_tol);
  h.value(static_cast<int>(strategy_));
  h.doubles(points().coords());
  h.doubles(basis_->nodes());
  h.doubles(scheme_.chi);
  h.doubles(scheme_.v_weights);
  h.doubles(std::span<const double>(weights_.data(), static_cast<std::size_t>(weights_.size())));
  if (coupling_) {
    for (std::size_t kp = 0; kp < coupling_->n_basis(); ++kp)
      for (std::size_t k = kp; k < coupling_->n_basis(); ++k) h.doubles(coupling_->plane(kp, k));
  }
  if (symbols_) {
    for (std::size_t j = 0; j < symbols_->n_nodes(); ++j)
      for (std::size_t k = 0; k < symbols_->n_basis(); ++k) h.doubles(symbols_->axis(k, j));
  }
  return h.get();
}

}  // namespace nsgp
