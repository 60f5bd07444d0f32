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

#include <cmath>
#include <numbers>

#include "nsgp/chebyshev.hpp"
#include "nsgp/errors.hpp"
#include "nsgp/harness.hpp"

using namespace nsgp;

TEST_CASE("cheb_nodes examples and invariants") {
  const ChebBasis b2 = cheb_nodes(1, 3, 2);
  REQUIRE(b2.size() == 3);
  CHECK(b2.nodes()[0] == 3.0);
  CHECK(b2.nodes()[1] == 2.0);
  CHECK(b2.nodes()[2] == 1.0);
  const ChebBasis b1 = cheb_nodes(1, 3, 1);
  CHECK(b1.nodes() == std::vector<double>{3.0, 1.0});

  const ChebBasis b = cheb_nodes(0.2, 0.7, 17);
  const double mid = 0.45;
  for (int k = 0; k <= 17; ++k) {
    const double expect = (std::cos(std::numbers::pi * k / 17) + 1) / 2 * 0.5 + 0.2;
    CHECK(b.nodes()[k] == doctest::Approx(expect).epsilon(1e-15));
    CHECK(b.nodes()[k] - mid == doctest::Approx(mid - b.nodes()[17 - k]).epsilon(1e-14));
    if (k > 0) CHECK(b.nodes()[k] < b.nodes()[k - 1]);
  }
  CHECK_THROWS_AS(cheb_nodes(3, 1, 4), InvalidArgument);
  CHECK_THROWS_AS(cheb_nodes(1, 1, 4), InvalidArgument);
  CHECK_THROWS_AS(cheb_nodes(1, 3, 0), InvalidArgument);
}

TEST_CASE("basis_eval") {
  const ChebBasis b = cheb_nodes(1, 3, 1);
  const std::vector<double> p = b.eval(2.0);
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK(p[1] == doctest::Approx(0.5));

  const ChebBasis c = cheb_nodes(kSigmaRefMin, kSigmaRefMax, 12);
  for (std::size_t j = 0; j < c.size(); ++j) {
    const std::vector<double> e = c.eval(c.nodes()[j]);
    for (std::size_t k = 0; k < e.size(); ++k) CHECK(e[k] == (k == j ? 1.0 : 0.0));
  }
  SplitMix64 g(2);
  for (int i = 0; i < 200; ++i) {
    const std::vector<double> q = c.eval(g.uniform(kSigmaRefMin, kSigmaRefMax));
    double s = 0.0;
    for (double v : q) s += v;
    CHECK(std::abs(s - 1.0) <= 1e-14);
  }
  CHECK_THROWS_AS(c.eval(kSigmaRefMax * 1.01), DomainError);
  CHECK_THROWS_AS(c.eval(kSigmaRefMin * 0.99), DomainError);
}

TEST_CASE("barycentric evaluation reproduces polynomials to 1e-12 up to degree 64") {
  SplitMix64 g(3);
  for (int n : {1, 4, 16, 33, 64}) {
    const ChebBasis b(0.5, 2.5, n);
    std::vector<double> coef(n + 1);
    for (double& c : coef) c = g.uniform(-1, 1);
    // Evaluate in the Chebyshev basis of the interval for conditioning.
    auto poly = [&](double s) {
      const double x = (2 * s - 3.0) / 2.0;
      double sum = 0.0;
      for (int k = 0; k <= n; ++k) sum += coef[k] * std::cos(k * std::acos(std::clamp(x, -1.0, 1.0)));
      return sum;
    };
    double worst = 0.0;
    for (int i = 0; i < 300; ++i) {
      const double s = g.uniform(0.5, 2.5);
      const std::vector<double> p = b.eval(s);
      double interp = 0.0;
      for (int k = 0; k <= n; ++k) interp += p[k] * poly(b.nodes()[k]);
      worst = std::max(worst, std::abs(interp - poly(s)));
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("lebesgue_estimate") {
  CHECK(lebesgue_estimate(cheb_nodes(1, 3, 1)) == doctest::Approx(1.0));
  const double l10 = lebesgue_estimate(cheb_nodes(1, 3, 10));
  const double l40 = lebesgue_estimate(cheb_nodes(1, 3, 40));
  CHECK(l10 >= 1.0);
  CHECK(l10 <= 3.0);
  CHECK(l40 / l10 <= 2.0);
  // Consistency: every sampled sum stays below the estimate (up to sampling).
  const ChebBasis b = cheb_nodes(1, 3, 10);
  SplitMix64 g(8);
  for (int i = 0; i < 200; ++i) {
    double s = 0.0;
    for (double v : b.eval(g.uniform(1, 3))) s += std::abs(v);
    CHECK(s <= l10 * (1 + 1e-3));
  }
}

TEST_CASE("Lemma bound on Gaussian width interpolation holds for random pairs") {
  const double kappa = kSigmaRefMax / kSigmaRefMin;
  SplitMix64 g(21);
  for (int n : {5, 10, 20}) {
    const ChebBasis b(kSigmaRefMin, kSigmaRefMax, n);
    const double bound = eps_cheb(n, kappa);
    for (int i = 0; i < 100; ++i) {
      const double s = g.uniform(kSigmaRefMin, kSigmaRefMax), x = g.uniform(-2, 2);
      const std::vector<double> p = b.eval(s);
      double interp = 0.0;
      for (int k = 0; k <= n; ++k)
        interp += p[k] * std::exp(-x * x / (2 * b.nodes()[k] * b.nodes()[k]));
      CHECK(std::abs(interp - std::exp(-x * x / (2 * s * s))) <= bound);
    }
  }
}

TEST_CASE("diag_weights") {
  const PointSet pts = gen_dataset(2, 50, 6);
  const KernelSpec ref = make_matern(1.5, [](std::span<const double> x) { return sigma_ref(x); },
                                     constant_field(0.7), kSigmaRefMin, kSigmaRefMax);
  const ChebBasis b(kSigmaRefMin, kSigmaRefMax, 9);
  const RowMatrix w = diag_weights(ref, b, pts);
  REQUIRE(w.rows() == 10);
  REQUIRE(w.cols() == 50);
  for (int i = 0; i < 50; ++i) {
    const double s = sigma_ref(pts[i]);
    CHECK(w.col(i).sum() == doctest::Approx(0.7 / (2 * std::numbers::pi * s * s)).epsilon(1e-13));
  }

  const KernelSpec zero = make_matern(1.5, constant_field(0.3), constant_field(0.0), 0.2, 0.4);
  CHECK(diag_weights(zero, cheb_nodes(0.2, 0.4, 4), pts).isZero(0.0));

  const ChebBasis c = cheb_nodes(0.2, 0.4, 4);
  const KernelSpec at_node =
      make_matern(1.5, constant_field(c.nodes()[1]), constant_field(1.0), 0.2, 0.4);
  const RowMatrix wn = diag_weights(at_node, c, pts);
  for (int k = 0; k < 5; ++k) {
    const double expect = k == 1 ? 1.0 / (2 * std::numbers::pi * c.nodes()[1] * c.nodes()[1]) : 0.0;
    CHECK(wn(k, 0) == doctest::Approx(expect));
  }

  const KernelSpec out = make_matern(1.5, constant_field(0.5), constant_field(1.0), 0.2, 0.6);
  try {
    diag_weights(out, c, pts);
    FAIL("expected domain error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("point 0") != std::string::npos);
  }
}

TEST_CASE("eps_cheb") {
  CHECK(eps_cheb(7, 1.0) == 0.0);
  CHECK(eps_cheb(10, 3.0) == doctest::Approx(0.00390625).epsilon(1e-15));
  for (int n = 1; n < 20; ++n)
    CHECK(eps_cheb(n + 1, 2.5) / eps_cheb(n, 2.5) == doctest::Approx(1.5 / 3.5).epsilon(1e-13));
  CHECK_THROWS_AS(eps_cheb(3, 0.5), InvalidArgument);
}

TEST_CASE("single-node basis") {
  const ChebBasis s = ChebBasis::single(0.3);
  CHECK(s.size() == 1);
  CHECK(s.eval(0.3) == std::vector<double>{1.0});
  CHECK_THROWS_AS(s.eval(0.31), DomainError);
}
