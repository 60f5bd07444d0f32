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

#include "nsgp/errors.hpp"
#include "nsgp/harness.hpp"
#include "nsgp/kernel.hpp"
#include "nsgp/quadrature.hpp"

using namespace nsgp;

TEST_CASE("chi_u_v examples") {
  const SchoenbergSample a = chi_u_v(1.0, 0.0, 1);
  CHECK(a.chi == doctest::Approx(1.0));
  CHECK(a.u == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(a.v == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  const SchoenbergSample b = chi_u_v(4.0, 0.0, 1);
  CHECK(b.chi == doctest::Approx(0.5));
  CHECK(b.u == doctest::Approx(0.06131324019524039).epsilon(1e-14));
  CHECK(b.v == doctest::Approx(0.12262648039048077).epsilon(1e-14));
  // v = chi^{-d} u in higher dimension.
  const SchoenbergSample c = chi_u_v(1.5, 0.7, 3);
  CHECK(c.v == doctest::Approx(c.u / std::pow(c.chi, 3)).epsilon(1e-14));
  // Deep tails underflow to zero rather than producing NaN.
  const SchoenbergSample far = chi_u_v(1.5, 50.0, 2);
  CHECK(far.u == 0.0);
  CHECK(std::isfinite(chi_u_v(1.5, -700.0, 2).v));
}

TEST_CASE("u integrates to one") {
  for (double nu : {0.5, 1.0, 2.5, 7.0}) {
    const double h = 0.01;
    double s = 0.0;
    for (double t = -60.0; t <= 6.0; t += h) s += chi_u_v(nu, t, 1).u * h;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("build_scheme trapezoid pattern") {
  const QuadratureScheme s = build_scheme(Matern{1.0}, 0.0, 1.0, 2, 1);
  REQUIRE(s.size() == 3);
  CHECK(s.t_nodes[0] == 0.0);
  CHECK(s.t_nodes[1] == 0.5);
  CHECK(s.t_nodes[2] == 1.0);
  CHECK(s.delta_t == 0.5);
  for (int j = 0; j < 3; ++j) {
    const double w = (j == 1) ? 0.5 : 0.25;
    CHECK(s.trapezoid_weights[j] == w);
    CHECK(s.v_weights[j] == doctest::Approx(chi_u_v(1.0, s.t_nodes[j], 1).v * w).epsilon(1e-15));
  }
}

TEST_CASE("squared exponential scheme and errors") {
  const QuadratureScheme g = build_scheme(SquaredExponential{}, 0.0, 0.0, 0, 2);
  REQUIRE(g.size() == 1);
  CHECK(g.t_nodes[0] == 0.0);
  CHECK(g.chi[0] == 1.0);
  CHECK(g.v_weights[0] == 1.0);
  CHECK_THROWS_AS(build_scheme(Matern{1.5}, -1.0, 1.0, 0, 1), InvalidArgument);
  CHECK_THROWS_AS(build_scheme(Matern{1.5}, 1.0, -1.0, 4, 1), InvalidArgument);
}

TEST_CASE("weights are finite and nonnegative on random inputs") {
  SplitMix64 g(12);
  for (int trial = 0; trial < 50; ++trial) {
    const double nu = g.uniform(0.2, 6.0);
    const double a = g.uniform(-30, 0), b = g.uniform(0, 6);
    const int nt = 1 + static_cast<int>(g.uniform(0, 60));
    const QuadratureScheme s = build_scheme(Matern{nu}, a, b, nt, 1 + trial % 3);
    for (double w : s.v_weights) {
      CHECK(std::isfinite(w));
      CHECK(w >= 0.0);
    }
  }
}

TEST_CASE("default_t_range") {
  const TRange r = default_t_range(1e-6, 1.5);
  CHECK(r.t_min == doctest::Approx(-8.543673705309516).epsilon(1e-14));
  CHECK(r.t_max == doctest::Approx(3.318939095035956).epsilon(1e-14));
  CHECK(r.n_t == 24);
  const TRange s = default_t_range(1e-9, 1.5);
  CHECK(s.t_min < r.t_min);
  CHECK(s.t_max > r.t_max);
  CHECK((s.t_max - s.t_min) / s.n_t <= 0.5);
  CHECK_THROWS_AS(default_t_range(1.0, 1.5), InvalidArgument);
  CHECK_THROWS_AS(default_t_range(0.0, 1.5), InvalidArgument);
}

TEST_CASE("reconstruct_phi examples at default_t_range(1e-8)") {
  auto scheme = [](double nu) {
    const TRange r = default_t_range(1e-8, nu);
    return build_scheme(Matern{nu}, r.t_min, r.t_max, r.n_t, 1);
  };
  CHECK(std::abs(reconstruct_phi(scheme(1.5), 1.5, 0.0) - 1.0) < 1e-6);
  CHECK(std::abs(reconstruct_phi(scheme(0.5), 0.5, 1.0) - std::exp(-1.0)) < 1e-6);
  CHECK(std::abs(reconstruct_phi(scheme(1.5), 1.5, 2.0) - 0.13973135019231467) < 1e-6);
}

TEST_CASE("quadrature error decays geometrically as N_t doubles") {
  const double nu = 1.5, r = 0.8;
  const TRange tr = default_t_range(1e-14, nu);
  const double exact = matern_phi(nu, r, PhiMode::closed_form);
  // The discretization part behaves like exp(-c N_t), so doubling N_t at
  // least squares the error (up to a constant) until roundoff.
  double prev = 1.0;
  for (int nt : {16, 32, 64}) {
    const double err = std::abs(reconstruct_phi(build_scheme(Matern{nu}, tr.t_min, tr.t_max, nt, 1), nu, r) - exact);
    INFO("nt=" << nt << " err=" << err);
    CHECK(err < 0.1 * prev);
    prev = err;
  }
}

TEST_CASE("truncating the t-range raises the error") {
  const double nu = 1.5, r = 0.5;
  const double exact = matern_phi(nu, r, PhiMode::closed_form);
  auto err = [&](double a, double b, double rr, double ex) {
    return std::abs(reconstruct_phi(build_scheme(Matern{nu}, a, b, 400, 1), nu, rr) - ex);
  };
  CHECK(err(-20, 2.0, r, exact) > err(-20, 3.5, r, exact));
  // The lower tail only matters near r = 0, where its integrand is not damped.
  CHECK(err(-3, 3.5, 0.0, 1.0) > err(-6, 3.5, 0.0, 1.0));
  CHECK(err(-6, 3.5, 0.0, 1.0) > err(-20, 3.5, 0.0, 1.0));
}
