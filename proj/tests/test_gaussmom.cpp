// Copyright 2026 The cwtg Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "cwtg/errors.hpp"
#include "cwtg/gaussmom.hpp"
#include "cwtg/oracles.hpp"
#include "oracles.hpp"

using namespace cwtg;
using Catch::Approx;

namespace {

Covariance2 random_cov(std::mt19937_64& rng) {
  const double s11 = oracles::uniform(rng, 0.0, 2.0);
  const double s22 = oracles::uniform(rng, 0.0, 2.0);
  const double s12 = oracles::uniform(rng, -1.0, 1.0) * std::sqrt(s11 * s22);
  return {s11, s22, s12};
}

}  // namespace

TEST_CASE("covariance validation", "[gaussmom]") {
  CHECK_NOTHROW(Covariance2(1, 1, 1));
  CHECK_NOTHROW(Covariance2(0, 0, 0));
  CHECK_THROWS_AS(Covariance2(-1, 1, 0), InvalidParameter);
  CHECK_THROWS_AS(Covariance2(1, 1, 1.01), InvalidParameter);
}

TEST_CASE("moment examples", "[gaussmom]") {
  const Covariance2 cov(1, 1, 0.5);
  const Covariance2 other(0.7, 1.3, -0.2);
  CHECK(moment_pairings(1, 1, other) == Approx(-0.2));
  CHECK(moment_pairings(2, 0, other) == Approx(0.7));
  CHECK(moment_pairings(2, 2, cov) == Approx(1.5));
  CHECK(moment_recursive(0, 0, other) == 1.0);
  CHECK(moment_recursive(3, 1, cov) == Approx(1.5));
  CHECK(moment_recursive(4, 0, Covariance2(2, 1, 0)) == Approx(12.0));
  CHECK(moment_closed(2, 2, cov) == Approx(1.5));
  CHECK(moment_closed(6, 0, Covariance2(1, 1, 0)) == Approx(15.0));
  CHECK(moment_closed(1, 2, other) == 0.0);
  CHECK_THROWS_AS(moment_pairings(9, 9, cov), ComplexityError);
  CHECK(double_factorial(-1) == 1.0);
  CHECK(double_factorial(0) == 1.0);
  CHECK(double_factorial(7) == 105.0);
}

TEST_CASE("moments against a quadrature oracle", "[gaussmom]") {
  const double s11 = 1.3, s22 = 0.6, s12 = 0.4;
  const Covariance2 cov(s11, s22, s12);
  for (int k = 0; k <= 4; ++k) {
    for (int l = 0; l <= 4; ++l) {
      const double oracle = test::gaussian_moment_grid(k, l, s11, s22, s12);
      CHECK(moment_closed(k, l, cov) == Approx(oracle).margin(1e-9).epsilon(1e-9));
    }
  }
}

TEST_CASE("three routes agree", "[gaussmom][property]") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const Covariance2 cov = random_cov(rng);
    for (int k = 0; k <= 12; ++k) {
      for (int l = 0; k + l <= 12; ++l) {
        const double p = moment_pairings(k, l, cov);
        const double r = moment_recursive(k, l, cov);
        const double c = moment_closed(k, l, cov);
        const double tol = 1e-9 * (1.0 + std::abs(p));
        REQUIRE(std::abs(p - r) <= tol);
        REQUIRE(std::abs(p - c) <= tol);
      }
    }
  }
}

TEST_CASE("odd orders vanish exactly", "[gaussmom][property]") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 50; ++trial) {
    const Covariance2 cov = random_cov(rng);
    for (int k = 0; k <= 9; ++k) {
      for (int l = 0; k + l <= 11; ++l) {
        if ((k + l) % 2 == 0) continue;
        REQUIRE(moment_pairings(k, l, cov) == 0.0);
        REQUIRE(moment_recursive(k, l, cov) == 0.0);
        REQUIRE(moment_closed(k, l, cov) == 0.0);
      }
    }
  }
}

TEST_CASE("swap symmetry, sign flip and diagonal factorization", "[gaussmom][property]") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    const Covariance2 cov = random_cov(rng);
    const Covariance2 swapped(cov.s22(), cov.s11(), cov.s12());
    const Covariance2 flipped(cov.s11(), cov.s22(), -cov.s12());
    const Covariance2 diag(cov.s11(), cov.s22(), 0.0);
    for (int k = 0; k <= 8; ++k) {
      for (int l = 0; k + l <= 10; ++l) {
        const double m = moment_closed(k, l, cov);
        const double tol = 1e-12 * (1.0 + std::abs(m));
        REQUIRE(std::abs(moment_closed(l, k, swapped) - m) <= tol);
        const double sign = (k % 2 == 1 && l % 2 == 1) ? -1.0 : 1.0;
        REQUIRE(std::abs(moment_closed(k, l, flipped) - sign * m) <= tol);
        if (k % 2 == 0 && l % 2 == 0) {
          const double f = double_factorial(k - 1) * std::pow(cov.s11(), k / 2) * double_factorial(l - 1) *
                           std::pow(cov.s22(), l / 2);
          REQUIRE(moment_closed(k, l, diag) == Approx(f).epsilon(1e-12).margin(1e-300));
        }
      }
    }
  }
}

TEST_CASE("degenerate covariances stay finite", "[gaussmom]") {
  const Covariance2 zero_var(0.0, 2.0, 0.0);
  CHECK(moment_closed(2, 2, zero_var) == 0.0);
  CHECK(moment_closed(0, 4, zero_var) == Approx(12.0));
  CHECK(moment_closed(1, 1, Covariance2(0, 0, 0)) == 0.0);
  CHECK(std::isfinite(moment_closed(3, 3, Covariance2(1.0, 1.0, 1.0))));
  CHECK(moment_closed(3, 3, Covariance2(1.0, 1.0, 1.0)) == Approx(15.0));
}
