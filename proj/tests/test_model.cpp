// Copyright 2026 The cwtg Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>
#include <cmath>
#include <limits>
#include <random>

#include "cwtg/errors.hpp"
#include "cwtg/model.hpp"
#include "cwtg/oracles.hpp"
#include "oracles.hpp"

using namespace cwtg;
using Catch::Approx;

TEST_CASE("coupling invariants", "[model]") {
  CHECK_NOTHROW(Coupling(1, 1, 0));
  CHECK_THROWS_AS(Coupling(0, 1, 0), InvalidParameter);
  CHECK_THROWS_AS(Coupling(1, -1, 0), InvalidParameter);
  CHECK_THROWS_AS(Coupling(1, 1, -0.1), InvalidParameter);
  CHECK_THROWS_AS(Coupling(1, 1, 1), InvalidParameter);
  CHECK_THROWS_WITH(Coupling(1, 1, 2), Catch::Matchers::ContainsSubstring("Delta"));
  CHECK(Coupling(2, 3, 1).delta() == 5.0);
}

TEST_CASE("weights and finite model invariants", "[model]") {
  CHECK_NOTHROW(GroupWeights(0, 0));
  CHECK_NOTHROW(GroupWeights(0.3, 0.7));
  CHECK_THROWS_AS(GroupWeights(-0.1, 0.5), InvalidParameter);
  CHECK_THROWS_AS(GroupWeights(0.6, 0.5), InvalidParameter);
  CHECK_THROWS_AS(FiniteModel(5, 3, 3), InvalidParameter);
  CHECK_THROWS_AS(FiniteModel(5, 0, 3), InvalidParameter);
  const FiniteModel m(10, 3, 5);
  CHECK_FALSE(m.covers_population());
  CHECK(m.weights() == GroupWeights(0.3, 0.5));
  CHECK(FiniteModel::balanced(4, 6).covers_population());
}

TEST_CASE("gibbs_log_weight examples", "[model]") {
  const Coupling c(1, 1, 0.5);
  CHECK(gibbs_log_weight(c, 2, 0, 0) == 0.0);
  CHECK(gibbs_log_weight(c, 2, 1, 1) == Approx(0.75).margin(1e-15));
  CHECK(gibbs_log_weight(Coupling(2, 3, 1), 10, -4, 6) == Approx(4.6).margin(1e-14));
  CHECK_THROWS_AS(gibbs_log_weight(c, 4, 5, 0), DomainError);
  CHECK_THROWS_AS(gibbs_log_weight(c, 4, 0, -5), DomainError);
}

TEST_CASE("gibbs_log_weight flip symmetry and positivity", "[model][property]") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Coupling c = oracles::random_coupling(rng);
    const std::int64_t n = 12;
    for (std::int64_t s1 = -n; s1 <= n; ++s1) {
      for (std::int64_t s2 = -n; s2 <= n; ++s2) {
        const double w = gibbs_log_weight(c, n, s1, s2);
        REQUIRE(w == gibbs_log_weight(c, n, -s1, -s2));
        REQUIRE(w >= 0.0);
      }
    }
  }
}

TEST_CASE("inverse_coupling examples", "[model]") {
  const auto a = inverse_coupling(Coupling(1, 1, 0));
  CHECK(a.l1 == 1.0);
  CHECK(a.l2 == 1.0);
  CHECK(a.lbar == 0.0);
  const auto b = inverse_coupling(Coupling(3, 3, 1));
  CHECK(b.l1 == Approx(3.0 / 8).margin(1e-15));
  CHECK(b.l2 == Approx(3.0 / 8).margin(1e-15));
  CHECK(b.lbar == Approx(1.0 / 8).margin(1e-15));
  const auto c = inverse_coupling(Coupling(2, 1, 0.5));
  CHECK(c.l1 == Approx(1 / 1.75).margin(1e-15));
  CHECK(c.l2 == Approx(2 / 1.75).margin(1e-15));
  CHECK(c.lbar == Approx(0.5 / 1.75).margin(1e-15));
  CHECK_THROWS_AS(coupling_from_inverse({1, 1, 1}), SingularityError);
}

TEST_CASE("inverse_coupling is an involution", "[model][property]") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 1000; ++trial) {
    const Coupling c = oracles::random_coupling(rng);
    const InverseCoupling inv = inverse_coupling(c);
    REQUIRE(inv.determinant() == Approx(1.0 / c.delta()).epsilon(1e-12));
    // Independent check: J * L = identity with L = [[l1, -lbar], [-lbar, l2]].
    REQUIRE(c.j1() * inv.l1 - c.jbar() * inv.lbar == Approx(1.0).epsilon(1e-12));
    REQUIRE(c.jbar() * inv.l1 - c.j2() * inv.lbar == Approx(0.0).margin(1e-12));
    const Coupling back = coupling_from_inverse(inv);
    REQUIRE(back.j1() == Approx(c.j1()).epsilon(1e-12));
    REQUIRE(back.j2() == Approx(c.j2()).epsilon(1e-12));
    REQUIRE(back.jbar() == Approx(c.jbar()).epsilon(1e-12).margin(1e-14));
  }
}

TEST_CASE("classify_regime examples", "[model]") {
  const Regime high = classify_regime(Coupling(1, 1, 0.5), GroupWeights(0.5, 0.5));
  CHECK(high.tag == RegimeTag::HighTemperature);
  CHECK(high.slack1 == Approx(1.0));
  CHECK(high.slack2 == Approx(1.0));
  CHECK(high.slack3 == Approx(0.75));
  CHECK(high.margin == Approx(0.75));

  const Regime low = classify_regime(Coupling(3, 3, 1), GroupWeights(0.5, 0.5));
  CHECK(low.tag == RegimeTag::LowTemperature);
  CHECK(low.slack1 == Approx(-1.0));

  const Regime edge = classify_regime(Coupling(2, 2, 0), GroupWeights(0.5, 0.5));
  CHECK(edge.tag == RegimeTag::Boundary);
  CHECK(std::abs(edge.margin) <= kRegimeTolerance);
  CHECK(to_string(edge.tag) == "Boundary");
}

TEST_CASE("classify_regime with empty groups", "[model]") {
  const Regime r = classify_regime(Coupling(1, 1, 0.5), GroupWeights(0, 0.5));
  CHECK(r.tag == RegimeTag::HighTemperature);
  CHECK(r.slack1 == std::numeric_limits<double>::infinity());
  CHECK(r.margin == Approx(1.0));
  const Regime both = classify_regime(Coupling(5, 5, 1), GroupWeights(0, 0));
  CHECK(both.tag == RegimeTag::HighTemperature);
  CHECK(both.margin == std::numeric_limits<double>::infinity());
  CHECK(classify_regime(Coupling(5, 5, 1), GroupWeights(0, 0.5)).tag == RegimeTag::LowTemperature);
}

TEST_CASE("matrix and hessian forms", "[model]") {
  CHECK(regime_matrix_form(Coupling(1, 1, 0.5), GroupWeights(0.5, 0.5)));
  CHECK_FALSE(regime_matrix_form(Coupling(3, 3, 1), GroupWeights(0.5, 0.5)));
  CHECK(regime_matrix_form(Coupling(1, 1, 0), GroupWeights(0, 0)));
  CHECK(regime_hessian_form(Coupling(1, 1, 0.5), GroupWeights(0.5, 0.5)));
  CHECK_FALSE(regime_hessian_form(Coupling(3, 3, 1), GroupWeights(0.5, 0.5)));
  CHECK(regime_hessian_form(Coupling(1, 1, 0), GroupWeights(0.99, 0.01)));
  CHECK(regime_hessian_form(Coupling(1, 1, 0), GroupWeights(0.5, 0.5)));
}

TEST_CASE("three formulations agree away from the boundary", "[model][property]") {
  std::mt19937_64 rng(13);
  int compared = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const Coupling c = oracles::random_coupling(rng);
    const GroupWeights w = oracles::random_weights(rng);
    const Regime r = classify_regime(c, w);
    if (std::abs(r.margin) <= kRegimeTolerance) continue;
    ++compared;
    const bool high = r.tag == RegimeTag::HighTemperature;
    // Independent reading of the matrix form: eigenvalues of J^-1 - diag(alpha).
    const auto l = test::inverse2(c.j1(), c.jbar(), c.j2());
    const double a = l[0] - w.alpha1();
    const double d = l[2] - w.alpha2();
    const double lo = 0.5 * (a + d) - std::sqrt(0.25 * (a - d) * (a - d) + l[1] * l[1]);
    REQUIRE(regime_matrix_form(c, w) == high);
    REQUIRE(regime_hessian_form(c, w) == high);
    if (std::abs(lo) > 1e-6) REQUIRE((lo > 0) == high);
  }
  CHECK(compared > 9900);
}
