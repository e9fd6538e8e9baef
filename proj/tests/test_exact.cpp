// Copyright 2026 The cwtg Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>
#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "cwtg/asymptotics.hpp"
#include "cwtg/errors.hpp"
#include "cwtg/exact.hpp"
#include "cwtg/oracles.hpp"

using namespace cwtg;
using Catch::Approx;

TEST_CASE("four-state hand enumeration", "[exact]") {
  const FiniteModel m = FiniteModel::balanced(1, 1);
  const Coupling c(1, 1, 0.5);
  const double e75 = std::exp(0.75), e25 = std::exp(0.25);
  const double z = 2 * e75 + 2 * e25;
  for (const auto& t : {exact_distribution(m, c), brute_force_distribution(m, c)}) {
    CHECK(t.prob(1, 1) == Approx(e75 / z).margin(1e-15));
    CHECK(t.prob(-1, -1) == Approx(e75 / z).margin(1e-15));
    CHECK(t.prob(1, -1) == Approx(e25 / z).margin(1e-15));
    CHECK(t.prob(-1, 1) == Approx(e25 / z).margin(1e-15));
    CHECK(t.log_z() == Approx(std::log(z)).margin(1e-14));
  }
  CHECK(exact_distribution(m, c).prob(1, 1) == Approx(0.3112296656009273).margin(1e-15));
  CHECK(exact_correlation(m, c, 1, 1) == Approx(std::tanh(0.25)).margin(1e-15));
  CHECK(exact_correlation(m, c, 1, 1) == Approx(0.2449186624037091).margin(1e-15));
  CHECK(exact_correlation(m, c, 1, 0) == 0.0);

  const auto weak = exact_distribution(m, Coupling(1e-12, 1e-12, 0));
  for (double p : weak.probs()) CHECK(p == Approx(0.25).margin(1e-12));
}

TEST_CASE("table invariants", "[exact][property]") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const Coupling c = oracles::random_coupling(rng);
    const std::int64_t n1 = 1 + static_cast<std::int64_t>(rng() % 40);
    const std::int64_t n2 = 1 + static_cast<std::int64_t>(rng() % 40);
    const auto t = exact_distribution(FiniteModel::balanced(n1, n2), c);
    double total = 0.0;
    for (double p : t.probs()) total += p;
    REQUIRE(total == Approx(1.0).margin(1e-12));
    for (std::int64_t s1 = -n1; s1 <= n1; s1 += 2) {
      for (std::int64_t s2 = -n2; s2 <= n2; s2 += 2) {
        REQUIRE(std::abs(t.prob(s1, s2) - t.prob(-s1, -s2)) <= 1e-14);
      }
    }
    // Off-parity lattice points carry no mass.
    REQUIRE(t.prob(-n1 + 1, -n2) == 0.0);
    REQUIRE(t.prob(n1 + 2, n2) == 0.0);
  }
}

TEST_CASE("size and domain errors", "[exact]") {
  const Coupling c(1, 1, 0.5);
  CHECK_THROWS_AS(exact_distribution(FiniteModel::balanced(6000, 5000), c), SizeError);
  CHECK_THROWS_AS(brute_force_distribution(FiniteModel::balanced(11, 10), c), SizeError);
  CHECK_THROWS_AS(exact_distribution(FiniteModel(10, 3, 3), c), InvalidParameter);
  CHECK_THROWS_AS(exact_correlation(FiniteModel::balanced(2, 2), c, 3, 0), DomainError);
}

TEST_CASE("exact equals brute force", "[exact][property]") {
  std::mt19937_64 rng(42);
  for (const std::int64_t n : {4, 8, 12, 14}) {
    for (int trial = 0; trial < 50; ++trial) {
      const Coupling c = oracles::random_coupling(rng);
      const std::int64_t n1 = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(n - 1));
      const FiniteModel m = FiniteModel::balanced(n1, n - n1);
      const auto a = exact_distribution(m, c);
      const auto b = brute_force_distribution(m, c);
      REQUIRE(a.probs().size() == b.probs().size());
      for (std::size_t i = 0; i < a.probs().size(); ++i) REQUIRE(std::abs(a.probs()[i] - b.probs()[i]) <= 1e-12);
      REQUIRE(std::abs(a.log_z() - b.log_z()) <= 1e-11 * std::max(1.0, std::abs(a.log_z())));
    }
  }
}

TEST_CASE("independent groups factorize", "[exact]") {
  const auto t = exact_distribution(FiniteModel::balanced(7, 5), Coupling(1.3, 0.7, 0));
  std::vector<double> row(static_cast<std::size_t>(t.rows()), 0.0), col(static_cast<std::size_t>(t.cols()), 0.0);
  for (std::int64_t i = 0; i < t.rows(); ++i) {
    for (std::int64_t j = 0; j < t.cols(); ++j) {
      row[static_cast<std::size_t>(i)] += t.at(i, j);
      col[static_cast<std::size_t>(j)] += t.at(i, j);
    }
  }
  for (std::int64_t i = 0; i < t.rows(); ++i) {
    for (std::int64_t j = 0; j < t.cols(); ++j) {
      CHECK(t.at(i, j) == Approx(row[static_cast<std::size_t>(i)] * col[static_cast<std::size_t>(j)]).margin(1e-12));
    }
  }
}

TEST_CASE("correlations match the spin-product oracle", "[exact][property]") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const Coupling c = oracles::random_coupling(rng);
    const std::int64_t n1 = 3 + static_cast<std::int64_t>(rng() % 7);
    const FiniteModel m = FiniteModel::balanced(n1, 12 - n1);
    const auto t = exact_distribution(m, c);
    for (int k = 0; k <= 3; ++k) {
      for (int l = 0; l <= 3; ++l) {
        const double v = exact_correlation(t, k, l);
        REQUIRE(std::abs(v - oracles::brute_force_correlation(m, c, k, l)) <= 1e-12);
        if ((k + l) % 2 == 1) REQUIRE(std::abs(v) <= 1e-14);
        if (k % 2 == 0 && l % 2 == 0 && k + l > 0) REQUIRE(v > 0.0);
      }
    }
  }
}

TEST_CASE("conditional spin product", "[exact]") {
  // k = n: the product of all spins is (-1)^(number of minus spins).
  CHECK(conditional_spin_product(4, 4, 0) == Approx(1.0));
  CHECK(conditional_spin_product(3, 3, 1) == Approx(-1.0));
  CHECK(conditional_spin_product(5, 0, 3) == 1.0);
  // One spin out of n with sum s has mean s/n.
  CHECK(conditional_spin_product(10, 1, 4) == Approx(0.4));
  // Two spins: (s^2 - n)/(n(n-1)).
  CHECK(conditional_spin_product(10, 2, 4) == Approx((16.0 - 10.0) / 90.0));
}

TEST_CASE("exact moment basics", "[exact]") {
  const auto t = exact_distribution(FiniteModel::balanced(30, 20), Coupling(1, 1, 0.5));
  CHECK(exact_moment(t, 0, 0, Scaling::per_spin()) == Approx(1.0).margin(1e-14));
  CHECK(std::abs(exact_moment(t, 1, 0, Scaling::per_spin())) <= 1e-15);
  const double per = exact_moment(t, 2, 0, Scaling::per_spin());
  const double sq = exact_moment(t, 2, 0, Scaling::sqrt_spin());
  CHECK(sq == Approx(per * 30).epsilon(1e-12));
  CHECK(exact_moment(t, 2, 0, Scaling::pow(0.75)) == Approx(per * std::pow(30, 0.5)).epsilon(1e-12));
}

TEST_CASE("streamed moments agree with the dense table", "[exact]") {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 10; ++trial) {
    const Coupling c = oracles::random_coupling(rng);
    const FiniteModel m = FiniteModel::balanced(40 + static_cast<std::int64_t>(rng() % 200), 300);
    const auto t = exact_distribution(m, c);
    for (const Scaling s : {Scaling::per_spin(), Scaling::sqrt_spin(), Scaling::pow(0.75)}) {
      const MomentGrid g = streamed_moments(m, c, 4, 3, s);
      CHECK(g.log_z == Approx(t.log_z()).epsilon(1e-12));
      for (int k = 0; k <= 4; ++k) {
        for (int l = 0; l <= 3; ++l) {
          const double dense = exact_moment(t, k, l, s);
          // Odd moments vanish; rounding scales with sqrt(E x^2k E y^2l).
          const double scale = std::sqrt(exact_moment(t, 2 * k, 0, s) * exact_moment(t, 0, 2 * l, s));
          REQUIRE(g(k, l) == Approx(dense).epsilon(1e-10).margin(1e-12 * std::max(1.0, scale)));
        }
      }
    }
  }
}

TEST_CASE("CLT error shrinks monotonically", "[exact][property]") {
  const Coupling c(1, 1, 0.5);
  const CltCovariance cov = clt_covariance(c, GroupWeights(0.5, 0.5));
  double prev20 = 1e300, prev11 = 1e300;
  for (const std::int64_t n : {250, 1000, 4000}) {
    const auto t = exact_distribution(FiniteModel::balanced(n / 2, n / 2), c);
    const double e20 = std::abs(exact_moment(t, 2, 0, Scaling::sqrt_spin()) - cov.c11);
    const double m11 = exact_moment(t, 1, 1, Scaling::sqrt_spin());
    const double e11 = std::abs(m11 - cov.c12);
    CHECK(e20 < prev20);
    CHECK(e11 < prev11);
    CHECK(m11 > 0.0);
    prev20 = e20;
    prev11 = e11;
    if (n == 4000) CHECK(m11 == Approx(cov.c12).epsilon(0.10));
  }
}

TEST_CASE("LLN second moment decays like 1/N", "[exact][property]") {
  const Coupling c(0.8, 1.2, 0.3);
  double fit = 0.0;
  std::vector<double> values;
  const std::vector<std::int64_t> sizes{250, 1000, 4000};
  for (const std::int64_t n : sizes) {
    const auto t = exact_distribution(FiniteModel::balanced(n * 2 / 5, n - n * 2 / 5), c);
    values.push_back(exact_moment(t, 2, 0, Scaling::per_spin()));
    fit = std::max(fit, values.back() * static_cast<double>(n));
  }
  for (std::size_t i = 0; i < sizes.size(); ++i) CHECK(values[i] <= fit / static_cast<double>(sizes[i]) * (1 + 1e-12));
  // The fitted constant stays bounded: it is close to C11 / alpha1.
  const CltCovariance cov = clt_covariance(c, GroupWeights(0.4, 0.6));
  CHECK(fit == Approx(cov.c11 / 0.4).epsilon(0.1));
}

TEST_CASE("low temperature bimodality", "[exact]") {
  const double atom = std::tanh(special_case_mstar(3, 1, 0.5) / std::sqrt(2.0));
  const auto t = exact_distribution(FiniteModel::balanced(1000, 1000), Coupling(3, 3, 1));
  double plus = 0.0, minus = 0.0;
  for (std::int64_t i = 0; i < t.rows(); ++i) {
    const double x = static_cast<double>(t.s1_at(i)) / 1000.0;
    for (std::int64_t j = 0; j < t.cols(); ++j) {
      const double y = static_cast<double>(t.s2_at(j)) / 1000.0;
      if (std::abs(x - atom) <= 0.1 && std::abs(y - atom) <= 0.1) plus += t.at(i, j);
      if (std::abs(x + atom) <= 0.1 && std::abs(y + atom) <= 0.1) minus += t.at(i, j);
    }
  }
  CHECK(plus + minus >= 0.95);
  CHECK(std::abs(plus - minus) <= 1e-12);
}

TEST_CASE("sampling", "[exact]") {
  const auto uniform = exact_distribution(FiniteModel::balanced(1, 1), Coupling(1e-12, 1e-12, 0));
  const std::size_t count = 100000;
  const auto draws = sample(uniform, 7, count);
  REQUIRE(draws.size() == count);
  std::map<std::pair<std::int64_t, std::int64_t>, int> freq;
  for (const auto& d : draws) ++freq[d];
  const double sd = std::sqrt(count * 0.25 * 0.75);
  for (const auto& [state, hits] : freq) CHECK(std::abs(hits - count * 0.25) <= 4 * sd);
  CHECK(freq.size() == 4);

  CHECK(sample(uniform, 99, 50) == sample(uniform, 99, 50));
  CHECK(sample(uniform, 99, 50) != sample(uniform, 100, 50));
  CHECK(sample_stream(uniform, 5, 0, 50) == sample(uniform, 5, 50));
  CHECK(sample_stream(uniform, 5, 1, 50) == sample(uniform, 5 ^ 1, 50));
}

TEST_CASE("sample covariance matches exact moments", "[exact]") {
  const auto t = exact_distribution(FiniteModel::balanced(1000, 1000), Coupling(1, 1, 0.5));
  const std::size_t count = 100000;
  const auto draws = sample(t, 2026, count);
  const double r = std::sqrt(1000.0);
  double s20 = 0, s11 = 0, s02 = 0;
  for (const auto& [a, b] : draws) {
    s20 += (a / r) * (a / r);
    s11 += (a / r) * (b / r);
    s02 += (b / r) * (b / r);
  }
  s20 /= count, s11 /= count, s02 /= count;
  const double m20 = exact_moment(t, 2, 0, Scaling::sqrt_spin());
  const double m11 = exact_moment(t, 1, 1, Scaling::sqrt_spin());
  const double m40 = exact_moment(t, 4, 0, Scaling::sqrt_spin());
  const double m22 = exact_moment(t, 2, 2, Scaling::sqrt_spin());
  CHECK(std::abs(s20 - m20) <= 5 * std::sqrt((m40 - m20 * m20) / count));
  CHECK(std::abs(s11 - m11) <= 5 * std::sqrt((m22 - m11 * m11) / count));
  CHECK(std::abs(s02 - m20) <= 5 * std::sqrt((m40 - m20 * m20) / count));
}

TEST_CASE("table CSV export", "[exact]") {
  const auto t = exact_distribution(FiniteModel::balanced(1, 2), Coupling(1, 1, 0.5));
  std::ostringstream os;
  write_table_csv(t, os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line.rfind("s1,s2,prob", 0) == 0);
  int rows = 0;
  double total = 0.0;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    ++rows;
    const auto last = line.rfind(',');
    const double p = std::stod(line.substr(last + 1));
    total += p;
  }
  CHECK(rows == 6);
  CHECK(total == Approx(1.0).margin(1e-15));
}
