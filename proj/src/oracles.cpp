// Copyright 2026 The cwtg Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "cwtg/oracles.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "cwtg/errors.hpp"

namespace cwtg::oracles {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

double brute_force_correlation(const FiniteModel& model, const Coupling& coupling, int k, int l) {
  const std::int64_t n = model.n();
  const std::int64_t n1 = model.n1();
  if (!model.covers_population() || n > 20) throw SizeError("brute_force_correlation: need N1 + N2 = N <= 20");
  if (k < 0 || l < 0 || k > n1 || l > model.n2()) throw DomainError("brute_force_correlation: bad orders");
  const double nn = static_cast<double>(n);
  // Largest possible exponent, for a stable shift.
  const double shift = (coupling.j1() * n1 * n1 + coupling.j2() * (n - n1) * (n - n1) +
                        2.0 * coupling.jbar() * n1 * (n - n1)) / (2.0 * nn);
  double z = 0.0;
  double acc = 0.0;
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << n); ++c) {
    double x = 0.0;
    double y = 0.0;
    int product = 1;
    for (std::int64_t b = 0; b < n; ++b) {
      const int spin = (c >> b) & 1U ? 1 : -1;
      if (b < n1) {
        x += spin;
        if (b < k) product *= spin;
      } else {
        y += spin;
        if (b - n1 < l) product *= spin;
      }
    }
    const double w =
        std::exp((coupling.j1() * x * x + coupling.j2() * y * y + 2.0 * coupling.jbar() * x * y) / (2.0 * nn) - shift);
    z += w;
    acc += product * w;
  }
  return acc / z;
}

Coupling random_coupling(std::mt19937_64& rng) {
  const double j1 = uniform(rng, 0.1, 3.0);
  const double j2 = uniform(rng, 0.1, 3.0);
  const double jbar = uniform(rng, 0.0, 0.95 * std::sqrt(j1 * j2));
  return {j1, j2, jbar};
}

GroupWeights random_weights(std::mt19937_64& rng) {
  const double a1 = uniform(rng, 0.02, 0.98);
  const double a2 = uniform(rng, 0.01, 1.0 - a1);
  return {a1, a2};
}

Parameters random_high_temperature(std::mt19937_64& rng, double min_margin) {
  for (;;) {
    const Coupling c = random_coupling(rng);
    const GroupWeights w = random_weights(rng);
    const Regime r = classify_regime(c, w);
    if (r.tag == RegimeTag::HighTemperature && r.margin > min_margin) return {c, w};
  }
}

}  // namespace cwtg::oracles
