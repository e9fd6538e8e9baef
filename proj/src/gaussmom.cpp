// Copyright 2026 The cwtg Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "cwtg/gaussmom.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "cwtg/errors.hpp"

namespace cwtg {

namespace {

void check_orders(int k, int l) {
  if (k < 0 || l < 0) throw InvalidParameter("moment orders must be non-negative");
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Sum over perfect matchings of the first `count` labels in `labels`.
double sum_pairings(std::array<int, kMaxPairingOrder>& labels, int count, const std::array<double, 3>& cov) {
  if (count == 0) return 1.0;
  const int first = labels[static_cast<std::size_t>(count - 1)];
  double total = 0.0;
  for (int i = 0; i < count - 1; ++i) {
    const int other = labels[static_cast<std::size_t>(i)];
    const double c = cov[static_cast<std::size_t>(first + other)];
    if (c == 0.0) continue;
    // Remove position i by swapping with the last free slot, recurse, restore.
    std::swap(labels[static_cast<std::size_t>(i)], labels[static_cast<std::size_t>(count - 2)]);
    total += c * sum_pairings(labels, count - 2, cov);
    std::swap(labels[static_cast<std::size_t>(i)], labels[static_cast<std::size_t>(count - 2)]);
  }
  return total;
}

}  // namespace

Covariance2::Covariance2(double s11, double s22, double s12) : s11_(s11), s22_(s22), s12_(s12) {
  if (!std::isfinite(s11) || !std::isfinite(s22) || !std::isfinite(s12)) {
    throw InvalidParameter("covariance entries must be finite");
  }
  if (s11 < 0.0 || s22 < 0.0) throw InvalidParameter("covariance invariant violated: variances >= 0");
  if (s11 * s22 - s12 * s12 < -1e-12) throw InvalidParameter("covariance invariant violated: not PSD");
}

double double_factorial(int n) {
  double f = 1.0;
  for (int i = n; i > 1; i -= 2) f *= i;
  return f;
}

double moment_pairings(int k, int l, const Covariance2& cov) {
  check_orders(k, l);
  if (k + l > kMaxPairingOrder) {
    throw ComplexityError("moment_pairings: K + L = " + std::to_string(k + l) + " exceeds " +
                          std::to_string(kMaxPairingOrder));
  }
  if ((k + l) % 2 != 0) return 0.0;
  // Label 0 stands for Z1 and 1 for Z2; cov indexed by label sum.
  std::array<int, kMaxPairingOrder> labels{};
  for (int i = 0; i < k + l; ++i) labels[static_cast<std::size_t>(i)] = i < k ? 0 : 1;
  const std::array<double, 3> c{cov.s11(), cov.s12(), cov.s22()};
  return sum_pairings(labels, k + l, c);
}

double moment_recursive(int k, int l, const Covariance2& cov) {
  check_orders(k, l);
  const int order = k + l;
  const int dim = order + 1;
  std::vector<double> m(static_cast<std::size_t>(dim * dim), 0.0);
  auto at = [&](int a, int b) -> double& { return m[static_cast<std::size_t>(a * dim + b)]; };
  auto get = [&](int a, int b) { return (a < 0 || b < 0) ? 0.0 : at(a, b); };
  const double m20 = cov.s11();
  const double m02 = cov.s22();
  const double m11 = cov.s12();
  at(0, 0) = 1.0;
  for (int n = 1; n <= order; ++n) {
    for (int a = 0; a <= n; ++a) {
      const int b = n - a;
      double v = 0.0;
      if (a >= 2) {
        v = (a - 1) * m20 * get(a - 2, b) + b * m11 * get(a - 1, b - 1);
      } else if (b >= 2) {
        v = a * m11 * get(a - 1, b - 1) + (b - 1) * m02 * get(a, b - 2);
      } else if (a == 1 && b == 1) {
        v = m11;
      }
      at(a, b) = v;
    }
  }
  return at(k, l);
}

double moment_closed(int k, int l, const Covariance2& cov) {
  check_orders(k, l);
  if ((k + l) % 2 != 0) return 0.0;
  const double s11 = cov.s11();
  const double s22 = cov.s22();
  const double s12 = cov.s12();
  // Each summand is written as s11^{a} s22^{b} s12^{c} with integer powers so
  // that s12 = 0 and s11 = 0 need no special casing (0^0 = 1).
  const double kl = factorial(k) * factorial(l);
  double total = 0.0;
  if (k % 2 == 0) {
    const int hk = k / 2;
    const int hl = l / 2;
    const double scale = kl / std::ldexp(1.0, hk + hl);
    for (int r = 0; r <= std::min(hk, hl); ++r) {
      const double coeff = scale / (factorial(2 * r) * factorial(hk - r) * factorial(hl - r));
      total += coeff * std::pow(4.0, r) * std::pow(s11, hk - r) * std::pow(s22, hl - r) * std::pow(s12, 2 * r);
    }
  } else {
    const int hk = (k - 1) / 2;
    const int hl = (l - 1) / 2;
    const double scale = kl / std::ldexp(1.0, (k + l) / 2 - 1);
    for (int r = 0; r <= std::min(hk, hl); ++r) {
      const double coeff = scale / (factorial(2 * r + 1) * factorial(hk - r) * factorial(hl - r));
      total += coeff * std::pow(4.0, r) * std::pow(s11, hk - r) * std::pow(s22, hl - r) * std::pow(s12, 2 * r + 1);
    }
  }
  return total;
}

}  // namespace cwtg
