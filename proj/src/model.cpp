// Copyright 2026 The cwtg Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "cwtg/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "cwtg/errors.hpp"

namespace cwtg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool finite(double x) { return std::isfinite(x); }

}  // namespace

Coupling::Coupling(double j1, double j2, double jbar) : j1_(j1), j2_(j2), jbar_(jbar) {
  if (!finite(j1) || !finite(j2) || !finite(jbar)) {
    throw InvalidParameter("coupling entries must be finite");
  }
  if (!(j1 > 0.0)) throw InvalidParameter("coupling invariant violated: J1 > 0");
  if (!(j2 > 0.0)) throw InvalidParameter("coupling invariant violated: J2 > 0");
  if (!(jbar >= 0.0)) throw InvalidParameter("coupling invariant violated: Jbar >= 0");
  if (!(delta() > 0.0)) {
    throw InvalidParameter("coupling invariant violated: Delta = J1*J2 - Jbar^2 > 0 (got " +
                           std::to_string(delta()) + ")");
  }
}

GroupWeights::GroupWeights(double alpha1, double alpha2) : alpha1_(alpha1), alpha2_(alpha2) {
  if (!(alpha1 >= 0.0 && alpha1 <= 1.0)) throw InvalidParameter("weight invariant violated: 0 <= alpha1 <= 1");
  if (!(alpha2 >= 0.0 && alpha2 <= 1.0)) throw InvalidParameter("weight invariant violated: 0 <= alpha2 <= 1");
  // Allow a rounding ulp so that N1/N + N2/N with N1 + N2 = N passes.
  if (alpha1 + alpha2 > 1.0 + 1e-15) throw InvalidParameter("weight invariant violated: alpha1 + alpha2 <= 1");
}

FiniteModel::FiniteModel(std::int64_t n, std::int64_t n1, std::int64_t n2) : n_(n), n1_(n1), n2_(n2) {
  if (n < 1) throw InvalidParameter("model invariant violated: N >= 1");
  if (n1 < 1 || n2 < 1) throw InvalidParameter("model invariant violated: N1 >= 1 and N2 >= 1");
  if (n1 + n2 > n) throw InvalidParameter("model invariant violated: N1 + N2 <= N");
}

GroupWeights FiniteModel::weights() const {
  const double a1 = static_cast<double>(n1_) / static_cast<double>(n_);
  const double a2 = static_cast<double>(n2_) / static_cast<double>(n_);
  return {a1, a2};
}

std::string_view to_string(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::HighTemperature:
      return "HighTemperature";
    case RegimeTag::Boundary:
      return "Boundary";
    case RegimeTag::LowTemperature:
      return "LowTemperature";
  }
  return "?";
}

double gibbs_log_weight(const Coupling& c, std::int64_t n, std::int64_t s1, std::int64_t s2) {
  if (n < 1) throw DomainError("gibbs_log_weight: N must be positive");
  if (s1 > n || s1 < -n || s2 > n || s2 < -n) {
    throw DomainError("gibbs_log_weight: magnetisation exceeds N");
  }
  const double x = static_cast<double>(s1);
  const double y = static_cast<double>(s2);
  return (c.j1() * x * x + c.j2() * y * y + 2.0 * c.jbar() * x * y) / (2.0 * static_cast<double>(n));
}

InverseCoupling inverse_coupling(const Coupling& c) {
  const double d = c.delta();
  if (!(d > 0.0)) throw SingularityError("inverse_coupling: det J <= 0");
  return {c.j2() / d, c.j1() / d, c.jbar() / d};
}

Coupling coupling_from_inverse(const InverseCoupling& inv) {
  const double d = inv.determinant();
  if (!(d > 0.0)) throw SingularityError("coupling_from_inverse: det L <= 0");
  return {inv.l2 / d, inv.l1 / d, inv.lbar / d};
}

Regime classify_regime(const Coupling& c, const GroupWeights& w) {
  Regime r;
  r.slack1 = w.alpha1() > 0.0 ? 1.0 / w.alpha1() - c.j1() : kInf;
  r.slack2 = w.alpha2() > 0.0 ? 1.0 / w.alpha2() - c.j2() : kInf;
  if (std::isinf(r.slack1) && std::isinf(r.slack2)) {
    r.slack3 = kInf;
  } else if (std::isinf(r.slack1)) {
    r.slack3 = r.slack2 > 0.0 ? kInf : r.slack2;
  } else if (std::isinf(r.slack2)) {
    r.slack3 = r.slack1 > 0.0 ? kInf : r.slack1;
  } else {
    r.slack3 = r.slack1 * r.slack2 - c.jbar() * c.jbar();
  }
  r.margin = std::min({r.slack1, r.slack2, r.slack3});
  if (std::abs(r.margin) <= kRegimeTolerance) {
    r.tag = RegimeTag::Boundary;
  } else if (r.margin > 0.0) {
    r.tag = RegimeTag::HighTemperature;
  } else {
    r.tag = RegimeTag::LowTemperature;
  }
  return r;
}

bool regime_matrix_form(const Coupling& c, const GroupWeights& w) {
  // Invert J as a generic 2x2 matrix, then subtract diag(alpha).
  const std::array<double, 4> j{c.j1(), c.jbar(), c.jbar(), c.j2()};
  const double det = j[0] * j[3] - j[1] * j[2];
  if (!(det > 0.0)) return false;
  std::array<double, 4> m{j[3] / det, -j[1] / det, -j[2] / det, j[0] / det};
  m[0] -= w.alpha1();
  m[3] -= w.alpha2();
  const double minor1 = m[0];
  const double minor2 = m[0] * m[3] - m[1] * m[2];
  return minor1 > kRegimeTolerance && minor2 > kRegimeTolerance;
}

bool regime_hessian_form(const Coupling& c, const GroupWeights& w) {
  const InverseCoupling inv = inverse_coupling(c);
  const double d1 = inv.l1 - w.alpha1();
  const double d2 = inv.l2 - w.alpha2();
  return d1 > kRegimeTolerance && d1 * d2 - inv.lbar * inv.lbar > kRegimeTolerance;
}

}  // namespace cwtg
