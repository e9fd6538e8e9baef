// Copyright 2026 The cwtg Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

/**
 * @file model.hpp
 * @brief Parameter types of the two-group Curie-Weiss model.
 *
 * The coupling matrix
 *
 *     J = [[J1, Jbar], [Jbar, J2]]
 *
 * is symmetric positive definite. The inverse temperature is absorbed into J,
 * so the Gibbs weight of a configuration with group magnetisations (s1, s2)
 * among N spins is exp(s'Js / 2N).
 *
 * The high-temperature regime is characterised in three equivalent ways:
 * the three scalar inequalities on J, positive definiteness of
 * J^{-1} - diag(alpha), and positivity of the Hessian of the landscape at
 * the origin.
 */

#pragma once

#include <cstdint>
#include <string_view>

namespace cwtg {

/// Slack below which a regime inequality counts as an equality.
inline constexpr double kRegimeTolerance = 1e-9;

class Coupling {
 public:
  /// Throws InvalidParameter unless J1 > 0, J2 > 0, Jbar >= 0 and det J > 0.
  Coupling(double j1, double j2, double jbar);

  double j1() const noexcept { return j1_; }
  double j2() const noexcept { return j2_; }
  double jbar() const noexcept { return jbar_; }
  /// det J = J1*J2 - Jbar^2.
  double delta() const noexcept { return j1_ * j2_ - jbar_ * jbar_; }

  friend bool operator==(const Coupling&, const Coupling&) = default;

 private:
  double j1_;
  double j2_;
  double jbar_;
};

/// Entries of J^{-1} = [[L1, -Lbar], [-Lbar, L2]].
struct InverseCoupling {
  double l1 = 0.0;
  double l2 = 0.0;
  double lbar = 0.0;

  double determinant() const noexcept { return l1 * l2 - lbar * lbar; }
};

class GroupWeights {
 public:
  /// Throws InvalidParameter unless both fractions are in [0,1] and sum to at most 1.
  GroupWeights(double alpha1, double alpha2);

  double alpha1() const noexcept { return alpha1_; }
  double alpha2() const noexcept { return alpha2_; }

  friend bool operator==(const GroupWeights&, const GroupWeights&) = default;

 private:
  double alpha1_;
  double alpha2_;
};

/// Sizes of the population and of the two observed groups.
class FiniteModel {
 public:
  FiniteModel(std::int64_t n, std::int64_t n1, std::int64_t n2);

  /// Convenience for the exact engine: N = N1 + N2.
  static FiniteModel balanced(std::int64_t n1, std::int64_t n2) { return {n1 + n2, n1, n2}; }

  std::int64_t n() const noexcept { return n_; }
  std::int64_t n1() const noexcept { return n1_; }
  std::int64_t n2() const noexcept { return n2_; }
  bool covers_population() const noexcept { return n1_ + n2_ == n_; }
  /// Group fractions N1/N, N2/N.
  GroupWeights weights() const;

  friend bool operator==(const FiniteModel&, const FiniteModel&) = default;

 private:
  std::int64_t n_;
  std::int64_t n1_;
  std::int64_t n2_;
};

enum class RegimeTag { HighTemperature, Boundary, LowTemperature };

std::string_view to_string(RegimeTag tag);

struct Regime {
  RegimeTag tag = RegimeTag::Boundary;
  /// Smallest of the three slacks (+inf when all are vacuous).
  double margin = 0.0;
  double slack1 = 0.0;
  double slack2 = 0.0;
  double slack3 = 0.0;
};

/// Log Gibbs weight s'Js / (2N) of a configuration with magnetisations (s1, s2).
double gibbs_log_weight(const Coupling& coupling, std::int64_t n, std::int64_t s1, std::int64_t s2);

InverseCoupling inverse_coupling(const Coupling& coupling);

/// Inverts (L1, L2, Lbar) back to a coupling. Throws SingularityError if L is singular.
Coupling coupling_from_inverse(const InverseCoupling& inv);

/**
 * Classifies (J, alpha) using
 *
 *     J1 < 1/alpha1,  J2 < 1/alpha2,  Jbar^2 < (1/alpha1 - J1)(1/alpha2 - J2).
 *
 * A zero weight makes its reciprocal condition vacuous (+inf slack); the third
 * condition then reduces to the other group's condition.
 */
Regime classify_regime(const Coupling& coupling, const GroupWeights& weights);

/// True iff J^{-1} - diag(alpha1, alpha2) is positive definite (leading minors > tolerance).
bool regime_matrix_form(const Coupling& coupling, const GroupWeights& weights);

/// True iff L1 > alpha1 and (L1 - alpha1)(L2 - alpha2) > Lbar^2.
bool regime_hessian_form(const Coupling& coupling, const GroupWeights& weights);

}  // namespace cwtg
