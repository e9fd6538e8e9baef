// Copyright 2026 The cwtg Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

/**
 * @file oracles.hpp
 * @brief Independent reference computations and random parameter draws used
 * by the invariant suite. Nothing here calls into the routines it checks.
 */

#pragma once

#include <cstdint>
#include <random>

#include "cwtg/model.hpp"

namespace cwtg::oracles {

/// E(X_1..X_K Y_1..Y_L) by summing over all 2^N spin configurations. N <= 20.
double brute_force_correlation(const FiniteModel& model, const Coupling& coupling, int k, int l);

/// Random positive-definite coupling with J1, J2 in [0.1, 3] and Jbar < 0.95 sqrt(J1 J2).
Coupling random_coupling(std::mt19937_64& rng);

/// Random weights with alpha1, alpha2 > 0 and alpha1 + alpha2 <= 1.
GroupWeights random_weights(std::mt19937_64& rng);

struct Parameters {
  Coupling coupling;
  GroupWeights weights;
};

/// Rejection-samples parameters whose regime margin exceeds min_margin.
Parameters random_high_temperature(std::mt19937_64& rng, double min_margin = 1e-3);

/// Uniform double in [lo, hi) from the top 53 bits of one engine output.
double uniform(std::mt19937_64& rng, double lo, double hi);

}  // namespace cwtg::oracles
