// Copyright 2026 The cwtg Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

/**
 * @file exact.hpp
 * @brief Exact finite-N distribution of the magnetisation pair (S1, S2).
 *
 * The Gibbs weight depends on a configuration only through (S1, S2), so
 *
 *     P(S1 = s1, S2 = s2) = binom(N1, (N1+s1)/2) binom(N2, (N2+s2)/2) exp(s'Js/2N) / Z
 *
 * on the lattice s_nu in {-N_nu, -N_nu + 2, ..., N_nu}. Tables are dense and
 * row-major: entry (i, j) holds s1 = -N1 + 2i, s2 = -N2 + 2j.
 *
 * Sampling uses std::mt19937_64 (the 64-bit Mersenne Twister whose output
 * sequence the C++ standard fixes), seeded with `seed ^ stream`. Each draw
 * takes one 64-bit output x and forms u = (x >> 11) * 2^-53 in [0, 1); the
 * sample is the first row-major entry whose cumulative probability exceeds u.
 */

#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "cwtg/model.hpp"

namespace cwtg {

/// Largest N accepted by exact_distribution.
inline constexpr std::int64_t kMaxExactN = 10000;
/// Largest N accepted by brute_force_distribution.
inline constexpr std::int64_t kMaxBruteForceN = 20;

/// Scaling exponent p in E((S1 / N1^p)^K (S2 / N2^p)^L).
struct Scaling {
  double p = 1.0;

  static constexpr Scaling per_spin() { return {1.0}; }
  static constexpr Scaling sqrt_spin() { return {0.5}; }
  static constexpr Scaling pow(double exponent) { return {exponent}; }
};

class MagnetizationTable {
 public:
  MagnetizationTable(FiniteModel model, Coupling coupling, double log_z, std::vector<double> probs);

  const FiniteModel& model() const noexcept { return model_; }
  const Coupling& coupling() const noexcept { return coupling_; }
  /// log of sum over all 2^N configurations of exp(s'Js / 2N).
  double log_z() const noexcept { return log_z_; }

  std::int64_t rows() const noexcept { return model_.n1() + 1; }
  std::int64_t cols() const noexcept { return model_.n2() + 1; }
  std::int64_t s1_at(std::int64_t i) const noexcept { return -model_.n1() + 2 * i; }
  std::int64_t s2_at(std::int64_t j) const noexcept { return -model_.n2() + 2 * j; }

  double at(std::int64_t i, std::int64_t j) const noexcept {
    return probs_[static_cast<std::size_t>(i * cols() + j)];
  }
  /// Probability of (s1, s2); zero off the parity lattice or out of range.
  double prob(std::int64_t s1, std::int64_t s2) const noexcept;

  const std::vector<double>& probs() const noexcept { return probs_; }

 private:
  FiniteModel model_;
  Coupling coupling_;
  double log_z_;
  std::vector<double> probs_;
};

/// Requires N1 + N2 = N and N <= kMaxExactN.
MagnetizationTable exact_distribution(const FiniteModel& model, const Coupling& coupling);

/// Enumerates all 2^N configurations. Requires N1 + N2 = N and N <= kMaxBruteForceN.
MagnetizationTable brute_force_distribution(const FiniteModel& model, const Coupling& coupling);

double exact_moment(const MagnetizationTable& table, int k, int l, Scaling scaling);

/// E(X_1 ... X_K Y_1 ... Y_L) for K distinct group-1 and L distinct group-2 spins.
double exact_correlation(const FiniteModel& model, const Coupling& coupling, int k, int l);
double exact_correlation(const MagnetizationTable& table, int k, int l);

/**
 * Expectation of a product of k distinct spins among n exchangeable +-1 spins
 * whose sum is s:
 *
 *     sum_a (-1)^{k-a} binom(u, a) binom(n-u, k-a) / binom(n, k),  u = (n+s)/2.
 */
double conditional_spin_product(std::int64_t n, int k, std::int64_t s);

/// Draws for stream 0; see sample_stream.
std::vector<std::pair<std::int64_t, std::int64_t>> sample(const MagnetizationTable& table, std::uint64_t seed,
                                                          std::size_t count);

/// Independent stream `stream` seeded with seed ^ stream.
std::vector<std::pair<std::int64_t, std::int64_t>> sample_stream(const MagnetizationTable& table,
                                                                 std::uint64_t seed, std::uint64_t stream,
                                                                 std::size_t count);

/// Writes `s1,s2,prob` rows (17 significant digits), skipping nothing.
void write_table_csv(const MagnetizationTable& table, std::ostream& out);

/**
 * Exact moments E((S1/N1^p)^K (S2/N2^p)^L) for all K <= max_k, L <= max_l,
 * computed by sweeping the lattice without materialising the table. Terms
 * more than 100 nats below the largest weight are dropped (relative mass
 * below e^-100 per entry). Intended for N beyond kMaxExactN, e.g. one group
 * of order sqrt(N).
 */
struct MomentGrid {
  int max_k = 0;
  int max_l = 0;
  double log_z = 0.0;
  std::vector<double> values;  ///< row-major (K, L)

  double operator()(int k, int l) const { return values[static_cast<std::size_t>(k * (max_l + 1) + l)]; }
};

MomentGrid streamed_moments(const FiniteModel& model, const Coupling& coupling, int max_k, int max_l,
                            Scaling scaling);

}  // namespace cwtg
