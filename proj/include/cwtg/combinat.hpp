// Copyright 2026 The cwtg Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

/**
 * @file combinat.hpp
 * @brief Multi-indices, profile vectors and their exact counts.
 *
 * For a multi-index i = (i_1, ..., i_L) over {1, ..., N}, rho_l(i) is the
 * number of universe elements occurring exactly l times in i. The profile
 * vector (rho_1, ..., rho_L) always satisfies sum_l l * rho_l = L.
 *
 * The number of multi-indices with a given profile r is
 *
 *     w_L(r) = N! / (r_1! ... r_L! r_0!) * L! / (1!^r_1 2!^r_2 ... L!^r_L),
 *
 * with r_0 = N - sum_l r_l, evaluated here in arbitrary precision.
 */

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <vector>

namespace cwtg {

using BigInt = boost::multiprecision::cpp_int;

struct MultiIndex {
  std::vector<int> entries;  ///< each in [1, n]
  int n = 1;
};

struct ProfileVector {
  std::vector<int> counts;  ///< counts[l-1] = r_l, dense of length L
  int n = 1;

  int length() const noexcept { return static_cast<int>(counts.size()); }
  /// sum_l r_l, the number of distinct universe elements used.
  int distinct() const noexcept;
  /// sum_l l * r_l.
  int weighted_sum() const noexcept;

  friend bool operator==(const ProfileVector&, const ProfileVector&) = default;
  friend auto operator<=>(const ProfileVector&, const ProfileVector&) = default;
};

enum class ProfileFilter {
  FirstCoordK,     ///< r_1 == k
  NoHighRepeats,   ///< r_l == 0 for all l >= 3
  SomeHighRepeat,  ///< r_l > 0 for some l >= 3
};

ProfileVector profile_of(const MultiIndex& index);

/// Exact count of multi-indices in {1..N}^L with this profile.
BigInt multiplicity(const ProfileVector& profile);

/// All profiles with sum l*r_l = L and sum r_l <= N, r_1 descending.
std::vector<ProfileVector> enumerate_profiles(int length, int n);

std::vector<ProfileVector> filter_profiles(const std::vector<ProfileVector>& profiles, ProfileFilter which,
                                           int k = 0);

}  // namespace cwtg
