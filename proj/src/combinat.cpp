// Copyright 2026 The cwtg Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "cwtg/combinat.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "cwtg/errors.hpp"

namespace cwtg {

namespace {

BigInt factorial(int n) {
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

BigInt power(const BigInt& base, int exponent) {
  BigInt p = 1;
  for (int i = 0; i < exponent; ++i) p *= base;
  return p;
}

}  // namespace

int ProfileVector::distinct() const noexcept { return std::accumulate(counts.begin(), counts.end(), 0); }

int ProfileVector::weighted_sum() const noexcept {
  int s = 0;
  for (int l = 1; l <= length(); ++l) s += l * counts[l - 1];
  return s;
}

ProfileVector profile_of(const MultiIndex& index) {
  const int length = static_cast<int>(index.entries.size());
  if (length < 1) throw InvalidParameter("profile_of: empty multi-index");
  if (index.n < 1) throw InvalidParameter("profile_of: universe size must be positive");
  std::vector<int> multiplicity_of(static_cast<std::size_t>(index.n) + 1, 0);
  for (int e : index.entries) {
    if (e < 1 || e > index.n) throw InvalidParameter("profile_of: entry outside [1, N]");
    ++multiplicity_of[static_cast<std::size_t>(e)];
  }
  ProfileVector p{std::vector<int>(static_cast<std::size_t>(length), 0), index.n};
  for (int v : multiplicity_of) {
    if (v > 0) ++p.counts[static_cast<std::size_t>(v - 1)];
  }
  return p;
}

BigInt multiplicity(const ProfileVector& profile) {
  const int length = profile.length();
  if (length < 1 || profile.n < 1) throw InvalidParameter("multiplicity: empty profile");
  if (profile.weighted_sum() != length) throw InvalidParameter("multiplicity: sum l*r_l != L");
  const int r0 = profile.n - profile.distinct();
  if (r0 < 0) throw InvalidParameter("multiplicity: more distinct indices than N");

  // Choice of which universe elements take each multiplicity class ...
  BigInt denom = factorial(r0);
  for (int r : profile.counts) denom *= factorial(r);
  BigInt count = factorial(profile.n) / denom;
  // ... times the arrangements of the L positions among them.
  BigInt block = 1;
  for (int l = 1; l <= length; ++l) block *= power(factorial(l), profile.counts[l - 1]);
  count *= factorial(length) / block;
  return count;
}

std::vector<ProfileVector> enumerate_profiles(int length, int n) {
  if (length < 1 || n < 1) throw InvalidParameter("enumerate_profiles: L and N must be positive");
  std::vector<ProfileVector> out;
  std::vector<int> counts(static_cast<std::size_t>(length), 0);
  // Choose r_l for l = 1..L in turn, tracking remaining weight and distinct budget.
  std::function<void(int, int, int)> rec = [&](int l, int remaining, int budget) {
    if (l > length) {
      if (remaining == 0) out.push_back({counts, n});
      return;
    }
    for (int r = remaining / l; r >= 0; --r) {
      if (r > budget) continue;
      counts[static_cast<std::size_t>(l - 1)] = r;
      rec(l + 1, remaining - r * l, budget - r);
    }
    counts[static_cast<std::size_t>(l - 1)] = 0;
  };
  rec(1, length, n);
  return out;
}

std::vector<ProfileVector> filter_profiles(const std::vector<ProfileVector>& profiles, ProfileFilter which, int k) {
  std::vector<ProfileVector> out;
  for (const auto& p : profiles) {
    bool high = false;
    for (int l = 3; l <= p.length(); ++l) high = high || p.counts[static_cast<std::size_t>(l - 1)] > 0;
    bool keep = false;
    switch (which) {
      case ProfileFilter::FirstCoordK:
        keep = p.counts.front() == k;
        break;
      case ProfileFilter::NoHighRepeats:
        keep = !high;
        break;
      case ProfileFilter::SomeHighRepeat:
        keep = high;
        break;
    }
    if (keep) out.push_back(p);
  }
  return out;
}

}  // namespace cwtg
