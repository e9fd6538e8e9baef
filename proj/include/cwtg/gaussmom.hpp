// Copyright 2026 The cwtg Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

/**
 * @file gaussmom.hpp
 * @brief Moments m_{K,L} = E(Z1^K Z2^L) of a centred bivariate Gaussian.
 *
 * Three independent routes:
 *  - moment_pairings: sum over pair partitions (Isserlis/Wick), brute force;
 *  - moment_recursive: the two-step recursions
 *        m_{K,L+2} = K m_{1,1} m_{K-1,L+1} + (L+1) m_{0,2} m_{K,L}
 *        m_{K+2,L} = (K+1) m_{2,0} m_{K,L} + L m_{1,1} m_{K+1,L-1}
 *    from m_{0,0} = 1 and m_{1,0} = m_{0,1} = 0;
 *  - moment_closed: the single finite sum over the number of mixed pairs.
 */

#pragma once

namespace cwtg {

/// Largest K + L accepted by moment_pairings; (K+L-1)!! partitions are visited.
inline constexpr int kMaxPairingOrder = 16;

class Covariance2 {
 public:
  /// Throws InvalidParameter unless s11, s22 >= 0 and s11*s22 - s12^2 >= -1e-12.
  Covariance2(double s11, double s22, double s12);

  double s11() const noexcept { return s11_; }
  double s22() const noexcept { return s22_; }
  double s12() const noexcept { return s12_; }

 private:
  double s11_;
  double s22_;
  double s12_;
};

double moment_pairings(int k, int l, const Covariance2& cov);
double moment_recursive(int k, int l, const Covariance2& cov);
double moment_closed(int k, int l, const Covariance2& cov);

/// (n)!! with (-1)!! = 0!! = 1.
double double_factorial(int n);

}  // namespace cwtg
