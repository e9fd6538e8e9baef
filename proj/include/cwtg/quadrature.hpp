// Copyright 2026 The cwtg Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <span>

namespace cwtg {

struct Integral {
  double value = 0.0;
  double error = 0.0;  ///< estimated absolute error
};

/// Globally adaptive Gauss-Kronrod (7/15) on [a, b], starting from panels
/// split at `breaks`. Throws QuadratureError if the summed error estimate
/// cannot be brought under abs_tol.
Integral integrate_1d(const std::function<double(double)>& f, double a, double b, double abs_tol,
                      std::span<const double> breaks = {});

/// Iterated adaptive Gauss-Kronrod over [a1,b1] x [a2,b2]; the inner
/// integral gets a quarter of the absolute budget per unit of outer length.
Integral integrate_2d(const std::function<double(double, double)>& f, double a1, double b1, double a2, double b2,
                      double abs_tol, std::span<const double> breaks = {});

}  // namespace cwtg
