// Copyright 2026 The cwtg Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

/**
 * @file asymptotics.hpp
 * @brief Large-N predictions: the landscape F, its stationary points, the
 * limiting covariance of (S1/sqrt(N1), S2/sqrt(N2)), asymptotic correlations
 * and moments, Laplace-type quadrature at finite N, and the mean-field
 * magnetisation solvers.
 *
 * With (L1, L2, Lbar) the entries of J^{-1},
 *
 *     F(y1, y2) = L1 y1^2/2 + L2 y2^2/2 - Lbar y1 y2 - a1 ln cosh y1 - a2 ln cosh y2,
 *
 * and in the variables t = tanh y, with l(t) = ln((1+t)/(1-t)),
 *
 *     F(t1, t2) = (L1 l(t1)^2 - 2 Lbar l(t1) l(t2) + L2 l(t2)^2) / 4
 *                 + a1 ln(1 - t1^2) + a2 ln(1 - t2^2)  =  2 F(y1, y2).
 *
 * Its Hessian at the origin is H = [[2(L1-a1), -2Lbar], [-2Lbar, 2(L2-a2)]]
 * and Sigma = H^{-1} is the covariance whose Gaussian moments give the
 * leading-order correlations E(X_1..X_K Y_1..Y_L) ~ (2/N)^{(K+L)/2} m_{K,L}(Sigma).
 */

#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "cwtg/gaussmom.hpp"
#include "cwtg/model.hpp"

namespace cwtg {

struct Landscape {
  InverseCoupling inv;
  GroupWeights weights{0.0, 0.0};

  static Landscape from(const Coupling& coupling, const GroupWeights& weights) {
    return {inverse_coupling(coupling), weights};
  }
};

/// Symmetric 2x2 matrix [[a, b], [b, c]].
struct Sym2 {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  double det() const noexcept { return a * c - b * b; }
  std::array<double, 2> eigenvalues() const noexcept;  ///< ascending
};

struct CltCovariance {
  double c11 = 0.0;
  double c22 = 0.0;
  double c12 = 0.0;

  Covariance2 as_covariance() const { return {c11, c22, c12}; }
};

double eval_F_y(const Landscape& ls, double y1, double y2);
std::array<double, 2> eval_grad_F_y(const Landscape& ls, double y1, double y2);
Sym2 eval_hessian_F_y(const Landscape& ls, double y1, double y2);

/// Throws DomainError unless |t1| < 1 and |t2| < 1.
double eval_F_t(const Landscape& ls, double t1, double t2);

/// Hessian of F(t) at the origin.
Sym2 hessian_origin(const Landscape& ls);

/// H^{-1}; throws SingularityError unless H is positive definite.
Covariance2 sigma(const Landscape& ls);

/// Limiting covariance in closed form; throws RegimeError outside high temperature.
CltCovariance clt_covariance(const Coupling& coupling, const GroupWeights& weights);

/// The same covariance assembled from Sigma: (1 + 2 a1 s11, 1 + 2 a2 s22, 2 sqrt(a1 a2) s12).
CltCovariance clt_covariance_from_sigma(const Landscape& ls);

/// (2/N)^{(K+L)/2} m_{K,L}(Sigma); zero for K + L odd.
double asymptotic_correlation(const Landscape& ls, int k, int l, std::int64_t n);

/// Limit of E(S1^K S2^L / (N1^{K/2} N2^{L/2})) as a finite triple sum.
double asymptotic_moment(const Landscape& ls, int k, int l);

/// Absolute quadrature tolerance of laplace_integral_ratio, per integral.
inline constexpr double kLaplaceTolerance = 1e-10;

/**
 * Ratio of
 *     int_{(-1,1)^2} exp(-(N/2) F(t)) t1^K t2^L / ((1-t1^2)(1-t2^2)) dt
 * to the same integral with K = L = 0. With weights N1/N, N2/N this equals the
 * finite-N correlation E(X_1..X_K Y_1..Y_L).
 */
double laplace_integral_ratio(const Landscape& ls, std::int64_t n, int k, int l);

enum class StationaryKind { Minimum, Maximum, Saddle };

std::string_view to_string(StationaryKind kind);

struct StationaryPoint {
  double y1 = 0.0;
  double y2 = 0.0;
  StationaryKind kind = StationaryKind::Minimum;
  double value = 0.0;  ///< F(y1, y2)
};

/// Multi-start damped Newton from a 9x9 grid on [-3, 3]^2; results sorted by
/// (value, y1, y2). Throws ConvergenceError if any start fails in 200 steps.
std::vector<StationaryPoint> find_minima(const Landscape& ls);

/// Positive root m of (L - Lbar) m = sqrt(2) alpha tanh(m / sqrt(2)) for
/// J1 = J2 = J, a1 = a2 = alpha; zero when alpha (J + Jbar) <= 1.
double special_case_mstar(double j, double jbar, double alpha);

/// Largest root of tanh(beta m) = m; zero for beta <= 1.
double one_group_m(double beta_eff);

/// 2 (12 alpha)^{-1/4} / Gamma(1/4) exp(-x^4 / 12).
double critical_density(double x, double alpha);

struct DensityMoments {
  double mass = 0.0;
  double second = 0.0;
  double fourth = 0.0;
};

/// Integrals of x^0, x^2, x^4 against critical_density, by quadrature.
DensityMoments critical_density_moments(double alpha);

/// g(x) = tanh(x) / x with g(0) = 1.
double tanh_ratio(double x);

}  // namespace cwtg
