// Copyright 2026 The cwtg Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "cwtg/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cwtg/errors.hpp"
#include "cwtg/quadrature.hpp"

namespace cwtg {

namespace {

// ln cosh y without overflow for large |y|.
double log_cosh(double y) {
  const double a = std::abs(y);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

// l(t) = ln((1+t)/(1-t)) = 2 artanh t.
double ell(double t) { return std::log1p(t) - std::log1p(-t); }

void require_high_temperature(const Landscape& ls, const char* who) {
  const Sym2 h = hessian_origin(ls);
  if (!(h.a > kRegimeTolerance && h.det() > kRegimeTolerance)) {
    throw RegimeError(std::string(who) + ": parameters are not in the high-temperature regime");
  }
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Unnormalised F(t) without the domain check; callers keep |t| < 1.
double landscape_t(const Landscape& ls, double t1, double t2) {
  const double l1 = ell(t1);
  const double l2 = ell(t2);
  const InverseCoupling& v = ls.inv;
  return 0.25 * (v.l1 * l1 * l1 - 2.0 * v.lbar * l1 * l2 + v.l2 * l2 * l2) +
         ls.weights.alpha1() * (std::log1p(-t1) + std::log1p(t1)) +
         ls.weights.alpha2() * (std::log1p(-t2) + std::log1p(t2));
}

template <typename F>
double bisect(F&& g, double lo, double hi, double tol) {
  // Requires g(lo) and g(hi) of opposite sign.
  const bool lo_negative = g(lo) < 0.0;
  for (int it = 0; it < 400 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((g(mid) < 0.0) == lo_negative) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::array<double, 2> Sym2::eigenvalues() const noexcept {
  const double mean = 0.5 * (a + c);
  const double radius = std::hypot(0.5 * (a - c), b);
  return {mean - radius, mean + radius};
}

std::string_view to_string(StationaryKind kind) {
  switch (kind) {
    case StationaryKind::Minimum:
      return "min";
    case StationaryKind::Maximum:
      return "max";
    case StationaryKind::Saddle:
      return "saddle";
  }
  return "?";
}

double eval_F_y(const Landscape& ls, double y1, double y2) {
  const InverseCoupling& v = ls.inv;
  return 0.5 * v.l1 * y1 * y1 + 0.5 * v.l2 * y2 * y2 - v.lbar * y1 * y2 - ls.weights.alpha1() * log_cosh(y1) -
         ls.weights.alpha2() * log_cosh(y2);
}

std::array<double, 2> eval_grad_F_y(const Landscape& ls, double y1, double y2) {
  const InverseCoupling& v = ls.inv;
  return {v.l1 * y1 - v.lbar * y2 - ls.weights.alpha1() * std::tanh(y1),
          v.l2 * y2 - v.lbar * y1 - ls.weights.alpha2() * std::tanh(y2)};
}

Sym2 eval_hessian_F_y(const Landscape& ls, double y1, double y2) {
  const InverseCoupling& v = ls.inv;
  const double c1 = std::cosh(y1);
  const double c2 = std::cosh(y2);
  return {v.l1 - ls.weights.alpha1() / (c1 * c1), -v.lbar, v.l2 - ls.weights.alpha2() / (c2 * c2)};
}

double eval_F_t(const Landscape& ls, double t1, double t2) {
  if (!(std::abs(t1) < 1.0) || !(std::abs(t2) < 1.0)) throw DomainError("eval_F_t: need |t1| < 1 and |t2| < 1");
  return landscape_t(ls, t1, t2);
}

Sym2 hessian_origin(const Landscape& ls) {
  const InverseCoupling& v = ls.inv;
  return {2.0 * (v.l1 - ls.weights.alpha1()), -2.0 * v.lbar, 2.0 * (v.l2 - ls.weights.alpha2())};
}

Covariance2 sigma(const Landscape& ls) {
  const Sym2 h = hessian_origin(ls);
  const double det = h.det();
  if (!(h.a > kRegimeTolerance && det > kRegimeTolerance)) {
    throw SingularityError("sigma: Hessian at the origin is not positive definite");
  }
  return {h.c / det, h.a / det, -h.b / det};
}

CltCovariance clt_covariance(const Coupling& coupling, const GroupWeights& w) {
  if (classify_regime(coupling, w).tag != RegimeTag::HighTemperature) {
    throw RegimeError("clt_covariance: parameters are not in the high-temperature regime");
  }
  const double a1 = w.alpha1();
  const double a2 = w.alpha2();
  const double u1 = 1.0 - a1 * coupling.j1();
  const double u2 = 1.0 - a2 * coupling.j2();
  const double pre = 1.0 / (u1 * u2 - a1 * a2 * coupling.jbar() * coupling.jbar());
  return {pre * u2, pre * u1, pre * std::sqrt(a1 * a2) * coupling.jbar()};
}

CltCovariance clt_covariance_from_sigma(const Landscape& ls) {
  const Covariance2 s = sigma(ls);
  const double a1 = ls.weights.alpha1();
  const double a2 = ls.weights.alpha2();
  return {1.0 + 2.0 * a1 * s.s11(), 1.0 + 2.0 * a2 * s.s22(), 2.0 * std::sqrt(a1 * a2) * s.s12()};
}

double asymptotic_correlation(const Landscape& ls, int k, int l, std::int64_t n) {
  require_high_temperature(ls, "asymptotic_correlation");
  if (k < 0 || l < 0) throw InvalidParameter("asymptotic_correlation: orders must be non-negative");
  if (n < 1) throw InvalidParameter("asymptotic_correlation: N must be positive");
  if ((k + l) % 2 != 0) return 0.0;
  return std::pow(2.0 / static_cast<double>(n), 0.5 * (k + l)) * moment_closed(k, l, sigma(ls));
}

double asymptotic_moment(const Landscape& ls, int k, int l) {
  require_high_temperature(ls, "asymptotic_moment");
  if (k < 0 || l < 0) throw InvalidParameter("asymptotic_moment: orders must be non-negative");
  if ((k + l) % 2 != 0) return 0.0;
  const Covariance2 s = sigma(ls);
  const double a1 = ls.weights.alpha1();
  const double a2 = ls.weights.alpha2();
  const double prefactor = factorial(k) * factorial(l) / std::pow(2.0, 0.5 * (k + l));
  // Ratio powers (4 s12^2 / (s11 s22))^r are folded into integer powers of
  // s11, s22, s12 so degenerate Sigma stays finite.
  auto summand = [&](int kk, int ll, int r, bool odd) {
    return std::pow(2.0 * a1, kk) * std::pow(2.0 * a2, ll) * std::pow(s.s11(), kk - r) *
           std::pow(s.s22(), ll - r) * std::pow(4.0, r) * std::pow(s.s12(), 2 * r) /
           (factorial(odd ? 2 * r + 1 : 2 * r) * factorial(kk - r) * factorial(ll - r));
  };
  double total = 0.0;
  if (k % 2 == 0) {
    for (int kk = 0; kk <= k / 2; ++kk) {
      for (int ll = 0; ll <= l / 2; ++ll) {
        double inner = 0.0;
        for (int r = 0; r <= std::min(kk, ll); ++r) inner += summand(kk, ll, r, false);
        total += inner / (factorial(k / 2 - kk) * factorial(l / 2 - ll));
      }
    }
    return prefactor * total;
  }
  const int hk = (k - 1) / 2;
  const int hl = (l - 1) / 2;
  for (int kk = 0; kk <= hk; ++kk) {
    for (int ll = 0; ll <= hl; ++ll) {
      double inner = 0.0;
      for (int r = 0; r <= std::min(kk, ll); ++r) inner += summand(kk, ll, r, true);
      total += inner / (factorial(hk - kk) * factorial(hl - ll));
    }
  }
  return prefactor * 4.0 * std::sqrt(a1 * a2) * s.s12() * total;
}

double laplace_integral_ratio(const Landscape& ls, std::int64_t n, int k, int l) {
  require_high_temperature(ls, "laplace_integral_ratio");
  if (n < 10) throw InvalidParameter("laplace_integral_ratio: N must be at least 10");
  if (k < 0 || l < 0) throw InvalidParameter("laplace_integral_ratio: orders must be non-negative");
  const double half_n = 0.5 * static_cast<double>(n);
  auto integrand = [&](int kk, int ll) {
    return [&, kk, ll](double t1, double t2) {
      if (!(std::abs(t1) < 1.0) || !(std::abs(t2) < 1.0)) return 0.0;
      // The peak value is 1 at the origin; denormal tails stall the adaptive rule.
      const double exponent = -half_n * landscape_t(ls, t1, t2);
      if (exponent < -200.0) return 0.0;
      const double e = std::exp(exponent);
      return e * std::pow(t1, kk) * std::pow(t2, ll) / ((1.0 - t1 * t1) * (1.0 - t2 * t2));
    };
  };
  static constexpr std::array<double, 3> kBreaks{-0.5, 0.0, 0.5};
  const Integral num = integrate_2d(integrand(k, l), -1.0, 1.0, -1.0, 1.0, kLaplaceTolerance, kBreaks);
  if (k == 0 && l == 0) return 1.0;
  const Integral den = integrate_2d(integrand(0, 0), -1.0, 1.0, -1.0, 1.0, kLaplaceTolerance, kBreaks);
  return num.value / den.value;
}

namespace {

// Newton step with each Hessian eigenvalue replaced by its absolute value, so
// the step descends and keeps the local curvature along flat directions.
std::array<double, 2> modified_newton_step(const Sym2& h, const std::array<double, 2>& g) {
  const auto ev = h.eigenvalues();
  const double floor = 1e-20 * std::max(1.0, std::abs(ev[1]));
  std::array<double, 2> d{0.0, 0.0};
  for (const double lambda : ev) {
    // Eigenvector from whichever row of (H - lambda I) is better conditioned.
    double vx = h.b, vy = lambda - h.a;
    if (std::hypot(lambda - h.c, h.b) > std::hypot(vx, vy)) vx = lambda - h.c, vy = h.b;
    const double norm = std::hypot(vx, vy);
    if (norm == 0.0) {
      vx = lambda == ev[0] ? 1.0 : 0.0;
      vy = 1.0 - vx;
    } else {
      vx /= norm;
      vy /= norm;
    }
    const double coef = (vx * g[0] + vy * g[1]) / std::max(std::abs(lambda), floor);
    d[0] -= coef * vx;
    d[1] -= coef * vy;
  }
  return d;
}

}  // namespace

std::vector<StationaryPoint> find_minima(const Landscape& ls) {
  constexpr int kGrid = 9;
  constexpr double kHalfWidth = 3.0;
  constexpr int kMaxIterations = 200;
  constexpr double kGradTol = 1e-11;
  constexpr double kStepTol = 1e-14;
  constexpr double kOriginSnap = 1e-6;
  constexpr double kDedup = 1e-8;

  auto grad_norm = [](const std::array<double, 2>& g) { return std::max(std::abs(g[0]), std::abs(g[1])); };

  std::vector<StationaryPoint> found;
  for (int gi = 0; gi < kGrid; ++gi) {
    for (int gj = 0; gj < kGrid; ++gj) {
      double y1 = -kHalfWidth + 2.0 * kHalfWidth * gi / (kGrid - 1);
      double y2 = -kHalfWidth + 2.0 * kHalfWidth * gj / (kGrid - 1);
      bool converged = false;
      for (int it = 0; it < kMaxIterations; ++it) {
        const auto g = eval_grad_F_y(ls, y1, y2);
        const auto [d1, d2] = modified_newton_step(eval_hessian_F_y(ls, y1, y2), g);
        if (grad_norm(g) <= kGradTol) {
          converged = true;
          break;
        }
        const double f0 = eval_F_y(ls, y1, y2);
        double step = 1.0;
        bool accepted = false;
        for (int halving = 0; halving < 100; ++halving) {
          if (eval_F_y(ls, y1 + step * d1, y2 + step * d2) < f0) {
            accepted = true;
            break;
          }
          step *= 0.5;
        }
        if (!accepted) {
          // Decrease below rounding level: take the full step near a solution.
          if (grad_norm(g) > 1e-7) break;
          step = 1.0;
        }
        y1 += step * d1;
        y2 += step * d2;
      }
      if (!converged) {
        throw ConvergenceError("find_minima: Newton did not converge from start (" + std::to_string(y1) + ", " +
                               std::to_string(y2) + ")");
      }
      // Polish while the steps keep shrinking; flat points converge only linearly.
      double last = std::numeric_limits<double>::infinity();
      for (int it = 0; it < kMaxIterations; ++it) {
        const auto [d1, d2] = modified_newton_step(eval_hessian_F_y(ls, y1, y2), eval_grad_F_y(ls, y1, y2));
        const double size = std::max(std::abs(d1), std::abs(d2));
        if (!(size < last) || size <= kStepTol) break;
        y1 += d1;
        y2 += d2;
        last = size;
      }
      // F is even, so the origin is always stationary; rounding limits flat points to about 1e-8.
      if (std::abs(y1) <= kOriginSnap && std::abs(y2) <= kOriginSnap) y1 = y2 = 0.0;
      const bool duplicate = std::any_of(found.begin(), found.end(), [&](const StationaryPoint& p) {
        return std::abs(p.y1 - y1) <= kDedup && std::abs(p.y2 - y2) <= kDedup;
      });
      if (duplicate) continue;
      const auto ev = eval_hessian_F_y(ls, y1, y2).eigenvalues();
      StationaryKind kind = StationaryKind::Saddle;
      if (ev[0] > 0.0) {
        kind = StationaryKind::Minimum;
      } else if (ev[1] < 0.0) {
        kind = StationaryKind::Maximum;
      }
      found.push_back({y1, y2, kind, eval_F_y(ls, y1, y2)});
    }
  }
  std::sort(found.begin(), found.end(), [](const StationaryPoint& a, const StationaryPoint& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.y1 != b.y1) return a.y1 < b.y1;
    return a.y2 < b.y2;
  });
  return found;
}

double special_case_mstar(double j, double jbar, double alpha) {
  if (!(j > 0.0) || !(jbar >= 0.0) || !(j * j > jbar * jbar) || !(alpha > 0.0)) {
    throw InvalidParameter("special_case_mstar: need J > 0, Jbar >= 0, J^2 > Jbar^2, alpha > 0");
  }
  const double delta = j * j - jbar * jbar;
  const double slope = (j - jbar) / delta;  // L - Lbar
  if (slope >= alpha) return 0.0;
  const double sqrt2 = std::numbers::sqrt2;
  auto g = [&](double m) { return slope * m - sqrt2 * alpha * std::tanh(m / sqrt2); };
  double lo = 1e-8;
  while (g(lo) >= 0.0 && lo > 1e-300) lo *= 1e-4;
  const double hi = sqrt2 * alpha / slope + 1.0;
  return bisect(g, lo, hi, 1e-13);
}

double one_group_m(double beta_eff) {
  if (!(beta_eff > 0.0)) throw InvalidParameter("one_group_m: beta must be positive");
  if (beta_eff <= 1.0) return 0.0;
  auto g = [&](double m) { return std::tanh(beta_eff * m) - m; };
  double lo = 1e-8;
  while (g(lo) <= 0.0 && lo > 1e-300) lo *= 1e-4;
  return bisect(g, lo, 1.0, 1e-13);
}

double critical_density(double x, double alpha) {
  if (!(alpha > 0.0)) throw InvalidParameter("critical_density: alpha must be positive");
  return 2.0 * std::pow(12.0 * alpha, -0.25) / std::tgamma(0.25) * std::exp(-std::pow(x, 4) / 12.0);
}

DensityMoments critical_density_moments(double alpha) {
  // exp(-x^4/12) < 1e-140 beyond |x| = 8.
  constexpr double kCut = 8.0;
  static constexpr std::array<double, 1> kBreaks{0.0};
  auto moment = [&](int p) {
    return integrate_1d([&](double x) { return std::pow(x, p) * critical_density(x, alpha); }, -kCut, kCut, 1e-12,
                        kBreaks)
        .value;
  };
  return {moment(0), moment(2), moment(4)};
}

double tanh_ratio(double x) { return x == 0.0 ? 1.0 : std::tanh(x) / x; }

}  // namespace cwtg
