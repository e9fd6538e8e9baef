// Copyright 2026 The cwtg Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "cwtg/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <queue>
#include <string>
#include <vector>

#include "cwtg/errors.hpp"
#include "cwtg/format.hpp"

namespace cwtg {

namespace {

using GaussKronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
constexpr std::size_t kMaxPanels = 50000;

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel panel(const std::function<double(double)>& f, double a, double b) {
  double err = 0.0;
  const double v = GaussKronrod::integrate(f, a, b, 0, 0.0, &err);
  return {a, b, v, err};
}

// Global adaptive scheme: bisect the panel with the largest error estimate
// until the summed estimate is within abs_tol.
Integral adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol,
                  std::span<const double> breaks, const char* who) {
  std::vector<double> pts{a};
  for (double x : breaks) {
    if (x > a && x < b) pts.push_back(x);
  }
  pts.push_back(b);
  std::priority_queue<Panel> queue;
  for (std::size_t s = 0; s + 1 < pts.size(); ++s) queue.push(panel(f, pts[s], pts[s + 1]));
  auto total_error = [&queue] {
    double e = 0.0;
    auto copy = queue;
    while (!copy.empty()) e += copy.top().error, copy.pop();
    return e;
  };
  double error = total_error();
  while (error > abs_tol) {
    if (queue.size() >= kMaxPanels) {
      throw QuadratureError(std::string(who) + ": error estimate " + format_g17(error) + " exceeds " +
                            format_g17(abs_tol));
    }
    const Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = panel(f, worst.a, mid);
    const Panel right = panel(f, mid, worst.b);
    error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    // Refresh the running sum occasionally to shed cancellation drift.
    if (queue.size() % 256 == 0) error = total_error();
  }
  Integral r;
  std::vector<Panel> done;
  done.reserve(queue.size());
  while (!queue.empty()) done.push_back(queue.top()), queue.pop();
  std::sort(done.begin(), done.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  for (const Panel& p : done) {
    r.value += p.value;
    r.error += p.error;
  }
  return r;
}

}  // namespace

Integral integrate_1d(const std::function<double(double)>& f, double a, double b, double abs_tol,
                      std::span<const double> breaks) {
  return adaptive(f, a, b, abs_tol, breaks, "integrate_1d");
}

Integral integrate_2d(const std::function<double(double, double)>& f, double a1, double b1, double a2, double b2,
                      double abs_tol, std::span<const double> breaks) {
  const double inner_tol = abs_tol / (4.0 * (b1 - a1));
  double inner_error = 0.0;
  auto outer = [&](double x) {
    const Integral in = adaptive([&](double y) { return f(x, y); }, a2, b2, inner_tol, breaks, "integrate_2d");
    inner_error = std::max(inner_error, in.error);
    return in.value;
  };
  Integral r = adaptive(outer, a1, b1, 0.5 * abs_tol, breaks, "integrate_2d");
  r.error += inner_error * (b1 - a1);
  return r;
}

}  // namespace cwtg
