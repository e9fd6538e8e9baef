// Copyright 2026 The cwtg Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "cwtg/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <string>

#include "cwtg/errors.hpp"
#include "cwtg/format.hpp"

namespace cwtg {

namespace {

void require_exact_model(const FiniteModel& model, std::int64_t max_n, const char* who) {
  if (!model.covers_population()) {
    throw InvalidParameter(std::string(who) + ": requires N1 + N2 = N");
  }
  if (model.n() > max_n) {
    throw SizeError(std::string(who) + ": N = " + std::to_string(model.n()) + " exceeds " + std::to_string(max_n));
  }
}

// log binom(n, u) for u = 0..n, mirrored so that entry u and n-u are bitwise equal.
std::vector<double> log_binomials(std::int64_t n) {
  std::vector<double> lb(static_cast<std::size_t>(n + 1));
  const double lgn = std::lgamma(static_cast<double>(n) + 1.0);
  for (std::int64_t u = 0; u <= n / 2; ++u) {
    const double v =
        lgn - std::lgamma(static_cast<double>(u) + 1.0) - std::lgamma(static_cast<double>(n - u) + 1.0);
    lb[static_cast<std::size_t>(u)] = v;
    lb[static_cast<std::size_t>(n - u)] = v;
  }
  return lb;
}

// Neumaier-compensated sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Normalises log-weights in place into probabilities; returns log of their sum.
double normalise_log_weights(std::vector<double>& w) {
  const double peak = *std::max_element(w.begin(), w.end());
  CompensatedSum total;
  for (double x : w) total.add(std::exp(x - peak));
  const double log_z = peak + std::log(total.value());
  for (double& x : w) x = std::exp(x - log_z);
  return log_z;
}

double falling(double x, int m) {
  double f = 1.0;
  for (int i = 0; i < m; ++i) f *= x - i;
  return f;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

MagnetizationTable::MagnetizationTable(FiniteModel model, Coupling coupling, double log_z, std::vector<double> probs)
    : model_(model), coupling_(coupling), log_z_(log_z), probs_(std::move(probs)) {
  if (probs_.size() != static_cast<std::size_t>(rows() * cols())) {
    throw InvalidParameter("MagnetizationTable: probability array does not match lattice size");
  }
}

double MagnetizationTable::prob(std::int64_t s1, std::int64_t s2) const noexcept {
  const std::int64_t a = s1 + model_.n1();
  const std::int64_t b = s2 + model_.n2();
  if (a < 0 || b < 0 || a % 2 != 0 || b % 2 != 0) return 0.0;
  const std::int64_t i = a / 2;
  const std::int64_t j = b / 2;
  if (i >= rows() || j >= cols()) return 0.0;
  return at(i, j);
}

MagnetizationTable exact_distribution(const FiniteModel& model, const Coupling& coupling) {
  require_exact_model(model, kMaxExactN, "exact_distribution");
  const std::int64_t n1 = model.n1();
  const std::int64_t n2 = model.n2();
  const std::vector<double> lb1 = log_binomials(n1);
  const std::vector<double> lb2 = log_binomials(n2);
  std::vector<double> w(static_cast<std::size_t>((n1 + 1) * (n2 + 1)));
  for (std::int64_t i = 0; i <= n1; ++i) {
    const std::int64_t s1 = -n1 + 2 * i;
    for (std::int64_t j = 0; j <= n2; ++j) {
      const std::int64_t s2 = -n2 + 2 * j;
      w[static_cast<std::size_t>(i * (n2 + 1) + j)] =
          lb1[static_cast<std::size_t>(i)] + lb2[static_cast<std::size_t>(j)] +
          gibbs_log_weight(coupling, model.n(), s1, s2);
    }
  }
  const double log_z = normalise_log_weights(w);
  return {model, coupling, log_z, std::move(w)};
}

MagnetizationTable brute_force_distribution(const FiniteModel& model, const Coupling& coupling) {
  require_exact_model(model, kMaxBruteForceN, "brute_force_distribution");
  const std::int64_t n = model.n();
  const std::int64_t n1 = model.n1();
  const std::int64_t n2 = model.n2();
  // Shift by the largest single-configuration log weight to avoid overflow.
  double shift = -std::numeric_limits<double>::infinity();
  for (std::int64_t s1 = -n1; s1 <= n1; s1 += 2) {
    for (std::int64_t s2 = -n2; s2 <= n2; s2 += 2) shift = std::max(shift, gibbs_log_weight(coupling, n, s1, s2));
  }
  std::vector<double> acc(static_cast<std::size_t>((n1 + 1) * (n2 + 1)), 0.0);
  const std::uint64_t configs = std::uint64_t{1} << n;
  for (std::uint64_t c = 0; c < configs; ++c) {
    std::int64_t s1 = 0;
    std::int64_t s2 = 0;
    for (std::int64_t b = 0; b < n; ++b) {
      const std::int64_t spin = (c >> b) & 1U ? 1 : -1;
      (b < n1 ? s1 : s2) += spin;
    }
    const std::int64_t i = (s1 + n1) / 2;
    const std::int64_t j = (s2 + n2) / 2;
    acc[static_cast<std::size_t>(i * (n2 + 1) + j)] += std::exp(gibbs_log_weight(coupling, n, s1, s2) - shift);
  }
  double total = 0.0;
  for (double a : acc) total += a;
  for (double& a : acc) a /= total;
  return {model, coupling, shift + std::log(total), std::move(acc)};
}

double exact_moment(const MagnetizationTable& table, int k, int l, Scaling scaling) {
  if (k < 0 || l < 0) throw InvalidParameter("exact_moment: orders must be non-negative");
  const double d1 = std::pow(static_cast<double>(table.model().n1()), scaling.p);
  const double d2 = std::pow(static_cast<double>(table.model().n2()), scaling.p);
  CompensatedSum total;
  for (std::int64_t i = 0; i < table.rows(); ++i) {
    const double x = std::pow(static_cast<double>(table.s1_at(i)) / d1, k);
    CompensatedSum row;
    for (std::int64_t j = 0; j < table.cols(); ++j) {
      const double p = table.at(i, j);
      if (p == 0.0) continue;
      row.add(p * std::pow(static_cast<double>(table.s2_at(j)) / d2, l));
    }
    total.add(x * row.value());
  }
  return total.value();
}

double conditional_spin_product(std::int64_t n, int k, std::int64_t s) {
  if (k < 0 || k > n) throw DomainError("conditional_spin_product: need 0 <= k <= n");
  if (s < -n || s > n || (n + s) % 2 != 0) throw DomainError("conditional_spin_product: s off the lattice");
  const double u = static_cast<double>((n + s) / 2);
  const double nd = static_cast<double>(n);
  const double denom = falling(nd, k);
  double total = 0.0;
  for (int a = 0; a <= k; ++a) {
    // binom(u,a) binom(n-u,k-a) / binom(n,k) in falling-factorial form.
    const double term = falling(u, a) * falling(nd - u, k - a) / denom * factorial(k) / (factorial(a) * factorial(k - a));
    total += ((k - a) % 2 == 0 ? term : -term);
  }
  return total;
}

double exact_correlation(const MagnetizationTable& table, int k, int l) {
  const FiniteModel& m = table.model();
  if (k < 0 || l < 0 || k > m.n1() || l > m.n2()) {
    throw DomainError("exact_correlation: need 0 <= K <= N1 and 0 <= L <= N2");
  }
  std::vector<double> c2(static_cast<std::size_t>(table.cols()));
  for (std::int64_t j = 0; j < table.cols(); ++j) {
    c2[static_cast<std::size_t>(j)] = conditional_spin_product(m.n2(), l, table.s2_at(j));
  }
  CompensatedSum total;
  for (std::int64_t i = 0; i < table.rows(); ++i) {
    const double c1 = conditional_spin_product(m.n1(), k, table.s1_at(i));
    CompensatedSum row;
    for (std::int64_t j = 0; j < table.cols(); ++j) row.add(table.at(i, j) * c2[static_cast<std::size_t>(j)]);
    total.add(c1 * row.value());
  }
  return total.value();
}

double exact_correlation(const FiniteModel& model, const Coupling& coupling, int k, int l) {
  if (k < 0 || l < 0 || k > model.n1() || l > model.n2()) {
    throw DomainError("exact_correlation: need 0 <= K <= N1 and 0 <= L <= N2");
  }
  return exact_correlation(exact_distribution(model, coupling), k, l);
}

std::vector<std::pair<std::int64_t, std::int64_t>> sample_stream(const MagnetizationTable& table,
                                                                 std::uint64_t seed, std::uint64_t stream,
                                                                 std::size_t count) {
  const std::vector<double>& p = table.probs();
  std::vector<double> cumulative(p.size());
  CompensatedSum running;
  std::size_t last_positive = 0;
  for (std::size_t e = 0; e < p.size(); ++e) {
    running.add(p[e]);
    cumulative[e] = running.value();
    if (p[e] > 0.0) last_positive = e;
  }
  std::mt19937_64 engine(seed ^ stream);
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  out.reserve(count);
  for (std::size_t d = 0; d < count; ++d) {
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    std::size_t e = it == cumulative.end() ? last_positive : static_cast<std::size_t>(it - cumulative.begin());
    const auto i = static_cast<std::int64_t>(e) / table.cols();
    const auto j = static_cast<std::int64_t>(e) % table.cols();
    out.emplace_back(table.s1_at(i), table.s2_at(j));
  }
  return out;
}

std::vector<std::pair<std::int64_t, std::int64_t>> sample(const MagnetizationTable& table, std::uint64_t seed,
                                                          std::size_t count) {
  return sample_stream(table, seed, 0, count);
}

void write_table_csv(const MagnetizationTable& table, std::ostream& out) {
  out << "s1,s2,prob\n";
  for (std::int64_t i = 0; i < table.rows(); ++i) {
    for (std::int64_t j = 0; j < table.cols(); ++j) {
      out << table.s1_at(i) << ',' << table.s2_at(j) << ',' << format_g17(table.at(i, j)) << '\n';
    }
  }
}

MomentGrid streamed_moments(const FiniteModel& model, const Coupling& coupling, int max_k, int max_l,
                            Scaling scaling) {
  if (!model.covers_population()) throw InvalidParameter("streamed_moments: requires N1 + N2 = N");
  if (max_k < 0 || max_l < 0) throw InvalidParameter("streamed_moments: orders must be non-negative");
  const std::int64_t n1 = model.n1();
  const std::int64_t n2 = model.n2();
  const double n = static_cast<double>(model.n());
  const std::vector<double> lb1 = log_binomials(n1);
  const std::vector<double> lb2 = log_binomials(n2);
  const double a = coupling.j1() / (2.0 * n);
  const double b = coupling.j2() / (2.0 * n);
  const double c = coupling.jbar() / n;
  std::vector<double> y(static_cast<std::size_t>(n2 + 1));
  std::vector<double> quad2(y.size());
  for (std::int64_t j = 0; j <= n2; ++j) {
    y[static_cast<std::size_t>(j)] = static_cast<double>(-n2 + 2 * j);
    quad2[static_cast<std::size_t>(j)] = lb2[static_cast<std::size_t>(j)] + b * y[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(j)];
  }
  auto row_base = [&](std::int64_t i, double& x) {
    x = static_cast<double>(-n1 + 2 * i);
    return lb1[static_cast<std::size_t>(i)] + a * x * x;
  };

  double peak = -std::numeric_limits<double>::infinity();
  for (std::int64_t i = 0; i <= n1; ++i) {
    double x = 0.0;
    const double base = row_base(i, x);
    const double cx = c * x;
    for (std::size_t j = 0; j < y.size(); ++j) peak = std::max(peak, base + quad2[j] + cx * y[j]);
  }

  constexpr double kCutoff = 100.0;
  const double d1 = std::pow(static_cast<double>(n1), scaling.p);
  const double d2 = std::pow(static_cast<double>(n2), scaling.p);
  const auto width = static_cast<std::size_t>(max_l + 1);
  std::vector<CompensatedSum> acc(static_cast<std::size_t>((max_k + 1) * (max_l + 1)));
  std::vector<double> row(width);
  for (std::int64_t i = 0; i <= n1; ++i) {
    double x = 0.0;
    const double base = row_base(i, x) - peak;
    const double cx = c * x;
    std::fill(row.begin(), row.end(), 0.0);
    bool any = false;
    for (std::size_t j = 0; j < y.size(); ++j) {
      const double lw = base + quad2[j] + cx * y[j];
      if (lw < -kCutoff) continue;
      any = true;
      double w = std::exp(lw);
      const double ys = y[j] / d2;
      for (std::size_t l = 0; l < width; ++l) {
        row[l] += w;
        w *= ys;
      }
    }
    if (!any) continue;
    const double xs = x / d1;
    double xp = 1.0;
    for (int k = 0; k <= max_k; ++k) {
      for (std::size_t l = 0; l < width; ++l) acc[static_cast<std::size_t>(k) * width + l].add(xp * row[l]);
      xp *= xs;
    }
  }
  MomentGrid grid{max_k, max_l, 0.0, std::vector<double>(acc.size())};
  const double z = acc[0].value();
  grid.log_z = peak + std::log(z);
  for (std::size_t e = 0; e < acc.size(); ++e) grid.values[e] = acc[e].value() / z;
  return grid;
}

}  // namespace cwtg
