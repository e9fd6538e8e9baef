// Copyright 2026 The cwtg Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "cwtg/cli.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "cwtg/asymptotics.hpp"
#include "cwtg/combinat.hpp"
#include "cwtg/errors.hpp"
#include "cwtg/exact.hpp"
#include "cwtg/format.hpp"
#include "cwtg/gaussmom.hpp"
#include "cwtg/oracles.hpp"
#include "json.hpp"

namespace cwtg::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kBoxHalfWidth = 0.1;

std::string moment_label(int k, int l) { return std::to_string(k) + "," + std::to_string(l); }

const std::vector<std::pair<int, int>>& default_moments() {
  static const std::vector<std::pair<int, int>> m{{2, 0}, {0, 2}, {1, 1}};
  return m;
}

const std::vector<std::pair<int, int>>& moments_or_default(const ExperimentConfig& cfg) {
  return cfg.moments.empty() ? default_moments() : cfg.moments;
}

FiniteModel exact_model(const ExperimentConfig& cfg, std::int64_t n) {
  const auto [n1, n2] = group_sizes(cfg, n, true);
  return {n, n1, n2};
}

Cell opt(double x) { return std::isnan(x) ? Cell{} : Cell{x}; }

// Probability mass of the table inside the per-spin box centred on (a1, a2).
double box_mass(const MagnetizationTable& t, double a1, double a2) {
  const double n1 = static_cast<double>(t.model().n1());
  const double n2 = static_cast<double>(t.model().n2());
  double mass = 0.0;
  for (std::int64_t i = 0; i < t.rows(); ++i) {
    if (std::abs(static_cast<double>(t.s1_at(i)) / n1 - a1) > kBoxHalfWidth) continue;
    for (std::int64_t j = 0; j < t.cols(); ++j) {
      if (std::abs(static_cast<double>(t.s2_at(j)) / n2 - a2) <= kBoxHalfWidth) mass += t.at(i, j);
    }
  }
  return mass;
}

std::string atom_label(double a1, double a2) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "mass@(%+.6f,%+.6f)", a1 + 0.0, a2 + 0.0);
  return buf;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

double GridAxis::at(int i) const noexcept {
  if (steps <= 1) return min;
  return min + (max - min) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

std::pair<std::int64_t, std::int64_t> group_sizes(const ExperimentConfig& cfg, std::int64_t n, bool exact) {
  std::int64_t n1 = 0;
  std::int64_t n2 = 0;
  if (cfg.sublinear) {
    n1 = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (n1 * n1 > n) --n1;
    while ((n1 + 1) * (n1 + 1) <= n) ++n1;
    n2 = n - n1;
  } else {
    n1 = std::llround(cfg.weights.alpha1() * static_cast<double>(n));
    n2 = std::llround(cfg.weights.alpha2() * static_cast<double>(n));
  }
  if (n1 < 1 || n2 < 1) {
    throw InvalidParameter("group sizes for N = " + std::to_string(n) + " must both be >= 1 (got " +
                           std::to_string(n1) + ", " + std::to_string(n2) + ")");
  }
  if (exact && n1 + n2 != n) {
    throw InvalidParameter("exact engine requires N1 + N2 = N; N = " + std::to_string(n) + " gives " +
                           std::to_string(n1) + " + " + std::to_string(n2));
  }
  return {n1, n2};
}

GroupWeights target_weights(const ExperimentConfig& cfg) {
  return cfg.sublinear ? GroupWeights{0.0, 1.0} : cfg.weights;
}

void check_sizes(const std::vector<std::int64_t>& sizes) {
  if (sizes.empty()) throw InvalidParameter("sizes must be nonempty");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 2) throw InvalidParameter("sizes must be >= 2");
    if (i > 0 && sizes[i] <= sizes[i - 1]) throw InvalidParameter("sizes must be strictly increasing");
  }
}

std::vector<std::int64_t> parse_sizes(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidParameter("bad size '" + item + "'");
    }
  }
  check_sizes(out);
  return out;
}

std::vector<std::pair<int, int>> parse_moments(const std::string& text) {
  std::vector<std::pair<int, int>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    try {
      if (colon == std::string::npos) throw std::invalid_argument(item);
      const int k = std::stoi(item.substr(0, colon));
      const int l = std::stoi(item.substr(colon + 1));
      if (k < 0 || l < 0) throw std::invalid_argument(item);
      out.emplace_back(k, l);
    } catch (const std::exception&) {
      throw InvalidParameter("bad moment '" + item + "', expected K:L");
    }
  }
  return out;
}

// ---------------------------------------------------------------- writers

namespace {

std::string csv_field(const Cell& cell) {
  std::string s;
  if (const auto* i = std::get_if<std::int64_t>(&cell)) {
    s = std::to_string(*i);
  } else if (const auto* d = std::get_if<double>(&cell)) {
    s = format_g17(*d);
  } else if (const auto* str = std::get_if<std::string>(&cell)) {
    s = *str;
  } else if (const auto* b = std::get_if<bool>(&cell)) {
    s = *b ? "true" : "false";
  }
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

std::string json_value(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) return std::isfinite(*d) ? format_g17(*d) : "null";
  if (const auto* str = std::get_if<std::string>(&cell)) return nlohmann::json(*str).dump();
  if (const auto* b = std::get_if<bool>(&cell)) return *b ? "true" : "false";
  return "null";
}

}  // namespace

void write_csv(const Table& table, std::ostream& out) {
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out << (c ? "," : "") << csv_field(table.columns[c]);
  }
  out << "\r\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_field(row[c]);
    out << "\r\n";
  }
}

void write_json(const Table& table, std::ostream& out) {
  out << "[";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out << (r ? ",\n " : "\n ") << "{";
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      out << (c ? ", " : "") << nlohmann::json(table.columns[c]).dump() << ": " << json_value(table.rows[r][c]);
    }
    out << "}";
  }
  out << "\n]\n";
}

// --------------------------------------------------------------- commands

Table cmd_regime(const ExperimentConfig& cfg) {
  const Coupling& c = cfg.coupling;
  const GroupWeights& w = cfg.weights;
  const Regime r = classify_regime(c, w);
  Table t;
  t.columns = {"j1",     "j2",     "jbar",   "alpha1", "alpha2",      "delta",      "regime",
               "margin", "slack1", "slack2", "slack3", "matrix_form", "hessian_form"};
  t.rows.push_back({c.j1(), c.j2(), c.jbar(), w.alpha1(), w.alpha2(), c.delta(), std::string(to_string(r.tag)),
                    opt(r.margin), opt(r.slack1), opt(r.slack2), opt(r.slack3), regime_matrix_form(c, w),
                    regime_hessian_form(c, w)});
  return t;
}

Table cmd_clt_convergence(const ExperimentConfig& cfg) {
  const GroupWeights tw = target_weights(cfg);
  const Regime r = classify_regime(cfg.coupling, tw);
  if (r.tag != RegimeTag::HighTemperature) {
    throw RegimeError("clt-convergence requires the high temperature regime (got " +
                      std::string(to_string(r.tag)) + ")");
  }
  check_sizes(cfg.sizes);
  const auto& moments = moments_or_default(cfg);
  int max_k = 0;
  int max_l = 0;
  for (const auto& [k, l] : moments) {
    max_k = std::max(max_k, k);
    max_l = std::max(max_l, l);
  }
  const Landscape ls = Landscape::from(cfg.coupling, tw);
  Table t;
  t.columns = {"N", "moment", "exact", "target", "abs_err"};
  for (const std::int64_t n : cfg.sizes) {
    const MomentGrid g = streamed_moments(exact_model(cfg, n), cfg.coupling, max_k, max_l, Scaling::sqrt_spin());
    for (const auto& [k, l] : moments) {
      const double exact = g(k, l);
      const double target = asymptotic_moment(ls, k, l);
      t.rows.push_back({n, moment_label(k, l), exact, target, std::abs(exact - target)});
    }
  }
  return t;
}

Table cmd_lln(const ExperimentConfig& cfg) {
  check_sizes(cfg.sizes);
  const Coupling& c = cfg.coupling;
  const GroupWeights tw = target_weights(cfg);
  const Regime r = classify_regime(c, tw);
  Table t;
  t.columns = {"N", "quantity", "value", "target"};

  if (r.tag == RegimeTag::HighTemperature) {
    const CltCovariance cov = clt_covariance(c, tw);
    double num1 = 0.0, num2 = 0.0, den = 0.0;
    for (const std::int64_t n : cfg.sizes) {
      const FiniteModel m = exact_model(cfg, n);
      const MomentGrid g = streamed_moments(m, c, 2, 2, Scaling::per_spin());
      const auto n1 = static_cast<double>(m.n1());
      const auto n2 = static_cast<double>(m.n2());
      t.rows.push_back({n, std::string("mean1"), g(1, 0), 0.0});
      t.rows.push_back({n, std::string("mean2"), g(0, 1), 0.0});
      t.rows.push_back({n, std::string("second1"), g(2, 0), cov.c11 / n1});
      t.rows.push_back({n, std::string("second2"), g(0, 2), cov.c22 / n2});
      const double inv = 1.0 / static_cast<double>(n);
      num1 += g(2, 0) * inv;
      num2 += g(0, 2) * inv;
      den += inv * inv;
    }
    // Least-squares fit of E(S_v/N_v)^2 = c_v / N; the limit is C_vv / alpha_v.
    const double fit_target1 = tw.alpha1() > 0.0 ? cov.c11 / tw.alpha1() : kNaN;
    t.rows.push_back({Cell{}, std::string("fit_c1"), num1 / den, opt(fit_target1)});
    t.rows.push_back({Cell{}, std::string("fit_c2"), num2 / den, cov.c22 / tw.alpha2()});
    return t;
  }

  std::vector<std::pair<double, double>> atoms;
  if (c.jbar() == 0.0) {
    const double m1 = one_group_m(tw.alpha1() * c.j1());
    const double m2 = one_group_m(tw.alpha2() * c.j2());
    for (const double a1 : {-m1, m1}) {
      for (const double a2 : {-m2, m2}) {
        if (std::find(atoms.begin(), atoms.end(), std::pair{a1, a2}) == atoms.end()) atoms.emplace_back(a1, a2);
      }
    }
  } else {
    const auto minima = find_minima(Landscape::from(c, tw));
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : minima) {
      if (p.kind == StationaryKind::Minimum) best = std::min(best, p.value);
    }
    for (const auto& p : minima) {
      if (p.kind == StationaryKind::Minimum && p.value <= best + 1e-9) {
        atoms.emplace_back(std::tanh(p.y1), std::tanh(p.y2));
      }
    }
  }
  const double target = 1.0 / static_cast<double>(atoms.size());
  for (const std::int64_t n : cfg.sizes) {
    const MagnetizationTable table = exact_distribution(exact_model(cfg, n), c);
    double total = 0.0;
    for (const auto& [a1, a2] : atoms) {
      const double mass = box_mass(table, a1, a2);
      total += mass;
      t.rows.push_back({n, atom_label(a1, a2), mass, target});
    }
    t.rows.push_back({n, std::string("mass_total"), total, 1.0});
  }
  return t;
}

Table cmd_special_case(const ExperimentConfig& cfg) {
  const Coupling& c = cfg.coupling;
  if (c.j1() != c.j2()) throw InvalidParameter("special-case requires j1 == j2");
  if (cfg.weights.alpha1() != cfg.weights.alpha2()) throw InvalidParameter("special-case requires alpha1 == alpha2");
  check_sizes(cfg.sizes);
  const double j = c.j1();
  const double jbar = c.jbar();
  const double alpha = cfg.weights.alpha1();
  const double mstar = special_case_mstar(j, jbar, alpha);
  const double ystar = mstar / std::numbers::sqrt2;
  const double atom = std::tanh(ystar);
  const double lml = 1.0 / (j + jbar);
  const double residual = lml * mstar - std::numbers::sqrt2 * alpha * std::tanh(ystar);

  Table t;
  t.columns = {"N", "quantity", "value", "target"};
  t.rows.push_back({Cell{}, std::string("mstar"), mstar, Cell{}});
  t.rows.push_back({Cell{}, std::string("ystar"), ystar, Cell{}});
  t.rows.push_back({Cell{}, std::string("atom_per_spin"), atom, Cell{}});
  t.rows.push_back({Cell{}, std::string("residual"), residual, 0.0});
  for (const std::int64_t n : cfg.sizes) {
    const MagnetizationTable table = exact_distribution(exact_model(cfg, n), c);
    // Mode of the table restricted to s1, s2 >= 0.
    std::int64_t bi = table.rows() - 1, bj = table.cols() - 1;
    for (std::int64_t i = table.rows() / 2; i < table.rows(); ++i) {
      for (std::int64_t j2 = table.cols() / 2; j2 < table.cols(); ++j2) {
        if (table.at(i, j2) > table.at(bi, bj)) bi = i, bj = j2;
      }
    }
    const double e1 = static_cast<double>(table.s1_at(bi)) / static_cast<double>(table.model().n1());
    const double e2 = static_cast<double>(table.s2_at(bj)) / static_cast<double>(table.model().n2());
    t.rows.push_back({n, std::string("empirical_atom1"), e1, atom});
    t.rows.push_back({n, std::string("empirical_atom2"), e2, atom});
    if (mstar > 0.0) {
      const double plus = box_mass(table, atom, atom);
      const double minus = box_mass(table, -atom, -atom);
      t.rows.push_back({n, std::string("mass_plus"), plus, 0.5});
      t.rows.push_back({n, std::string("mass_minus"), minus, 0.5});
      t.rows.push_back({n, std::string("mass_total"), plus + minus, 1.0});
      t.rows.push_back({n, std::string("split_diff"), std::abs(plus - minus), 0.0});
    } else {
      t.rows.push_back({n, std::string("mass_origin"), box_mass(table, 0.0, 0.0), 1.0});
    }
  }
  return t;
}

Table cmd_phase_grid(const ExperimentConfig& cfg) {
  if (cfg.p1.steps < 1 || cfg.p2.steps < 1) throw InvalidParameter("grid steps must be >= 1");
  if (cfg.p1.min > cfg.p1.max || cfg.p2.min > cfg.p2.max) throw InvalidParameter("grid min must not exceed max");
  Table t;
  t.columns = {"p1", "p2", "regime", "mstar"};
  if (cfg.grid == GridKind::JbarAlpha) {
    if (cfg.p1.min < 0.0) throw InvalidParameter("jbar axis must be >= 0");
    if (cfg.p2.min <= 0.0 || cfg.p2.max > 0.5) throw InvalidParameter("alpha axis must lie in (0, 0.5]");
    const double j = cfg.coupling.j1();
    for (int a = 0; a < cfg.p1.steps; ++a) {
      for (int b = 0; b < cfg.p2.steps; ++b) {
        const double jbar = cfg.p1.at(a);
        const double alpha = cfg.p2.at(b);
        if (jbar >= j) {
          t.rows.push_back({jbar, alpha, std::string("Invalid"), Cell{}});
          continue;
        }
        const Regime r = classify_regime(Coupling(j, j, jbar), GroupWeights(alpha, alpha));
        t.rows.push_back({jbar, alpha, std::string(to_string(r.tag)), special_case_mstar(j, jbar, alpha)});
      }
    }
    return t;
  }
  if (cfg.p1.min <= 0.0 || cfg.p2.min <= 0.0) throw InvalidParameter("j1 and j2 axes must be > 0");
  const double jbar = cfg.coupling.jbar();
  for (int a = 0; a < cfg.p1.steps; ++a) {
    for (int b = 0; b < cfg.p2.steps; ++b) {
      const double j1 = cfg.p1.at(a);
      const double j2 = cfg.p2.at(b);
      if (j1 * j2 - jbar * jbar <= 0.0) {
        t.rows.push_back({j1, j2, std::string("Invalid"), Cell{}});
        continue;
      }
      const Coupling c(j1, j2, jbar);
      const Regime r = classify_regime(c, cfg.weights);
      const auto minima = find_minima(Landscape::from(c, cfg.weights));
      double radius = 0.0;
      for (const auto& p : minima) {
        if (p.kind == StationaryKind::Minimum) {
          radius = std::hypot(p.y1, p.y2);
          break;
        }
      }
      t.rows.push_back({j1, j2, std::string(to_string(r.tag)), radius});
    }
  }
  return t;
}

Table cmd_laplace_check(const ExperimentConfig& cfg) {
  check_sizes(cfg.sizes);
  const Landscape target = Landscape::from(cfg.coupling, target_weights(cfg));
  Table t;
  t.columns = {"N", "K", "L", "exact", "laplace", "asymptotic", "laplace_rel_err"};
  for (const std::int64_t n : cfg.sizes) {
    const FiniteModel m = exact_model(cfg, n);
    const MagnetizationTable table = exact_distribution(m, cfg.coupling);
    const Landscape finite = Landscape::from(cfg.coupling, m.weights());
    for (const auto& [k, l] : moments_or_default(cfg)) {
      const double exact = exact_correlation(table, k, l);
      const double lap = laplace_integral_ratio(finite, n, k, l);
      const double asym = asymptotic_correlation(target, k, l, n);
      const double err = exact != 0.0 ? std::abs(lap - exact) / std::abs(exact) : std::abs(lap);
      t.rows.push_back({n, std::int64_t{k}, std::int64_t{l}, exact, lap, asym, err});
    }
  }
  return t;
}

Table cmd_critical_scaling(const ExperimentConfig& cfg) {
  const Coupling& c = cfg.coupling;
  const double a1 = cfg.weights.alpha1();
  if (c.jbar() != 0.0) throw InvalidParameter("critical-scaling requires jbar == 0");
  if (std::abs(a1 * c.j1() - 1.0) > kRegimeTolerance) throw InvalidParameter("critical-scaling requires alpha1*j1 == 1");
  check_sizes(cfg.sizes);
  const DensityMoments d = critical_density_moments(a1);
  const double second = d.second / d.mass;
  const double fourth = d.fourth / d.mass;
  Table t;
  t.columns = {"N", "N1", "quantity", "value", "target"};
  t.rows.push_back({Cell{}, Cell{}, std::string("density_mass"), d.mass, 1.0});
  t.rows.push_back({Cell{}, Cell{}, std::string("density_ratio"), fourth / second, Cell{}});
  for (const std::int64_t n : cfg.sizes) {
    const FiniteModel m = exact_model(cfg, n);
    const MomentGrid g = streamed_moments(m, c, 4, 0, Scaling::pow(0.75));
    t.rows.push_back({n, m.n1(), std::string("second"), g(2, 0), second});
    t.rows.push_back({n, m.n1(), std::string("fourth"), g(4, 0), fourth});
    t.rows.push_back({n, m.n1(), std::string("ratio"), g(4, 0) / g(2, 0), fourth / second});
  }
  return t;
}

namespace {

struct Check {
  std::string name;
  double measured;
  double tolerance;
  bool passed;
};

Check check_le(std::string name, double measured, double tolerance) {
  return {std::move(name), measured, tolerance, measured <= tolerance};
}

Check exact_vs_brute_force(std::mt19937_64& rng) {
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const Coupling c = oracles::random_coupling(rng);
    const std::int64_t n1 = 1 + static_cast<std::int64_t>(rng() % 11);
    const FiniteModel m = FiniteModel::balanced(n1, 12 - n1);
    const auto a = exact_distribution(m, c).probs();
    const auto b = brute_force_distribution(m, c).probs();
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return check_le("exact_vs_bruteforce_N12", worst, 1e-12);
}

Check correlation_oracle(std::mt19937_64& rng) {
  double worst = 0.0;
  const FiniteModel m = FiniteModel::balanced(6, 6);
  for (int trial = 0; trial < 3; ++trial) {
    const Coupling c = oracles::random_coupling(rng);
    const MagnetizationTable table = exact_distribution(m, c);
    for (int k = 0; k <= 3; ++k) {
      for (int l = 0; l <= 3; ++l) {
        const double d = exact_correlation(table, k, l) - oracles::brute_force_correlation(m, c, k, l);
        worst = std::max(worst, std::abs(d));
      }
    }
  }
  return check_le("correlation_oracle_N12", worst, 1e-12);
}

Check moment_triple(std::mt19937_64& rng) {
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const double s11 = oracles::uniform(rng, 0.0, 1.0);
    const double s22 = oracles::uniform(rng, 0.0, 1.0);
    const double s12 = oracles::uniform(rng, -1.0, 1.0) * std::sqrt(s11 * s22);
    const Covariance2 cov(s11, s22, s12);
    for (int k = 0; k <= 10; ++k) {
      for (int l = 0; k + l <= 10; ++l) {
        const double p = moment_pairings(k, l, cov);
        const double r = moment_recursive(k, l, cov);
        const double c = moment_closed(k, l, cov);
        worst = std::max({worst, std::abs(p - r), std::abs(p - c), std::abs(r - c)});
      }
    }
  }
  return check_le("moment_triple_agreement", worst, 1e-9);
}

Check regime_equivalence(std::mt19937_64& rng) {
  int mismatches = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const Coupling c = oracles::random_coupling(rng);
    const GroupWeights w = oracles::random_weights(rng);
    const Regime r = classify_regime(c, w);
    if (std::abs(r.margin) <= kRegimeTolerance) continue;
    const bool high = r.tag == RegimeTag::HighTemperature;
    if (regime_matrix_form(c, w) != high || regime_hessian_form(c, w) != high) ++mismatches;
  }
  return check_le("regime_equivalence", mismatches, 0.0);
}

Check substitution_identity(std::mt19937_64& rng) {
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const Landscape ls = Landscape::from(oracles::random_coupling(rng), oracles::random_weights(rng));
    for (int a = 0; a <= 20; ++a) {
      for (int b = 0; b <= 20; ++b) {
        const double y1 = -2.0 + 0.2 * a;
        const double y2 = -2.0 + 0.2 * b;
        worst = std::max(worst, std::abs(eval_F_t(ls, std::tanh(y1), std::tanh(y2)) - 2.0 * eval_F_y(ls, y1, y2)));
      }
    }
  }
  return check_le("substitution_identity", worst, 1e-10);
}

Check covariance_consistency(std::mt19937_64& rng, bool corrupt_lbar) {
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = oracles::random_high_temperature(rng);
    const CltCovariance closed = clt_covariance(p.coupling, p.weights);
    Landscape ls = Landscape::from(p.coupling, p.weights);
    if (corrupt_lbar) ls.inv.lbar = -ls.inv.lbar;
    const CltCovariance via = clt_covariance_from_sigma(ls);
    worst = std::max({worst, rel_err(via.c11, closed.c11), rel_err(via.c22, closed.c22), rel_err(via.c12, closed.c12)});
  }
  return check_le("covariance_consistency", worst, 1e-10);
}

Check asymptotic_vs_closed(std::mt19937_64& rng) {
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = oracles::random_high_temperature(rng);
    const Landscape ls = Landscape::from(p.coupling, p.weights);
    const Covariance2 cov = clt_covariance(p.coupling, p.weights).as_covariance();
    for (int k = 0; k <= 10; ++k) {
      for (int l = 0; k + l <= 10; ++l) {
        worst = std::max(worst, rel_err(asymptotic_moment(ls, k, l), moment_closed(k, l, cov)));
      }
    }
  }
  return check_le("asymptotic_moment_vs_closed", worst, 1e-9);
}

Check combinatorics_total() {
  int mismatches = 0;
  for (int length = 1; length <= 6; ++length) {
    for (int n = 1; n <= 8; ++n) {
      BigInt total = 0;
      for (const auto& r : enumerate_profiles(length, n)) total += multiplicity(r);
      if (total != boost::multiprecision::pow(BigInt(n), static_cast<unsigned>(length))) ++mismatches;
    }
  }
  return check_le("combinatorics_total", mismatches, 0.0);
}

Check mstar_residual(std::mt19937_64& rng) {
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double j = oracles::uniform(rng, 0.2, 5.0);
    const double jbar = oracles::uniform(rng, 0.0, 0.95 * j);
    const double alpha = oracles::uniform(rng, 0.01, 0.5);
    const double m = special_case_mstar(j, jbar, alpha);
    const double res = m / (j + jbar) - std::numbers::sqrt2 * alpha * std::tanh(m / std::numbers::sqrt2);
    worst = std::max(worst, std::abs(res));
  }
  return check_le("mstar_residual", worst, 1e-10);
}

Check landscape_inequalities() {
  using boost::math::tools::brent_find_minima;
  constexpr double half_pi = std::numbers::pi / 2.0;
  const auto sc = brent_find_minima([](double t) { return -std::sin(t) * std::cos(t); }, 0.0, half_pi, 52);
  double worst = std::abs(-sc.second - 0.5);
  double sinh_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 5000; ++i) {
    const double x = 0.001 * i;
    sinh_gap = std::min(sinh_gap, std::sinh(x) * std::cosh(x) - x);
  }
  if (sinh_gap < 0.0) worst = std::max(worst, -sinh_gap);
  for (int i = 1; i < 1000; ++i) {
    if (!(tanh_ratio(0.01 * (i + 1)) < tanh_ratio(0.01 * i))) worst = std::max(worst, 1.0);
  }
  for (const double r : {0.5, 1.0, 2.0, 4.0}) {
    const auto best = brent_find_minima(
        [r](double t) { return -(std::log(std::cosh(r * std::sin(t))) + std::log(std::cosh(r * std::cos(t)))); },
        0.0, half_pi, 52);
    worst = std::max(worst, std::abs(best.first - std::numbers::pi / 4.0) > 1e-6 ? 1.0 : 0.0);
  }
  return check_le("landscape_inequalities", worst, 1e-12);
}

}  // namespace

Table cmd_validate(const ExperimentConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::vector<Check> checks;
  checks.push_back(exact_vs_brute_force(rng));
  checks.push_back(correlation_oracle(rng));
  checks.push_back(moment_triple(rng));
  checks.push_back(regime_equivalence(rng));
  checks.push_back(substitution_identity(rng));
  checks.push_back(covariance_consistency(rng, cfg.corrupt_lbar));
  checks.push_back(asymptotic_vs_closed(rng));
  checks.push_back(combinatorics_total());
  checks.push_back(mstar_residual(rng));
  checks.push_back(landscape_inequalities());
  Table t;
  t.columns = {"check", "passed", "measured", "tolerance"};
  for (const auto& c : checks) {
    t.rows.push_back({c.name, c.passed, c.measured, c.tolerance});
    t.passed = t.passed && c.passed;
  }
  return t;
}

Table cmd_sample(const ExperimentConfig& cfg) {
  check_sizes(cfg.sizes);
  const std::int64_t n = cfg.sizes.front();
  const MagnetizationTable table = exact_distribution(exact_model(cfg, n), cfg.coupling);
  if (!cfg.table_out.empty()) {
    std::ofstream f(cfg.table_out, std::ios::binary);
    if (!f) throw InvalidParameter("cannot open " + cfg.table_out);
    write_table_csv(table, f);
  }
  Table t;
  t.columns = {"draw", "s1", "s2"};
  const auto draws = sample(table, cfg.seed, cfg.count);
  for (std::size_t i = 0; i < draws.size(); ++i) {
    t.rows.push_back({static_cast<std::int64_t>(i), draws[i].first, draws[i].second});
  }
  return t;
}

// -------------------------------------------------------------- front end

namespace {

struct RawOptions {
  double j1 = 1.0, j2 = 1.0, jbar = 0.5;
  double alpha1 = 0.5, alpha2 = 0.5;
  std::vector<std::string> sizes{"250", "1000", "4000"};
  std::vector<std::string> moments;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "csv";
  bool sublinear = false;
  std::string grid = "jbar-alpha";
  double p1_min = 0.0, p1_max = 2.5, p2_min = 0.05, p2_max = 0.5;
  int p1_steps = 11, p2_steps = 10;
  std::size_t count = 1000;
  std::string table_out;
  bool corrupt_lbar = false;
};

std::string join(const std::vector<std::string>& items) {
  std::string s;
  for (const auto& item : items) s += (s.empty() ? "" : ",") + item;
  return s;
}

ExperimentConfig build_config(const RawOptions& o) {
  ExperimentConfig cfg;
  cfg.coupling = Coupling(o.j1, o.j2, o.jbar);
  cfg.weights = GroupWeights(o.alpha1, o.alpha2);
  cfg.sizes = parse_sizes(join(o.sizes));
  cfg.moments = parse_moments(join(o.moments));
  cfg.seed = o.seed;
  cfg.output_path = o.out;
  if (o.format == "csv") {
    cfg.format = Format::Csv;
  } else if (o.format == "json") {
    cfg.format = Format::Json;
  } else {
    throw InvalidParameter("format must be csv or json");
  }
  cfg.sublinear = o.sublinear;
  if (o.grid == "jbar-alpha") {
    cfg.grid = GridKind::JbarAlpha;
  } else if (o.grid == "j1-j2") {
    cfg.grid = GridKind::J1J2;
  } else {
    throw InvalidParameter("grid must be jbar-alpha or j1-j2");
  }
  cfg.p1 = {o.p1_min, o.p1_max, o.p1_steps};
  cfg.p2 = {o.p2_min, o.p2_max, o.p2_steps};
  cfg.count = o.count;
  cfg.table_out = o.table_out;
  cfg.corrupt_lbar = o.corrupt_lbar;
  return cfg;
}

using Command = Table (*)(const ExperimentConfig&);

const std::map<std::string, std::pair<Command, const char*>>& commands() {
  static const std::map<std::string, std::pair<Command, const char*>> table{
      {"regime", {cmd_regime, "Classify the regime and report all slacks and formulations"}},
      {"clt-convergence", {cmd_clt_convergence, "Exact sqrt-scaled moments against the limit covariance"}},
      {"lln", {cmd_lln, "Per-spin moments or atom masses of the magnetization table"}},
      {"special-case", {cmd_special_case, "Symmetric low temperature case: m* and atom masses"}},
      {"phase-grid", {cmd_phase_grid, "Sweep a parameter grid reporting regime and m*"}},
      {"laplace-check", {cmd_laplace_check, "Exact, Laplace-integral and asymptotic correlations"}},
      {"critical-scaling", {cmd_critical_scaling, "N^(3/4) moments at alpha1*J1 = 1"}},
      {"validate", {cmd_validate, "Run the invariant suite"}},
      {"sample", {cmd_sample, "Draw (S1, S2) samples from the exact table"}},
  };
  return table;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-group Curie-Weiss toolkit", "cwtg"};
  app.set_config("--config", "", "Flat key=value file mirroring the flags");
  app.require_subcommand(1, 1);
  RawOptions o;
  app.add_option("--j1", o.j1, "Within-group coupling J1")->capture_default_str();
  app.add_option("--j2", o.j2, "Within-group coupling J2")->capture_default_str();
  app.add_option("--jbar", o.jbar, "Cross-group coupling")->capture_default_str();
  app.add_option("--alpha1", o.alpha1, "Group 1 fraction")->capture_default_str();
  app.add_option("--alpha2", o.alpha2, "Group 2 fraction")->capture_default_str();
  app.add_option("--sizes", o.sizes, "Comma-separated, strictly increasing N values")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--moments", o.moments, "Comma-separated K:L orders")->delimiter(',');
  app.add_option("--seed", o.seed, "PRNG seed")->capture_default_str();
  app.add_option("--out", o.out, "Output file (default: standard output)");
  app.add_option("--format", o.format, "csv or json")->capture_default_str();
  app.add_flag("--sublinear", o.sublinear, "N1 = floor(sqrt N), targets with alpha = (0, 1)");
  app.add_option("--grid", o.grid, "phase-grid axes: jbar-alpha or j1-j2")->capture_default_str();
  app.add_option("--p1-min", o.p1_min, "phase-grid: first axis lower bound (Jbar or J1)")->capture_default_str();
  app.add_option("--p1-max", o.p1_max, "phase-grid: first axis upper bound")->capture_default_str();
  app.add_option("--p1-steps", o.p1_steps, "phase-grid: first axis point count")->capture_default_str();
  app.add_option("--p2-min", o.p2_min, "phase-grid: second axis lower bound (alpha or J2)")->capture_default_str();
  app.add_option("--p2-max", o.p2_max, "phase-grid: second axis upper bound")->capture_default_str();
  app.add_option("--p2-steps", o.p2_steps, "phase-grid: second axis point count")->capture_default_str();
  app.add_option("--count", o.count, "Number of draws for sample")->capture_default_str();
  app.add_option("--table-out", o.table_out, "sample: also write the exact table as CSV");
  app.add_flag("--corrupt-lbar", o.corrupt_lbar, "validate: flip the sign of Lbar (mutation test)");
  std::string chosen;
  for (const auto& [name, entry] : commands()) {
    app.add_subcommand(name, entry.second)->fallthrough()->callback([&chosen, n = name] { chosen = n; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    const ExperimentConfig cfg = build_config(o);
    const Table table = commands().at(chosen).first(cfg);
    std::ofstream file;
    if (!cfg.output_path.empty()) {
      file.open(cfg.output_path, std::ios::binary);
      if (!file) throw InvalidParameter("cannot open " + cfg.output_path);
    }
    std::ostream& sink = cfg.output_path.empty() ? out : file;
    if (cfg.format == Format::Json) {
      write_json(table, sink);
    } else {
      write_csv(table, sink);
    }
    if (!table.passed) {
      err << "cwtg: validation failed\n";
      return 1;
    }
    return 0;
  } catch (const QuadratureError& e) {
    err << "cwtg: " << e.what() << "\n";
    return 1;
  } catch (const ConvergenceError& e) {
    err << "cwtg: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "cwtg: " << e.what() << "\n";
    return 2;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("cwtg");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace cwtg::cli
