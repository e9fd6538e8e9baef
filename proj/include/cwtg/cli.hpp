// Copyright 2026 The cwtg Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

/**
 * @file cli.hpp
 * @brief Experiment configuration, tabular output, and the subcommands of the
 * `cwtg` driver. Every command returns a Table; `run` handles parsing,
 * writing and exit codes.
 */

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cwtg/model.hpp"

namespace cwtg::cli {

enum class Format { Csv, Json };
enum class GridKind { JbarAlpha, J1J2 };

struct GridAxis {
  double min = 0.0;
  double max = 1.0;
  int steps = 11;
  double at(int i) const noexcept;
};

struct ExperimentConfig {
  Coupling coupling{1.0, 1.0, 0.5};
  GroupWeights weights{0.5, 0.5};
  std::vector<std::int64_t> sizes{250, 1000, 4000};
  std::vector<std::pair<int, int>> moments;  ///< empty: command default
  std::uint64_t seed = 1;
  std::string output_path;  ///< empty: standard output
  Format format = Format::Csv;

  bool sublinear = false;  ///< N1 = floor(sqrt N), targets use alpha = (0, 1)
  GridKind grid = GridKind::JbarAlpha;
  GridAxis p1{0.0, 2.5, 11};
  GridAxis p2{0.05, 0.5, 10};
  std::size_t count = 1000;  ///< number of draws for `sample`
  std::string table_out;     ///< optional CSV export of the exact table
  bool corrupt_lbar = false; ///< validate: flip the sign of Lbar in one check
};

/// Group sizes for population n: (round(alpha1 n), round(alpha2 n)), or
/// (floor(sqrt n), n - floor(sqrt n)) in sublinear mode. Throws
/// InvalidParameter if a size is below 1 or, when `exact`, they miss n.
std::pair<std::int64_t, std::int64_t> group_sizes(const ExperimentConfig& cfg, std::int64_t n, bool exact);

/// Weights used for asymptotic targets.
GroupWeights target_weights(const ExperimentConfig& cfg);

/// Throws InvalidParameter unless sizes are nonempty and strictly increasing.
void check_sizes(const std::vector<std::int64_t>& sizes);

std::vector<std::int64_t> parse_sizes(const std::string& text);
/// "2:0,0:2,1:1" -> {(2,0),(0,2),(1,1)}.
std::vector<std::pair<int, int>> parse_moments(const std::string& text);

using Cell = std::variant<std::monostate, std::int64_t, double, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  bool passed = true;  ///< false makes the process exit with code 1
};

void write_csv(const Table& table, std::ostream& out);
void write_json(const Table& table, std::ostream& out);

Table cmd_regime(const ExperimentConfig& cfg);
Table cmd_clt_convergence(const ExperimentConfig& cfg);
Table cmd_lln(const ExperimentConfig& cfg);
Table cmd_special_case(const ExperimentConfig& cfg);
Table cmd_phase_grid(const ExperimentConfig& cfg);
Table cmd_laplace_check(const ExperimentConfig& cfg);
Table cmd_critical_scaling(const ExperimentConfig& cfg);
Table cmd_validate(const ExperimentConfig& cfg);
Table cmd_sample(const ExperimentConfig& cfg);

/// Parses argv, runs one subcommand and writes its table. Returns 0 on
/// success, 1 when validation fails and 2 on bad parameters.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
/// Same, with `args` excluding the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cwtg::cli
