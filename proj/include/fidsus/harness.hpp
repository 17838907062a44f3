// Copyright 2026 The fidsus Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FIDSUS_HARNESS_HPP
#define FIDSUS_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fidsus/bounds.hpp"
#include "fidsus/models.hpp"

namespace fidsus {

/// Everything computed for one model point, after the internal cross-checks
/// (rho' form, double-commutator forms, ln Z oracle, chi_F^G quadrature, ds^2).
struct PointReport {
  BoundReport bounds;
  double chi_fg_quadrature = 0.0;
};

struct PointOptions {
  bool oracle_checks = true;  // ln Z oracle and chi_F^G quadrature
  int quad_nodes = 64;
};

PointReport evaluate_point(const PerturbedFamily& family, const PointOptions& options = {},
                           const Tolerances& tol = default_tolerances());

/// Renders a report and returns the process exit code: 0 ok, 1 error,
/// 2 failed consistency check (including a violated bound sandwich).
int run_report(const ModelSpec& spec, bool json, std::ostream& out, std::ostream& err);

enum class SweepScale { Linear, Log };

struct SweepSpec {
  ModelSpec model;
  std::string param;
  double from = 0.0;
  double to = 1.0;
  int steps = 2;
  SweepScale scale = SweepScale::Linear;
  std::string csv_path;
  std::optional<std::string> svg_path;
  bool oracle_checks = true;
};

struct SweepRow {
  double param = 0.0;
  double beta = 0.0;
  double chi_f = 0.0;
  double chi_f_classical = 0.0;
  double chi_f_quantum = 0.0;
  double ub = 0.0;
  double lb_dcomm = 0.0;
  double lb_green = 0.0;
  double chi_fg = 0.0;
  double ds2 = 0.0;
  double bd = 0.0;
  double dcomm = 0.0;
  double chi_n = 0.0;
  bool sandwich_ok = false;
  int degenerate_pairs = 0;
};

extern const char* const kCsvHeader;

std::vector<double> sweep_grid(double from, double to, int steps, SweepScale scale);

/// Points are evaluated concurrently; rows come back in grid order.
std::vector<SweepRow> compute_sweep(const SweepSpec& spec);
std::string format_csv(const std::vector<SweepRow>& rows);

/// Writes the CSV (and SVG when requested). Nothing is left behind on failure.
void run_sweep(const SweepSpec& spec);

struct VerifyOptions {
  std::uint64_t seed = 42;
  int instances = 100;
  int dim_max = 12;
};

struct VerifyOutcome {
  std::string summary;
  bool all_pass = false;
};

VerifyOutcome run_verify(const VerifyOptions& options);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;  // non-numeric cells read as 1 (true) or 0
};

CsvTable parse_csv(const std::string& text);

/// Line plot of `columns` against the first column. Throws MissingColumn, EmptyData.
std::string render_svg(const CsvTable& table, const std::vector<std::string>& columns);
void emit_plot(const std::string& csv_path, const std::vector<std::string>& columns,
               const std::string& svg_path);

std::string models_listing();

}  // namespace fidsus

#endif  // FIDSUS_HARNESS_HPP
