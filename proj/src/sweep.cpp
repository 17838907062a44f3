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

#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <string>

#include "fidsus/harness.hpp"

namespace fidsus {

const char* const kCsvHeader =
    "param,beta,chi_f,chi_f_classical,chi_f_quantum,ub,lb_paper,lb_aasc,chi_fg,ds2,bd,dcomm,"
    "chi_n,sandwich_ok,degenerate_pairs";

namespace {

void append(std::string& s, double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  s += buf;
  s += ',';
}

const ParamInfo* find_param(ModelKind kind, const std::string& name) {
  for (const ParamInfo& p : model_params(kind))
    if (p.name == name) return &p;
  return nullptr;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << text;
  out.close();
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace

std::vector<double> sweep_grid(double from, double to, int steps, SweepScale scale) {
  if (!(from < to) || !std::isfinite(from) || !std::isfinite(to))
    throw Error(ErrorCode::InvalidArgument, "sweep needs finite from < to");
  if (steps < 2) throw Error(ErrorCode::InvalidArgument, "sweep needs steps >= 2");
  if (scale == SweepScale::Log && !(from > 0))
    throw Error(ErrorCode::InvalidArgument, "log sweep needs from > 0");
  std::vector<double> grid(static_cast<std::size_t>(steps));
  const double last = steps - 1;
  for (int i = 0; i < steps; ++i) {
    const double f = i / last;
    grid[static_cast<std::size_t>(i)] =
        scale == SweepScale::Linear
            ? from + (to - from) * f
            : std::exp(std::log(from) + (std::log(to) - std::log(from)) * f);
  }
  grid.front() = from;
  grid.back() = to;
  return grid;
}

std::vector<SweepRow> compute_sweep(const SweepSpec& spec) {
  const ParamInfo* info = find_param(spec.model.kind, spec.param);
  if (!info) {
    throw Error(ErrorCode::InvalidArgument, "'" + spec.param + "' is not a parameter of " +
                                                kind_name(spec.model.kind));
  }
  std::vector<double> grid = sweep_grid(spec.from, spec.to, spec.steps, spec.scale);
  if (info->cutoff)
    for (double& g : grid) g = std::round(g);

  // A beta sweep diagonalizes T once.
  std::optional<BuiltModel> base;
  if (spec.param == "beta") base = build_model(spec.model);

  const auto count = static_cast<std::ptrdiff_t>(grid.size());
  std::vector<SweepRow> rows(grid.size());
  std::vector<std::exception_ptr> failures(grid.size());
  const PointOptions options{spec.oracle_checks, 64};

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      PerturbedFamily family;
      if (base) {
        family = with_beta(base->family, grid[k]);
      } else {
        ModelSpec point = spec.model;
        if (info->cutoff)
          point.cutoffs[spec.param] = static_cast<long long>(grid[k]);
        else
          point.parameters[spec.param] = grid[k];
        family = build_model(point).family;
      }
      const BoundReport b = evaluate_point(family, options).bounds;
      rows[k] = SweepRow{grid[k],      b.beta,         b.chi_f,     b.chi_f_classical,
                         b.chi_f_quantum, b.upper,     b.lower_dcomm, b.lower_green,
                         b.lower_green, b.ds2,          b.bd_product, b.dcomm,
                         b.chi_n,      b.sandwich_ok,  b.degenerate_pairs};
    } catch (...) {
      failures[k] = std::current_exception();
    }
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
  return rows;
}

std::string format_csv(const std::vector<SweepRow>& rows) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const SweepRow& r : rows) {
    for (double x : {r.param, r.beta, r.chi_f, r.chi_f_classical, r.chi_f_quantum, r.ub,
                     r.lb_dcomm, r.lb_green, r.chi_fg, r.ds2, r.bd, r.dcomm, r.chi_n})
      append(out, x);
    out += r.sandwich_ok ? "true," : "false,";
    out += std::to_string(r.degenerate_pairs);
    out += '\n';
  }
  return out;
}

void run_sweep(const SweepSpec& spec) {
  if (spec.csv_path.empty()) throw Error(ErrorCode::InvalidArgument, "sweep needs --out");
  const std::string csv = format_csv(compute_sweep(spec));
  try {
    write_file(spec.csv_path, csv);
    if (spec.svg_path) {
      write_file(*spec.svg_path,
                 render_svg(parse_csv(csv), {"chi_f", "ub", "lb_paper", "lb_aasc"}));
    }
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(spec.csv_path, ec);
    if (spec.svg_path) std::filesystem::remove(*spec.svg_path, ec);
    throw;
  }
}

}  // namespace fidsus
