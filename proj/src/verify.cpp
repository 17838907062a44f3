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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "fidsus/fidelity.hpp"
#include "fidsus/harness.hpp"

namespace fidsus {

namespace {

constexpr double kNotApplicable = std::numeric_limits<double>::quiet_NaN();
constexpr double kFailed = -std::numeric_limits<double>::infinity();

// Hard checks on random families, in output order.
enum RandomCheck {
  kInternalForms,
  kSandwichUpper,
  kSandwichLower,
  kDs2EqualsChiF,
  kChiFgQuadrature,
  kChiFgBetweenHalfDs2AndDs2,
  kChiFgBelowChiF,
  kBdIntegral,
  kChiNLnZ,
  kChiFFiniteDifference,
  kDcommNonnegative,
  kSplitNonnegative,
  kTraceRhoPrime,
  kCommutingSaturation,
  kRandomCheckCount
};

const char* const kRandomNames[kRandomCheckCount] = {
    "internal_forms",
    "sandwich_upper",
    "sandwich_lower",
    "ds2_equals_chi_f",
    "chi_fg_quadrature",
    "chi_fg_between_half_ds2_and_ds2",
    "chi_fg_below_chi_f",
    "bd_integral_oracle",
    "chi_n_ln_z_oracle",
    "chi_f_finite_difference",
    "dcomm_nonnegative",
    "classical_quantum_nonnegative",
    "trace_rho_prime",
    "commuting_saturation",
};

struct Tally {
  std::string name;
  long checked = 0;
  long failed = 0;
  double worst = std::numeric_limits<double>::infinity();
  std::string first_error;

  void add(double margin, const std::string& error = {}) {
    if (std::isnan(margin)) return;
    ++checked;
    worst = std::min(worst, margin);
    if (!(margin >= 0.0)) {
      ++failed;
      if (first_error.empty()) first_error = error;
    }
  }
};

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

using Margins = std::array<double, kRandomCheckCount>;

struct InstanceResult {
  Margins margins;
  std::string error;
};

// All checks that need the full report on one family.
void check_family(const PerturbedFamily& fam, Margins& m, std::string& error, bool fd_oracle) {
  const Tolerances& tol = default_tolerances();
  BoundReport b;
  try {
    b = bound_report(fam, ReportOptions{false}, tol);
    m[kInternalForms] = 0.0;
  } catch (const Error& e) {
    m[kInternalForms] = kFailed;
    error = e.what();
    return;
  }
  const double slack = tol.sandwich_slack * std::max(1.0, b.chi_f);
  m[kSandwichUpper] = b.upper + slack - b.chi_f;
  m[kSandwichLower] = b.chi_f - (std::max({b.lower_dcomm, b.lower_green, 0.0}) - slack);
  m[kDs2EqualsChiF] = 1e-10 * std::abs(b.chi_f) - std::abs(b.ds2 - b.chi_f);
  const double s12 = 1e-12 * std::max(1.0, b.ds2);
  m[kChiFgBetweenHalfDs2AndDs2] =
      std::min(b.lower_green - (0.5 * b.ds2 - s12), b.ds2 + s12 - b.lower_green);
  m[kChiFgBelowChiF] = b.chi_f + 1e-12 * std::max(1.0, b.chi_f) - b.lower_green;
  m[kDcommNonnegative] = b.dcomm + 1e-12 * std::max(1.0, std::abs(b.dcomm));
  m[kSplitNonnegative] = std::min(b.chi_f_classical, b.chi_f_quantum);

  try {
    const GreenIntegral g = chi_fg_integral(fam, 64, tol);
    m[kChiFgQuadrature] = 1e-8 - std::abs(g.closed_form - g.quadrature);
  } catch (const Error& e) {
    m[kChiFgQuadrature] = kFailed;
    error = e.what();
  }
  const double bd_quad = bd_integral_oracle(fam, 64);
  m[kBdIntegral] = 1e-9 * std::max(1.0, b.bd_product) - std::abs(b.bd_product - bd_quad);
  const double chi_n_fd = thermo_susceptibility_fd(fam, tol.chi_n_oracle_step);
  m[kChiNLnZ] = 1e-6 * std::abs(b.chi_n) - std::abs(b.chi_n - chi_n_fd);
  if (fd_oracle) {
    try {
      const double fd = chi_f_fd(fam, 1e-2, tol);
      m[kChiFFiniteDifference] = 1e-6 * std::abs(b.chi_f) - std::abs(fd - b.chi_f);
    } catch (const Error& e) {
      m[kChiFFiniteDifference] = kFailed;
      error = e.what();
    }
  }
  m[kTraceRhoPrime] = 1e-10 - std::abs(rho_prime(fam, tol).trace());
}

InstanceResult random_instance(int dim, std::uint64_t seed, double beta) {
  InstanceResult r;
  r.margins.fill(kNotApplicable);
  const PerturbedFamily fam = random_pair(dim, seed, 1.0, 1.0, beta).family;
  check_family(fam, r.margins, r.error, dim <= 8);
  return r;
}

// [T, S] = 0: T and S diagonal in a shared random basis.
InstanceResult commuting_instance(int dim, std::uint64_t seed, double beta) {
  InstanceResult r;
  r.margins.fill(kNotApplicable);
  std::mt19937_64 rng(seed);
  const OperatorPair g = random_operators(dim, seed, 1.0, 1.0);
  const CMatrix u = eig_hermitian(validate_hermitian(g.t)).basis;
  RVector t(dim), s(dim);
  for (int i = 0; i < dim; ++i) {
    t(i) = 4.0 * uniform01(rng) - 2.0;
    s(i) = 2.0 * uniform01(rng) - 1.0;
  }
  OperatorPair ops;
  ops.t = u * t.cast<Complex>().asDiagonal() * u.adjoint();
  ops.s = u * s.cast<Complex>().asDiagonal() * u.adjoint();
  const PerturbedFamily fam = build_from_operators(ops, beta).family;

  // Var(S) straight from the drawn eigenvalues.
  double z = 0.0, t_min = t.minCoeff();
  for (int i = 0; i < dim; ++i) z += std::exp(-beta * (t(i) - t_min));
  double m1 = 0.0, m2 = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double p = std::exp(-beta * (t(i) - t_min)) / z;
    m1 += p * s(i);
    m2 += p * s(i) * s(i);
  }
  const double expected = beta * beta / 4.0 * (m2 - m1 * m1);
  try {
    const BoundReport b = bound_report(fam, ReportOptions{false});
    const double worst = std::max({std::abs(b.upper - b.chi_f), std::abs(b.lower_dcomm - b.chi_f),
                                   std::abs(b.chi_f - expected),
                                   std::abs(b.lower_green - b.chi_f / 2.0)});
    r.margins[kCommutingSaturation] = 1e-12 * std::max(1.0, expected) - worst;
  } catch (const Error& e) {
    r.margins[kCommutingSaturation] = kFailed;
    r.error = e.what();
  }
  return r;
}

std::string fmt_margin(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

void print_line(std::string& out, const char* status, const std::string& name, long n,
                const std::string& tail) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-6s %-34s n=%-6ld %s\n", status, name.c_str(), n, tail.c_str());
  out += buf;
}

}  // namespace

VerifyOutcome run_verify(const VerifyOptions& options) {
  if (options.instances < 1) throw Error(ErrorCode::InvalidArgument, "instances must be >= 1");
  if (options.dim_max < 2 || options.dim_max > 16)
    throw Error(ErrorCode::InvalidArgument, "dim_max must be in [2, 16]");

  struct Draw {
    int dim;
    std::uint64_t seed;
    double beta;
  };
  std::mt19937_64 master(options.seed);
  const int commuting = std::max(1, options.instances / 10);
  std::vector<Draw> draws;
  for (int i = 0; i < options.instances + commuting; ++i) {
    Draw d;
    d.dim = 2 + static_cast<int>(master() % static_cast<std::uint64_t>(options.dim_max - 1));
    d.seed = master();
    d.beta = std::pow(10.0, 2.0 * uniform01(master) - 1.0);  // [0.1, 10]
    draws.push_back(d);
  }

  std::vector<InstanceResult> results(draws.size());
  const auto count = static_cast<std::ptrdiff_t>(draws.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const Draw& d = draws[static_cast<std::size_t>(i)];
    try {
      results[static_cast<std::size_t>(i)] = i < options.instances
                                                 ? random_instance(d.dim, d.seed, d.beta)
                                                 : commuting_instance(d.dim, d.seed, d.beta);
    } catch (const std::exception& e) {
      InstanceResult r;
      r.margins.fill(kNotApplicable);
      r.margins[kInternalForms] = kFailed;
      r.error = e.what();
      results[static_cast<std::size_t>(i)] = r;
    }
  }

  std::vector<Tally> tallies(kRandomCheckCount);
  for (int c = 0; c < kRandomCheckCount; ++c) tallies[static_cast<std::size_t>(c)].name = kRandomNames[c];
  for (std::size_t i = 0; i < results.size(); ++i)
    for (int c = 0; c < kRandomCheckCount; ++c)
      tallies[static_cast<std::size_t>(c)].add(results[i].margins[static_cast<std::size_t>(c)],
                                               results[i].error);

  // Builders at pinned parameters.
  auto pinned = [&](const std::string& name, auto&& fn) {
    Tally t;
    t.name = name;
    try {
      t.add(fn());
    } catch (const std::exception& e) {
      t.add(kFailed, e.what());
    }
    tallies.push_back(t);
  };
  auto sandwich_margin = [](const BoundReport& b) {
    const double slack = default_tolerances().sandwich_slack * std::max(1.0, b.chi_f);
    return std::min(b.upper + slack - b.chi_f,
                    b.chi_f - (std::max({b.lower_dcomm, b.lower_green, 0.0}) - slack));
  };
  pinned("single_spin_closed_forms", [] {
    double worst = 0.0;
    for (double h3 : {0.5, 1.0, 2.0, 3.0}) {
      const BuiltModel m = single_spin(h3);
      const BoundReport b = bound_report(m.family);
      const SingleSpinClosedForm& c = *m.closed_form;
      worst = std::max({worst, std::abs(b.chi_f - c.chi_f), std::abs(b.bd_product - c.bd),
                        std::abs(b.dcomm - c.dcomm), std::abs(b.lower_dcomm - c.lower),
                        std::abs(b.lower_green - c.chi_fg)});
    }
    return 1e-12 - worst;
  });
  pinned("single_spin_sandwich_h3_2", [&] {
    return sandwich_margin(bound_report(single_spin(2.0).family));
  });
  DickeParams dp;
  dp.atoms = 2;
  dp.n_max = 12;
  dp.probe_cutoff = false;
  std::optional<BoundReport> dicke_report;
  pinned("dicke_sandwich", [&] {
    dicke_report = bound_report(dicke(dp).family);
    return sandwich_margin(*dicke_report);
  });
  pinned("dicke_per_atom_bounds", [&] {
    if (!dicke_report) throw Error(ErrorCode::InvalidArgument, "dicke report unavailable");
    const BoundReport& b = *dicke_report;
    const double n = b.particle_count;
    const double upper = b.beta / 4.0 * b.chi_n;
    const double lower = upper - b.beta * b.beta * b.beta * b.dcomm / (48.0 * n);
    return std::min(upper + 1e-10 - b.chi_f / n, b.chi_f / n - (lower - 1e-10));
  });
  KondoParams kp;
  kp.mode_energies = {-0.5, 0.5};
  kp.coupling = 0.7;
  kp.beta = 2.0;
  std::optional<PerturbedFamily> kondo_family;
  pinned("kondo_sandwich", [&] {
    kondo_family = kondo_toy(kp).family;
    return sandwich_margin(bound_report(*kondo_family));
  });
  pinned("kondo_rotational_invariance", [&] {
    if (!kondo_family) throw Error(ErrorCode::InvalidArgument, "kondo family unavailable");
    const double s = 0.5;
    const double m2 = thermal_average(*kondo_family, kondo_family->s_eig * kondo_family->s_eig);
    return std::min(1e-12 - std::abs(kondo_family->s_mean),
                    1e-10 - std::abs(m2 - s * (s + 1.0) / 3.0));
  });

  std::string out;
  char head[200];
  std::snprintf(head, sizeof head, "verify seed=%llu instances=%d dim_max=%d commuting=%d\n",
                static_cast<unsigned long long>(options.seed), options.instances, options.dim_max,
                commuting);
  out += head;
  long passed = 0;
  for (const Tally& t : tallies) {
    const bool ok = t.failed == 0 && t.checked > 0;
    passed += ok;
    std::string tail = "worst_margin=" + (t.checked ? fmt_margin(t.worst) : std::string("n/a"));
    if (t.failed) tail += " failures=" + std::to_string(t.failed);
    print_line(out, ok ? "PASS" : "FAIL", t.name, t.checked, tail);
    if (!t.first_error.empty() && t.failed) out += "       first error: " + t.first_error + "\n";
  }

  // Reported, not asserted.
  try {
    if (kondo_family) {
      const RoepstorffCheck rc = kondo_roepstorff_check(*kondo_family, kp.coupling, 1);
      print_line(out, "REPORT", "roepstorff_dcomm", 1,
                 "dcomm=" + fmt_margin(rc.dcomm) + " cap=" + fmt_margin(rc.dcomm_cap) +
                     (rc.dcomm_ok ? " within" : " outside"));
      print_line(out, "REPORT", "roepstorff_bd", 1,
                 "beta_bd=" + fmt_margin(rc.beta_bd) + " range=[" + fmt_margin(rc.bd_floor) + ", " +
                     fmt_margin(rc.bd_cap) + "]" + (rc.bd_ok ? " within" : " outside"));
    }
    if (dicke_report) {
      const double constant = dicke_report->dcomm / (dicke_report->particle_count * dp.omega);
      print_line(out, "REPORT", "dicke_dcomm_over_N_omega", 1, "value=" + fmt_margin(constant));
    }
  } catch (const std::exception& e) {
    out += "REPORT error: " + std::string(e.what()) + "\n";
  }

  const long total = static_cast<long>(tallies.size());
  char tail[120];
  std::snprintf(tail, sizeof tail, "%ld/%ld hard checks passed\n", passed, total);
  out += tail;
  return VerifyOutcome{out, passed == total};
}

}  // namespace fidsus
