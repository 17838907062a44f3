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

#ifndef FIDSUS_BOUNDS_HPP
#define FIDSUS_BOUNDS_HPP

#include <optional>

#include "fidsus/fidelity.hpp"
#include "fidsus/gibbs.hpp"
#include "fidsus/kernels.hpp"

namespace fidsus {

// kernel_xcothx_inv(x) = tanh(x)/x lives in kernels.hpp; both bounds below come
// from 1 - x^2/3 <= tanh(x)/x <= 1 applied term by term to chi_F.

/// Bogoliubov-Duhamel product (delta S; delta S)_0 from its spectral sum.
double bd_inner_product(const PerturbedFamily& family,
                        const Tolerances& tol = default_tolerances(),
                        Exec exec = Exec::Parallel);

/// Same quantity as int_0^1 <delta S(lambda beta) delta S>_0 d lambda by
/// Gauss-Legendre, with the integrand taken from correlation_g.
double bd_integral_oracle(const PerturbedFamily& family, int nodes);

struct DoubleCommutatorForms {
  double spectral = 0.0;
  double direct = 0.0;  // thermal average of the dense matrix [[S, T], S]
};

DoubleCommutatorForms double_commutator_forms(const PerturbedFamily& family,
                                              Exec exec = Exec::Parallel);

/// <[[S, T], S]>_0. Computed both ways; throws FormMismatch when they differ by
/// more than dcomm_form_tol * max(1, |spectral|).
double double_commutator(const PerturbedFamily& family,
                         const Tolerances& tol = default_tolerances(),
                         Exec exec = Exec::Parallel);

/// (beta^2 / 4) (delta S; delta S)_0.
double upper_bound(const PerturbedFamily& family, const Tolerances& tol = default_tolerances());

/// upper_bound - (beta^3 / 48) <[[S, T], S]>_0. May be negative.
double lower_bound(const PerturbedFamily& family, const Tolerances& tol = default_tolerances());

/// chi_N = (beta / N) (delta S; delta S)_0. With `verify`, cross-checked
/// against -d^2 f / dh^2, f = -ln Z(h) / (beta N).
double thermo_susceptibility(const PerturbedFamily& family, bool verify = true,
                             const Tolerances& tol = default_tolerances());

/// The finite-difference side of that check, Richardson over steps h and h/2.
double thermo_susceptibility_fd(const PerturbedFamily& family, double h);

struct PerParticle {
  double chi_f = 0.0;
  double upper = 0.0;
  double lower_dcomm = 0.0;
  double lower_green = 0.0;
  double ds2 = 0.0;
  double dcomm = 0.0;
};

struct BoundReport {
  double beta = 0.0;
  int particle_count = 1;
  double bd_product = 0.0;
  double dcomm = 0.0;
  double upper = 0.0;
  double lower_dcomm = 0.0;
  double lower_green = 0.0;  // chi_F^G
  double chi_f = 0.0;
  double chi_f_classical = 0.0;
  double chi_f_quantum = 0.0;
  double chi_n = 0.0;
  double ds2 = 0.0;
  bool sandwich_ok = false;
  int degenerate_pairs = 0;
  std::optional<PerParticle> per_particle;  // set when particle_count > 1
};

struct ReportOptions {
  bool verify_chi_n = true;  // run the ln Z finite-difference check
};

BoundReport bound_report(const PerturbedFamily& family, const ReportOptions& options = {},
                         const Tolerances& tol = default_tolerances());

/// max(lower_dcomm, lower_green, 0) - slack <= chi_f <= upper + slack,
/// slack = sandwich_slack * max(1, chi_f).
bool sandwich_holds(double chi_f, double upper, double lower_dcomm, double lower_green,
                    double slack_rel);

}  // namespace fidsus

#endif  // FIDSUS_BOUNDS_HPP
