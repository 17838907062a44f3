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

#include "fidsus/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fidsus {

double bd_inner_product(const PerturbedFamily& family, const Tolerances& tol, Exec exec) {
  const RVector& e = family.ensemble.energies();
  const RVector& p = family.ensemble.populations;
  const double beta = family.beta();
  // (1/2) sum_{m != n} (p_n - p_m) / X_mn |S_nm|^2 = sum_{m < n} 2 p_m (1 - e^{-y}) / y |S_mn|^2
  const double off = reduce_upper_pairs(
      family.dim(),
      [&](Index m, Index n) {
        const double s2 = std::norm(family.s_eig(m, n));
        if (s2 == 0.0) return 0.0;
        return 2.0 * p(m) * population_drop_ratio(beta * (e(n) - e(m)), tol.degenerate_switch) *
               s2;
      },
      exec);
  return off + diagonal_variance(family);
}

double bd_integral_oracle(const PerturbedFamily& family, int nodes) {
  if (nodes < 16) throw Error(ErrorCode::InvalidArgument, "bd_integral_oracle needs >= 16 nodes");
  const QuadratureRule rule = gauss_legendre(nodes, 0.0, 1.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double tau = std::min(rule.nodes[i] * family.beta(), family.beta());
    acc += rule.weights[i] * correlation_g(family, tau);
  }
  return acc;
}

DoubleCommutatorForms double_commutator_forms(const PerturbedFamily& family, Exec exec) {
  const RVector& e = family.ensemble.energies();
  const RVector& p = family.ensemble.populations;
  DoubleCommutatorForms out;
  // sum_{m != n} (p_n - p_m)(T_m - T_n)|S_nm|^2 = sum_{m < n} 2 (p_m - p_n)(E_n - E_m)|S_mn|^2
  out.spectral = reduce_upper_pairs(
      family.dim(),
      [&](Index m, Index n) {
        const double s2 = std::norm(family.s_eig(m, n));
        if (s2 == 0.0) return 0.0;
        const double delta = e(n) - e(m);
        return 2.0 * p(m) * -std::expm1(-family.beta() * delta) * delta * s2;
      },
      exec);

  const CMatrix t = e.cast<Complex>().asDiagonal();
  const CMatrix& s = family.s_eig;
  const CMatrix dc = commutator(commutator(s, t), s);
  out.direct = thermal_average(family, (dc + dc.adjoint()) / 2.0);
  return out;
}

double double_commutator(const PerturbedFamily& family, const Tolerances& tol, Exec exec) {
  const DoubleCommutatorForms f = double_commutator_forms(family, exec);
  if (std::abs(f.spectral - f.direct) > tol.dcomm_form_tol * std::max(1.0, std::abs(f.spectral))) {
    throw Error(ErrorCode::FormMismatch, "double commutator spectral " +
                                             std::to_string(f.spectral) + " vs direct " +
                                             std::to_string(f.direct));
  }
  return f.spectral;
}

double upper_bound(const PerturbedFamily& family, const Tolerances& tol) {
  const double beta = family.beta();
  return beta * beta / 4.0 * bd_inner_product(family, tol);
}

double lower_bound(const PerturbedFamily& family, const Tolerances& tol) {
  const double beta = family.beta();
  return upper_bound(family, tol) - beta * beta * beta / 48.0 * double_commutator(family, tol);
}

double thermo_susceptibility_fd(const PerturbedFamily& family, double h) {
  auto second = [&](double s) {
    return log_partition_even(family, s) / (s * s);
  };
  // -f'' = (1 / (beta N)) d^2 ln Z / dh^2
  const double d2 = (4.0 * second(h / 2.0) - second(h)) / 3.0;
  return d2 / (family.beta() * family.particle_count);
}

double thermo_susceptibility(const PerturbedFamily& family, bool verify, const Tolerances& tol) {
  const double chi =
      family.beta() / family.particle_count * bd_inner_product(family, tol);
  if (verify) {
    const double fd = thermo_susceptibility_fd(family, tol.chi_n_oracle_step);
    if (std::abs(fd - chi) > tol.chi_n_oracle_tol * std::max(std::abs(chi), 1e-300)) {
      throw Error(ErrorCode::OracleDisagreement,
                  "chi_N spectral " + std::to_string(chi) + " vs ln Z difference " +
                      std::to_string(fd));
    }
  }
  return chi;
}

bool sandwich_holds(double chi_f, double upper, double lower_dcomm, double lower_green,
                    double slack_rel) {
  const double slack = slack_rel * std::max(1.0, chi_f);
  const double floor = std::max({lower_dcomm, lower_green, 0.0});
  return floor - slack <= chi_f && chi_f <= upper + slack;
}

BoundReport bound_report(const PerturbedFamily& family, const ReportOptions& options,
                         const Tolerances& tol) {
  const double beta = family.beta();
  BoundReport r;
  r.beta = beta;
  r.particle_count = family.particle_count;
  r.bd_product = bd_inner_product(family, tol);
  r.dcomm = double_commutator(family, tol);
  r.upper = beta * beta / 4.0 * r.bd_product;
  r.lower_dcomm = r.upper - beta * beta * beta / 48.0 * r.dcomm;
  r.lower_green = chi_fg_spectral(family, tol);
  const FidelitySusceptibility chi = chi_f_spectral(family, tol);
  r.chi_f = chi.total;
  r.chi_f_classical = chi.classical;
  r.chi_f_quantum = chi.quantum;
  r.degenerate_pairs = chi.degenerate_pair_count;
  r.chi_n = options.verify_chi_n ? thermo_susceptibility(family, true, tol)
                                 : beta / family.particle_count * r.bd_product;
  r.ds2 = ds2_spectral(family, tol);
  r.sandwich_ok = sandwich_holds(r.chi_f, r.upper, r.lower_dcomm, r.lower_green, tol.sandwich_slack);
  if (family.particle_count > 1) {
    const double n = family.particle_count;
    r.per_particle = PerParticle{r.chi_f / n, r.upper / n,      r.lower_dcomm / n,
                                 r.lower_green / n, r.ds2 / n, r.dcomm / n};
  }
  return r;
}

}  // namespace fidsus
