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

#ifndef FIDSUS_FIDELITY_HPP
#define FIDSUS_FIDELITY_HPP

#include "fidsus/gibbs.hpp"

namespace fidsus {

// Pair sums follow two conventions. chi_F and the Bogoliubov-Duhamel product
// are written over ordered pairs m != n; ds^2 and chi_F^G over unordered pairs.
// All kernels are extended to equal eigenvalues by continuity, switching to
// their series when |beta * Delta| < Tolerances::degenerate_switch.

/// Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)), in [0, 1].
double uhlmann_fidelity(const CMatrix& rho1, const CMatrix& rho2,
                        const Tolerances& tol = default_tolerances());

/// Tr sqrt(rho1^{1/2} rho2^{1/2}), evaluated through the Hermitian similarity
/// rho1^{1/4} rho2^{1/2} rho1^{1/4}. Not normalized: for a mixed rho,
/// gf_fidelity(rho, rho) = Tr sqrt(rho) > 1.
double gf_fidelity(const CMatrix& rho1, const CMatrix& rho2,
                   const Tolerances& tol = default_tolerances());

/// sqrt(max(0, 2 - 2 F)).
double bures_distance(const CMatrix& rho1, const CMatrix& rho2,
                      const Tolerances& tol = default_tolerances());

/// d rho / dh at h = 0, in the T eigenbasis.
CMatrix rho_prime(const PerturbedFamily& family, const Tolerances& tol = default_tolerances());

struct FidelitySusceptibility {
  double total = 0.0;
  double classical = 0.0;  // (beta^2 / 4) <(delta S^d)^2>_0
  double quantum = 0.0;    // off-diagonal kernel sum, zero when [T, S] = 0
  int degenerate_pair_count = 0;
  double direct_form = 0.0;  // (1/2) sum |rho'_mn|^2 / (p_m + p_n), the cross-check
};

FidelitySusceptibility chi_f_spectral(const PerturbedFamily& family,
                                      const Tolerances& tol = default_tolerances(),
                                      Exec exec = Exec::Parallel);

/// F(rho(0), rho(h)) from the factored states (see the .cpp for why).
double family_fidelity(const PerturbedFamily& family, double h);

/// Finite-difference oracle: 2 - F(rho(0), rho(s)) - F(rho(0), rho(-s)) over
/// s^2 at s = h and h/2, Richardson-extrapolated.
double chi_f_fd(const PerturbedFamily& family, double h,
                const Tolerances& tol = default_tolerances());

struct TaylorDiagnostics {
  double trace_first = 0.0;   // |Tr rho'_fd|
  double trace_second = 0.0;  // |Tr rho''_fd|
  double remainder_h = 0.0;   // ||r_3(h)||_F / h^3
  double remainder_half = 0.0;  // ||r_3(h/2)||_F / (h/2)^3
};

TaylorDiagnostics rho_taylor_check(const PerturbedFamily& family, double h,
                                   const Tolerances& tol = default_tolerances());

/// Ground-state susceptibility sum_{n != 0} |S_n0|^2 / (T_n - T_0)^2.
double chi_f_ground_state(const PerturbedFamily& family,
                          const Tolerances& tol = default_tolerances());

/// Green's-function susceptibility from its spectral sum.
double chi_fg_spectral(const PerturbedFamily& family,
                       const Tolerances& tol = default_tolerances(),
                       Exec exec = Exec::Parallel);

struct GreenIntegral {
  double closed_form = 0.0;  // per-term integral of tau e^{a tau}
  double quadrature = 0.0;   // Gauss-Legendre on tau * G(S|tau)
};

/// int_0^{beta/2} tau G(S|tau) dtau, two ways. Throws QuadratureDisagreement
/// when they differ by more than quadrature_tol * max(1, |closed_form|).
GreenIntegral chi_fg_integral(const PerturbedFamily& family, int quad_nodes,
                              const Tolerances& tol = default_tolerances(),
                              Exec exec = Exec::Parallel);

/// Leading coefficient of the squared Bures distance. Equals chi_F.
double ds2_spectral(const PerturbedFamily& family, const Tolerances& tol = default_tolerances(),
                    Exec exec = Exec::Parallel);

}  // namespace fidsus

#endif  // FIDSUS_FIDELITY_HPP
