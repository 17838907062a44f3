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

#ifndef FIDSUS_CONFIG_HPP
#define FIDSUS_CONFIG_HPP

namespace fidsus {

/// Every numerical threshold used by the library. Acceptance tests and the
/// CLI read the same record, so changing a default here changes it everywhere.
struct Tolerances {
  // linalg_core
  double herm_tol = 1e-12;             // ||M - M^dag||_F <= herm_tol * max(1, ||M||_F)
  double jacobi_threshold = 1e-13;     // off-diagonal Frobenius stop, relative to ||H||_F
  int jacobi_max_sweeps = 100;
  double clip_tol = 1e-12;             // negative eigenvalues above -clip_tol are set to 0

  // gibbs / fidelity
  double degenerate_switch = 1e-7;     // |beta * Delta| below which pair kernels use series
  double kernel_series_switch = 1e-4;  // |x| below which tanh(x)/x uses its 3-term series
  double gap_tol = 1e-10;
  double trace_tol = 1e-10;
  double internal_form_tol = 1e-8;     // chi_F kernel form vs direct rho' form
  double quadrature_tol = 1e-6;        // chi_F^G closed form vs Gauss-Legendre
  double imag_residue_tol = 1e-12;
  double operator_herm_tol = 1e-10;    // operators already rotated into the T basis

  // bounds
  double dcomm_form_tol = 1e-9;
  double chi_n_oracle_tol = 1e-6;
  double chi_n_oracle_step = 1e-4;
  double sandwich_slack = 1e-10;

  // models
  int dimension_budget = 4096;
  double cutoff_shift_tol = 1e-4;
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

}  // namespace fidsus

#endif  // FIDSUS_CONFIG_HPP
