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

#ifndef FIDSUS_GIBBS_HPP
#define FIDSUS_GIBBS_HPP

#include "fidsus/kernels.hpp"
#include "fidsus/linalg.hpp"

namespace fidsus {

struct GibbsDiagnostics {
  // Some p_n underflowed to exactly 0 (allowed only when dim * p_min < 1e-300).
  bool population_underflow = false;
};

/// rho(0) = exp(-beta T) / Z in the eigenbasis of T.
struct GibbsEnsemble {
  double beta = 1.0;
  SpectralDecomposition spectrum;
  RVector populations;      // p_n, nonincreasing
  RVector log_populations;  // ln p_n, finite even where p_n underflows
  double log_z = 0.0;
  GibbsDiagnostics diagnostics;

  Index dim() const noexcept { return spectrum.dim(); }
  const RVector& energies() const noexcept { return spectrum.eigenvalues; }
};

/// The Gibbs family H(h) = T - h S at h = 0, with S rotated into the T basis.
/// The original basis is not kept: every downstream formula works in this one.
struct PerturbedFamily {
  GibbsEnsemble ensemble;
  CMatrix s_eig;        // S in the T eigenbasis
  double s_mean = 0.0;  // <S>_0
  int particle_count = 1;

  Index dim() const noexcept { return ensemble.dim(); }
  double beta() const noexcept { return ensemble.beta; }
};

GibbsEnsemble build_gibbs(const HermitianOperator& t, double beta,
                          const Tolerances& tol = default_tolerances());

/// Same as above for an already diagonalized T (beta sweeps reuse the spectrum).
GibbsEnsemble build_gibbs(SpectralDecomposition spectrum, double beta);

PerturbedFamily attach_perturbation(const GibbsEnsemble& ensemble, const HermitianOperator& s,
                                    int particle_count = 1);

/// Rebuilds the populations at a new beta; spectrum and S_eig are reused.
PerturbedFamily with_beta(const PerturbedFamily& family, double beta);

struct ThermalAverageDiagnostics {
  double imag_residue = 0.0;
};

/// sum_n p_n Re A[n, n] for A given in the T eigenbasis.
double thermal_average(const PerturbedFamily& family, const CMatrix& a_eig,
                       ThermalAverageDiagnostics* diagnostics = nullptr,
                       const Tolerances& tol = default_tolerances());

/// G(S|tau) = <S(tau) S>_0 - <S>_0^2 with S(tau) = e^{tau T} S e^{-tau T},
/// for 0 <= tau <= beta.
double correlation_g(const PerturbedFamily& family, double tau, Exec exec = Exec::Parallel);

/// Weighted variance of the diagonal part of S, <(delta S^d)^2>_0.
double diagonal_variance(const PerturbedFamily& family);

/// rho(h) = exp(-beta (T - h S)) / Z(h), returned in the T eigenbasis.
CMatrix perturbed_state(const PerturbedFamily& family, double h);

/// rho(h) = V diag(q) V^dag in factored form, V in the T eigenbasis.
struct PerturbedSpectrum {
  RVector log_populations;  // ln q
  CMatrix basis;            // V
};

PerturbedSpectrum perturbed_spectrum(const PerturbedFamily& family, double h);

/// ln Z(h) for H(h) = T - h S.
double log_partition(const PerturbedFamily& family, double h);

/// ln Z(h) - ln Z(0) from the eigenvalue shifts of T - h S, accurate to relative
/// precision even when the difference is far below ln Z.
double log_partition_ratio(const PerturbedFamily& family, double h);

/// ln Z(h) + ln Z(-h) - 2 ln Z(0). Each side is split into the mean shift
/// -beta <delta> and a centered log-sum, so the first-order terms cancel per
/// level before any rounding of the sum.
double log_partition_even(const PerturbedFamily& family, double h);

/// Log-sum-exp normalization of Boltzmann weights for ascending energies.
/// Returns ln Z and fills log populations.
double normalize_boltzmann(const RVector& energies, double beta, RVector& log_populations);

}  // namespace fidsus

#endif  // FIDSUS_GIBBS_HPP
