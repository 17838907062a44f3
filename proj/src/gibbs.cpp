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

#include "fidsus/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fidsus {
namespace {

void check_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw Error(ErrorCode::NonPositiveBeta, "beta = " + std::to_string(beta));
  }
}

CMatrix hamiltonian_in_eigenbasis(const PerturbedFamily& family, double h) {
  CMatrix hh = -h * family.s_eig;
  hh.diagonal() += family.ensemble.energies().cast<Complex>();
  return hh;
}

}  // namespace

double normalize_boltzmann(const RVector& energies, double beta, RVector& log_populations) {
  const double e_min = energies.minCoeff();
  log_populations.resize(energies.size());
  double sum = 0.0;
  for (Index k = 0; k < energies.size(); ++k) {
    log_populations(k) = -beta * (energies(k) - e_min);
    sum += std::exp(log_populations(k));
  }
  const double lse = std::log(sum);
  log_populations.array() -= lse;
  return -beta * e_min + lse;
}

GibbsEnsemble build_gibbs(const HermitianOperator& t, double beta, const Tolerances& tol) {
  check_beta(beta);
  return build_gibbs(eig_hermitian(t, tol), beta);
}

GibbsEnsemble build_gibbs(SpectralDecomposition spectrum, double beta) {
  check_beta(beta);
  GibbsEnsemble ens;
  ens.beta = beta;
  ens.spectrum = std::move(spectrum);
  ens.log_z = normalize_boltzmann(ens.spectrum.eigenvalues, beta, ens.log_populations);
  ens.populations = ens.log_populations.array().exp();
  for (Index k = 0; k < ens.populations.size(); ++k)
    if (ens.populations(k) == 0.0) ens.diagnostics.population_underflow = true;
  return ens;
}

PerturbedFamily attach_perturbation(const GibbsEnsemble& ensemble, const HermitianOperator& s,
                                    int particle_count) {
  if (s.dim() != ensemble.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "dim(S) = " + std::to_string(s.dim()) +
                                                  ", dim(T) = " + std::to_string(ensemble.dim()));
  }
  if (particle_count < 1) {
    throw Error(ErrorCode::InvalidArgument, "particle count must be >= 1");
  }
  PerturbedFamily fam;
  fam.ensemble = ensemble;
  const CMatrix& v = ensemble.spectrum.basis;
  CMatrix rotated = v.adjoint() * s.matrix() * v;
  fam.s_eig = (rotated + rotated.adjoint()) / 2.0;
  fam.s_mean = 0.0;
  for (Index n = 0; n < fam.dim(); ++n)
    fam.s_mean += ensemble.populations(n) * fam.s_eig(n, n).real();
  fam.particle_count = particle_count;
  return fam;
}

PerturbedFamily with_beta(const PerturbedFamily& family, double beta) {
  PerturbedFamily out;
  out.ensemble = build_gibbs(family.ensemble.spectrum, beta);
  out.s_eig = family.s_eig;
  out.particle_count = family.particle_count;
  out.s_mean = 0.0;
  for (Index n = 0; n < out.dim(); ++n)
    out.s_mean += out.ensemble.populations(n) * out.s_eig(n, n).real();
  return out;
}

double thermal_average(const PerturbedFamily& family, const CMatrix& a_eig,
                       ThermalAverageDiagnostics* diagnostics, const Tolerances& tol) {
  if (a_eig.rows() != family.dim() || a_eig.cols() != family.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "operator does not match the family dimension");
  }
  if (hermitian_residual(a_eig) > tol.operator_herm_tol * std::max(1.0, a_eig.norm())) {
    throw Error(ErrorCode::AsymmetryExceedsTol, "thermal_average needs a Hermitian operator");
  }
  double re = 0.0;
  double im = 0.0;
  for (Index n = 0; n < family.dim(); ++n) {
    re += family.ensemble.populations(n) * a_eig(n, n).real();
    im += family.ensemble.populations(n) * a_eig(n, n).imag();
  }
  if (diagnostics != nullptr) diagnostics->imag_residue = std::abs(im);
  return re;
}

double diagonal_variance(const PerturbedFamily& family) {
  double acc = 0.0;
  for (Index m = 0; m < family.dim(); ++m) {
    const double d = family.s_eig(m, m).real() - family.s_mean;
    acc += family.ensemble.populations(m) * d * d;
  }
  return acc;
}

double correlation_g(const PerturbedFamily& family, double tau, Exec exec) {
  const double beta = family.beta();
  if (!(tau >= 0.0 && tau <= beta)) {
    throw Error(ErrorCode::TauOutOfRange,
                "tau = " + std::to_string(tau) + " outside [0, " + std::to_string(beta) + "]");
  }
  const RVector& e = family.ensemble.energies();
  const RVector& lp = family.ensemble.log_populations;
  // lp_m + tau (E_m - E_n) <= max(lp_m, lp_n) <= 0 for tau <= beta.
  const double off = reduce_ordered_pairs(
      family.dim(),
      [&](Index m, Index n) {
        return std::exp(lp(m) + tau * (e(m) - e(n))) * std::norm(family.s_eig(m, n));
      },
      exec);
  return off + diagonal_variance(family);
}

PerturbedSpectrum perturbed_spectrum(const PerturbedFamily& family, double h) {
  const HermitianOperator hh = validate_hermitian(hamiltonian_in_eigenbasis(family, h));
  SpectralDecomposition d = eig_hermitian(hh);
  PerturbedSpectrum out;
  normalize_boltzmann(d.eigenvalues, family.beta(), out.log_populations);
  out.basis = std::move(d.basis);
  return out;
}

CMatrix perturbed_state(const PerturbedFamily& family, double h) {
  const PerturbedSpectrum d = perturbed_spectrum(family, h);
  const RVector q = d.log_populations.array().exp();
  return d.basis * q.asDiagonal() * d.basis.adjoint();
}

double log_partition_ratio(const PerturbedFamily& family, double h) {
  if (h == 0.0) return 0.0;
  const RVector& lp = family.ensemble.log_populations;
  const RVector shift = jacobi_shifts(family.ensemble.energies(), -h * family.s_eig, Exec::Parallel);
  const double beta = family.beta();
  double near = 0.0;
  double worst = 0.0;
  for (Index n = 0; n < shift.size(); ++n) {
    near += family.ensemble.populations(n) * std::expm1(-beta * shift(n));
    worst = std::max(worst, std::abs(beta * shift(n)));
  }
  if (worst < 0.5) return std::log1p(near);
  double top = -std::numeric_limits<double>::infinity();
  for (Index n = 0; n < shift.size(); ++n) top = std::max(top, lp(n) - beta * shift(n));
  double acc = 0.0;
  for (Index n = 0; n < shift.size(); ++n) acc += std::exp(lp(n) - beta * shift(n) - top);
  return top + std::log(acc);
}

namespace {

// ln sum_n p_n e^{-beta (d_n - mean)} with mean = sum_n p_n d_n.
double centered_log_sum(const PerturbedFamily& family, const RVector& shift, double mean) {
  const double beta = family.beta();
  const RVector& p = family.ensemble.populations;
  const RVector& lp = family.ensemble.log_populations;
  double near = 0.0;
  double worst = 0.0;
  for (Index n = 0; n < shift.size(); ++n) {
    const double a = -beta * (shift(n) - mean);
    near += p(n) * std::expm1(a);
    worst = std::max(worst, std::abs(a));
  }
  if (worst < 0.5) return std::log1p(near);
  double top = -std::numeric_limits<double>::infinity();
  for (Index n = 0; n < shift.size(); ++n) top = std::max(top, lp(n) - beta * (shift(n) - mean));
  double acc = 0.0;
  for (Index n = 0; n < shift.size(); ++n) acc += std::exp(lp(n) - beta * (shift(n) - mean) - top);
  return top + std::log(acc);
}

}  // namespace

double log_partition_even(const PerturbedFamily& family, double h) {
  if (h == 0.0) return 0.0;
  const RVector& e = family.ensemble.energies();
  const RVector& p = family.ensemble.populations;
  const RVector up = jacobi_shifts(e, -h * family.s_eig, Exec::Parallel);
  const RVector down = jacobi_shifts(e, h * family.s_eig, Exec::Parallel);
  double mean_up = 0.0;
  double mean_down = 0.0;
  double mean_sum = 0.0;
  for (Index n = 0; n < up.size(); ++n) {
    mean_up += p(n) * up(n);
    mean_down += p(n) * down(n);
    mean_sum += p(n) * (up(n) + down(n));
  }
  return -family.beta() * mean_sum + centered_log_sum(family, up, mean_up) +
         centered_log_sum(family, down, mean_down);
}

double log_partition(const PerturbedFamily& family, double h) {
  return family.ensemble.log_z + log_partition_ratio(family, h);
}

}  // namespace fidsus
