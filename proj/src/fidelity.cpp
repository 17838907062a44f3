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

#include "fidsus/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fidsus {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

HermitianOperator as_density(const CMatrix& rho, const Tolerances& tol) {
  HermitianOperator h = [&] {
    try {
      return validate_hermitian(rho, tol.herm_tol);
    } catch (const Error& e) {
      throw Error(ErrorCode::NotDensityMatrix, e.what());
    }
  }();
  const double tr = h.matrix().trace().real();
  if (std::abs(tr - 1.0) > tol.trace_tol) {
    throw Error(ErrorCode::NotDensityMatrix, "trace = " + std::to_string(tr));
  }
  return h;
}

// Sum of sqrt(lambda) over a PSD operator's spectrum, clipping roundoff negatives.
double trace_sqrt(const CMatrix& a, const Tolerances& tol) {
  const SpectralDecomposition d = eig_hermitian(validate_hermitian((a + a.adjoint()) / 2.0), tol);
  const double scale = std::max(1.0, d.eigenvalues.cwiseAbs().maxCoeff());
  double acc = 0.0;
  for (Index i = 0; i < d.dim(); ++i) {
    const double v = d.eigenvalues(i);
    if (v < -tol.clip_tol * scale) {
      throw Error(ErrorCode::NotDensityMatrix, "negative eigenvalue " + std::to_string(v));
    }
    acc += std::sqrt(std::max(v, 0.0));
  }
  return acc;
}

CMatrix density_power(const HermitianOperator& rho, double power, const Tolerances& tol) {
  const SpectralDecomposition d = eig_hermitian(rho, tol);
  for (Index i = 0; i < d.dim(); ++i) {
    if (d.eigenvalues(i) < -tol.clip_tol) {
      throw Error(ErrorCode::NotDensityMatrix,
                  "negative eigenvalue " + std::to_string(d.eigenvalues(i)));
    }
  }
  return apply_spectral_function(
      d, [power](double v) { return v > 0.0 ? std::pow(v, power) : 0.0; });
}

// int_0^1 t e^{u t} dt = sum_k u^k / (k! (k + 2)), for |u| < 1.
double ramp_exp_integral_series(double u) {
  double term = 1.0;
  double acc = 0.5;
  for (int k = 1; k < 30; ++k) {
    term *= u / k;
    acc += term / (k + 2);
  }
  return acc;
}

// Lower-energy index first: ascending spectrum means e(n) >= e(m) for n > m.
struct PairGeometry {
  double delta;  // E_n - E_m >= 0
  double y;      // beta * delta
  double s2;     // |S_mn|^2
  double p_low;  // p_m
};

inline PairGeometry pair_geometry(const PerturbedFamily& f, Index m, Index n) {
  const RVector& e = f.ensemble.energies();
  const double delta = e(n) - e(m);
  return {delta, f.beta() * delta, std::norm(f.s_eig(m, n)), f.ensemble.populations(m)};
}

}  // namespace

double uhlmann_fidelity(const CMatrix& rho1, const CMatrix& rho2, const Tolerances& tol) {
  const HermitianOperator r1 = as_density(rho1, tol);
  const HermitianOperator r2 = as_density(rho2, tol);
  if (r1.dim() != r2.dim()) throw Error(ErrorCode::DimensionMismatch, "fidelity operands");
  const CMatrix sq1 = density_power(r1, 0.5, tol);
  return trace_sqrt(sq1 * r2.matrix() * sq1, tol);
}

double gf_fidelity(const CMatrix& rho1, const CMatrix& rho2, const Tolerances& tol) {
  const HermitianOperator r1 = as_density(rho1, tol);
  const HermitianOperator r2 = as_density(rho2, tol);
  if (r1.dim() != r2.dim()) throw Error(ErrorCode::DimensionMismatch, "fidelity operands");
  const CMatrix q1 = density_power(r1, 0.25, tol);
  const CMatrix h2 = density_power(r2, 0.5, tol);
  return trace_sqrt(q1 * h2 * q1, tol);
}

double bures_distance(const CMatrix& rho1, const CMatrix& rho2, const Tolerances& tol) {
  const double f = uhlmann_fidelity(rho1, rho2, tol);
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * f));
}

CMatrix rho_prime(const PerturbedFamily& family, const Tolerances& tol) {
  const Index dim = family.dim();
  const double beta = family.beta();
  const RVector& p = family.ensemble.populations;
  CMatrix out = CMatrix::Zero(dim, dim);
  for (Index m = 0; m < dim; ++m) {
    out(m, m) = beta * p(m) * (family.s_eig(m, m).real() - family.s_mean);
    for (Index n = m + 1; n < dim; ++n) {
      const PairGeometry g = pair_geometry(family, m, n);
      // (p_m - p_n) / (T_n - T_m), symmetric in (m, n).
      const double k = beta * g.p_low * population_drop_ratio(g.y, tol.degenerate_switch);
      out(m, n) = k * family.s_eig(m, n);
      out(n, m) = k * family.s_eig(n, m);
    }
  }
  return out;
}

FidelitySusceptibility chi_f_spectral(const PerturbedFamily& family, const Tolerances& tol,
                                      Exec exec) {
  const double beta = family.beta();
  const double b2 = beta * beta;
  FidelitySusceptibility out;
  out.classical = b2 / 4.0 * diagonal_variance(family);
  out.quantum = reduce_upper_pairs(
      family.dim(),
      [&](Index m, Index n) {
        const PairGeometry g = pair_geometry(family, m, n);
        if (g.s2 == 0.0) return 0.0;
        return b2 / 2.0 * g.p_low * population_drop_ratio(g.y, tol.degenerate_switch) *
               kernel_xcothx_inv(g.y / 2.0, tol.kernel_series_switch) * g.s2;
      },
      exec);
  out.total = out.classical + out.quantum;

  const RVector& e = family.ensemble.energies();
  for (Index m = 0; m < family.dim(); ++m)
    for (Index n = m + 1; n < family.dim(); ++n)
      if (beta * (e(n) - e(m)) < tol.degenerate_switch) ++out.degenerate_pair_count;

  const CMatrix rp = rho_prime(family, tol);
  const RVector& p = family.ensemble.populations;
  double direct = 0.0;
  for (Index m = 0; m < family.dim(); ++m) {
    for (Index n = 0; n < family.dim(); ++n) {
      const double denom = p(m) + p(n);
      if (denom > 0.0) direct += std::norm(rp(m, n)) / denom;
    }
  }
  out.direct_form = 0.5 * direct;

  const double scale = std::max(std::abs(out.total), std::abs(out.direct_form));
  if (std::abs(out.total - out.direct_form) > tol.internal_form_tol * scale) {
    throw Error(ErrorCode::InternalFormMismatch,
                "kernel form " + std::to_string(out.total) + " vs direct form " +
                    std::to_string(out.direct_form));
  }
  return out;
}

double family_fidelity(const PerturbedFamily& family, double h) {
  // Tr sqrt(sqrt(rho0) rho(h) sqrt(rho0)) is the sum of the singular values of
  // M = sqrt(rho0) sqrt(rho(h)) ~ diag(sqrt p) V diag(sqrt q). Those are the
  // positive eigenvalues of [[0, M], [M^dag, 0]], which carry absolute error
  // ~eps instead of the ~sqrt(eps) left by square roots of tiny eigenvalues.
  const PerturbedSpectrum d = perturbed_spectrum(family, h);
  const RVector sp = (family.ensemble.log_populations.array() / 2.0).exp();
  const RVector sq = (d.log_populations.array() / 2.0).exp();
  const Index n = family.dim();
  const CMatrix m = sp.cast<Complex>().asDiagonal() * d.basis * sq.cast<Complex>().asDiagonal();
  CMatrix aug = CMatrix::Zero(2 * n, 2 * n);
  aug.topRightCorner(n, n) = m;
  aug.bottomLeftCorner(n, n) = m.adjoint();
  const RVector ev = jacobi_eigen(aug, Exec::Parallel).eigenvalues;
  return ev.cwiseAbs().sum() / 2.0;
}

double chi_f_fd(const PerturbedFamily& family, double h, const Tolerances& /*tol*/) {
  if (!(h > 0.0 && h <= 0.1)) {
    throw Error(ErrorCode::InvalidArgument, "finite-difference step must be in (0, 0.1]");
  }
  auto curvature = [&](double s) {
    const double lose_plus = 1.0 - family_fidelity(family, s);
    const double lose_minus = 1.0 - family_fidelity(family, -s);
    if (std::min(lose_plus, lose_minus) < 100.0 * kEps) {
      throw Error(ErrorCode::StepTooSmall,
                  "1 - F = " + std::to_string(std::min(lose_plus, lose_minus)) + " at h = " +
                      std::to_string(s));
    }
    return (lose_plus + lose_minus) / (s * s);
  };
  const double coarse = curvature(h);
  const double fine = curvature(h / 2.0);
  return (4.0 * fine - coarse) / 3.0;
}

TaylorDiagnostics rho_taylor_check(const PerturbedFamily& family, double h,
                                   const Tolerances& tol) {
  if (!(h > 0.0 && h <= 0.1)) {
    throw Error(ErrorCode::InvalidArgument, "Taylor probe step must be in (0, 0.1]");
  }
  const CMatrix rho0 = family.ensemble.populations.cast<Complex>().asDiagonal();
  auto second_difference = [&](double s) {
    return CMatrix((perturbed_state(family, s) - 2.0 * rho0 + perturbed_state(family, -s)) /
                   (s * s));
  };

  TaylorDiagnostics out;
  const CMatrix plus = perturbed_state(family, h);
  const CMatrix minus = perturbed_state(family, -h);
  out.trace_first = std::abs(((plus - minus) / (2.0 * h)).trace());
  out.trace_second = std::abs(((plus - 2.0 * rho0 + minus) / (h * h)).trace());

  // Reference rho''(0) from a fixed small step, independent of h.
  constexpr double kRefStep = 1e-3;
  const CMatrix second = (4.0 * second_difference(kRefStep / 2.0) - second_difference(kRefStep)) / 3.0;
  const CMatrix first = rho_prime(family, tol);
  auto remainder = [&](double s, const CMatrix& rho_s) {
    const CMatrix r3 = rho_s - rho0 - s * first - 0.5 * s * s * second;
    return r3.norm() / (s * s * s);
  };
  out.remainder_h = remainder(h, plus);
  out.remainder_half = remainder(h / 2.0, perturbed_state(family, h / 2.0));
  return out;
}

double chi_f_ground_state(const PerturbedFamily& family, const Tolerances& tol) {
  const RVector& e = family.ensemble.energies();
  if (family.dim() < 2) return 0.0;
  const double gap = e(1) - e(0);
  if (!(gap > tol.gap_tol)) {
    throw Error(ErrorCode::DegenerateGroundState, "gap T_1 - T_0 = " + std::to_string(gap));
  }
  double acc = 0.0;
  for (Index n = 1; n < family.dim(); ++n) {
    const double d = e(n) - e(0);
    acc += std::norm(family.s_eig(n, 0)) / (d * d);
  }
  return acc;
}

double chi_fg_spectral(const PerturbedFamily& family, const Tolerances& tol, Exec exec) {
  const double b2 = family.beta() * family.beta();
  // (sqrt p_m - sqrt p_n)^2 / Delta^2 = (beta^2 / 4) p_m [(1 - e^{-y/2}) / (y/2)]^2
  const double off = reduce_upper_pairs(
      family.dim(),
      [&](Index m, Index n) {
        const PairGeometry g = pair_geometry(family, m, n);
        if (g.s2 == 0.0) return 0.0;
        const double r = population_drop_ratio(g.y / 2.0, tol.degenerate_switch);
        return b2 / 4.0 * g.p_low * r * r * g.s2;
      },
      exec);
  return b2 / 8.0 * diagonal_variance(family) + off;
}

GreenIntegral chi_fg_integral(const PerturbedFamily& family, int quad_nodes,
                              const Tolerances& tol, Exec exec) {
  if (quad_nodes < 16) {
    throw Error(ErrorCode::InvalidArgument, "chi_fg_integral needs at least 16 nodes");
  }
  const double half_beta = family.beta() / 2.0;
  const RVector& e = family.ensemble.energies();
  const RVector& p = family.ensemble.populations;
  const RVector& lp = family.ensemble.log_populations;

  GreenIntegral out;
  const double off = reduce_ordered_pairs(
      family.dim(),
      [&](Index m, Index n) {
        const double s2 = std::norm(family.s_eig(m, n));
        if (s2 == 0.0) return 0.0;
        const double a = e(m) - e(n);
        const double u = a * half_beta;
        if (std::abs(u) < 1.0) {
          return half_beta * half_beta * p(m) * ramp_exp_integral_series(u) * s2;
        }
        // p_m e^{u} = sqrt(p_m p_n): never overflows.
        return (std::exp(lp(m) + u) * (u - 1.0) + p(m)) / (a * a) * s2;
      },
      exec);
  out.closed_form = half_beta * half_beta / 2.0 * diagonal_variance(family) + off;

  const QuadratureRule rule = gauss_legendre(quad_nodes, 0.0, half_beta);
  double quad = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    quad += rule.weights[i] * rule.nodes[i] * correlation_g(family, rule.nodes[i], exec);
  }
  out.quadrature = quad;

  if (std::abs(out.closed_form - out.quadrature) >
      tol.quadrature_tol * std::max(1.0, std::abs(out.closed_form))) {
    throw Error(ErrorCode::QuadratureDisagreement,
                "closed form " + std::to_string(out.closed_form) + " vs quadrature " +
                    std::to_string(out.quadrature));
  }
  return out;
}

double ds2_spectral(const PerturbedFamily& family, const Tolerances& tol, Exec exec) {
  const double b2 = family.beta() * family.beta();
  // p_n (1 - e^{-2X})^2 / (1 + e^{-2X}) / Delta^2 with the lower level as reference.
  const double off = reduce_upper_pairs(
      family.dim(),
      [&](Index m, Index n) {
        const PairGeometry g = pair_geometry(family, m, n);
        if (g.s2 == 0.0) return 0.0;
        const double r = population_drop_ratio(g.y, tol.degenerate_switch);
        return b2 * g.p_low * r * r / (1.0 + std::exp(-g.y)) * g.s2;
      },
      exec);
  return b2 / 4.0 * diagonal_variance(family) + off;
}

}  // namespace fidsus
