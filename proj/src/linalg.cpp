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

#include "fidsus/linalg.hpp"

#include <algorithm>
#include <numbers>

#include "fidsus/kernels.hpp"

namespace fidsus {

HermitianOperator validate_hermitian(const CMatrix& m, double tol) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw Error(ErrorCode::NotSquare, "matrix is " + std::to_string(m.rows()) + "x" +
                                          std::to_string(m.cols()));
  }
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
        throw Error(ErrorCode::NonFiniteEntry,
                    "entry (" + std::to_string(i) + "," + std::to_string(j) + ")");

  const double asym = hermitian_residual(m);
  const double scale = std::max(1.0, m.norm());
  if (asym > tol * scale) {
    throw Error(ErrorCode::AsymmetryExceedsTol,
                "||M - M^dag||_F = " + std::to_string(asym) + " exceeds " +
                    std::to_string(tol * scale));
  }
  CMatrix sym = (m + m.adjoint()) / 2.0;
  return HermitianOperator(std::move(sym));
}

SpectralDecomposition eig_hermitian(const HermitianOperator& h, const Tolerances& tol) {
  return jacobi_eigen(h.matrix(), Exec::Parallel, tol);
}

CMatrix psd_sqrt(const HermitianOperator& m, double clip_tol) {
  const SpectralDecomposition d = eig_hermitian(m);
  for (Index i = 0; i < d.dim(); ++i) {
    if (d.eigenvalues(i) < -clip_tol) {
      throw Error(ErrorCode::NegativeEigenvalueBeyondTol,
                  "eigenvalue " + std::to_string(d.eigenvalues(i)));
    }
  }
  return apply_spectral_function(d, [](double v) { return std::sqrt(std::max(v, 0.0)); });
}

double hermitian_residual(const CMatrix& m) { return (m - m.adjoint()).norm(); }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "quadrature needs at least one node");
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const double mid = 0.5 * (b + a);
  const double half = 0.5 * (b - a);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = mid - half * z;
    rule.nodes[hi] = mid + half * z;
    rule.weights[lo] = half * w;
    rule.weights[hi] = half * w;
  }
  return rule;
}

}  // namespace fidsus
