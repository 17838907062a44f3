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

#ifndef FIDSUS_LINALG_HPP
#define FIDSUS_LINALG_HPP

#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fidsus/config.hpp"
#include "fidsus/errors.hpp"

namespace fidsus {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// A dense complex matrix that has passed the Hermiticity check. Energies and
/// observables are dimensionless (hbar = k_B = 1). Only validate_hermitian()
/// constructs one, so holding a HermitianOperator means the invariant holds.
class HermitianOperator {
 public:
  const CMatrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }

 private:
  explicit HermitianOperator(CMatrix m) : m_(std::move(m)) {}
  friend HermitianOperator validate_hermitian(const CMatrix& m, double tol);

  CMatrix m_;
};

/// Checks squareness, finiteness and ||M - M^dag||_F <= tol * max(1, ||M||_F),
/// then returns the symmetrized (M + M^dag)/2.
HermitianOperator validate_hermitian(const CMatrix& m, double tol = default_tolerances().herm_tol);

/// Eigen-pairs of a Hermitian operator. Eigenvalues ascend (ties keep the
/// order they had on the diagonal after convergence); each basis column is an
/// orthonormal eigenvector whose largest-magnitude entry is real positive.
struct SpectralDecomposition {
  RVector eigenvalues;
  CMatrix basis;

  Index dim() const noexcept { return eigenvalues.size(); }
};

SpectralDecomposition eig_hermitian(const HermitianOperator& h,
                                    const Tolerances& tol = default_tolerances());

/// basis * diag(f(lambda)) * basis^dag.
template <class F>
CMatrix apply_spectral_function(const SpectralDecomposition& d, F&& f) {
  RVector values(d.dim());
  for (Index i = 0; i < d.dim(); ++i) {
    values(i) = f(d.eigenvalues(i));
    if (!std::isfinite(values(i))) {
      throw Error(ErrorCode::NonFiniteFunctionValue,
                  "f(" + std::to_string(d.eigenvalues(i)) + ") is not finite");
    }
  }
  return d.basis * values.asDiagonal() * d.basis.adjoint();
}

/// Square root of a positive semidefinite operator. Eigenvalues in
/// [-clip_tol, 0) are clipped to zero first.
CMatrix psd_sqrt(const HermitianOperator& m, double clip_tol = default_tolerances().clip_tol);

// Small helpers shared by the builders and tests.

double hermitian_residual(const CMatrix& m);  // ||M - M^dag||_F
CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix commutator(const CMatrix& a, const CMatrix& b);

/// Gauss-Legendre rule on [a, b].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

QuadratureRule gauss_legendre(int n, double a, double b);

}  // namespace fidsus

#endif  // FIDSUS_LINALG_HPP
