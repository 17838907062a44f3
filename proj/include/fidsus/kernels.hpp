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

#ifndef FIDSUS_KERNELS_HPP
#define FIDSUS_KERNELS_HPP

// Scalar pair kernels and the two execution paths (serial reference and
// OpenMP) for the O(n^2) spectral sums and the O(n^3) Jacobi sweep.

#include <cmath>
#include <vector>

#include "fidsus/config.hpp"
#include "fidsus/linalg.hpp"

namespace fidsus {

enum class Exec { Serial, Parallel };

/// Below this size the OpenMP regions run on one thread. The result does not
/// depend on it: partitions are fixed and partials are combined in order.
inline constexpr Index kParallelMinDim = 48;

/// (1 - e^{-y}) / y for y >= 0, the normalized population drop across a gap
/// of y = beta * Delta. Continuous through the series branch at y_switch.
inline double population_drop_ratio(double y, double y_switch = 1e-7) {
  if (y < y_switch) return 1.0 - y / 2.0 + y * y / 6.0;
  return -std::expm1(-y) / y;
}

/// tanh(x)/x = (x coth x)^{-1}.
///
/// Three regimes: the 3-term series below `series_switch`, a longer Taylor
/// series up to |x| = 0.5, tanh(x)/x beyond. The middle branch is written as
/// (1 - x^2/3) + x^4 * R(x^2) with R >= 0 so that the floating-point result
/// can never drop below 1 - x^2/3 computed the same way.
double kernel_xcothx_inv(double x, double series_switch = 1e-4);

/// Sum of term(m, n) over 0 <= m < n < dim.
///
/// Parallel: one partial per row m, rows distributed by OpenMP, partials summed
/// in row order afterwards. Serial: a single running accumulator. The two
/// agree to rounding; the parallel result is identical for any thread count.
template <class Term>
double reduce_upper_pairs(Index dim, Term&& term, Exec exec) {
  if (exec == Exec::Serial) {
    double acc = 0.0;
    for (Index m = 0; m < dim; ++m)
      for (Index n = m + 1; n < dim; ++n) acc += term(m, n);
    return acc;
  }
  std::vector<double> rows(static_cast<std::size_t>(dim), 0.0);
#pragma omp parallel for schedule(dynamic, 4) if (dim >= kParallelMinDim)
  for (Index m = 0; m < dim; ++m) {
    double acc = 0.0;
    for (Index n = m + 1; n < dim; ++n) acc += term(m, n);
    rows[static_cast<std::size_t>(m)] = acc;
  }
  double total = 0.0;
  for (double r : rows) total += r;
  return total;
}

/// Sum of term(m, n) over all ordered pairs m != n.
template <class Term>
double reduce_ordered_pairs(Index dim, Term&& term, Exec exec) {
  if (exec == Exec::Serial) {
    double acc = 0.0;
    for (Index m = 0; m < dim; ++m)
      for (Index n = 0; n < dim; ++n)
        if (m != n) acc += term(m, n);
    return acc;
  }
  std::vector<double> rows(static_cast<std::size_t>(dim), 0.0);
#pragma omp parallel for schedule(static) if (dim >= kParallelMinDim)
  for (Index m = 0; m < dim; ++m) {
    double acc = 0.0;
    for (Index n = 0; n < dim; ++n)
      if (m != n) acc += term(m, n);
    rows[static_cast<std::size_t>(m)] = acc;
  }
  double total = 0.0;
  for (double r : rows) total += r;
  return total;
}

/// Cyclic complex Jacobi eigensolver.
///
/// Serial: classic row-cyclic ordering, one rotation at a time.
/// Parallel: round-robin (tournament) ordering; every round is a set of
/// disjoint pairs whose rotations commute, so they are applied concurrently.
/// Both stop once the off-diagonal Frobenius norm is below
/// tol.jacobi_threshold * ||H||_F, and both sort and phase-fix the output.
SpectralDecomposition jacobi_eigen(const CMatrix& h, Exec exec,
                                   const Tolerances& tol = default_tolerances());

/// Eigenvalues of diag(base) + correction, returned as shifts from `base`
/// (index-aligned, unsorted). The diagonal is carried as base + shift during the
/// sweeps, so shifts much smaller than base keep full relative precision.
RVector jacobi_shifts(const RVector& base, const CMatrix& correction, Exec exec,
                      const Tolerances& tol = default_tolerances());

}  // namespace fidsus

#endif  // FIDSUS_KERNELS_HPP
