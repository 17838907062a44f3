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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "fidsus/kernels.hpp"

namespace fidsus {
namespace {

struct Rotation {
  Index p = 0;
  Index q = 0;
  double c = 1.0;
  double s = 0.0;
  Complex phase{1.0, 0.0};  // b / |b|
  double a_pp = 0.0;        // diagonal entries after the rotation
  double a_qq = 0.0;
  bool active = false;
};

// Unitary G on (p, q): G_pp = G_qq = c, G_pq = s e^{i phi}, G_qp = -s e^{-i phi}.
// G^dag A G zeroes A(p, q). With `base`, the true diagonal is base + diag(A) and
// only the correction is stored in A, so small eigenvalue shifts keep their digits.
Rotation make_rotation(const CMatrix& a, const double* base, Index p, Index q) {
  Rotation r;
  r.p = p;
  r.q = q;
  const Complex b = a(p, q);
  const double ab = std::abs(b);
  if (ab == 0.0) return r;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double gap = base ? (base[q] - base[p]) + (aqq - app) : aqq - app;
  const double zeta = gap / (2.0 * ab);
  double t;
  if (std::abs(zeta) > 1e150) {
    t = 0.5 / zeta;
  } else {
    t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
  }
  r.c = 1.0 / std::sqrt(1.0 + t * t);
  r.s = t * r.c;
  r.phase = b / ab;
  r.a_pp = app - t * ab;
  r.a_qq = aqq + t * ab;
  r.active = true;
  return r;
}

// x' = c x + u y, y' = w x + c y on two strided complex sequences. Spelled out
// in real arithmetic: std::complex multiplication goes through the NaN-safe
// library routine otherwise.
void rotate_pair(double* x, double* y, Index count, Index stride, double c, Complex u,
                 Complex w) {
  const double ur = u.real(), ui = u.imag();
  const double wr = w.real(), wi = w.imag();
  for (Index k = 0; k < count; ++k) {
    double* xp = x + 2 * k * stride;
    double* yp = y + 2 * k * stride;
    const double xr = xp[0], xi = xp[1];
    const double yr = yp[0], yi = yp[1];
    xp[0] = c * xr + (ur * yr - ui * yi);
    xp[1] = c * xi + (ur * yi + ui * yr);
    yp[0] = c * yr + (wr * xr - wi * xi);
    yp[1] = c * yi + (wr * xi + wi * xr);
  }
}

double* raw(CMatrix& m, Index i, Index j) { return reinterpret_cast<double*>(&m(i, j)); }

void rotate_columns(CMatrix& m, const Rotation& r) {
  rotate_pair(raw(m, 0, r.p), raw(m, 0, r.q), m.rows(), 1, r.c, -r.s * std::conj(r.phase),
              r.s * r.phase);
}

void rotate_rows(CMatrix& m, const Rotation& r) {
  rotate_pair(raw(m, r.p, 0), raw(m, r.q, 0), m.cols(), m.rows(), r.c, -r.s * r.phase,
              r.s * std::conj(r.phase));
}

void settle_block(CMatrix& a, const Rotation& r) {
  a(r.p, r.p) = Complex(r.a_pp, 0.0);
  a(r.q, r.q) = Complex(r.a_qq, 0.0);
  a(r.p, r.q) = Complex(0.0, 0.0);
  a(r.q, r.p) = Complex(0.0, 0.0);
}

double off_diagonal_norm(const CMatrix& a) {
  double acc = 0.0;
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      if (i != j) acc += std::norm(a(i, j));
  return std::sqrt(acc);
}

void sweep_serial(CMatrix& a, CMatrix& v, const double* base) {
  const Index n = a.rows();
  for (Index p = 0; p < n; ++p) {
    for (Index q = p + 1; q < n; ++q) {
      const Rotation r = make_rotation(a, base, p, q);
      if (!r.active) continue;
      rotate_columns(a, r);
      rotate_rows(a, r);
      settle_block(a, r);
      rotate_columns(v, r);
    }
  }
}

// Circle-method tournament: n' - 1 rounds of n'/2 disjoint pairs.
std::vector<std::vector<std::pair<Index, Index>>> tournament(Index n) {
  const Index players = n + (n % 2);
  std::vector<std::vector<std::pair<Index, Index>>> rounds;
  rounds.reserve(static_cast<std::size_t>(players - 1));
  const Index ring = players - 1;
  for (Index round = 0; round < ring; ++round) {
    std::vector<std::pair<Index, Index>> pairs;
    auto add = [&](Index x, Index y) {
      if (x >= n || y >= n) return;
      pairs.emplace_back(std::min(x, y), std::max(x, y));
    };
    add(players - 1, round);
    for (Index k = 1; k < players / 2; ++k) add((round + k) % ring, (round - k + ring) % ring);
    std::sort(pairs.begin(), pairs.end());
    rounds.push_back(std::move(pairs));
  }
  return rounds;
}

void sweep_parallel(CMatrix& a, CMatrix& v, const double* base,
                    const std::vector<std::vector<std::pair<Index, Index>>>& rounds) {
  const bool wide = a.rows() >= kParallelMinDim;
  std::vector<Rotation> rot;
  for (const auto& pairs : rounds) {
    const auto count = static_cast<std::ptrdiff_t>(pairs.size());
    rot.assign(pairs.size(), Rotation{});
    for (std::ptrdiff_t k = 0; k < count; ++k)
      rot[static_cast<std::size_t>(k)] =
          make_rotation(a, base, pairs[static_cast<std::size_t>(k)].first,
                        pairs[static_cast<std::size_t>(k)].second);
#pragma omp parallel if (wide)
    {
#pragma omp for schedule(static)
      for (std::ptrdiff_t k = 0; k < count; ++k) {
        const Rotation& r = rot[static_cast<std::size_t>(k)];
        if (!r.active) continue;
        rotate_columns(a, r);
        rotate_columns(v, r);
      }
      // Row pass column by column: the round's rotations are disjoint, so each
      // column is updated independently and memory access stays contiguous.
#pragma omp for schedule(static)
      for (Index j = 0; j < a.cols(); ++j) {
        for (const Rotation& r : rot) {
          if (!r.active) continue;
          rotate_pair(raw(a, r.p, j), raw(a, r.q, j), 1, 1, r.c, -r.s * r.phase,
                      r.s * std::conj(r.phase));
        }
      }
#pragma omp for schedule(static)
      for (std::ptrdiff_t k = 0; k < count; ++k) {
        const Rotation& r = rot[static_cast<std::size_t>(k)];
        if (r.active) settle_block(a, r);
      }
    }
  }
}

SpectralDecomposition finalize(const CMatrix& a, CMatrix v) {
  const Index n = a.rows();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index x, Index y) { return a(x, x).real() < a(y, y).real(); });
  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.basis.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    out.eigenvalues(k) = a(src, src).real();
    out.basis.col(k) = v.col(src);
  }
  for (Index k = 0; k < n; ++k) {
    Index big = 0;
    double big_abs = -1.0;
    for (Index i = 0; i < n; ++i) {
      const double m = std::abs(out.basis(i, k));
      if (m > big_abs) {
        big_abs = m;
        big = i;
      }
    }
    if (big_abs > 0.0) {
      const Complex fix = std::conj(out.basis(big, k)) / big_abs;
      out.basis.col(k) *= fix;
      out.basis(big, k) = Complex(out.basis(big, k).real(), 0.0);
    }
  }
  return out;
}


// Runs sweeps on `a` (off-diagonal part plus diagonal corrections over `base`).
CMatrix run_sweeps(CMatrix& a, const double* base, double h_norm, Exec exec,
                   const Tolerances& tol) {
  const Index n = a.rows();
  CMatrix v = CMatrix::Identity(n, n);
  const double threshold = tol.jacobi_threshold * h_norm;
  const auto rounds = exec == Exec::Parallel ? tournament(n)
                                             : std::vector<std::vector<std::pair<Index, Index>>>{};
  int sweeps = 0;
  while (off_diagonal_norm(a) > threshold) {
    if (sweeps == tol.jacobi_max_sweeps) {
      throw Error(ErrorCode::NoConvergence,
                  "Jacobi did not converge in " + std::to_string(sweeps) + " sweeps (dim " +
                      std::to_string(n) + ")");
    }
    if (exec == Exec::Serial) {
      sweep_serial(a, v, base);
    } else {
      sweep_parallel(a, v, base, rounds);
    }
    ++sweeps;
  }
  return v;
}

}  // namespace

SpectralDecomposition jacobi_eigen(const CMatrix& h, Exec exec, const Tolerances& tol) {
  CMatrix a = h;
  CMatrix v = run_sweeps(a, nullptr, h.norm(), exec, tol);
  return finalize(a, std::move(v));
}

RVector jacobi_shifts(const RVector& base, const CMatrix& correction, Exec exec,
                      const Tolerances& tol) {
  const Index n = base.size();
  if (correction.rows() != n || correction.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "jacobi_shifts: base and correction differ in size");
  }
  CMatrix a = correction;
  CMatrix full = correction;
  full.diagonal() += base.cast<Complex>();
  run_sweeps(a, base.data(), full.norm(), exec, tol);
  return a.diagonal().real();
}

}  // namespace fidsus
