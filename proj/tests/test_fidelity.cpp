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


#include <doctest.h>

#include <cmath>

#include "fidsus/fidelity.hpp"
#include "fidsus/models.hpp"
#include "oracles.hpp"

using namespace fidsus;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::IoError;
}

CMatrix diag(std::initializer_list<double> values) {
  RVector v(static_cast<Index>(values.size()));
  Index i = 0;
  for (double x : values) v(i++) = x;
  return v.cast<Complex>().asDiagonal();
}

PerturbedFamily commuting_family(Index dim, double beta, std::uint64_t seed) {
  return oracle::family(oracle::random_diagonal(dim, seed), oracle::random_diagonal(dim, seed + 1),
                        beta);
}

double commuting_variance(const PerturbedFamily& fam) {
  double mean = 0.0;
  double second = 0.0;
  for (Index i = 0; i < fam.dim(); ++i) {
    const double s = fam.s_eig(i, i).real();
    mean += fam.ensemble.populations(i) * s;
    second += fam.ensemble.populations(i) * s * s;
  }
  return second - mean * mean;
}

}  // namespace

TEST_SUITE("fidelity") {
  TEST_CASE("Uhlmann fidelity basics") {
    const CMatrix rho = oracle::gibbs_state(oracle::random_hermitian(5, 1), 1.0);
    const CMatrix sigma = oracle::gibbs_state(oracle::random_hermitian(5, 2), 0.7);
    CHECK(uhlmann_fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(uhlmann_fidelity(rho, sigma) == doctest::Approx(uhlmann_fidelity(sigma, rho)).epsilon(1e-10));
    CHECK(uhlmann_fidelity(rho, sigma) == doctest::Approx(oracle::fidelity(rho, sigma)).epsilon(1e-10));
    CHECK(uhlmann_fidelity(diag({1, 0}), diag({0, 1})) == doctest::Approx(0.0));
    const double bh = std::sqrt(0.2 * 0.5) + std::sqrt(0.3 * 0.25) + std::sqrt(0.5 * 0.25);
    CHECK(uhlmann_fidelity(diag({0.2, 0.3, 0.5}), diag({0.5, 0.25, 0.25})) ==
          doctest::Approx(bh).epsilon(1e-12));
  }

  TEST_CASE("Uhlmann fidelity of pure states is the overlap") {
    Eigen::VectorXcd a(3), b(3);
    a << Complex(1, 0), Complex(0, 1), Complex(0.5, 0);
    b << Complex(0.3, 0.2), Complex(1, 0), Complex(-1, 0);
    a.normalize();
    b.normalize();
    const double overlap = std::abs(a.dot(b));
    CHECK(uhlmann_fidelity(a * a.adjoint(), b * b.adjoint()) == doctest::Approx(overlap).epsilon(1e-7));
  }

  TEST_CASE("fidelity preconditions") {
    CHECK(code_of([] { uhlmann_fidelity(diag({0.5, 0.6}), diag({0.5, 0.5})); }) ==
          ErrorCode::NotDensityMatrix);
    CHECK(code_of([] { uhlmann_fidelity(diag({1.5, -0.5}), diag({0.5, 0.5})); }) ==
          ErrorCode::NotDensityMatrix);
    CMatrix skew = diag({0.5, 0.5});
    skew(0, 1) = 0.1;
    CHECK(code_of([&] { uhlmann_fidelity(skew, diag({0.5, 0.5})); }) == ErrorCode::NotDensityMatrix);
  }

  TEST_CASE("GF fidelity") {
    CHECK(gf_fidelity(diag({1, 0}), diag({1, 0})) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gf_fidelity(diag({0.5, 0.5}), diag({0.5, 0.5})) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    const double ref = std::sqrt(std::sqrt(0.2) * std::sqrt(0.6)) + std::sqrt(std::sqrt(0.8) * std::sqrt(0.4));
    CHECK(gf_fidelity(diag({0.2, 0.8}), diag({0.6, 0.4})) == doctest::Approx(ref).epsilon(1e-12));
  }

  TEST_CASE("Bures distance") {
    const CMatrix rho = oracle::gibbs_state(oracle::random_hermitian(4, 3), 1.0);
    CHECK(bures_distance(rho, rho) <= 1e-5);
    CHECK(bures_distance(diag({1, 0}), diag({0, 1})) == doctest::Approx(std::sqrt(2.0)));
    const CMatrix t = oracle::random_hermitian(5, 4);
    const CMatrix s = oracle::random_hermitian(5, 5);
    const auto fam = oracle::family(t, s, 1.0);
    const double h = 1e-3;
    const double d = bures_distance(oracle::gibbs_state(t, 1.0), oracle::gibbs_state(t - h * s, 1.0));
    CHECK(d * d / (h * h) == doctest::Approx(chi_f_spectral(fam).total).epsilon(1e-2));
  }

  TEST_CASE("rho_prime") {
    const auto spin = single_spin(1.3).family;
    const CMatrix r = rho_prime(spin);
    CHECK(std::abs(r(0, 1) - std::tanh(1.3) / 2.6) <= 1e-15);
    CHECK(std::abs(r(1, 0) - std::tanh(1.3) / 2.6) <= 1e-15);
    CHECK(std::abs(r(0, 0)) == 0.0);

    const auto com = commuting_family(5, 1.4, 11);
    const CMatrix rc = rho_prime(com);
    for (Index m = 0; m < 5; ++m) {
      for (Index n = 0; n < 5; ++n) {
        const double ref = m == n ? 1.4 * com.ensemble.populations(m) * (com.s_eig(m, m).real() - com.s_mean) : 0.0;
        CHECK(std::abs(rc(m, n) - ref) <= 1e-15);
      }
    }

    const CMatrix t = oracle::random_hermitian(6, 12);
    const CMatrix s = oracle::random_hermitian(6, 13);
    const double beta = 1.7;
    const auto fam = oracle::family(t, s, beta);
    const CMatrix& u = fam.ensemble.spectrum.basis;
    const double h = 1e-5;
    const CMatrix fd = (oracle::gibbs_state(t - h * s, beta) - oracle::gibbs_state(t + h * s, beta)) / (2 * h);
    const CMatrix rp = u * rho_prime(fam) * u.adjoint();
    CHECK((rp - fd).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(std::abs(rp.trace()) <= 1e-12);
  }

  TEST_CASE("chi_f_spectral closed forms") {
    for (double h3 : {1e-9, 0.3, 1.0, 4.0}) {
      CAPTURE(h3);
      const auto r = chi_f_spectral(single_spin(h3).family);
      const double ref = h3 < 1e-8 ? 0.25 : std::pow(std::tanh(h3) / h3, 2) / 4.0;
      CHECK(r.total == doctest::Approx(ref).epsilon(1e-14));
      CHECK(r.classical == 0.0);
      CHECK(r.direct_form == doctest::Approx(r.total).epsilon(1e-10));
    }
    const auto com = commuting_family(6, 2.3, 21);
    const auto r = chi_f_spectral(com);
    CHECK(r.quantum == 0.0);
    CHECK(r.total == doctest::Approx(2.3 * 2.3 / 4 * commuting_variance(com)).epsilon(1e-13));
  }

  TEST_CASE("chi_f_spectral serial and parallel agree with the finite difference") {
    const auto fam = oracle::family(oracle::random_hermitian(6, 31), oracle::random_hermitian(6, 32), 1.1);
    const auto a = chi_f_spectral(fam, default_tolerances(), Exec::Serial);
    const auto b = chi_f_spectral(fam, default_tolerances(), Exec::Parallel);
    CHECK(a.total == doctest::Approx(b.total).epsilon(1e-14));
    CHECK(a.total == doctest::Approx(a.classical + a.quantum).epsilon(1e-12));
    CHECK(std::abs(chi_f_fd(fam, 1e-2) - a.total) <= 1e-6 * a.total);
  }

  TEST_CASE("chi_f_fd") {
    CHECK(std::abs(chi_f_fd(single_spin(1.0).family, 1e-3) - std::pow(std::tanh(1.0), 2) / 4) <= 1e-7);
    const auto com = commuting_family(5, 1.2, 41);
    CHECK(std::abs(chi_f_fd(com, 1e-3) - 1.44 / 4 * commuting_variance(com)) <= 1e-8);
    const auto fam = oracle::family(oracle::random_hermitian(4, 42), oracle::random_hermitian(4, 43), 1.0);
    CHECK(std::abs(chi_f_fd(fam, 1e-3) - chi_f_spectral(fam).total) <= 1e-6 * chi_f_spectral(fam).total);
    CHECK(code_of([&] { chi_f_fd(fam, 1e-9); }) == ErrorCode::StepTooSmall);
    CHECK(code_of([&] { chi_f_fd(fam, 0.2); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { chi_f_fd(fam, 0.0); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("family_fidelity matches the dense definition") {
    const CMatrix t = oracle::random_hermitian(5, 51);
    const CMatrix s = oracle::random_hermitian(5, 52);
    const auto fam = oracle::family(t, s, 2.0);
    const double ref = oracle::fidelity(oracle::gibbs_state(t, 2.0), oracle::gibbs_state(t - 0.05 * s, 2.0));
    CHECK(family_fidelity(fam, 0.05) == doctest::Approx(ref).epsilon(1e-12));
  }

  TEST_CASE("rho_taylor_check") {
    const auto fam = oracle::family(oracle::random_hermitian(5, 61), oracle::random_hermitian(5, 62), 1.0);
    const auto d = rho_taylor_check(fam, 1e-2);
    CHECK(d.trace_first <= 1e-10);
    CHECK(d.trace_second <= 1e-6);
    CHECK(d.remainder_h > 0.0);
    CHECK(d.remainder_half / d.remainder_h <= 2.0);
    CHECK(d.remainder_h / d.remainder_half <= 2.0);
  }

  TEST_CASE("ground-state susceptibility") {
    CHECK(chi_f_ground_state(single_spin(0.8).family) == doctest::Approx(1.0 / (4 * 0.64)).epsilon(1e-14));
    CHECK(chi_f_ground_state(commuting_family(4, 1.0, 71)) == 0.0);
    const CMatrix t = oracle::random_hermitian(5, 72);
    const CMatrix s = oracle::random_hermitian(5, 73);
    const auto fam = oracle::family(t, s, 1.0);
    auto ground = [&](double h) -> Eigen::VectorXcd {
      return Eigen::SelfAdjointEigenSolver<CMatrix>(t - h * s).eigenvectors().col(0);
    };
    const Eigen::VectorXcd g0 = ground(0.0);
    auto chi = [&](double h) {
      const double lose = 2.0 - std::abs(g0.dot(ground(h))) - std::abs(g0.dot(ground(-h)));
      return lose / (h * h);
    };
    const double h = 1e-4;
    const double fd = (4.0 * chi(h / 2) - chi(h)) / 3.0;
    CHECK(std::abs(fd - chi_f_ground_state(fam)) <= 1e-5 * std::max(1.0, fd));
    CHECK(code_of([] { chi_f_ground_state(oracle::family(diag({1, 1, 2}), diag({0, 1, 0}), 1.0)); }) ==
          ErrorCode::DegenerateGroundState);
  }

  TEST_CASE("Green's-function susceptibility") {
    for (double h3 : {0.2, 1.0, 3.0}) {
      CAPTURE(h3);
      const auto fam = single_spin(h3).family;
      const double ref = (1.0 - 1.0 / std::cosh(h3)) / (4 * h3 * h3);
      CHECK(chi_fg_spectral(fam) == doctest::Approx(ref).epsilon(1e-14));
      CHECK(chi_fg_integral(fam, 64).closed_form == doctest::Approx(ref).epsilon(1e-10));
    }
    const auto com = commuting_family(5, 1.9, 81);
    const double half = 1.9 * 1.9 / 8 * commuting_variance(com);
    CHECK(chi_fg_spectral(com) == doctest::Approx(half).epsilon(1e-13));
    const auto gi = chi_fg_integral(com, 32);
    CHECK(gi.closed_form == doctest::Approx(half).epsilon(1e-13));
    CHECK(gi.quadrature == doctest::Approx(half).epsilon(1e-13));

    const auto fam = oracle::family(oracle::random_hermitian(6, 82), oracle::random_hermitian(6, 83), 2.5);
    const auto r = chi_fg_integral(fam, 64);
    CHECK(std::abs(r.closed_form - r.quadrature) <= 1e-9);
    CHECK(std::abs(r.closed_form - chi_fg_spectral(fam)) <= 1e-8);
    CHECK(code_of([&] { chi_fg_integral(fam, 8); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("ds2 equals chi_f and brackets chi_fg") {
    for (std::uint64_t seed : {91u, 92u, 93u}) {
      const double beta = 0.5 * static_cast<double>(seed - 89);
      const auto fam = oracle::family(oracle::random_hermitian(7, seed), oracle::random_hermitian(7, seed + 10), beta);
      const double ds2 = ds2_spectral(fam);
      const double chi = chi_f_spectral(fam).total;
      const double fg = chi_fg_spectral(fam);
      CHECK(std::abs(ds2 - chi) <= 1e-10 * chi);
      CHECK(fg <= ds2 + 1e-12);
      CHECK(fg >= ds2 / 2 - 1e-12);
      CHECK(fg <= chi + 1e-12);
    }
    CHECK(ds2_spectral(single_spin(2.0).family) == doctest::Approx(std::pow(std::tanh(2.0) / 2.0, 2) / 4).epsilon(1e-14));
  }

  TEST_CASE("square-root population inequality") {
    const auto fam = oracle::family(oracle::random_hermitian(8, 99), oracle::random_hermitian(8, 98), 3.0);
    const RVector& p = fam.ensemble.populations;
    for (Index m = 0; m < p.size(); ++m)
      for (Index n = 0; n < p.size(); ++n) {
        const double lhs = (p(n) - p(m)) * (p(n) - p(m));
        const double rhs = (p(n) + p(m)) * std::pow(std::sqrt(p(m)) - std::sqrt(p(n)), 2);
        CHECK(lhs >= rhs * (1 - 1e-14));
      }
  }
}
