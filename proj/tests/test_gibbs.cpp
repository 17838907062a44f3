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

#include "fidsus/gibbs.hpp"
#include "oracles.hpp"

using namespace fidsus;

namespace {

CMatrix to_original(const PerturbedFamily& fam, const CMatrix& m_eig) {
  const CMatrix& u = fam.ensemble.spectrum.basis;
  return u * m_eig * u.adjoint();
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::IoError;
}

}  // namespace

TEST_SUITE("gibbs") {
  TEST_CASE("populations match the dense Gibbs state") {
    for (double beta : {0.1, 1.0, 7.5}) {
      CAPTURE(beta);
      const CMatrix t = oracle::random_hermitian(7, 41);
      const CMatrix s = oracle::random_hermitian(7, 42);
      const auto fam = oracle::family(t, s, beta);
      const RVector& p = fam.ensemble.populations;
      CHECK(std::abs(p.sum() - 1.0) <= 1e-14);
      for (Index i = 1; i < p.size(); ++i) CHECK(p(i - 1) >= p(i));
      const CMatrix rho = to_original(fam, p.cast<Complex>().asDiagonal());
      CHECK((rho - oracle::gibbs_state(t, beta)).norm() <= 1e-12);
      CHECK(fam.ensemble.log_z == doctest::Approx(oracle::log_z(t, beta)).epsilon(1e-13));
      CHECK(fam.s_mean == doctest::Approx(oracle::expect(rho, s)).epsilon(1e-12));
    }
  }

  TEST_CASE("log populations survive underflow") {
    CMatrix t = CMatrix::Zero(3, 3);
    t.diagonal() << 0.0, 1.0, 2000.0;
    const auto ens = build_gibbs(validate_hermitian(t), 1.0);
    CHECK(ens.log_populations(2) == doctest::Approx(-2000.0 - std::log1p(std::exp(-1.0))));
    CHECK(ens.populations(2) == 0.0);
    CHECK(ens.diagnostics.population_underflow);
  }

  TEST_CASE("precondition errors") {
    const CMatrix t = oracle::random_hermitian(3, 1);
    CHECK(code_of([&] { build_gibbs(validate_hermitian(t), 0.0); }) == ErrorCode::NonPositiveBeta);
    CHECK(code_of([&] { build_gibbs(validate_hermitian(t), -1.0); }) ==
          ErrorCode::NonPositiveBeta);
    const auto ens = build_gibbs(validate_hermitian(t), 1.0);
    CHECK(code_of([&] { attach_perturbation(ens, validate_hermitian(CMatrix::Identity(4, 4))); }) ==
          ErrorCode::DimensionMismatch);
    const auto fam = attach_perturbation(ens, validate_hermitian(oracle::random_hermitian(3, 2)));
    CHECK(code_of([&] { correlation_g(fam, 1.5); }) == ErrorCode::TauOutOfRange);
    CHECK(code_of([&] { correlation_g(fam, -0.1); }) == ErrorCode::TauOutOfRange);
    CHECK(code_of([&] { thermal_average(fam, CMatrix::Identity(2, 2)); }) ==
          ErrorCode::DimensionMismatch);
  }

  TEST_CASE("thermal average of an operator") {
    const CMatrix t = oracle::random_hermitian(5, 51);
    const CMatrix s = oracle::random_hermitian(5, 52);
    const CMatrix a = oracle::random_hermitian(5, 53);
    const auto fam = oracle::family(t, s, 2.0);
    const CMatrix& u = fam.ensemble.spectrum.basis;
    ThermalAverageDiagnostics diag;
    const double v = thermal_average(fam, u.adjoint() * a * u, &diag);
    CHECK(v == doctest::Approx(oracle::expect(oracle::gibbs_state(t, 2.0), a)).epsilon(1e-12));
    CHECK(diag.imag_residue <= 1e-12);
  }

  TEST_CASE("imaginary-time correlation matches matrix exponentials") {
    const CMatrix t = oracle::random_hermitian(6, 61);
    const CMatrix s = oracle::random_hermitian(6, 62);
    const double beta = 3.0;
    const auto fam = oracle::family(t, s, beta);
    for (double tau : {0.0, 0.4, 1.5, 2.9, 3.0}) {
      CAPTURE(tau);
      const double ref = oracle::correlation(t, s, beta, tau);
      CHECK(correlation_g(fam, tau, Exec::Serial) == doctest::Approx(ref).epsilon(1e-11));
      CHECK(correlation_g(fam, tau, Exec::Parallel) == doctest::Approx(ref).epsilon(1e-11));
    }
    // KMS symmetry G(tau) = G(beta - tau).
    CHECK(correlation_g(fam, 0.7) == doctest::Approx(correlation_g(fam, beta - 0.7)).epsilon(1e-12));
  }

  TEST_CASE("perturbed state and partition function") {
    const CMatrix t = oracle::random_hermitian(5, 71);
    const CMatrix s = oracle::random_hermitian(5, 72);
    const double beta = 1.3;
    const auto fam = oracle::family(t, s, beta);
    for (double h : {-0.3, 1e-3, 0.25}) {
      CAPTURE(h);
      const CMatrix rho = to_original(fam, perturbed_state(fam, h));
      CHECK((rho - oracle::gibbs_state(t - h * s, beta)).norm() <= 1e-12);
      CHECK(log_partition(fam, h) ==
            doctest::Approx(oracle::log_z(t - h * s, beta)).epsilon(1e-13));
      CHECK(log_partition_ratio(fam, h) ==
            doctest::Approx(oracle::log_z(t - h * s, beta) - oracle::log_z(t, beta))
                .epsilon(1e-10));
    }
    CHECK(log_partition_ratio(fam, 0.0) == 0.0);
    const double h = 0.05;
    const double even = oracle::log_z(t - h * s, beta) + oracle::log_z(t + h * s, beta) -
                        2 * oracle::log_z(t, beta);
    CHECK(log_partition_even(fam, h) == doctest::Approx(even).epsilon(1e-9));
  }

  TEST_CASE("even log-partition difference of a frozen commuting pair") {
    CMatrix t = CMatrix::Zero(2, 2);
    CMatrix s = CMatrix::Zero(2, 2);
    t.diagonal() << 0.0, 3.0;
    s.diagonal() << 1.0, -0.5;
    const double beta = 7.0;
    const auto fam = oracle::family(t, s, beta);
    const long double w = std::exp(-static_cast<long double>(beta) * 3.0L);
    auto lz = [&](long double h) {
      return std::log(std::exp(static_cast<long double>(beta) * h) +
                      w * std::exp(-static_cast<long double>(beta) * h * 0.5L));
    };
    const long double h = 1e-4L;
    const double ref = static_cast<double>(lz(h) + lz(-h) - 2 * lz(0));
    CHECK(log_partition_even(fam, 1e-4) == doctest::Approx(ref).epsilon(1e-9));
  }

  TEST_CASE("with_beta equals a fresh build") {
    const CMatrix t = oracle::random_hermitian(4, 81);
    const CMatrix s = oracle::random_hermitian(4, 82);
    const auto a = with_beta(oracle::family(t, s, 1.0), 4.0);
    const auto b = oracle::family(t, s, 4.0);
    CHECK((a.ensemble.populations - b.ensemble.populations).norm() <= 1e-15);
    CHECK(a.s_mean == doctest::Approx(b.s_mean).epsilon(1e-14));
    CHECK(a.beta() == 4.0);
  }
}
