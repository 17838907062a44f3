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


// Serial reference versus parallel variants of the Jacobi eigensolver and
// the pair-sum reductions.

#include <random>

#include <benchmark/benchmark.h>

#include "fidsus/bounds.hpp"
#include "fidsus/fidelity.hpp"
#include "fidsus/kernels.hpp"
#include "fidsus/models.hpp"

namespace {

using namespace fidsus;

CMatrix random_hermitian(Index dim) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(dim));
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix a(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) a(i, j) = Complex(normal(rng), normal(rng));
  return (a + a.adjoint()) / 2.0;
}

Exec exec_of(const benchmark::State& state) {
  return state.range(1) == 0 ? Exec::Serial : Exec::Parallel;
}

void BM_Jacobi(benchmark::State& state) {
  const CMatrix h = random_hermitian(state.range(0));
  const Exec exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(jacobi_eigen(h, exec).eigenvalues.data());
}

void BM_PairSums(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const PerturbedFamily fam = random_pair(dim, 1, 1.0, 1.0, 2.0).family;
  const Exec exec = exec_of(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(chi_f_spectral(fam, default_tolerances(), exec).total);
    benchmark::DoNotOptimize(bd_inner_product(fam, default_tolerances(), exec));
    benchmark::DoNotOptimize(chi_fg_spectral(fam, default_tolerances(), exec));
    benchmark::DoNotOptimize(ds2_spectral(fam, default_tolerances(), exec));
  }
}

}  // namespace

BENCHMARK(BM_Jacobi)->ArgsProduct({{32, 64, 128, 256}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairSums)->ArgsProduct({{16, 64}, {0, 1}})->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
