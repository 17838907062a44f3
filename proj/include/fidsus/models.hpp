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

#ifndef FIDSUS_MODELS_HPP
#define FIDSUS_MODELS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fidsus/bounds.hpp"
#include "fidsus/gibbs.hpp"

namespace fidsus {

enum class ModelKind { SingleSpin, Dicke, KondoToy, Random, File, Tfim };

const char* kind_name(ModelKind kind) noexcept;
/// Accepts the names printed by kind_name. Throws InvalidArgument otherwise.
ModelKind parse_kind(std::string_view name);
const std::vector<ModelKind>& all_kinds();

struct ParamInfo {
  std::string name;
  bool cutoff = false;            // integer-valued, must be >= 1
  std::optional<double> fallback;  // used when the caller leaves it out
  bool required = false;
  std::string doc;
};

/// Parameters each kind accepts, in display order.
const std::vector<ParamInfo>& model_params(ModelKind kind);
std::string kind_summary(ModelKind kind);

struct ModelSpec {
  ModelKind kind = ModelKind::SingleSpin;
  std::map<std::string, double> parameters;
  std::map<std::string, long long> cutoffs;
  std::optional<std::uint64_t> seed;
  std::string path;  // kind == File only

  double param(const std::string& name) const;
  long long cutoff(const std::string& name) const;
};

/// Fills defaults, rejects unknown or missing names and cutoffs below 1.
/// Throws InvalidArgument.
ModelSpec validate_spec(const ModelSpec& spec);

struct SingleSpinClosedForm {
  double chi_f = 0.0;
  double bd = 0.0;
  double dcomm = 0.0;
  double lower = 0.0;
  double chi_fg = 0.0;
};

SingleSpinClosedForm single_spin_closed_form(double h3);

struct BuiltModel {
  PerturbedFamily family;
  std::optional<SingleSpinClosedForm> closed_form;
  std::optional<double> cutoff_shift;  // relative chi_F change at n_max + 4
  std::vector<std::string> warnings;
};

/// Raw operator pair before diagonalization.
struct OperatorPair {
  CMatrix t;
  CMatrix s;
  int particle_count = 1;
};

BuiltModel build_from_operators(const OperatorPair& ops, double beta,
                                const Tolerances& tol = default_tolerances());

/// beta = 1, T = -h3 sigma^z, S = sigma^x.
BuiltModel single_spin(double h3);

struct DickeParams {
  int atoms = 4;
  int n_max = 12;
  double omega = 1.0;
  double eps = 1.0;
  double lambda = 1.0;
  double beta = 1.0;
  bool symmetric_sector = false;
  bool probe_cutoff = true;
};

/// T = omega a^+ a + eps J^z + lambda N^{-1/2} (a + a^+) J^x, S = sqrt(N)(a + a^+)/2,
/// spins (or the collective spin N/2 sector) tensored with a boson truncated at n_max.
OperatorPair dicke_operators(const DickeParams& p, const Tolerances& tol = default_tolerances());
BuiltModel dicke(const DickeParams& p, const Tolerances& tol = default_tolerances());

struct DickeTc {
  double tc_tanh = 0.0;
  std::optional<double> tc_implicit;
};

/// Throws NoTransition when 4 lambda^2 / omega < |eps|.
DickeTc dicke_tc(double omega, double eps, double lambda);

struct KondoParams {
  int s2 = 1;  // twice the impurity spin
  std::vector<double> mode_energies{-0.5, 0.5};
  double coupling = 0.7;  // J
  double beta = 1.0;
};

// Fermion modes are ordered (k0 up, k0 down, k1 up, ...) and mapped with a
// Jordan-Wigner string; the impurity spin is the last tensor factor.
OperatorPair kondo_operators(const KondoParams& p, const Tolerances& tol = default_tolerances());
BuiltModel kondo_toy(const KondoParams& p, const Tolerances& tol = default_tolerances());

struct KondoBoundRecord {
  double chi_c = 0.0;
  double beta_eps = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double x_star = 0.0;
};

/// Root of (1 - e^{-x})/x - x/3 on (0, 3).
double roepstorff_x_star();
KondoBoundRecord kondo_roepstorff(double beta, double coupling, int s2);

struct RoepstorffCheck {
  double dcomm = 0.0;
  double dcomm_cap = 0.0;  // (2/3) J tanh(beta J)
  double beta_bd = 0.0;    // beta (S3; S3)
  double bd_floor = 0.0;   // chi_c (1 - e^{-beta eps}) / (beta eps)
  double bd_cap = 0.0;     // chi_c
  bool dcomm_ok = false;
  bool bd_ok = false;
};

RoepstorffCheck kondo_roepstorff_check(const PerturbedFamily& family, double coupling, int s2);

/// GUE-style pair, T = t_scale (A + A^dag) / (2 sqrt(dim)) and likewise S.
/// Deterministic per (seed, dim).
OperatorPair random_operators(int dim, std::uint64_t seed, double t_scale, double s_scale);
BuiltModel random_pair(int dim, std::uint64_t seed, double t_scale, double s_scale, double beta);

/// Open chain T = -j sum z_i z_{i+1} - g sum x_i, S = sum x_i, N = n_sites.
OperatorPair tfim_operators(int n_sites, double j_coupling, double g_field);
BuiltModel tfim(int n_sites, double j_coupling, double g_field, double beta);

struct MatrixFile {
  OperatorPair ops;
  double beta = 1.0;
};

/// Strict parse of {"dim", "beta", "N"?, "T", "S"}; entries are [re, im] pairs.
MatrixFile parse_matrix_file(const std::string& text);
std::string write_matrix_file(const OperatorPair& ops, double beta);
BuiltModel model_from_file(const std::string& path,
                           std::optional<double> beta_override = std::nullopt);

BuiltModel build_model(const ModelSpec& spec, const Tolerances& tol = default_tolerances());

}  // namespace fidsus

#endif  // FIDSUS_MODELS_HPP
