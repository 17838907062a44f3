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

#include "fidsus/models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fidsus/fidelity.hpp"

namespace fidsus {

namespace {

using Json = nlohmann::json;

const Complex kI{0.0, 1.0};

CMatrix identity(Index n) { return CMatrix::Identity(n, n); }

CMatrix pauli_x() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  return m;
}

CMatrix pauli_y() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 1) = -kI;
  m(1, 0) = kI;
  return m;
}

CMatrix pauli_z() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

// op on site `site` of an n-site register of qubits; site 0 is the leading factor.
CMatrix site_op(const CMatrix& op, int site, int n) {
  CMatrix out = identity(1);
  for (int i = 0; i < n; ++i) out = kron(out, i == site ? op : identity(2));
  return out;
}

struct SpinMatrices {
  CMatrix z, plus;
  CMatrix x() const { return (plus + plus.adjoint()) / 2.0; }
  CMatrix y() const { return (plus - plus.adjoint()) / (2.0 * kI); }
};

// Basis m = j, j-1, ..., -j.
SpinMatrices spin_matrices(int two_j) {
  const Index d = two_j + 1;
  const double j = two_j / 2.0;
  SpinMatrices s{CMatrix::Zero(d, d), CMatrix::Zero(d, d)};
  for (Index i = 0; i < d; ++i) {
    const double m = j - static_cast<double>(i);
    s.z(i, i) = m;
    if (i > 0) s.plus(i - 1, i) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  return s;
}

CMatrix boson_annihilation(int n_max) {
  CMatrix a = CMatrix::Zero(n_max + 1, n_max + 1);
  for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

void check_budget(double dim, const Tolerances& tol) {
  if (dim > tol.dimension_budget) {
    throw Error(ErrorCode::DimensionBudgetExceeded,
                "dimension " + std::to_string(static_cast<long long>(dim)) + " exceeds " +
                    std::to_string(tol.dimension_budget));
  }
}

ParamInfo req(std::string name, std::string doc, bool cutoff = false) {
  return ParamInfo{std::move(name), cutoff, std::nullopt, true, std::move(doc)};
}

ParamInfo opt(std::string name, double fallback, std::string doc, bool cutoff = false) {
  return ParamInfo{std::move(name), cutoff, fallback, false, std::move(doc)};
}

}  // namespace

const char* kind_name(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::SingleSpin: return "single_spin";
    case ModelKind::Dicke: return "dicke";
    case ModelKind::KondoToy: return "kondo_toy";
    case ModelKind::Random: return "random";
    case ModelKind::File: return "file";
    case ModelKind::Tfim: return "tfim";
  }
  return "unknown";
}

const std::vector<ModelKind>& all_kinds() {
  static const std::vector<ModelKind> kinds{ModelKind::SingleSpin, ModelKind::Dicke,
                                            ModelKind::KondoToy,   ModelKind::Random,
                                            ModelKind::File,       ModelKind::Tfim};
  return kinds;
}

ModelKind parse_kind(std::string_view name) {
  for (ModelKind k : all_kinds())
    if (name == kind_name(k)) return k;
  throw Error(ErrorCode::InvalidArgument, "unknown model '" + std::string(name) + "'");
}

const std::vector<ParamInfo>& model_params(ModelKind kind) {
  static const std::map<ModelKind, std::vector<ParamInfo>> table{
      {ModelKind::SingleSpin,
       {req("h3", "field along z; the family is built at beta = 1 with beta absorbed"),
        opt("beta", 1.0, "inverse temperature")}},
      {ModelKind::Dicke,
       {opt("atoms", 4, "number of two-level atoms N", true),
        opt("n_max", 12, "boson cutoff (highest Fock state)", true),
        opt("omega", 1.0, "cavity frequency"), opt("eps", 1.0, "atomic splitting"),
        opt("lambda", 1.0, "atom-field coupling"), opt("beta", 1.0, "inverse temperature"),
        opt("symmetric", 0.0, "1 restricts the atoms to the collective spin N/2 sector")}},
      {ModelKind::KondoToy,
       {opt("s2", 1, "twice the impurity spin", true),
        opt("modes", 2, "number of conduction modes (1 to 3)", true),
        opt("e0", -0.5, "energy of mode 0"), opt("e1", 0.5, "energy of mode 1"),
        opt("e2", 0.0, "energy of mode 2"), opt("J", 0.7, "exchange coupling"),
        opt("beta", 1.0, "inverse temperature")}},
      {ModelKind::Random,
       {opt("dim", 4, "Hilbert space dimension (2 to 64)", true),
        opt("t_scale", 1.0, "scale of T"), opt("s_scale", 1.0, "scale of S"),
        opt("beta", 1.0, "inverse temperature")}},
      {ModelKind::File, {ParamInfo{"beta", false, std::nullopt, false, "overrides the file's beta"}}},
      {ModelKind::Tfim,
       {opt("n_sites", 4, "chain length (2 to 10)", true),
        opt("j_coupling", 1.0, "zz coupling"), opt("g_field", 1.0, "transverse field"),
        opt("beta", 1.0, "inverse temperature")}},
  };
  return table.at(kind);
}

std::string kind_summary(ModelKind kind) {
  switch (kind) {
    case ModelKind::SingleSpin: return "T = -h3 sigma^z, S = sigma^x";
    case ModelKind::Dicke: return "N atoms coupled to one boson mode, S = sqrt(N)(a + a^+)/2";
    case ModelKind::KondoToy: return "impurity spin exchange-coupled to 1-3 fermion modes, S = S3";
    case ModelKind::Random: return "seeded GUE-style pair (T, S); needs --seed";
    case ModelKind::File: return "T and S read from a JSON matrix file (--path)";
    case ModelKind::Tfim: return "open transverse-field Ising chain, S = sum sigma^x";
  }
  return "";
}

double ModelSpec::param(const std::string& name) const {
  auto it = parameters.find(name);
  if (it == parameters.end()) throw Error(ErrorCode::InvalidArgument, "missing parameter " + name);
  return it->second;
}

long long ModelSpec::cutoff(const std::string& name) const {
  auto it = cutoffs.find(name);
  if (it == cutoffs.end()) throw Error(ErrorCode::InvalidArgument, "missing cutoff " + name);
  return it->second;
}

ModelSpec validate_spec(const ModelSpec& spec) {
  const auto& infos = model_params(spec.kind);
  auto known = [&](const std::string& name, bool cutoff) {
    return std::any_of(infos.begin(), infos.end(),
                       [&](const ParamInfo& p) { return p.name == name && p.cutoff == cutoff; });
  };
  for (const auto& [name, value] : spec.parameters) {
    if (!known(name, false)) {
      throw Error(ErrorCode::InvalidArgument,
                  "parameter '" + name + "' does not apply to " + kind_name(spec.kind));
    }
    if (!std::isfinite(value)) throw Error(ErrorCode::InvalidArgument, name + " is not finite");
  }
  for (const auto& [name, value] : spec.cutoffs) {
    if (!known(name, true)) {
      throw Error(ErrorCode::InvalidArgument,
                  "cutoff '" + name + "' does not apply to " + kind_name(spec.kind));
    }
    if (value < 1) throw Error(ErrorCode::InvalidArgument, name + " must be >= 1");
  }
  ModelSpec out = spec;
  for (const ParamInfo& p : infos) {
    const bool present = p.cutoff ? out.cutoffs.count(p.name) : out.parameters.count(p.name);
    if (present) continue;
    if (p.required) throw Error(ErrorCode::InvalidArgument, "missing required --" + p.name);
    if (!p.fallback) continue;
    if (p.cutoff)
      out.cutoffs[p.name] = static_cast<long long>(*p.fallback);
    else
      out.parameters[p.name] = *p.fallback;
  }
  if (spec.kind == ModelKind::File && spec.path.empty())
    throw Error(ErrorCode::InvalidArgument, "file model needs --path");
  if (spec.kind == ModelKind::Dicke) {
    const double sym = out.parameters.at("symmetric");
    if (sym != 0.0 && sym != 1.0) throw Error(ErrorCode::InvalidArgument, "symmetric must be 0 or 1");
  }
  return out;
}

SingleSpinClosedForm single_spin_closed_form(double h3) {
  SingleSpinClosedForm c;
  if (h3 == 0.0) {
    c.chi_f = 0.25;
    c.bd = 1.0;
    c.dcomm = 0.0;
    c.lower = 0.25;
    c.chi_fg = 0.125;
    return c;
  }
  const double th = std::tanh(h3);
  c.chi_f = th * th / (4.0 * h3 * h3);
  c.bd = th / h3;
  c.dcomm = 4.0 * h3 * th;
  c.lower = th / (4.0 * h3) * (1.0 - h3 * h3 / 3.0);
  c.chi_fg = (1.0 - 1.0 / std::cosh(h3)) / (4.0 * h3 * h3);
  return c;
}

BuiltModel build_from_operators(const OperatorPair& ops, double beta, const Tolerances& tol) {
  const HermitianOperator t = validate_hermitian(ops.t, tol.herm_tol);
  const HermitianOperator s = validate_hermitian(ops.s, tol.herm_tol);
  if (t.dim() != s.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "dim(T) = " + std::to_string(t.dim()) + ", dim(S) = " + std::to_string(s.dim()));
  }
  return BuiltModel{attach_perturbation(build_gibbs(t, beta, tol), s, ops.particle_count), {},
                    {}, {}};
}

BuiltModel single_spin(double h3) {
  if (!std::isfinite(h3)) throw Error(ErrorCode::InvalidArgument, "h3 must be finite");
  OperatorPair ops{-h3 * pauli_z(), pauli_x(), 1};
  BuiltModel m = build_from_operators(ops, 1.0);
  m.closed_form = single_spin_closed_form(h3);
  return m;
}

OperatorPair dicke_operators(const DickeParams& p, const Tolerances& tol) {
  if (p.atoms < 1 || p.n_max < 2 || !(p.omega > 0) || !(p.lambda > 0) || !std::isfinite(p.eps)) {
    throw Error(ErrorCode::InvalidArgument,
                "dicke needs atoms >= 1, n_max >= 2, omega > 0, lambda > 0");
  }
  if (!p.symmetric_sector && p.atoms > 8) {
    throw Error(ErrorCode::InvalidArgument, "full tensor space allows at most 8 atoms");
  }
  const double spin_dim = p.symmetric_sector ? p.atoms + 1.0 : std::ldexp(1.0, p.atoms);
  check_budget(spin_dim * (p.n_max + 1), tol);

  CMatrix jx, jz;
  if (p.symmetric_sector) {
    const SpinMatrices sm = spin_matrices(p.atoms);
    jx = sm.x();
    jz = sm.z;
  } else {
    const Index d = static_cast<Index>(spin_dim);
    jx = CMatrix::Zero(d, d);
    jz = CMatrix::Zero(d, d);
    for (int i = 0; i < p.atoms; ++i) {
      jx += site_op(pauli_x(), i, p.atoms) / 2.0;
      jz += site_op(pauli_z(), i, p.atoms) / 2.0;
    }
  }
  const CMatrix a = boson_annihilation(p.n_max);
  const CMatrix quad = a + a.adjoint();
  const CMatrix id_spin = identity(jx.rows());
  const CMatrix id_b = identity(a.rows());
  const double n = p.atoms;

  OperatorPair ops;
  ops.t = p.omega * kron(id_spin, a.adjoint() * a) + p.eps * kron(jz, id_b) +
          (p.lambda / std::sqrt(n)) * kron(jx, quad);
  ops.s = (std::sqrt(n) / 2.0) * kron(id_spin, quad);
  ops.particle_count = p.atoms;
  return ops;
}

BuiltModel dicke(const DickeParams& p, const Tolerances& tol) {
  BuiltModel m = build_from_operators(dicke_operators(p, tol), p.beta, tol);
  if (!p.probe_cutoff) return m;

  DickeParams wider = p;
  wider.n_max = p.n_max + 4;
  wider.probe_cutoff = false;
  const double spin_dim = p.symmetric_sector ? p.atoms + 1.0 : std::ldexp(1.0, p.atoms);
  if (spin_dim * (wider.n_max + 1) > tol.dimension_budget) {
    m.warnings.push_back("cutoff probe skipped: n_max + 4 exceeds the dimension budget");
    return m;
  }
  const double base = chi_f_spectral(m.family, tol).total;
  const double probe = chi_f_spectral(dicke(wider, tol).family, tol).total;
  const double shift = std::abs(probe - base) / std::max(std::abs(base), 1e-300);
  m.cutoff_shift = shift;
  if (shift > tol.cutoff_shift_tol) {
    std::ostringstream os;
    os.precision(3);
    os << "CutoffNotConverged: chi_f moves by " << shift << " (relative) at n_max = "
       << wider.n_max;
    m.warnings.push_back(os.str());
  }
  return m;
}

DickeTc dicke_tc(double omega, double eps, double lambda) {
  if (!(omega > 0) || !(lambda > 0) || !std::isfinite(eps))
    throw Error(ErrorCode::InvalidArgument, "dicke_tc needs omega > 0, lambda > 0");
  const double ratio = std::abs(eps) * omega / (4.0 * lambda * lambda);
  if (ratio > 1.0) {
    throw Error(ErrorCode::NoTransition, "4 lambda^2 / omega < |eps|: no phase transition");
  }
  DickeTc r;
  r.tc_tanh = std::abs(eps) / 2.0 * std::tanh(ratio);
  if (ratio == 1.0) {
    r.tc_implicit = 0.0;
  } else if (eps == 0.0) {
    r.tc_implicit = 2.0 * lambda * lambda / omega;  // |eps| / (2 artanh(|eps| w / 4 l^2)) as eps -> 0
  } else {
    // tanh(|eps| / 2T) decreases in T; bracket the crossing with ratio, then bisect.
    const double e = std::abs(eps);
    auto f = [&](double t) { return std::tanh(e / (2.0 * t)) - ratio; };
    double lo = 1e-300;
    double hi = e;
    while (f(hi) > 0.0) hi *= 2.0;
    while (hi - lo > 1e-12 * std::max(1.0, hi)) {
      const double mid = 0.5 * (lo + hi);
      (f(mid) > 0.0 ? lo : hi) = mid;
    }
    r.tc_implicit = 0.5 * (lo + hi);
  }
  return r;
}

OperatorPair kondo_operators(const KondoParams& p, const Tolerances& tol) {
  const int modes = static_cast<int>(p.mode_energies.size());
  if (modes < 1 || modes > 3) throw Error(ErrorCode::InvalidArgument, "kondo needs 1 to 3 modes");
  if (p.s2 < 1) throw Error(ErrorCode::InvalidArgument, "s2 must be >= 1");
  check_budget(std::ldexp(1.0, 2 * modes) * (p.s2 + 1.0), tol);

  const int sites = 2 * modes;
  // Jordan-Wigner: c_j = Z x ... x Z x a x I x ... x I with a = |0><1|.
  CMatrix lower = CMatrix::Zero(2, 2);
  lower(0, 1) = 1.0;
  std::vector<CMatrix> c(sites);
  for (int j = 0; j < sites; ++j) {
    CMatrix op = identity(1);
    for (int i = 0; i < sites; ++i) op = kron(op, i < j ? pauli_z() : (i == j ? lower : identity(2)));
    c[j] = op;
  }
  const Index df = c[0].rows();
  CMatrix h0 = CMatrix::Zero(df, df);
  for (int k = 0; k < modes; ++k)
    for (int sigma = 0; sigma < 2; ++sigma) {
      const CMatrix& ck = c[2 * k + sigma];
      h0 += p.mode_energies[k] * (ck.adjoint() * ck);
    }

  const CMatrix pauli[3] = {pauli_x(), pauli_y(), pauli_z()};
  const SpinMatrices imp = spin_matrices(p.s2);
  const CMatrix s_imp[3] = {imp.x(), imp.y(), imp.z};
  const CMatrix id_imp = identity(p.s2 + 1);

  CMatrix t = kron(h0, id_imp);
  for (int alpha = 0; alpha < 3; ++alpha) {
    CMatrix n_alpha = CMatrix::Zero(df, df);
    for (int k = 0; k < modes; ++k)
      for (int kp = 0; kp < modes; ++kp)
        for (int s = 0; s < 2; ++s)
          for (int sp = 0; sp < 2; ++sp) {
            const Complex w = pauli[alpha](s, sp) / 2.0;
            if (w == Complex(0.0)) continue;
            n_alpha += w * (c[2 * k + s].adjoint() * c[2 * kp + sp]);
          }
    n_alpha /= static_cast<double>(modes);
    t -= p.coupling * kron(n_alpha, s_imp[alpha]);
  }
  return OperatorPair{t, kron(identity(df), imp.z), 1};
}

BuiltModel kondo_toy(const KondoParams& p, const Tolerances& tol) {
  return build_from_operators(kondo_operators(p, tol), p.beta, tol);
}

double roepstorff_x_star() {
  auto f = [](double x) { return population_drop_ratio(x) - x / 3.0; };
  double lo = 0.0, hi = 3.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

KondoBoundRecord kondo_roepstorff(double beta, double coupling, int s2) {
  if (!(beta > 0) || !std::isfinite(coupling) || s2 < 1)
    throw Error(ErrorCode::InvalidArgument, "kondo_roepstorff needs beta > 0, finite J, s2 >= 1");
  const double s = s2 / 2.0;
  const double bj = beta * coupling;
  KondoBoundRecord r;
  r.chi_c = beta * s * (s + 1.0) / 3.0;
  r.beta_eps = bj * std::tanh(bj) / (2.0 * s * (s + 1.0));
  r.x_star = roepstorff_x_star();
  r.upper = r.chi_c;
  r.lower = r.beta_eps > r.x_star
                ? 0.0
                : r.chi_c * std::max(0.0, population_drop_ratio(r.beta_eps) - r.beta_eps / 3.0);
  return r;
}

RoepstorffCheck kondo_roepstorff_check(const PerturbedFamily& family, double coupling, int s2) {
  const KondoBoundRecord rec = kondo_roepstorff(family.beta(), coupling, s2);
  RoepstorffCheck c;
  c.dcomm = double_commutator(family);
  c.dcomm_cap = 2.0 / 3.0 * coupling * std::tanh(family.beta() * coupling);
  c.beta_bd = family.beta() * bd_inner_product(family);
  c.bd_cap = rec.chi_c;
  c.bd_floor = rec.chi_c * population_drop_ratio(rec.beta_eps);
  const double slack = 1e-12 * std::max(1.0, rec.chi_c);
  c.dcomm_ok = c.dcomm >= -slack && c.dcomm <= c.dcomm_cap + slack;
  c.bd_ok = c.beta_bd >= c.bd_floor - slack && c.beta_bd <= c.bd_cap + slack;
  return c;
}

OperatorPair random_operators(int dim, std::uint64_t seed, double t_scale, double s_scale) {
  if (dim < 2 || dim > 64) throw Error(ErrorCode::InvalidArgument, "random dim must be in [2, 64]");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(dim)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto draw = [&](double scale) {
    CMatrix a(dim, dim);
    for (Index i = 0; i < dim; ++i)
      for (Index j = 0; j < dim; ++j) {
        const double re = normal(rng);
        const double im = normal(rng);
        a(i, j) = Complex(re, im);
      }
    CMatrix h = (a + a.adjoint()) * (scale / (2.0 * std::sqrt(static_cast<double>(dim))));
    for (Index i = 0; i < dim; ++i) h(i, i) = h(i, i).real();
    return h;
  };
  OperatorPair ops;
  ops.t = draw(t_scale);
  ops.s = draw(s_scale);
  return ops;
}

BuiltModel random_pair(int dim, std::uint64_t seed, double t_scale, double s_scale, double beta) {
  return build_from_operators(random_operators(dim, seed, t_scale, s_scale), beta);
}

OperatorPair tfim_operators(int n_sites, double j_coupling, double g_field) {
  if (n_sites < 2 || n_sites > 10)
    throw Error(ErrorCode::InvalidArgument, "tfim n_sites must be in [2, 10]");
  const Index d = Index{1} << n_sites;
  OperatorPair ops{CMatrix::Zero(d, d), CMatrix::Zero(d, d), n_sites};
  for (int i = 0; i < n_sites; ++i) {
    const CMatrix x = site_op(pauli_x(), i, n_sites);
    ops.s += x;
    ops.t -= g_field * x;
    if (i + 1 < n_sites)
      ops.t -= j_coupling * site_op(pauli_z(), i, n_sites) * site_op(pauli_z(), i + 1, n_sites);
  }
  return ops;
}

BuiltModel tfim(int n_sites, double j_coupling, double g_field, double beta) {
  const Tolerances& tol = default_tolerances();
  check_budget(std::ldexp(1.0, n_sites), tol);
  return build_from_operators(tfim_operators(n_sites, j_coupling, g_field), beta, tol);
}

namespace {

double finite_number(const Json& v, const std::string& where) {
  if (!v.is_number()) throw Error(ErrorCode::SchemaError, where + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw Error(ErrorCode::ParseError, where + " is not finite");
  return x;
}

long long integer(const Json& v, const std::string& where) {
  if (!v.is_number_integer()) throw Error(ErrorCode::SchemaError, where + " must be an integer");
  return v.get<long long>();
}

CMatrix read_matrix(const Json& v, Index dim, const std::string& key) {
  if (!v.is_array() || static_cast<Index>(v.size()) != dim)
    throw Error(ErrorCode::SchemaError, key + " must have " + std::to_string(dim) + " rows");
  CMatrix m(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    const Json& row = v[i];
    if (!row.is_array() || static_cast<Index>(row.size()) != dim)
      throw Error(ErrorCode::SchemaError, key + " row " + std::to_string(i) + " has wrong length");
    for (Index j = 0; j < dim; ++j) {
      const Json& e = row[j];
      const std::string where = key + "[" + std::to_string(i) + "][" + std::to_string(j) + "]";
      if (!e.is_array() || e.size() != 2)
        throw Error(ErrorCode::SchemaError, where + " must be an [re, im] pair");
      m(i, j) = Complex(finite_number(e[0], where), finite_number(e[1], where));
    }
  }
  return m;
}

}  // namespace

MatrixFile parse_matrix_file(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::SchemaError, "top level must be an object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "dim" && key != "beta" && key != "N" && key != "T" && key != "S")
      throw Error(ErrorCode::SchemaError, "unknown key '" + key + "'");
  }
  for (const char* key : {"dim", "beta", "T", "S"})
    if (!doc.contains(key)) throw Error(ErrorCode::SchemaError, std::string("missing key '") + key + "'");

  const long long dim = integer(doc["dim"], "dim");
  if (dim < 1) throw Error(ErrorCode::SchemaError, "dim must be >= 1");
  check_budget(static_cast<double>(dim), default_tolerances());
  MatrixFile f;
  f.beta = finite_number(doc["beta"], "beta");
  if (doc.contains("N")) {
    const long long n = integer(doc["N"], "N");
    if (n < 1) throw Error(ErrorCode::SchemaError, "N must be >= 1");
    f.ops.particle_count = static_cast<int>(n);
  }
  f.ops.t = read_matrix(doc["T"], dim, "T");
  f.ops.s = read_matrix(doc["S"], dim, "S");
  return f;
}

std::string write_matrix_file(const OperatorPair& ops, double beta) {
  auto dump = [](const CMatrix& m) {
    Json rows = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
      Json row = Json::array();
      for (Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
      rows.push_back(row);
    }
    return rows;
  };
  Json doc;
  doc["dim"] = ops.t.rows();
  doc["beta"] = beta;
  doc["N"] = ops.particle_count;
  doc["T"] = dump(ops.t);
  doc["S"] = dump(ops.s);
  return doc.dump() + "\n";
}

BuiltModel model_from_file(const std::string& path, std::optional<double> beta_override) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const MatrixFile f = parse_matrix_file(buf.str());
  return build_from_operators(f.ops, beta_override.value_or(f.beta));
}

BuiltModel build_model(const ModelSpec& raw, const Tolerances& tol) {
  const ModelSpec spec = validate_spec(raw);
  const auto beta = [&] { return spec.param("beta"); };
  switch (spec.kind) {
    case ModelKind::SingleSpin: {
      BuiltModel m = single_spin(spec.param("h3"));
      if (beta() != 1.0) {
        m.family = with_beta(m.family, beta());
        m.closed_form.reset();
      }
      return m;
    }
    case ModelKind::Dicke: {
      DickeParams p;
      p.atoms = static_cast<int>(spec.cutoff("atoms"));
      p.n_max = static_cast<int>(spec.cutoff("n_max"));
      p.omega = spec.param("omega");
      p.eps = spec.param("eps");
      p.lambda = spec.param("lambda");
      p.beta = beta();
      p.symmetric_sector = spec.param("symmetric") == 1.0;
      return dicke(p, tol);
    }
    case ModelKind::KondoToy: {
      KondoParams p;
      p.s2 = static_cast<int>(spec.cutoff("s2"));
      const long long modes = spec.cutoff("modes");
      if (modes > 3) throw Error(ErrorCode::InvalidArgument, "kondo needs 1 to 3 modes");
      p.mode_energies.clear();
      for (long long k = 0; k < modes; ++k) p.mode_energies.push_back(spec.param("e" + std::to_string(k)));
      p.coupling = spec.param("J");
      p.beta = beta();
      return kondo_toy(p, tol);
    }
    case ModelKind::Random:
      return random_pair(static_cast<int>(spec.cutoff("dim")), spec.seed.value_or(0),
                         spec.param("t_scale"), spec.param("s_scale"), beta());
    case ModelKind::File: {
      std::optional<double> b;
      if (spec.parameters.count("beta")) b = beta();
      return model_from_file(spec.path, b);
    }
    case ModelKind::Tfim:
      check_budget(std::ldexp(1.0, static_cast<int>(std::min(spec.cutoff("n_sites"), 60LL))), tol);
      return tfim(static_cast<int>(spec.cutoff("n_sites")), spec.param("j_coupling"),
                  spec.param("g_field"), beta());
  }
  throw Error(ErrorCode::InvalidArgument, "unhandled model kind");
}

}  // namespace fidsus
