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

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "fidsus/fidelity.hpp"
#include "fidsus/harness.hpp"

namespace fidsus {

namespace {

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void line(std::ostream& out, const std::string& key, const std::string& value) {
  out << key;
  for (std::size_t i = key.size(); i < 24; ++i) out << ' ';
  out << "= " << value << '\n';
}

void line(std::ostream& out, const std::string& key, double value) { line(out, key, g17(value)); }

}  // namespace

PointReport evaluate_point(const PerturbedFamily& family, const PointOptions& options,
                           const Tolerances& tol) {
  PointReport pr;
  pr.bounds = bound_report(family, ReportOptions{options.oracle_checks}, tol);
  pr.chi_fg_quadrature = pr.bounds.lower_green;
  if (options.oracle_checks) {
    pr.chi_fg_quadrature = chi_fg_integral(family, options.quad_nodes, tol).quadrature;
  }
  const BoundReport& b = pr.bounds;
  if (std::abs(b.ds2 - b.chi_f) > 1e-9 * std::max(1.0, b.chi_f)) {
    throw Error(ErrorCode::FormMismatch,
                "ds2 = " + g17(b.ds2) + " differs from chi_f = " + g17(b.chi_f));
  }
  return pr;
}

int run_report(const ModelSpec& spec, bool json, std::ostream& out, std::ostream& err) {
  BuiltModel model{};
  PointReport pr;
  try {
    model = build_model(spec);
    pr = evaluate_point(model.family);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_consistency_failure(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  const BoundReport& b = pr.bounds;
  const PerturbedFamily& fam = model.family;

  if (json) {
    nlohmann::ordered_json doc;
    doc["model"] = kind_name(spec.kind);
    doc["dim"] = fam.dim();
    doc["beta"] = b.beta;
    doc["particles"] = b.particle_count;
    doc["chi_f"] = b.chi_f;
    doc["chi_f_classical"] = b.chi_f_classical;
    doc["chi_f_quantum"] = b.chi_f_quantum;
    doc["ub"] = b.upper;
    doc["lb_paper"] = b.lower_dcomm;
    doc["lb_aasc"] = b.lower_green;
    doc["chi_fg"] = b.lower_green;
    doc["chi_fg_quadrature"] = pr.chi_fg_quadrature;
    doc["ds2"] = b.ds2;
    doc["bd"] = b.bd_product;
    doc["dcomm"] = b.dcomm;
    doc["chi_n"] = b.chi_n;
    doc["sandwich_ok"] = b.sandwich_ok;
    doc["degenerate_pairs"] = b.degenerate_pairs;
    if (b.per_particle) {
      const PerParticle& p = *b.per_particle;
      doc["per_particle"] = {{"chi_f", p.chi_f},     {"ub", p.upper},
                             {"lb_paper", p.lower_dcomm}, {"lb_aasc", p.lower_green},
                             {"ds2", p.ds2},         {"dcomm", p.dcomm}};
    }
    if (model.closed_form) {
      const SingleSpinClosedForm& c = *model.closed_form;
      doc["closed_form"] = {{"chi_f", c.chi_f}, {"bd", c.bd},       {"dcomm", c.dcomm},
                            {"lb_paper", c.lower}, {"chi_fg", c.chi_fg}};
    }
    if (model.cutoff_shift) doc["cutoff_shift"] = *model.cutoff_shift;
    doc["warnings"] = model.warnings;
    out << doc.dump(2) << '\n';
  } else {
    line(out, "model", kind_name(spec.kind));
    line(out, "dim", std::to_string(fam.dim()));
    line(out, "beta", b.beta);
    line(out, "particles", std::to_string(b.particle_count));
    line(out, "chi_f", b.chi_f);
    line(out, "chi_f_classical", b.chi_f_classical);
    line(out, "chi_f_quantum", b.chi_f_quantum);
    line(out, "ub", b.upper);
    line(out, "lb_paper", b.lower_dcomm);
    line(out, "lb_aasc", b.lower_green);
    line(out, "chi_fg", b.lower_green);
    line(out, "chi_fg_quadrature", pr.chi_fg_quadrature);
    line(out, "ds2", b.ds2);
    line(out, "bd", b.bd_product);
    line(out, "dcomm", b.dcomm);
    line(out, "chi_n", b.chi_n);
    line(out, "sandwich_ok", b.sandwich_ok ? "true" : "false");
    line(out, "degenerate_pairs", std::to_string(b.degenerate_pairs));
    if (b.per_particle) {
      const PerParticle& p = *b.per_particle;
      line(out, "per_particle.chi_f", p.chi_f);
      line(out, "per_particle.ub", p.upper);
      line(out, "per_particle.lb_paper", p.lower_dcomm);
      line(out, "per_particle.lb_aasc", p.lower_green);
      line(out, "per_particle.ds2", p.ds2);
      line(out, "per_particle.dcomm", p.dcomm);
    }
    if (model.closed_form) {
      const SingleSpinClosedForm& c = *model.closed_form;
      line(out, "closed_form.chi_f", c.chi_f);
      line(out, "closed_form.bd", c.bd);
      line(out, "closed_form.dcomm", c.dcomm);
      line(out, "closed_form.lb_paper", c.lower);
      line(out, "closed_form.chi_fg", c.chi_fg);
    }
    if (model.cutoff_shift) line(out, "cutoff_shift", *model.cutoff_shift);
  }
  for (const std::string& w : model.warnings) err << "warning: " << w << '\n';
  if (!b.sandwich_ok) {
    err << "error: bound sandwich violated\n";
    return 2;
  }
  return 0;
}

std::string models_listing() {
  std::string out;
  for (ModelKind k : all_kinds()) {
    out += std::string(kind_name(k)) + "  " + kind_summary(k) + "\n";
    for (const ParamInfo& p : model_params(k)) {
      std::string flag = "    --" + p.name;
      while (flag.size() < 18) flag += ' ';
      std::string def;
      if (p.required) {
        def = "required";
      } else if (p.fallback) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", *p.fallback);
        def = std::string("default ") + buf;
      } else {
        def = "optional";
      }
      out += flag + (p.cutoff ? "int   " : "real  ") + p.doc + " (" + def + ")\n";
    }
  }
  return out;
}

}  // namespace fidsus
