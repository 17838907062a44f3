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
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fidsus/harness.hpp"

namespace {

using fidsus::Error;
using fidsus::ErrorCode;
using Json = nlohmann::json;

// Values given on the command line for one subcommand. Anything left unset
// falls back to the config file, then to the library defaults.
struct ModelFlags {
  std::string model;
  std::string path;
  std::uint64_t seed = 0;
  std::map<std::string, double> values;
  std::map<std::string, CLI::Option*> options;
  CLI::Option* model_opt = nullptr;
  CLI::Option* path_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
};

std::string dashed(std::string name) {
  for (char& c : name)
    if (c == '_') c = '-';
  return name;
}

void add_model_flags(CLI::App* app, ModelFlags& f) {
  f.model_opt = app->add_option("--model", f.model, "model kind (see `models list`)");
  f.path_opt = app->add_option("--path", f.path, "matrix file for --model file");
  f.seed_opt = app->add_option("--seed", f.seed, "random seed");
  std::set<std::string> names;
  for (fidsus::ModelKind k : fidsus::all_kinds())
    for (const auto& p : fidsus::model_params(k)) names.insert(p.name);
  for (const std::string& name : names) {
    std::string flags = "--" + name;
    if (dashed(name) != name) flags += ",--" + dashed(name);
    f.values[name] = 0.0;
    f.options[name] = app->add_option(flags, f.values[name], "model parameter");
  }
}

Json load_config(const std::string& path) {
  if (path.empty()) return Json::object();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  Json doc;
  try {
    doc = Json::parse(buf.str());
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::SchemaError, "config must be a JSON object");
  return doc;
}

void check_config_keys(const Json& cfg, const std::set<std::string>& allowed) {
  for (const auto& [key, _] : cfg.items())
    if (!allowed.count(key)) throw Error(ErrorCode::SchemaError, "config key '" + key + "' not used here");
}

double config_number(const Json& cfg, const std::string& key) {
  const Json& v = cfg.at(key);
  if (!v.is_number()) throw Error(ErrorCode::SchemaError, "config '" + key + "' must be a number");
  return v.get<double>();
}

std::string config_string(const Json& cfg, const std::string& key) {
  const Json& v = cfg.at(key);
  if (!v.is_string()) throw Error(ErrorCode::SchemaError, "config '" + key + "' must be a string");
  return v.get<std::string>();
}

std::set<std::string> model_keys() {
  std::set<std::string> keys{"model", "path", "seed"};
  for (fidsus::ModelKind k : fidsus::all_kinds())
    for (const auto& p : fidsus::model_params(k)) keys.insert(p.name);
  return keys;
}

fidsus::ModelSpec make_spec(const ModelFlags& f, const Json& cfg) {
  fidsus::ModelSpec spec;
  std::string model = f.model;
  if (!f.model_opt->count()) {
    if (!cfg.contains("model")) throw Error(ErrorCode::InvalidArgument, "--model is required");
    model = config_string(cfg, "model");
  }
  spec.kind = fidsus::parse_kind(model);
  if (f.path_opt->count())
    spec.path = f.path;
  else if (cfg.contains("path"))
    spec.path = config_string(cfg, "path");
  if (f.seed_opt->count()) {
    spec.seed = f.seed;
  } else if (cfg.contains("seed")) {
    if (!cfg["seed"].is_number_unsigned()) throw Error(ErrorCode::SchemaError, "config 'seed' must be a non-negative integer");
    spec.seed = cfg["seed"].get<std::uint64_t>();
  }

  const auto& infos = fidsus::model_params(spec.kind);
  for (const auto& [name, opt] : f.options) {
    double value;
    if (opt->count())
      value = f.values.at(name);
    else if (cfg.contains(name))
      value = config_number(cfg, name);
    else
      continue;
    bool cutoff = false;
    for (const auto& p : infos)
      if (p.name == name) cutoff = p.cutoff;
    if (cutoff) {
      if (value != std::floor(value)) throw Error(ErrorCode::InvalidArgument, "--" + name + " must be an integer");
      spec.cutoffs[name] = static_cast<long long>(value);
    } else {
      spec.parameters[name] = value;
    }
  }
  return spec;
}

int fail(const std::exception& e) {
  std::cerr << "error: " << e.what() << '\n';
  if (const auto* fe = dynamic_cast<const Error*>(&e))
    return fidsus::is_consistency_failure(fe->code()) ? 2 : 1;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fidelity susceptibility of Gibbs families H(h) = T - h S and its bounds"};
  app.require_subcommand(1);

  std::string config_path;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON file with the same keys as the flags");
  };

  auto* report = app.add_subcommand("report", "evaluate one model point");
  ModelFlags report_flags;
  bool report_json = false;
  add_config(report);
  add_model_flags(report, report_flags);
  auto* report_json_opt = report->add_flag("--json", report_json, "machine-readable output");

  auto* sweep = app.add_subcommand("sweep", "scan one parameter and write CSV (and SVG)");
  ModelFlags sweep_flags;
  std::string sweep_param, sweep_out, sweep_svg, sweep_scale = "linear";
  double sweep_from = 0.0, sweep_to = 1.0;
  int sweep_steps = 2;
  bool sweep_no_oracle = false;
  add_config(sweep);
  add_model_flags(sweep, sweep_flags);
  auto* o_param = sweep->add_option("--param", sweep_param, "parameter to scan (e.g. beta, h3)");
  auto* o_from = sweep->add_option("--from", sweep_from, "first grid value");
  auto* o_to = sweep->add_option("--to", sweep_to, "last grid value");
  auto* o_steps = sweep->add_option("--steps", sweep_steps, "number of grid points (>= 2)");
  auto* o_scale = sweep->add_option("--scale", sweep_scale, "linear or log");
  auto* o_out = sweep->add_option("--out", sweep_out, "CSV output path");
  auto* o_svg = sweep->add_option("--svg", sweep_svg, "optional SVG plot path");
  auto* o_no_oracle = sweep->add_flag("--no-oracle", sweep_no_oracle,
                                      "skip the ln Z and quadrature cross-checks");

  auto* verify = app.add_subcommand("verify", "randomized invariant suite");
  std::uint64_t verify_seed = 42;
  int verify_instances = 100, verify_dim_max = 12;
  std::string verify_out;
  add_config(verify);
  auto* o_vseed = verify->add_option("--seed", verify_seed, "master seed");
  auto* o_inst = verify->add_option("--instances", verify_instances, "random families");
  auto* o_dmax = verify->add_option("--dim-max,--dim_max", verify_dim_max, "largest dimension (2-16)");
  auto* o_vout = verify->add_option("--out", verify_out, "also write the summary here");

  auto* plot = app.add_subcommand("plot", "render CSV columns against param as SVG");
  std::string plot_csv, plot_svg;
  std::vector<std::string> plot_columns{"chi_f", "ub", "lb_paper"};
  add_config(plot);
  auto* o_csv = plot->add_option("--csv", plot_csv, "input CSV");
  auto* o_cols = plot->add_option("--columns", plot_columns, "columns to draw")->delimiter(',');
  auto* o_psvg = plot->add_option("--svg,--out", plot_svg, "output SVG path");

  auto* models = app.add_subcommand("models", "model catalog");
  models->require_subcommand(1);
  auto* models_list = models->add_subcommand("list", "print model kinds and their flags");

  CLI11_PARSE(app, argc, argv);

  try {
    const Json cfg = load_config(config_path);

    if (*report) {
      auto keys = model_keys();
      keys.insert("json");
      check_config_keys(cfg, keys);
      const fidsus::ModelSpec spec = make_spec(report_flags, cfg);
      bool json = report_json;
      if (!report_json_opt->count() && cfg.contains("json")) json = cfg["json"].get<bool>();
      return fidsus::run_report(spec, json, std::cout, std::cerr);
    }

    if (*sweep) {
      auto keys = model_keys();
      keys.insert({"param", "from", "to", "steps", "scale", "out", "svg", "no_oracle"});
      check_config_keys(cfg, keys);
      fidsus::SweepSpec s;
      s.model = make_spec(sweep_flags, cfg);
      s.param = o_param->count() ? sweep_param : (cfg.contains("param") ? config_string(cfg, "param") : "");
      if (s.param.empty()) throw Error(ErrorCode::InvalidArgument, "--param is required");
      for (char& c : s.param)
        if (c == '-') c = '_';
      s.from = o_from->count() ? sweep_from : (cfg.contains("from") ? config_number(cfg, "from") : sweep_from);
      s.to = o_to->count() ? sweep_to : (cfg.contains("to") ? config_number(cfg, "to") : sweep_to);
      s.steps = o_steps->count() ? sweep_steps
                                 : (cfg.contains("steps") ? static_cast<int>(config_number(cfg, "steps")) : sweep_steps);
      const std::string scale = o_scale->count() ? sweep_scale : (cfg.contains("scale") ? config_string(cfg, "scale") : sweep_scale);
      if (scale == "linear")
        s.scale = fidsus::SweepScale::Linear;
      else if (scale == "log")
        s.scale = fidsus::SweepScale::Log;
      else
        throw Error(ErrorCode::InvalidArgument, "--scale must be linear or log");
      s.csv_path = o_out->count() ? sweep_out : (cfg.contains("out") ? config_string(cfg, "out") : "");
      if (o_svg->count())
        s.svg_path = sweep_svg;
      else if (cfg.contains("svg"))
        s.svg_path = config_string(cfg, "svg");
      bool no_oracle = sweep_no_oracle;
      if (!o_no_oracle->count() && cfg.contains("no_oracle")) no_oracle = cfg["no_oracle"].get<bool>();
      s.oracle_checks = !no_oracle;
      fidsus::run_sweep(s);
      return 0;
    }

    if (*verify) {
      check_config_keys(cfg, {"seed", "instances", "dim_max", "out"});
      fidsus::VerifyOptions v;
      v.seed = o_vseed->count() ? verify_seed : (cfg.contains("seed") ? cfg["seed"].get<std::uint64_t>() : verify_seed);
      v.instances = o_inst->count() ? verify_instances
                                    : (cfg.contains("instances") ? cfg["instances"].get<int>() : verify_instances);
      v.dim_max = o_dmax->count() ? verify_dim_max : (cfg.contains("dim_max") ? cfg["dim_max"].get<int>() : verify_dim_max);
      const std::string out_path = o_vout->count() ? verify_out : (cfg.contains("out") ? config_string(cfg, "out") : "");
      const fidsus::VerifyOutcome outcome = fidsus::run_verify(v);
      std::cout << outcome.summary;
      if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::IoError, "cannot write " + out_path);
        out << outcome.summary;
      }
      return outcome.all_pass ? 0 : 2;
    }

    if (*plot) {
      check_config_keys(cfg, {"csv", "columns", "svg"});
      const std::string csv = o_csv->count() ? plot_csv : (cfg.contains("csv") ? config_string(cfg, "csv") : "");
      const std::string svg = o_psvg->count() ? plot_svg : (cfg.contains("svg") ? config_string(cfg, "svg") : "");
      std::vector<std::string> columns = plot_columns;
      if (!o_cols->count() && cfg.contains("columns")) columns = cfg["columns"].get<std::vector<std::string>>();
      if (csv.empty() || svg.empty()) throw Error(ErrorCode::InvalidArgument, "plot needs --csv and --svg");
      fidsus::emit_plot(csv, columns, svg);
      return 0;
    }

    if (*models_list) {
      std::cout << fidsus::models_listing();
      return 0;
    }
  } catch (const Json::exception& e) {
    std::cerr << "error: config: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    return fail(e);
  }
  return 1;
}
