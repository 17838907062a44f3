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
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "fidsus/harness.hpp"

using namespace fidsus;

namespace {

namespace fs = std::filesystem;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::IoError;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "fidsus_harness_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int column(const CsvTable& t, const std::string& name) {
  for (std::size_t i = 0; i < t.header.size(); ++i)
    if (t.header[i] == name) return static_cast<int>(i);
  FAIL("missing column " << name);
  return -1;
}

std::size_t argmax(const CsvTable& t, int col) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < t.rows.size(); ++i)
    if (t.rows[i][col] > t.rows[best][col]) best = i;
  return best;
}

ModelSpec single_spin_spec(double h3) {
  ModelSpec m;
  m.kind = ModelKind::SingleSpin;
  m.parameters["h3"] = h3;
  return m;
}

int run_cli(const std::string& args, const fs::path& out) {
  const std::string cmd = std::string(FIDSUS_CLI) + " " + args + " > " + out.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("report renders closed-form values") {
    std::ostringstream out, err;
    CHECK(run_report(single_spin_spec(1.0), false, out, err) == 0);
    CHECK(out.str().find("chi_f                   = 0.1450064145964934") != std::string::npos);
    std::ostringstream zero, zerr;
    CHECK(run_report(single_spin_spec(0.0), false, zero, zerr) == 0);
    CHECK(zero.str().find("chi_f                   = 0.25\n") != std::string::npos);
    ModelSpec r;
    r.kind = ModelKind::Random;
    r.cutoffs["dim"] = 4;
    r.seed = 7;
    std::ostringstream js, jerr;
    CHECK(run_report(r, true, js, jerr) == 0);
    CHECK(js.str().find("\"sandwich_ok\": true") != std::string::npos);
  }

  TEST_CASE("report errors exit with 1") {
    ModelSpec bad;
    bad.kind = ModelKind::Tfim;
    bad.cutoffs["n_sites"] = 20;
    std::ostringstream out, err;
    CHECK(run_report(bad, false, out, err) == 1);
    CHECK(!err.str().empty());
  }

  TEST_CASE("sweep grid") {
    const auto lin = sweep_grid(0.0, 1.0, 5, SweepScale::Linear);
    REQUIRE(lin.size() == 5);
    CHECK(lin.front() == 0.0);
    CHECK(lin.back() == 1.0);
    CHECK(lin[2] == 0.5);
    const auto lg = sweep_grid(0.1, 10.0, 3, SweepScale::Log);
    CHECK(lg[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(lg.back() == 10.0);
    CHECK(code_of([] { sweep_grid(1.0, 0.0, 3, SweepScale::Linear); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { sweep_grid(0.0, 1.0, 1, SweepScale::Linear); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { sweep_grid(0.0, 1.0, 3, SweepScale::Log); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("single-spin sweep crosses zero near sqrt 3") {
    SweepSpec s;
    s.model = single_spin_spec(1.0);
    s.param = "h3";
    s.from = 0.1;
    s.to = 3.0;
    s.steps = 30;
    const std::string csv = format_csv(compute_sweep(s));
    CHECK(csv.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
    const CsvTable t = parse_csv(csv);
    REQUIRE(t.rows.size() == 30);
    const int p = column(t, "param");
    const int lb = column(t, "lb_paper");
    const int chi = column(t, "chi_f");
    const int ub = column(t, "ub");
    const int ds2 = column(t, "ds2");
    int crossings = 0;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const auto& row = t.rows[i];
      CHECK(row[lb] <= row[chi] + 1e-10);
      CHECK(row[chi] <= row[ub] + 1e-10);
      CHECK(std::abs(row[ds2] - row[chi]) <= 1e-9 * std::max(1.0, row[chi]));
      if (i > 0 && (t.rows[i - 1][lb] > 0) != (row[lb] > 0)) {
        ++crossings;
        CHECK(t.rows[i - 1][p] <= std::sqrt(3.0));
        CHECK(row[p] >= std::sqrt(3.0));
      }
    }
    CHECK(crossings == 1);
  }

  TEST_CASE("sweep csv format") {
    SweepSpec s;
    s.model = single_spin_spec(1.0);
    s.param = "h3";
    s.from = 0.5;
    s.to = 1.0;
    s.steps = 2;
    const std::string csv = format_csv(compute_sweep(s));
    std::istringstream lines(csv);
    std::string header, first;
    std::getline(lines, header);
    std::getline(lines, first);
    CHECK(header ==
          "param,beta,chi_f,chi_f_classical,chi_f_quantum,ub,lb_paper,lb_aasc,chi_fg,ds2,bd,dcomm,"
          "chi_n,sandwich_ok,degenerate_pairs");
    CHECK(first.rfind("0.5,1,", 0) == 0);
    CHECK(first.find(",true,0") != std::string::npos);
    // 17 significant digits round-trip.
    const CsvTable t = parse_csv(csv);
    CHECK(t.rows[1][column(t, "chi_f")] == compute_sweep(s)[1].chi_f);
  }

  TEST_CASE("sweep files are deterministic and removed on failure") {
    SweepSpec s;
    s.model = single_spin_spec(1.0);
    s.param = "h3";
    s.from = 0.1;
    s.to = 2.0;
    s.steps = 8;
    s.csv_path = scratch("a.csv").string();
    s.svg_path = scratch("a.svg").string();
    run_sweep(s);
    const std::string first = slurp(s.csv_path);
    const std::string svg = slurp(*s.svg_path);
    run_sweep(s);
    CHECK(slurp(s.csv_path) == first);
    CHECK(slurp(*s.svg_path) == svg);

    SweepSpec bad = s;
    bad.model.kind = ModelKind::Random;
    bad.model.parameters.clear();
    bad.param = "dim";
    bad.from = 2;
    bad.to = 80;
    bad.steps = 2;
    bad.csv_path = scratch("bad.csv").string();
    bad.svg_path.reset();
    CHECK_THROWS(run_sweep(bad));
    CHECK_FALSE(fs::exists(bad.csv_path));
  }

  TEST_CASE("kondo coupling sweep stays below the free-spin value") {
    SweepSpec s;
    s.model.kind = ModelKind::KondoToy;
    s.model.parameters["beta"] = 2.0;
    s.param = "J";
    s.from = 0.05;
    s.to = 3.0;
    s.steps = 8;
    for (const auto& row : compute_sweep(s)) {
      const double chi_c = row.beta * 0.75 / 3.0;
      CHECK(4.0 / row.beta * row.chi_f <= chi_c + 1e-12);
      CHECK(row.sandwich_ok);
    }
  }

  TEST_CASE("tfim peaks of chi_f per site and chi_n coincide") {
    SweepSpec s;
    s.model.kind = ModelKind::Tfim;
    s.model.cutoffs["n_sites"] = 8;
    s.model.parameters["beta"] = 4.0;
    s.param = "g_field";
    s.from = 0.0;
    s.to = 2.0;
    s.steps = 11;
    s.oracle_checks = false;
    const CsvTable t = parse_csv(format_csv(compute_sweep(s)));
    const auto a = argmax(t, column(t, "chi_f"));
    const auto b = argmax(t, column(t, "chi_n"));
    CHECK((a > b ? a - b : b - a) <= 1);
    CHECK(a > 0);
    CHECK(a + 1 < t.rows.size());
  }

  TEST_CASE("plot") {
    const std::string csv = "param,chi_f,ub,lb_paper\n0.1,1,2,0.5\n0.2,1.5,2.5,1\n0.3,1.2,2,-1\n";
    const std::string svg = render_svg(parse_csv(csv), {"chi_f", "ub", "lb_paper"});
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("<svg") != std::string::npos);
    std::size_t count = 0;
    for (std::size_t pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1))
      ++count;
    CHECK(count == 3);
    CHECK(svg.find("http://") == svg.find("http://www.w3.org/2000/svg"));
    CHECK(code_of([&] { render_svg(parse_csv(csv), {"nope"}); }) == ErrorCode::MissingColumn);
    CHECK(code_of([] { render_svg(parse_csv("param,chi_f\n"), {"chi_f"}); }) == ErrorCode::EmptyData);
    CHECK(code_of([] { render_svg(parse_csv(""), {"chi_f"}); }) == ErrorCode::EmptyData);
    const fs::path empty = scratch("empty.csv");
    std::ofstream(empty) << "";
    CHECK(code_of([&] { emit_plot(empty.string(), {"chi_f"}, scratch("e.svg").string()); }) ==
          ErrorCode::EmptyData);
  }

  TEST_CASE("verify is deterministic") {
    VerifyOptions o;
    o.instances = 20;
    o.dim_max = 6;
    const auto a = run_verify(o);
    const auto b = run_verify(o);
    CHECK(a.all_pass);
    CHECK(a.summary == b.summary);
    o.seed = 43;
    CHECK(run_verify(o).summary != a.summary);
  }

  TEST_CASE("consistency failures map to exit code 2") {
    for (ErrorCode c : {ErrorCode::InternalFormMismatch, ErrorCode::FormMismatch,
                        ErrorCode::QuadratureDisagreement, ErrorCode::OracleDisagreement})
      CHECK(is_consistency_failure(c));
    CHECK_FALSE(is_consistency_failure(ErrorCode::ParseError));
    CHECK_FALSE(is_consistency_failure(ErrorCode::InvalidArgument));
  }

  TEST_CASE("models listing names every kind") {
    const std::string list = models_listing();
    for (ModelKind k : all_kinds()) CHECK(list.find(kind_name(k)) != std::string::npos);
  }

  TEST_CASE("command line exit codes and config files") {
    const fs::path out = scratch("cli.txt");
    CHECK(run_cli("report --model single_spin --h3 1.0", out) == 0);
    CHECK(slurp(out).find("chi_f                   = 0.1450064145964934") != std::string::npos);
    CHECK(run_cli("report --model single_spin", out) == 1);
    CHECK(run_cli("report --model nonsense", out) == 1);
    CHECK(run_cli("report --model random --dim 4 --seed 7 --json", out) == 0);
    CHECK(slurp(out).find("\"sandwich_ok\": true") != std::string::npos);
    CHECK(run_cli("models list", out) == 0);
    CHECK(slurp(out).find("dicke") != std::string::npos);

    const fs::path cfg = scratch("cfg.json");
    std::ofstream(cfg) << R"({"model": "single_spin", "h3": 2.0})";
    CHECK(run_cli("report --config " + cfg.string(), out) == 0);
    const std::string from_file = slurp(out);
    CHECK(run_cli("report --model single_spin --h3 2.0", out) == 0);
    CHECK(slurp(out) == from_file);
    CHECK(run_cli("report --config " + cfg.string() + " --h3 1.0", out) == 0);
    CHECK(slurp(out).find("0.1450064145964934") != std::string::npos);
    std::ofstream(cfg) << R"({"model": "single_spin", "h3": 2.0, "typo": 1})";
    CHECK(run_cli("report --config " + cfg.string(), out) == 1);

    const fs::path csv = scratch("cli.csv");
    CHECK(run_cli("sweep --model single_spin --h3 1 --param h3 --from 0.1 --to 3 --steps 5 --out " +
                      csv.string(), out) == 0);
    CHECK(slurp(csv).rfind(kCsvHeader, 0) == 0);
    const fs::path svg = scratch("cli.svg");
    CHECK(run_cli("plot --csv " + csv.string() + " --columns chi_f,ub,lb_paper --svg " + svg.string(), out) == 0);
    CHECK(slurp(svg).find("<polyline") != std::string::npos);
    CHECK(run_cli("plot --csv " + csv.string() + " --columns nope --svg " + svg.string(), out) == 1);
    CHECK(run_cli("verify --seed 1 --instances 3 --dim-max 4", out) == 0);
  }
}
