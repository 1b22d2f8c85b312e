#include <catch2/catch.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "plancklab/cli.hpp"
#include "plancklab/io.hpp"
#include "plancklab/plot.hpp"

using namespace plancklab;

namespace {

struct CliRun {
  int exit_code;
  std::string out;
  std::string err;
};

CliRun run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = plancklab::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return std::string("/tmp/plancklab_test_") + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("measure JSON round trip preserves the measure") {
  const SpectralMeasure measures[] = {
      SpectralMeasure::cilleruelo(), SpectralMeasure::uniform(),
      SpectralMeasure::mixture(0.3, SpectralMeasure::cilleruelo(), 0.7,
                               SpectralMeasure::piecewise_constant(
                                   {{0.0, 0.25, 2.0}, {0.5, 0.75, 2.0}}))};
  for (const auto& mu : measures) {
    const SpectralMeasure back = measure_from_json(measure_to_json(mu));
    REQUIRE(w1_distance(mu, back) <= 1e-12);
    REQUIRE(back.atomic_weight() == Approx(mu.atomic_weight()));
  }
}

TEST_CASE("malformed measure documents are rejected") {
  REQUIRE_THROWS_AS(measure_from_json(json::array()), std::invalid_argument);
  REQUIRE_THROWS_AS(measure_from_json(json{{"atomic_weight", 0.0}}), std::invalid_argument);
  json bad = measure_to_json(SpectralMeasure::uniform());
  bad["density"]["family"] = "cauchy";
  REQUIRE_THROWS_AS(measure_from_json(bad), std::invalid_argument);
}

TEST_CASE("summaries validate against the schema check") {
  const json ok = make_summary("enumerate", {{"E", 25}});
  REQUIRE_NOTHROW(validate_summary(ok));
  REQUIRE_THROWS_AS(validate_summary(json{{"command", "x"}}), std::invalid_argument);
  json no_config = ok;
  no_config.erase("config");
  REQUIRE_THROWS_AS(validate_summary(no_config), std::invalid_argument);
}

TEST_CASE("plot output exists, is SVG, and is byte-deterministic") {
  std::vector<double> v1, v2;
  for (int i = 0; i < 500; ++i) {
    v1.push_back(0.01 * i);
    v2.push_back(0.01 * i);
  }
  const EmpiricalDistribution d1(v1, {1, "gen", "first"});
  const EmpiricalDistribution d2(v2, {2, "gen", "second"});
  const std::string p1 = temp_path("plot1.svg");
  const std::string p2 = temp_path("plot2.svg");
  emit_plot({d1, d2}, p1);
  emit_plot({d1, d2}, p2);
  const std::string svg = slurp(p1);
  REQUIRE(svg.rfind("<svg", 0) == 0);
  REQUIRE(svg == slurp(p2));
  // Two coincident step curves and their legend entries.
  std::size_t polylines = 0, pos = 0;
  while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
    ++polylines;
    ++pos;
  }
  REQUIRE(polylines == 2);
  REQUIRE(svg.find("first") != std::string::npos);
  REQUIRE(svg.find("second") != std::string::npos);
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST_CASE("plot rejects an empty list") {
  REQUIRE_THROWS_AS(emit_plot({}, temp_path("never.svg")), std::invalid_argument);
}

TEST_CASE("single-distribution plot spans the sample range") {
  std::vector<double> v{1.0, 2.0, 3.0};
  const EmpiricalDistribution d(v, {1, "gen", "only"});
  const std::string p = temp_path("plot3.svg");
  emit_plot({d}, p);
  const std::string svg = slurp(p);
  REQUIRE(svg.find("polyline") != std::string::npos);
  std::remove(p.c_str());
}

TEST_CASE("cli enumerate emits a valid summary with the expected fields") {
  const CliRun r = run_cli({"enumerate", "--E", "25"});
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  REQUIRE_NOTHROW(validate_summary(doc));
  REQUIRE(doc["E"] == 25);
  REQUIRE(doc["N"] == 12);
  REQUIRE(doc["points"].size() == 12);
}

TEST_CASE("cli enumerate of an empty representation exits 0") {
  const CliRun r = run_cli({"enumerate", "--E", "3"});
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  REQUIRE(doc["N"] == 0);
  REQUIRE(doc["points"].empty());
}

TEST_CASE("cli validation failures exit 2") {
  REQUIRE(run_cli({"enumerate", "--E", "0"}).exit_code == 2);      // domain error
  REQUIRE(run_cli({"enumerate", "--bogus", "1"}).exit_code == 2);  // unknown flag
  REQUIRE(run_cli({"frobnicate"}).exit_code == 2);                 // unknown subcommand
  REQUIRE(run_cli({}).exit_code == 2);                             // missing subcommand
  REQUIRE(run_cli({"correlations", "--E", "25", "--l", "7"}).exit_code == 2);
}

TEST_CASE("cli help exits 0") {
  const CliRun r = run_cli({"--help"});
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out.find("Usage") != std::string::npos);
}

TEST_CASE("cli correlations and audit emit the documented record shape") {
  const CliRun r = run_cli({"correlations", "--E", "25", "--l", "2"});
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  REQUIRE(doc["total_count"] == 396);
  REQUIRE(doc["diagonal"] == 432);
  REQUIRE(doc["residual"] == -36);

  const CliRun a = run_cli({"audit-a1", "--E", "25", "--gamma", "0.45", "--c", "4"});
  REQUIRE(a.exit_code == 0);
  const json adoc = json::parse(a.out);
  REQUIRE(adoc["lines"].size() == 2);
  REQUIRE(adoc.contains("all_pass"));
}

TEST_CASE("cli mass-sim writes CSV rows and a summary") {
  const std::string csv = temp_path("mass.csv");
  const CliRun r = run_cli({"mass-sim", "--E", "25", "--R", "2", "--n", "50", "--seed",
                            "9", "--out", csv});
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  REQUIRE(doc["config"]["seed"] == 9);
  REQUIRE(doc.contains("mean"));
  REQUIRE(doc.contains("var"));
  REQUIRE(doc.contains("m3"));
  const std::string body = slurp(csv);
  REQUIRE(body.rfind("x1,x2,r,value\n", 0) == 0);
  REQUIRE(std::count(body.begin(), body.end(), '\n') == 51);
  std::remove(csv.c_str());
}

TEST_CASE("cli field-sim, w-dist and compare-thm2 run from a measure file") {
  const std::string mpath = temp_path("measure.json");
  save_measure(mpath, SpectralMeasure::cilleruelo());

  const CliRun f = run_cli({"field-sim", "--measure", mpath, "--R", "10", "--n", "300",
                            "--seed", "4"});
  REQUIRE(f.exit_code == 0);
  const json fdoc = json::parse(f.out);
  REQUIRE(fdoc.contains("ks_vs_w_reference"));  // purely atomic input

  const CliRun w = run_cli({"w-dist", "--measure", mpath, "--n", "300", "--seed", "4"});
  REQUIRE(w.exit_code == 0);
  const json wdoc = json::parse(w.out);
  REQUIRE(wdoc["closed_form_mean"] == 1.0);
  REQUIRE(wdoc["closed_form_variance"] == Approx(0.5));

  const std::string svg = temp_path("thm2.svg");
  const CliRun t = run_cli({"compare-thm2", "--measure", mpath, "--R-list", "5,25", "--n",
                            "300", "--seed", "4", "--plot", svg});
  REQUIRE(t.exit_code == 0);
  const json tdoc = json::parse(t.out);
  REQUIRE(tdoc["entries"].size() == 2);
  REQUIRE(slurp(svg).rfind("<svg", 0) == 0);
  std::remove(svg.c_str());
  std::remove(mpath.c_str());
}

TEST_CASE("cli rejects a w-dist run on a continuous measure") {
  const std::string mpath = temp_path("uniform.json");
  save_measure(mpath, SpectralMeasure::uniform());
  REQUIRE(run_cli({"w-dist", "--measure", mpath, "--n", "100"}).exit_code == 2);
  std::remove(mpath.c_str());
}

TEST_CASE("summaries are byte-identical across worker counts") {
  const std::vector<std::vector<std::string>> harnesses = {
      {"mass-sim", "--E", "65", "--R", "2", "--n", "400", "--seed", "3"},
      {"compare-thm1", "--E", "65", "--model", "flat", "--R", "3", "--n", "300", "--seed",
       "5"},
      {"derandomize", "--E", "65", "--K", "8", "--R", "2", "--n", "1000", "--seed", "2"},
  };
  for (const auto& base : harnesses) {
    auto with_workers = [&](const char* w) {
      std::vector<std::string> args{"--workers", w};
      args.insert(args.end(), base.begin(), base.end());
      return run_cli(args);
    };
    const CliRun one = with_workers("1");
    const CliRun four = with_workers("4");
    REQUIRE(one.exit_code == 0);
    REQUIRE(four.exit_code == 0);
    REQUIRE(one.out == four.out);
  }
}

TEST_CASE("cli summaries re-parse and re-validate") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"enumerate", "--E", "50"},
           {"correlations", "--E", "50", "--l", "1"},
           {"mass-sim", "--E", "50", "--R", "2", "--n", "20", "--seed", "1"}}) {
    const CliRun r = run_cli(args);
    REQUIRE(r.exit_code == 0);
    REQUIRE_NOTHROW(validate_summary(json::parse(r.out)));
  }
}
