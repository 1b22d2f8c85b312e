// Command-line entry point wiring all modules.
//
// Every subcommand prints a JSON summary to stdout that embeds the resolved
// configuration and the artifact version; bulk samples go to CSV files and
// CDF overlays to SVG. Seeds always default to explicit constants, never to
// the clock. Exit codes: 0 success, 2 validation error, 1 internal error.
#pragma once

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "plancklab/compare.hpp"
#include "plancklab/derand.hpp"
#include "plancklab/eigenfunction.hpp"
#include "plancklab/field.hpp"
#include "plancklab/io.hpp"
#include "plancklab/lattice.hpp"
#include "plancklab/measure.hpp"
#include "plancklab/parallel.hpp"
#include "plancklab/plot.hpp"
#include "plancklab/version.hpp"

namespace plancklab::cli {

namespace detail {

inline CoefficientModel parse_model(const std::string& name) {
  if (name == "flat") return CoefficientModel::flat;
  if (name == "random-sphere" || name == "random_sphere")
    return CoefficientModel::random_sphere;
  throw std::invalid_argument("unknown coefficient model: " + name);
}

inline json correlation_json(std::int64_t E, int N, const CorrelationReport& r) {
  json doc;
  doc["E"] = E;
  doc["N"] = N;
  doc["l"] = r.l;
  doc["total_count"] = r.total_count;
  doc["diagonal"] = r.diagonal_main_term;
  doc["residual"] = r.residual;
  if (r.gamma_exponent) doc["gamma_exponent"] = *r.gamma_exponent;
  return doc;
}

inline json comparison_json(const ComparisonReport& r) {
  json doc;
  doc["ks"] = r.ks;
  doc["mean_gap"] = r.mean_gap;
  doc["var_gap"] = r.var_gap;
  doc["mean_left"] = r.mean_left;
  doc["mean_right"] = r.mean_right;
  doc["var_left"] = r.var_left;
  doc["var_right"] = r.var_right;
  doc["n_left"] = r.n_left;
  doc["n_right"] = r.n_right;
  doc["ks_threshold"] = r.thresholds.ks;
  doc["mean_threshold"] = r.thresholds.mean_gap;
  doc["ks_pass"] = r.ks_pass;
  doc["mean_pass"] = r.mean_pass;
  doc["warnings"] = r.warnings;
  return doc;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"plancklab: Planck-scale mass statistics of toral eigenfunctions"};
  app.require_subcommand(1);
  int workers = 0;
  app.add_option("--workers", workers,
                 "worker threads (default: PLANCKLAB_WORKERS env or hardware)");

  // enumerate
  auto* cmd_enumerate =
      app.add_subcommand("enumerate", "lattice points on the circle |xi|^2 = E");
  std::int64_t en_E = 0;
  cmd_enumerate->add_option("--E", en_E, "eigenvalue parameter")->required();

  // correlations
  auto* cmd_corr = app.add_subcommand("correlations", "exact zero-sum 2l-tuple counts");
  std::int64_t co_E = 0;
  int co_l = 2, co_cap = 512;
  cmd_corr->add_option("--E", co_E)->required();
  cmd_corr->add_option("--l", co_l, "half the tuple length, in {1,2,3}")->required();
  cmd_corr->add_option("--l3-cap", co_cap, "multiplicity cap for l = 3");

  // audit-a1
  auto* cmd_a1 = app.add_subcommand("audit-a1", "spectral correlation audit");
  std::int64_t a1_E = 0;
  double a1_gamma = 0.0, a1_c = 0.0;
  int a1_lmax = 2, a1_cap = 512;
  cmd_a1->add_option("--E", a1_E)->required();
  cmd_a1->add_option("--gamma", a1_gamma, "exponent in (0, 1/2)")->required();
  cmd_a1->add_option("--c", a1_c, "absolute constant of the bound")->required();
  cmd_a1->add_option("--l-max", a1_lmax, "audit l = 1..l_max (<= 3)");
  cmd_a1->add_option("--l3-cap", a1_cap, "multiplicity cap for l = 3");

  // mass-sim
  auto* cmd_mass = app.add_subcommand("mass-sim", "Monte Carlo of M_f(x, R/sqrt(E))");
  std::int64_t ms_E = 0;
  std::string ms_model = "flat", ms_out;
  double ms_R = 2.0;
  int ms_n = 1000;
  std::uint64_t ms_seed = 1;
  cmd_mass->add_option("--E", ms_E)->required();
  cmd_mass->add_option("--model", ms_model, "flat | random-sphere");
  cmd_mass->add_option("--R", ms_R, "Planck window scale, > 1")->required();
  cmd_mass->add_option("--n", ms_n, "number of ball centres")->required();
  cmd_mass->add_option("--seed", ms_seed, "RNG seed (default 1)");
  cmd_mass->add_option("--out", ms_out, "CSV output path (x1,x2,r,value)");

  // field-sim
  auto* cmd_field = app.add_subcommand("field-sim", "ball mass of the Gaussian field");
  std::string fs_measure, fs_out;
  double fs_R = 1.0;
  int fs_m = 256, fs_n = 1000;
  std::uint64_t fs_seed = 1;
  cmd_field->add_option("--measure", fs_measure, "spectral measure JSON file")->required();
  cmd_field->add_option("--R", fs_R, "ball radius")->required();
  cmd_field->add_option("--m", fs_m, "atoms for the continuous part (even)");
  cmd_field->add_option("--n", fs_n, "number of field samples")->required();
  cmd_field->add_option("--seed", fs_seed, "RNG seed (default 1)");
  cmd_field->add_option("--out", fs_out, "CSV output path (one value per sample)");

  // w-dist
  auto* cmd_w = app.add_subcommand("w-dist", "samples of the limit variable W(mu_A)");
  std::string wd_measure, wd_out;
  int wd_n = 1000;
  std::uint64_t wd_seed = 1;
  cmd_w->add_option("--measure", wd_measure, "purely atomic measure JSON file")->required();
  cmd_w->add_option("--n", wd_n, "number of samples")->required();
  cmd_w->add_option("--seed", wd_seed, "RNG seed (default 1)");
  cmd_w->add_option("--out", wd_out, "CSV output path");

  // derandomize
  auto* cmd_dr = app.add_subcommand("derandomize", "arc coefficients and surrogate error");
  std::int64_t dr_E = 0;
  std::string dr_model = "flat";
  int dr_K = 16, dr_n = 2000, dr_nsup = 100;
  double dr_delta = -1.0, dr_R = 2.0, dr_step = -1.0;
  std::uint64_t dr_seed = 1;
  cmd_dr->add_option("--E", dr_E)->required();
  cmd_dr->add_option("--model", dr_model, "flat | random-sphere");
  cmd_dr->add_option("--K", dr_K, "number of half-arcs")->required();
  cmd_dr->add_option("--delta", dr_delta, "arc mass threshold (default K^-2)");
  cmd_dr->add_option("--R", dr_R, "window scale, > 1")->required();
  cmd_dr->add_option("--n", dr_n, "centres for the b_k statistics")->required();
  cmd_dr->add_option("--n-sup", dr_nsup, "centres for the sup-difference study");
  cmd_dr->add_option("--grid-step", dr_step, "sup grid step (default 1/(10R))");
  cmd_dr->add_option("--seed", dr_seed, "RNG seed (default 1)");

  // compare-thm1
  auto* cmd_t1 = app.add_subcommand("compare-thm1",
                                    "eigenfunction mass law vs Gaussian ball-mass law");
  std::int64_t t1_E = 0;
  std::string t1_model = "flat", t1_plot;
  double t1_R = 2.0;
  int t1_n = 1000;
  std::uint64_t t1_seed = 1;
  cmd_t1->add_option("--E", t1_E)->required();
  cmd_t1->add_option("--model", t1_model, "flat | random-sphere");
  cmd_t1->add_option("--R", t1_R)->required();
  cmd_t1->add_option("--n", t1_n, "samples per side")->required();
  cmd_t1->add_option("--seed", t1_seed, "RNG seed (default 1)");
  cmd_t1->add_option("--plot", t1_plot, "SVG path for the CDF overlay");

  // compare-thm2
  auto* cmd_t2 =
      app.add_subcommand("compare-thm2", "ball-mass law vs the limit alpha W + beta");
  std::string t2_measure, t2_plot;
  std::vector<double> t2_R;
  int t2_n = 1000, t2_m = 256;
  std::uint64_t t2_seed = 1;
  cmd_t2->add_option("--measure", t2_measure, "spectral measure JSON file")->required();
  cmd_t2->add_option("--R-list", t2_R, "comma-separated radii")->required()->delimiter(',');
  cmd_t2->add_option("--n", t2_n, "samples per law")->required();
  cmd_t2->add_option("--m", t2_m, "atoms for the continuous part (even)");
  cmd_t2->add_option("--seed", t2_seed, "RNG seed (default 1)");
  cmd_t2->add_option("--plot", t2_plot, "SVG path for the CDF overlay");

  std::vector<std::string> argv_storage;
  argv_storage.push_back("plancklab");
  for (const auto& a : args) argv_storage.push_back(a);
  std::vector<const char*> argv;
  for (const auto& s : argv_storage) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help() << '\n';
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All) << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help() << '\n';
    return 2;
  }

  try {
    if (workers > 0) set_worker_count(workers);

    if (*cmd_enumerate) {
      const LatticePointSet set = enumerate_lattice_points(en_E);
      json summary = make_summary("enumerate", {{"E", en_E}});
      summary["E"] = en_E;
      summary["N"] = set.multiplicity();
      json points = json::array();
      for (const auto& p : set.points) points.push_back({p.x, p.y});
      summary["points"] = points;
      out << summary.dump(2) << '\n';
      return 0;
    }

    if (*cmd_corr) {
      const LatticePointSet set = enumerate_lattice_points(co_E);
      const CorrelationReport r = count_correlations(set, co_l, co_cap);
      json summary =
          make_summary("correlations", {{"E", co_E}, {"l", co_l}, {"l3_cap", co_cap}});
      summary.update(detail::correlation_json(co_E, set.multiplicity(), r));
      out << summary.dump(2) << '\n';
      return 0;
    }

    if (*cmd_a1) {
      const LatticePointSet set = enumerate_lattice_points(a1_E);
      const A1Report r = audit_a1(set, a1_gamma, a1_lmax, a1_c, a1_cap);
      json summary = make_summary("audit-a1", {{"E", a1_E},
                                               {"gamma", a1_gamma},
                                               {"c", a1_c},
                                               {"l_max", a1_lmax},
                                               {"l3_cap", a1_cap}});
      summary["E"] = a1_E;
      summary["N"] = set.multiplicity();
      summary["all_pass"] = r.all_pass;
      json lines = json::array();
      for (const auto& line : r.lines) {
        lines.push_back({{"l", line.l},
                         {"total_count", line.total_count},
                         {"diagonal", line.diagonal_main_term},
                         {"residual", line.residual},
                         {"threshold", line.threshold},
                         {"minimal_c", line.minimal_c},
                         {"pass", line.pass}});
      }
      summary["lines"] = lines;
      out << summary.dump(2) << '\n';
      return 0;
    }

    if (*cmd_mass) {
      const LatticePointSet set = enumerate_lattice_points(ms_E);
      const CoefficientVector coeffs =
          generate_coefficients(set, detail::parse_model(ms_model), ms_seed);
      const auto rows = sample_mass_detailed(coeffs, ms_R, ms_n, ms_seed);
      std::vector<double> values(rows.size());
      for (std::size_t i = 0; i < rows.size(); ++i) values[i] = rows[i].value;
      const EmpiricalDistribution dist(values, {ms_seed, kGeneratorId, "mass-sim"});
      json summary = make_summary("mass-sim", {{"E", ms_E},
                                               {"model", ms_model},
                                               {"R", ms_R},
                                               {"n", ms_n},
                                               {"seed", ms_seed}});
      summary["E"] = ms_E;
      summary["N"] = set.multiplicity();
      summary["R"] = ms_R;
      summary["mean"] = dist.mean();
      summary["var"] = mass_moment(dist, 2);
      summary["m3"] = mass_moment(dist, 3);
      if (!ms_out.empty()) {
        write_mass_csv(ms_out, rows);
        summary["csv"] = ms_out;
      }
      out << summary.dump(2) << '\n';
      return 0;
    }

    if (*cmd_field) {
      FieldSpec spec;
      spec.measure = load_measure(fs_measure);
      spec.discretization_m = fs_m;
      spec.R = fs_R;
      const EmpiricalDistribution dist = sample_ball_mass(spec, fs_n, fs_seed);
      json summary = make_summary("field-sim", {{"measure", fs_measure},
                                                {"R", fs_R},
                                                {"m", fs_m},
                                                {"n", fs_n},
                                                {"seed", fs_seed}});
      summary["mean"] = dist.mean();
      summary["var"] = dist.variance();
      summary["n"] = fs_n;
      if (spec.measure.is_purely_atomic()) {
        const EmpiricalDistribution w =
            sample_w(spec.measure, fs_n, derive_seed(fs_seed, 2));
        summary["ks_vs_w_reference"] = ks_distance(dist, w);
      }
      if (!fs_out.empty()) {
        write_values_csv(fs_out, dist.samples());
        summary["csv"] = fs_out;
      }
      out << summary.dump(2) << '\n';
      return 0;
    }

    if (*cmd_w) {
      const SpectralMeasure mu = load_measure(wd_measure);
      const EmpiricalDistribution dist = sample_w(mu, wd_n, wd_seed);
      const WMoments wm = w_moments(mu);
      json summary = make_summary(
          "w-dist", {{"measure", wd_measure}, {"n", wd_n}, {"seed", wd_seed}});
      summary["mean"] = dist.mean();
      summary["var"] = dist.variance();
      summary["closed_form_mean"] = wm.mean;
      summary["closed_form_variance"] = wm.variance;
      if (!wd_out.empty()) {
        write_values_csv(wd_out, dist.samples());
        summary["csv"] = wd_out;
      }
      out << summary.dump(2) << '\n';
      return 0;
    }

    if (*cmd_dr) {
      if (dr_delta <= 0.0) dr_delta = 1.0 / (static_cast<double>(dr_K) * dr_K);
      if (dr_step <= 0.0) dr_step = 1.0 / (10.0 * dr_R);
      DerandomizationConfig config{dr_K, dr_delta, dr_R, dr_step};
      config.validate();
      const LatticePointSet set = enumerate_lattice_points(dr_E);
      const CoefficientVector coeffs =
          generate_coefficients(set, detail::parse_model(dr_model), dr_seed);
      const SpectralMeasure mu_f = from_coefficients(coeffs);
      const ArcPartition partition = arc_partition(mu_f, set, dr_K, dr_delta);
      const GaussianityReport greport = gaussianity_report(coeffs, partition, dr_n, dr_seed);

      std::vector<double> sups(static_cast<std::size_t>(dr_nsup));
      std::vector<double> bars(static_cast<std::size_t>(dr_nsup));
      parallel_for(sups.size(), [&](std::size_t i) {
        CounterRng rng(dr_seed, i, 7);
        const double x1 = rng.next_unit();
        const double x2 = rng.next_unit();
        const SupDifferenceReport r =
            sup_difference_with_partition(coeffs, x1, x2, config, partition);
        sups[i] = r.grid_max;
        bars[i] = r.error_bar;
      });
      std::sort(sups.begin(), sups.end());
      std::sort(bars.begin(), bars.end());
      const auto quantile = [](const std::vector<double>& v, double p) {
        return v[std::min(v.size() - 1, static_cast<std::size_t>(p * v.size()))];
      };

      json summary = make_summary("derandomize", {{"E", dr_E},
                                                  {"model", dr_model},
                                                  {"K", dr_K},
                                                  {"delta", dr_delta},
                                                  {"R", dr_R},
                                                  {"grid_step", dr_step},
                                                  {"n", dr_n},
                                                  {"n_sup", dr_nsup},
                                                  {"seed", dr_seed}});
      summary["E"] = dr_E;
      summary["N"] = set.multiplicity();
      summary["discarded_mass"] = partition.discarded_mass;
      summary["delta_below_uniform_level"] = config.delta_below_uniform_level();
      json arcs = json::array();
      for (const auto& arc : greport.arcs) {
        arcs.push_back({{"k", arc.k},
                        {"mass", arc.mass},
                        {"n_frequencies", arc.n_frequencies},
                        {"mean_re", arc.mean_re},
                        {"mean_im", arc.mean_im},
                        {"second_moment", arc.second_moment},
                        {"fourth_moment", arc.fourth_moment},
                        {"ks_real", arc.ks_real},
                        {"ks_imag", arc.ks_imag},
                        {"single_frequency", arc.single_frequency},
                        {"flagged_non_gaussian", arc.flagged_non_gaussian}});
      }
      summary["arcs"] = arcs;
      summary["max_pairwise_correlation"] = greport.max_pairwise_correlation;
      summary["sup_difference"] = {{"p10", quantile(sups, 0.10)},
                                   {"p50", quantile(sups, 0.50)},
                                   {"p90", quantile(sups, 0.90)},
                                   {"error_bar_p50", quantile(bars, 0.50)},
                                   {"n_x", dr_nsup}};
      out << summary.dump(2) << '\n';
      return 0;
    }

    if (*cmd_t1) {
      const LatticePointSet set = enumerate_lattice_points(t1_E);
      const CoefficientVector coeffs =
          generate_coefficients(set, detail::parse_model(t1_model), t1_seed);
      const Theorem1Result result = theorem1_run(coeffs, t1_R, t1_n, t1_seed);
      json summary = make_summary("compare-thm1", {{"E", t1_E},
                                                   {"model", t1_model},
                                                   {"R", t1_R},
                                                   {"n", t1_n},
                                                   {"seed", t1_seed}});
      summary.update(detail::comparison_json(result.report));
      if (!t1_plot.empty()) {
        emit_plot({result.left, result.right}, t1_plot);
        summary["plot"] = t1_plot;
      }
      out << summary.dump(2) << '\n';
      return 0;
    }

    if (*cmd_t2) {
      const SpectralMeasure mu = load_measure(t2_measure);
      const Theorem2Result result = theorem2_run(mu, t2_R, t2_n, t2_m, t2_seed);
      json summary = make_summary("compare-thm2", {{"measure", t2_measure},
                                                   {"R_list", t2_R},
                                                   {"n", t2_n},
                                                   {"m", t2_m},
                                                   {"seed", t2_seed}});
      json entries = json::array();
      for (const auto& e : result.entries) {
        entries.push_back({{"R", e.R},
                           {"ks", e.ks},
                           {"mean_gap", e.mean_gap},
                           {"var_gap", e.var_gap},
                           {"var_left", e.var_left},
                           {"var_reference", e.var_reference},
                           {"degenerate_reference", e.degenerate_reference},
                           {"n", e.n}});
      }
      summary["entries"] = entries;
      if (!t2_plot.empty()) {
        std::vector<EmpiricalDistribution> overlay = result.left;
        for (const auto& ref : result.reference) overlay.push_back(ref);
        emit_plot(overlay, t2_plot);
        summary["plot"] = t2_plot;
      }
      out << summary.dump(2) << '\n';
      return 0;
    }

    err << "error: no subcommand selected\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace plancklab::cli
