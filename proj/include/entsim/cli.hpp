#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "entsim/angles.hpp"
#include "entsim/bench.hpp"
#include "entsim/concurrence.hpp"
#include "entsim/csv.hpp"
#include "entsim/errors.hpp"
#include "entsim/experiment.hpp"
#include "entsim/joint_map.hpp"
#include "entsim/lindblad.hpp"
#include "entsim/linalg.hpp"
#include "entsim/map_coefficients.hpp"
#include "entsim/two_qubit.hpp"
#include "entsim/witness.hpp"

namespace entsim {

namespace cli_detail {

/// Evenly spaced decay parameters covering [0, 1]; a single point sits at 0.
inline std::vector<double> p_grid(int npoints) {
  std::vector<double> ps;
  ps.reserve(static_cast<std::size_t>(npoints));
  if (npoints == 1) {
    ps.push_back(0.0);
    return ps;
  }
  for (int i = 0; i < npoints; ++i)
    ps.push_back(static_cast<double>(i) / static_cast<double>(npoints - 1));
  return ps;
}

/// Decay parameter implied by the first plate angle; empty when the angle
/// lies outside the decay family.
inline std::optional<double> p_from_theta1(double theta1_deg) {
  constexpr double kDegToRad = std::numbers::pi_v<double> / 180.0;
  const double p = 2.0 - 2.0 * std::cos(2.0 * theta1_deg * kDegToRad);
  constexpr double kSlack = 1e-9;
  if (p < -kSlack || p > 1.0 + kSlack) return std::nullopt;
  return std::clamp(p, 0.0, 1.0);
}

struct RunRow {
  double p = std::nan("");
  double gt = std::nan("");
  double theta1_deg = std::nan("");
  double theta2_deg = std::nan("");
  OutputIntensities intensities;
};

/// Serializes one full bench record; the sigma column appears only when a
/// camera error is given.
inline void write_run_row(CsvWriter& csv, const RunRow& row,
                          std::optional<double> ccd_error) {
  csv.add("p").add("gt").add("theta1_deg").add("theta2_deg");
  for (int j = 1; j <= 8; ++j) csv.add("I" + std::to_string(j));
  csv.add("P_psi_plus").add("P_psi_minus").add("P_ee").add("P_gg");
  csv.add("witness").add("lambda");
  if (ccd_error.has_value()) csv.add("lambda_sigma");
  csv.end_row();

  const Populations pop = populations(row.intensities);
  const double witness = witness_trace(pop);
  const double lambda = witness / (1.0 - std::numbers::sqrt2_v<double>);

  csv.add(row.p).add(row.gt).add(row.theta1_deg).add(row.theta2_deg);
  for (int j = 0; j < 8; ++j) csv.add(row.intensities.intensity[j]);
  csv.add(pop.p_psi_plus).add(pop.p_psi_minus).add(pop.p_ee).add(pop.p_gg);
  csv.add(witness).add(lambda);
  if (ccd_error.has_value()) csv.add(lambda_uncertainty(pop, *ccd_error));
  csv.end_row();
}

/// Populations of the reduced open-system state in the witness eigenbasis.
inline Populations oracle_populations(const TwoQubitDensityMatrix& rho) {
  const Vector4c plus = psi_plus();
  const Vector4c minus = psi_minus();
  Populations pop;
  pop.p_ee = std::real(rho(kEE, kEE));
  pop.p_gg = std::real(rho(kGG, kGG));
  pop.p_psi_plus = std::real(plus.dot(rho * plus));
  pop.p_psi_minus = std::real(minus.dot(rho * minus));
  return pop;
}

struct CheckReport {
  bool any_fail = false;

  void pass(std::ostream& out, const char* name) {
    out << "ok " << name << "\n";
  }
  void fail(std::ostream& out, const char* name, double deviation) {
    any_fail = true;
    out << "FAIL " << name
        << ": max deviation " << format_table_number(deviation) << "\n";
  }
  void skip(std::ostream& out, const char* name, const char* reason) {
    out << "skip " << name << " (" << reason << ")\n";
  }
  void report(std::ostream& out, const char* name, double deviation,
              double bound) {
    if (deviation <= bound)
      pass(out, name);
    else
      fail(out, name, deviation);
  }
};

}  // namespace cli_detail

/// Entry point of the command-line tool.  args excludes the program name;
/// normal output goes to out, diagnostics and warnings to err.  Returns the
/// process exit code: 0 success, 1 failed invariant, 2 usage or domain
/// error, 3 bench-file error.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{
      "Deterministic simulator of an optical bench in which a shared "
      "environment entangles two encoded qubits"};
  app.set_config("--config", "",
                 "Read defaults from a key=value file (flags win)");

  std::string format = "csv";
  app.add_option("--format", format, "Output table format")
      ->check(CLI::IsMember({"csv", "tsv"}))
      ->capture_default_str();
  std::string out_path;
  app.add_option("--out", out_path, "Write the table to a file");
  double nu_prep = 1.0;
  auto* nu_prep_opt =
      app.add_option("--nu-prep", nu_prep,
                     "Preparation sorter visibility")
          ->check(CLI::Range(0.0, 1.0));
  double nu_dmzim = 1.0;
  auto* nu_dmzim_opt =
      app.add_option("--nu-dmzim", nu_dmzim,
                     "Measurement sorter visibility")
          ->check(CLI::Range(0.0, 1.0));
  bool noise_preset = false;
  app.add_flag("--noise", noise_preset,
               "Enable the visibility preset (0.97 preparation, 0.93 measurement)");
  bool rounded_angles = false;
  app.add_flag("--paper-angles", rounded_angles,
               "Round plate angles to the nearest integer degree");
  double ccd_error = 0.0;
  auto* ccd_opt =
      app.add_option("--ccd-error", ccd_error,
                     "Relative camera error propagated into lambda")
          ->check(CLI::Range(0.0, 1.0));

  auto* coeffs = app.add_subcommand(
      "coeffs", "Evaluate the decay-map coefficients at one point");
  coeffs->fallthrough();
  double coeffs_gt = 0.0;
  auto* coeffs_gt_opt =
      coeffs->add_option("--gt", coeffs_gt, "Dimensionless decay time");
  double coeffs_p = 0.0;
  auto* coeffs_p_opt =
      coeffs->add_option("--p", coeffs_p, "Decay parameter in [0, 1]");

  auto* evolve = app.add_subcommand(
      "evolve", "Integrate the master equation and tabulate the state");
  evolve->fallthrough();
  std::string initial = "eg";
  evolve->add_option("--initial", initial, "Initial two-qubit state")
      ->check(CLI::IsMember(
          {"ee", "eg", "ge", "gg", "psi-plus", "psi-minus"}))
      ->capture_default_str();
  double gamma = 1.0;
  evolve->add_option("--gamma", gamma, "Decay rate")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  double t_max = 5.0;
  evolve->add_option("--t-max", t_max, "Final time")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  int steps = 1000;
  evolve->add_option("--steps", steps, "Integrator steps over [0, t-max]")
      ->check(CLI::Range(1, 100000000))
      ->capture_default_str();
  int rows = 51;
  evolve->add_option("--rows", rows, "Table rows including t = 0")
      ->check(CLI::Range(2, 100000))
      ->capture_default_str();

  auto* run = app.add_subcommand(
      "run", "Run the bench once and report intensities and populations");
  run->fallthrough();
  double run_p = 0.0;
  auto* run_p_opt =
      run->add_option("--p", run_p, "Decay parameter in [0, 1]");
  double run_theta1 = 0.0;
  auto* run_theta1_opt =
      run->add_option("--theta1", run_theta1, "Plate angle in degrees");
  double run_theta2 = 0.0;
  auto* run_theta2_opt =
      run->add_option("--theta2", run_theta2, "Prism angle in degrees");
  run_theta1_opt->needs(run_theta2_opt);
  run_theta2_opt->needs(run_theta1_opt);
  run_p_opt->excludes(run_theta1_opt);
  std::string bench_file;
  auto* run_bench_opt =
      run->add_option("--bench", bench_file, "Bench file to execute");
  double run_dphi = kPrepCalibratedPhase;
  auto* run_dphi_opt = run->add_option(
      "--dphi", run_dphi, "Preparation arm phase in radians");

  auto* sweep_cmd = app.add_subcommand(
      "sweep", "Run the bench across a decay-parameter grid");
  sweep_cmd->fallthrough();
  int npoints = 11;
  sweep_cmd->add_option("--npoints", npoints, "Grid points in [0, 1]")
      ->check(CLI::Range(1, 100001))
      ->capture_default_str();
  double sweep_dphi = kPrepCalibratedPhase;
  sweep_cmd->add_option("--dphi", sweep_dphi,
                        "Preparation arm phase in radians");

  auto* check = app.add_subcommand(
      "check", "Cross-check the circuit against its closed-form twin");
  check->fallthrough();
  double check_dphi = kPrepCalibratedPhase;
  check->add_option("--dphi", check_dphi,
                    "Preparation arm phase in radians");

  auto* parse_cmd =
      app.add_subcommand("parse", "Lint a bench file and summarize it");
  parse_cmd->fallthrough();
  std::string parse_file;
  parse_cmd->add_option("file", parse_file, "Bench file")->required();

  app.require_subcommand(1);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  NoiseModel noise;
  if (noise_preset) {
    noise.nu_prep = 0.97;
    noise.nu_dmzim = 0.93;
  }
  if (nu_prep_opt->count() > 0) noise.nu_prep = nu_prep;
  if (nu_dmzim_opt->count() > 0) noise.nu_dmzim = nu_dmzim;

  std::ostringstream table;
  const char separator = (format == "tsv") ? '\t' : ',';
  CsvWriter csv(table, separator);
  int code = 0;

  try {
    if (app.got_subcommand(coeffs)) {
      if (coeffs_gt_opt->count() + coeffs_p_opt->count() != 1) {
        err << "error: pass exactly one of --gt or --p\n";
        return 2;
      }
      double gt = coeffs_gt;
      if (coeffs_p_opt->count() > 0) gt = gt_from_p(coeffs_p);
      const MapCoefficients k = map_coefficients(gt);
      csv.add("gt").add("p").add("A").add("B").add("C").add("D").add("E")
          .add("F");
      csv.end_row();
      csv.add(gt).add(p_from_gt(gt)).add(k.a).add(k.b).add(k.c).add(k.d)
          .add(k.e).add(k.f);
      csv.end_row();
    } else if (app.got_subcommand(evolve)) {
      Vector4c ket;
      if (initial == "ee") {
        ket = basis_ket(kEE);
      } else if (initial == "eg") {
        ket = basis_ket(kEG);
      } else if (initial == "ge") {
        ket = basis_ket(kGE);
      } else if (initial == "gg") {
        ket = basis_ket(kGG);
      } else if (initial == "psi-plus") {
        ket = psi_plus();
      } else {
        ket = psi_minus();
      }
      const Matrix4c rho0 = projector(ket);

      csv.add("t");
      const char* names[4] = {"ee", "eg", "ge", "gg"};
      for (int r = 0; r < 4; ++r)
        for (int c = r; c < 4; ++c)
          csv.add(std::string("rho_") + names[r] + "_" + names[c]);
      csv.add("lambda").add("concurrence");
      csv.end_row();

      bool coarse = false;
      for (int i = 0; i < rows; ++i) {
        const double t = t_max * static_cast<double>(i) /
                         static_cast<double>(rows - 1);
        Matrix4c rho = rho0;
        if (i > 0) {
          const int row_steps = std::max(
              1, static_cast<int>(std::llround(steps * (t / t_max))));
          const IntegrationResult res =
              integrate_master(rho0, gamma, t, row_steps);
          rho = res.state;
          if (res.coarse_step_warning && !coarse) {
            coarse = true;
            err << "warning: integration step exceeds 0.1 per unit decay "
                   "rate; refine --steps\n";
          }
        }
        csv.add(t);
        for (int r = 0; r < 4; ++r)
          for (int c = r; c < 4; ++c) csv.add(std::real(rho(r, c)));
        csv.add(lambda_value(rho)).add(concurrence(rho));
        csv.end_row();
      }
    } else if (app.got_subcommand(run)) {
      const std::optional<double> ccd =
          ccd_opt->count() > 0 ? std::optional<double>(ccd_error)
                               : std::nullopt;
      cli_detail::RunRow row;

      if (run_bench_opt->count() > 0) {
        std::ifstream in(bench_file, std::ios::binary);
        if (!in.good()) {
          err << "error: cannot read '" << bench_file << "'\n";
          return 3;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        const BenchParseResult parsed = parse_bench(buf.str());
        BenchValidation validated = validate(parsed.file);
        if (!parsed.ok() || !validated.ok()) {
          for (const auto& d : parsed.errors)
            err << bench_file << ":" << d.line << ":" << d.column << ": "
                << d.message << "\n";
          if (parsed.ok())
            for (const auto& d : validated.errors)
              err << bench_file << ":" << d.line << ":" << d.column << ": "
                  << d.message << "\n";
          return 3;
        }

        std::map<std::string, double> overrides;
        if (run_p_opt->count() > 0) {
          const AngleSetting a = rounded_angles ? rounded_angles_for_p(run_p)
                                              : angles_for_p(run_p);
          overrides["theta1"] = a.theta1_deg;
          overrides["theta2"] = a.theta2_deg;
        } else if (run_theta1_opt->count() > 0) {
          overrides["theta1"] = run_theta1;
          overrides["theta2"] = run_theta2;
        }
        if (run_dphi_opt->count() > 0) overrides["dphi"] = run_dphi;
        if (noise_preset || nu_prep_opt->count() > 0)
          overrides["nu_prep"] = noise.nu_prep;
        if (noise_preset || nu_dmzim_opt->count() > 0)
          overrides["nu_dmzim"] = noise.nu_dmzim;

        const BenchRunResult result =
            elaborate_and_run(validated.spec, overrides);

        bool standard = result.ports.size() == 8;
        std::array<double, 8> by_name{};
        if (standard) {
          for (std::size_t i = 0; i < result.ports.size(); ++i) {
            const std::string& port = result.ports[i];
            if (port.size() == 2 && port[0] == 'O' && port[1] >= '1' &&
                port[1] <= '8') {
              by_name[port[1] - '1'] = result.intensities[i];
            } else {
              standard = false;
              break;
            }
          }
        }
        if (!standard) {
          for (const auto& port : result.ports) csv.add(port);
          csv.end_row();
          for (double value : result.intensities) csv.add(value);
          csv.end_row();
        } else {
          row.intensities.intensity = by_name;
          const auto env = resolved_parameters(validated.spec, overrides);
          if (run_p_opt->count() > 0) {
            row.p = run_p;
            row.gt = gt_from_p(run_p);
          }
          if (const auto it = env.find("theta1"); it != env.end())
            row.theta1_deg = it->second;
          if (const auto it = env.find("theta2"); it != env.end())
            row.theta2_deg = it->second;
          if (run_p_opt->count() == 0 && !std::isnan(row.theta1_deg)) {
            const auto inferred = cli_detail::p_from_theta1(row.theta1_deg);
            if (inferred.has_value()) {
              row.p = *inferred;
              row.gt = gt_from_p(*inferred);
            }
          }
          cli_detail::write_run_row(csv, row, ccd);
        }
      } else {
        AngleSetting angles{};
        if (run_p_opt->count() > 0) {
          angles = rounded_angles ? rounded_angles_for_p(run_p)
                                : angles_for_p(run_p);
          row.p = run_p;
          row.gt = gt_from_p(run_p);
        } else if (run_theta1_opt->count() > 0) {
          angles = AngleSetting{run_theta1, run_theta2};
          const auto inferred = cli_detail::p_from_theta1(run_theta1);
          if (inferred.has_value()) {
            row.p = *inferred;
            row.gt = gt_from_p(*inferred);
          }
        } else {
          err << "error: provide --p, --theta1/--theta2, or --bench\n";
          return 2;
        }
        row.theta1_deg = angles.theta1_deg;
        row.theta2_deg = angles.theta2_deg;
        const BeamState state = prepare(angles, run_dphi, noise.nu_prep);
        row.intensities = measure(state, noise);
        cli_detail::write_run_row(csv, row, ccd);
      }
    } else if (app.got_subcommand(sweep_cmd)) {
      csv.add("p").add("lambda_circuit").add("lambda_oracle")
          .add("concurrence");
      csv.end_row();
      for (double p : cli_detail::p_grid(npoints)) {
        const ExperimentRecord rec =
            run_experiment(p, noise, rounded_angles, sweep_dphi);
        const TwoQubitDensityMatrix rho = reduced_state_eg(rec.gt);
        csv.add(p).add(rec.lambda).add(lambda_value(rho))
            .add(concurrence(rho));
        csv.end_row();
      }
    } else if (app.got_subcommand(check)) {
      cli_detail::CheckReport report;
      const bool ideal = noise.nu_prep == 1.0 && noise.nu_dmzim == 1.0;

      {
        double dev = 0.0;
        for (int k = 0; k <= 500; ++k) {
          const MapCoefficients c = map_coefficients(0.02 * k);
          dev = std::max(dev, std::abs(c.a * c.a + 2.0 * c.b * c.b +
                                       c.c * c.c - 1.0));
          dev = std::max(dev, std::abs(c.d * c.d + c.e * c.e + c.f * c.f -
                                       1.0));
        }
        report.report(out, "map-normalization", dev, 1e-12);
      }
      {
        double dev = 0.0;
        for (int k = 0; k <= 20; ++k) {
          const double t = 0.25 * k;
          const int n = std::max(1, static_cast<int>(std::llround(t / 1e-3)));
          const IntegrationResult res =
              integrate_master(projector(basis_ket(kEG)), 1.0, t, n);
          dev = std::max(dev, trace_distance(res.state, reduced_state_eg(t)));
        }
        report.report(out, "integrator-closed-form", dev, 1e-8);
      }
      {
        double dev = 0.0;
        for (int k = 0; k <= 20; ++k) {
          const TwoQubitDensityMatrix rho = reduced_state_eg(0.25 * k);
          dev = std::max(dev, std::abs(lambda_from_witness(rho) -
                                       lambda_value(rho)));
        }
        report.report(out, "witness-identity", dev, 1e-10);
      }
      if (!ideal) {
        report.skip(out, "circuit-oracle", "visibility below 1");
      } else {
        double dev = 0.0;
        for (int k = 0; k <= 20; ++k) {
          const double p = k / 20.0;
          const Populations circuit = populations(
              measure(prepare(angles_for_p(p), check_dphi), noise));
          const Populations oracle =
              cli_detail::oracle_populations(reduced_state_eg(gt_from_p(p)));
          dev = std::max({dev, std::abs(circuit.p_gg - oracle.p_gg),
                          std::abs(circuit.p_ee - oracle.p_ee),
                          std::abs(circuit.p_psi_plus - oracle.p_psi_plus),
                          std::abs(circuit.p_psi_minus -
                                   oracle.p_psi_minus)});
        }
        report.report(out, "circuit-oracle", dev, 1e-9);
      }
      if (noise.nu_prep != 1.0) {
        report.skip(out, "preparation-closed-form", "visibility below 1");
      } else {
        double dev = 0.0;
        for (int k = 0; k <= 20; ++k) {
          const double p = k / 20.0;
          const MapCoefficients c = map_coefficients(gt_from_p(p));
          const BeamState s = prepare(angles_for_p(p), check_dphi);
          dev = std::max(
              {dev, std::abs(s.amp(0, "E0", kCompVh) - c.d),
               std::abs(s.amp(0, "E0", kCompHv) - c.e),
               std::abs(s.amp(0, "E1", kCompHh) - c.f)});
        }
        report.report(out, "preparation-closed-form", dev, 1e-12);
      }
      if (report.any_fail) code = 1;
    } else if (app.got_subcommand(parse_cmd)) {
      std::ifstream in(parse_file, std::ios::binary);
      if (!in.good()) {
        err << "error: cannot read '" << parse_file << "'\n";
        return 3;
      }
      std::ostringstream buf;
      buf << in.rdbuf();
      const BenchParseResult parsed = parse_bench(buf.str());
      for (const auto& d : parsed.errors)
        err << parse_file << ":" << d.line << ":" << d.column << ": "
            << d.message << "\n";
      if (!parsed.ok()) return 3;
      const BenchValidation validated = validate(parsed.file);
      for (const auto& d : validated.errors)
        err << parse_file << ":" << d.line << ":" << d.column << ": "
            << d.message << "\n";
      if (!validated.ok()) return 3;
      out << "ok: " << parsed.file.statements.size() << " statements, "
          << validated.spec.elements.size() << " elements, "
          << validated.spec.output_ports.size() << " output ports\n";
    }
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const WiringError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  const std::string rendered = table.str();
  if (!rendered.empty()) {
    if (out_path.empty()) {
      out << rendered;
    } else {
      std::ofstream file(out_path, std::ios::binary);
      if (!file.good()) {
        err << "error: cannot write '" << out_path << "'\n";
        return 2;
      }
      file << rendered;
    }
  }
  return code;
}

}  // namespace entsim
