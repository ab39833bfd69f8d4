#include "poissoncap/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "poissoncap/information.hpp"
#include "poissoncap/report_io.hpp"

namespace poissoncap::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunManifest make_manifest(const std::string& command, const SolverConfig& cfg,
                          double x_ref, double epsilon) {
  RunManifest m;
  m.command = command;
  m.config = cfg;
  m.truncation = truncation_index(x_ref, epsilon);
  return m;
}

void add_solver_flags(CLI::App* cmd, SolverConfig& cfg) {
  cmd->add_option("--step-size", cfg.step_size, "ascent step size")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tol", cfg.kkt_tol, "KKT tolerance in nats")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-iter", cfg.max_iter, "iteration cap per solve")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--points", cfg.n_points,
                  "allocated support cap (0 = ceil(A)+4)");
}

int run_solve(double amplitude, const SolverConfig& cfg,
              const std::string& out_path) {
  const SolverResult result = solve_capacity(amplitude, cfg);
  const RunManifest manifest = make_manifest("solve", cfg, amplitude, 1e-14);
  write_output(out_path, distribution_json(result, manifest));
  if (!result.converged) {
    std::cerr << "solve: not converged at A=" << amplitude
              << " (kkt_gap=" << result.kkt_gap << ")\n";
    return kExitVerificationFailure;
  }
  return kExitOk;
}

int run_sweep(double a_min, double a_max, double delta, const SolverConfig& cfg,
              const std::string& out_path) {
  const std::vector<SolverResult> results =
      sweep_capacity(a_min, a_max, delta, cfg);
  const RunManifest manifest = make_manifest("sweep", cfg, a_max, kReportEpsilon);

  std::string csv = "# manifest: " + manifest_json(manifest) + "\n";
  csv += sweep_csv_header() + "\n";
  bool all_ok = true;
  for (const SolverResult& r : results) {
    const SweepRow row = build_sweep_row(r);
    csv += sweep_csv_line(row) + "\n";
    all_ok = all_ok && r.converged && row.bounds.all_applicable_passed();
  }
  write_output(out_path, csv);
  if (!all_ok) {
    std::cerr << "sweep: at least one amplitude failed convergence or bound "
                 "checks\n";
    return kExitVerificationFailure;
  }
  return kExitOk;
}

int run_verify(const std::string& file, int grid, double tol) {
  const ParsedDistribution parsed = parse_distribution_json(read_file(file));
  OutputModel model(parsed.distribution, kReportEpsilon);
  const double mi = mutual_information(model);
  const double py0 = -model.log_py(0);
  const KktReport kkt = kkt_verify(model, mi, grid, tol);
  const DetectionReport det = detection_report(model);

  const bool stored_ok =
      std::isnan(parsed.capacity_mi) || std::abs(parsed.capacity_mi - mi) <= tol;
  const bool identity_ok = std::abs(mi - py0) <= 2.0 * tol;
  bool passed = kkt.passed && stored_ok && identity_ok;

  double max_residual = 0.0;
  for (double r : kkt.support_residuals) max_residual = std::max(max_residual, r);

  std::string psi_block = "null";
  if (parsed.distribution.has_mass_at_amplitude()) {
    const PsiSequence psi =
        psi_sequence(model, mi, parsed.distribution.top_mass());
    const int changes = sign_changes(psi.values);
    const bool psi_ok =
        static_cast<int>(parsed.distribution.size()) <= changes + 2;
    passed = passed && psi_ok;
    psi_block = "{\"k_star\":" + std::to_string(psi.k_star) +
                ",\"sign_changes\":" + std::to_string(changes) +
                ",\"psi0\":" + format_double(psi.values[0]) +
                ",\"support_bound_ok\":" + (psi_ok ? "true" : "false") + "}";
  }

  std::string out = "{";
  out += "\"file\":\"" + file + "\"";
  out += ",\"amplitude\":" + format_double(parsed.distribution.amplitude());
  out += ",\"units\":\"nats\"";
  out += ",\"capacity_mi\":" + format_double(mi);
  out += ",\"capacity_py0\":" + format_double(py0);
  out += ",\"capacity_identity_ok\":" + std::string(identity_ok ? "true" : "false");
  out += ",\"stored_capacity_ok\":" + std::string(stored_ok ? "true" : "false");
  out += ",\"kkt\":{\"max_violation\":" + format_double(kkt.max_violation) +
         ",\"max_support_residual\":" + format_double(max_residual) +
         ",\"grid_size\":" + std::to_string(kkt.grid_size) +
         ",\"tol\":" + format_double(tol) +
         ",\"passed\":" + (kkt.passed ? "true" : "false") + "}";
  out += ",\"detection\":{\"pe\":" + format_double(det.pe) +
         ",\"hx\":" + format_double(det.hx) + ",\"mi\":" + format_double(det.mi) +
         ",\"hxy\":" + format_double(det.hxy) +
         ",\"fano_ok\":" + (det.fano_ok ? "true" : "false") + "}";
  out += ",\"psi\":" + psi_block;
  out += ",\"passed\":";
  out += passed ? "true" : "false";
  out += "}\n";
  std::cout << out;
  return passed ? kExitOk : kExitVerificationFailure;
}

int run_bounds(double amplitude, double capacity, bool have_capacity,
               const std::string& from_file, bool asymptotic,
               const std::string& out_path) {
  const int sources = (have_capacity ? 1 : 0) + (from_file.empty() ? 0 : 1) +
                      (asymptotic ? 1 : 0);
  if (sources != 1) {
    std::cerr << "bounds: exactly one of --capacity, --from, --asymptotic is "
                 "required\n";
    return kExitUsage;
  }

  BoundsReport report;
  if (!from_file.empty()) {
    const ParsedDistribution parsed =
        parse_distribution_json(read_file(from_file));
    if (std::abs(parsed.distribution.amplitude() - amplitude) >
        1e-9 * std::max(1.0, amplitude)) {
      std::cerr << "bounds: --amplitude does not match the file\n";
      return kExitUsage;
    }
    OutputModel model(parsed.distribution, kReportEpsilon);
    const double c = std::isnan(parsed.capacity_mi)
                         ? mutual_information(model)
                         : parsed.capacity_mi;
    report = evaluate_bounds(amplitude, c, "solver", &model);
  } else if (asymptotic) {
    report = evaluate_bounds(amplitude, asymptotic_capacity(amplitude),
                             "asymptotic", nullptr);
  } else {
    report = evaluate_bounds(amplitude, capacity, "explicit", nullptr);
  }

  const RunManifest manifest =
      make_manifest("bounds", SolverConfig{}, amplitude, kReportEpsilon);
  write_output(out_path, bounds_json(report, manifest));
  return report.all_applicable_passed() ? kExitOk : kExitVerificationFailure;
}

int run_demo_oscillation(const std::string& out_path) {
  constexpr int kSeqLen = 41;    // y = 0..40
  constexpr int kGrid = 2000;    // grid points on [0, 40]
  constexpr double kPi = 3.1415926535897931;
  std::vector<double> xi(kSeqLen);
  for (int k = 0; k < kSeqLen; ++k)
    xi[k] = std::sin(kPi * k / 3.0) + std::sin(kPi * k / 13.0);

  std::vector<double> transform(kGrid);
  std::string csv;
  for (int j = 0; j < kGrid; ++j) {
    const double x = 40.0 * j / static_cast<double>(kGrid - 1);
    transform[j] = poisson_transform(xi, x);
    csv += format_double(x) + "," + format_double(transform[j]) + "\n";
  }
  const int changes_xi = sign_changes(xi);
  const int crossings = sign_changes(transform);
  const bool holds = crossings <= changes_xi;

  const RunManifest manifest =
      make_manifest("demo-oscillation", SolverConfig{}, 40.0, kReportEpsilon);
  write_output(out_path,
               "# manifest: " + manifest_json(manifest) + "\nx,Xi\n" + csv);
  std::cout << "{\"sign_changes_xi\":" << changes_xi
            << ",\"zero_crossings_Xi\":" << crossings << ",\"holds\":"
            << (holds ? "true" : "false") << "}\n";
  return holds ? kExitOk : kExitVerificationFailure;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Capacity and capacity-achieving distributions of the "
               "amplitude-constrained Poisson noise channel"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "solve one amplitude");
  double amplitude = 1.0;
  SolverConfig solve_cfg;
  std::string solve_out;
  solve->add_option("--amplitude", amplitude, "amplitude constraint A")
      ->required()
      ->check(CLI::PositiveNumber);
  add_solver_flags(solve, solve_cfg);
  solve->add_option("--out", solve_out, "output JSON file (default stdout)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "continuation sweep over A");
  double a_min = 0.1, a_max = 1.0, a_delta = 0.1;
  SolverConfig sweep_cfg;
  std::string sweep_out;
  sweep->add_option("--min", a_min, "smallest amplitude")->required();
  sweep->add_option("--max", a_max, "largest amplitude")->required();
  sweep->add_option("--delta", a_delta, "amplitude step")->required();
  add_solver_flags(sweep, sweep_cfg);
  sweep->add_option("--out", sweep_out, "output CSV file (default stdout)");

  // verify
  auto* verify = app.add_subcommand("verify", "verify a distribution file");
  std::string verify_file;
  int verify_grid = 4001;
  double verify_tol = 1e-6;
  verify->add_option("file", verify_file, "distribution JSON")->required();
  verify->add_option("--grid", verify_grid, "KKT grid points")
      ->check(CLI::Range(2, 10000000));
  verify->add_option("--tol", verify_tol, "verification tolerance in nats")
      ->check(CLI::PositiveNumber);

  // bounds
  auto* bounds = app.add_subcommand("bounds", "evaluate the analytic bounds");
  double bounds_amplitude = 1.0;
  double bounds_capacity = 0.0;
  std::string bounds_from, bounds_out;
  bool bounds_asymptotic = false;
  bounds->add_option("--amplitude", bounds_amplitude, "amplitude constraint A")
      ->required()
      ->check(CLI::PositiveNumber);
  auto* cap_opt =
      bounds->add_option("--capacity", bounds_capacity, "capacity in nats");
  bounds->add_option("--from", bounds_from, "distribution JSON to check");
  bounds->add_flag("--asymptotic", bounds_asymptotic,
                   "use the large-A capacity asymptote");
  bounds->add_option("--out", bounds_out, "output JSON file (default stdout)");

  // demo-oscillation
  auto* demo = app.add_subcommand(
      "demo-oscillation", "Poisson transform of an oscillating sequence");
  std::string demo_out;
  demo->add_option("--out", demo_out, "output CSV file (default stdout)");

  std::vector<const char*> argv;
  argv.push_back("poissoncap");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (solve->parsed()) return run_solve(amplitude, solve_cfg, solve_out);
    if (sweep->parsed())
      return run_sweep(a_min, a_max, a_delta, sweep_cfg, sweep_out);
    if (verify->parsed()) return run_verify(verify_file, verify_grid, verify_tol);
    if (bounds->parsed())
      return run_bounds(bounds_amplitude, bounds_capacity, cap_opt->count() > 0,
                        bounds_from, bounds_asymptotic, bounds_out);
    if (demo->parsed()) return run_demo_oscillation(demo_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace poissoncap::cli
