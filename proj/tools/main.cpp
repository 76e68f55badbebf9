#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "se2fleet/scenario.hpp"
#include "se2fleet/svg.hpp"
#include "se2fleet/trajectory_io.hpp"

// se2fleet command line: simulate / shoot / check / plot.
// Exit codes: 0 ok, 1 failed checks, 2 validation, 3 singularity,
// 4 non-convergence, 5 parse / I/O.

namespace {

using namespace se2fleet;

int dispatch(const CLI::App& app, const std::string& scenario_path,
             const std::string& out, const std::string& mode_override,
             const std::string& integrator_override, double tol, int max_iter,
             const std::string& csv_path, double r_bar) {
  if (app.got_subcommand("simulate")) {
    Scenario sc = load_scenario(scenario_path);
    if (!mode_override.empty()) sc.mode = parse_mode(mode_override);
    if (!integrator_override.empty())
      sc.integrator = parse_integrator(integrator_override);
    return run_simulate(sc, out, std::cout);
  }
  if (app.got_subcommand("shoot")) {
    const Scenario sc = load_scenario(scenario_path);
    ShootOptions opts;
    opts.tol = tol;
    opts.max_iter = max_iter;
    return run_shoot(sc, opts, out, std::cout);
  }
  if (app.got_subcommand("check")) {
    // parse only: validation problems become report rows, not hard errors
    const Scenario sc = parse_scenario_file(scenario_path);
    return run_check(sc, std::cout);
  }
  if (app.got_subcommand("plot")) {
    const CsvTrajectory csv = read_trajectory_csv_file(csv_path);
    emit_svg_file(csv, r_bar, out);
    std::cout << "plot written to " << out << "\n";
    return kExitOk;
  }
  return kExitParse;  // unreachable: a subcommand is required
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reduced optimality flows for unicycle fleets on SE(2)"};
  app.require_subcommand(1);

  std::string scenario_path, out, mode_override, integrator_override, csv_path;
  double tol = 1e-8, r_bar = 1.0;
  int max_iter = 50;

  CLI::App* sim = app.add_subcommand("simulate", "integrate a scenario forward");
  sim->add_option("scenario", scenario_path, "scenario JSON file")->required();
  sim->add_option("--out", out, "output trajectory CSV")->default_val("trajectory.csv");
  sim->add_option("--mode", mode_override, "paper_printed | first_principles")
      ->check(CLI::IsMember({"paper_printed", "first_principles"}));
  sim->add_option("--integrator", integrator_override, "euler | rk4")
      ->check(CLI::IsMember({"euler", "rk4"}));

  CLI::App* shoot = app.add_subcommand("shoot", "solve the boundary value problem");
  shoot->add_option("scenario", scenario_path, "scenario JSON file")->required();
  shoot->add_option("--out", out, "output trajectory CSV")->default_val("trajectory.csv");
  shoot->add_option("--tol", tol, "residual norm tolerance")->default_val(1e-8);
  shoot->add_option("--max-iter", max_iter, "iteration cap")->default_val(50);

  CLI::App* check = app.add_subcommand("check", "run the invariant report");
  check->add_option("scenario", scenario_path, "scenario JSON file")->required();

  CLI::App* plot = app.add_subcommand("plot", "render a trajectory CSV as SVG");
  plot->add_option("csv", csv_path, "trajectory CSV file")->required();
  plot->add_option("--out", out, "output SVG file")->required();
  plot->add_option("--r-bar", r_bar, "agent radius for the guard circle")
      ->default_val(1.0);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : se2fleet::kExitParse;  // 0 covers --help
  }

  try {
    return dispatch(app, scenario_path, out, mode_override, integrator_override, tol,
                    max_iter, csv_path, r_bar);
  } catch (const se2fleet::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return se2fleet::kExitParse;
  } catch (const se2fleet::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return se2fleet::kExitValidation;
  } catch (const se2fleet::SingularityError& e) {
    std::cerr << "singularity: " << e.what() << "\n";
    return se2fleet::kExitSingularity;
  } catch (const se2fleet::NonConvergenceError& e) {
    std::cerr << "non-convergence: " << e.what() << "\n";
    return se2fleet::kExitNonConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return se2fleet::kExitParse;
  }
}
