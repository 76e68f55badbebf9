#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "se2fleet/dynamics.hpp"
#include "se2fleet/shooting.hpp"

// Scenario files (JSON), their validation, and the simulate / shoot / check
// entry points shared by the command line tool and the python bindings.
//
// Schema (angles in radians, SI units):
// {
//   "agents": [{"id": 1, "g0": [theta, x, y],
//               "u0": [u1, u2] | "mu0": [m1, m2, m3],   (initial data)
//               "gT": [theta, x, y]}],                  (target, for shoot)
//   "graph": [[1, 2], ...],          default: complete graph
//   "sigma_pair": {"1-2": 1.0},      default: 1.0 per edge
//   "sigma_obs": {"1": 1.0},         default: 1.0 per agent; 0 disables
//   "r_bar": 1.0,
//   "obstacle": {"center": [0, 0], "radius": 1.0},   fixed in this version
//   "horizon_T": 5.0, "dt": 1e-3, "n_steps": 5000,   consistent triple
//   "mode": "first_principles" | "paper_printed",
//   "integrator": "rk4" | "euler",
//   "record_every": 1
// }

namespace se2fleet {

// Exit codes shared by the CLI and the run_* helpers.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitSingularity = 3;
inline constexpr int kExitNonConvergence = 4;
inline constexpr int kExitParse = 5;

/// "paper_printed" / "first_principles"; throws ValidationError otherwise.
DynMode parse_mode(const std::string& s);
/// "euler" / "rk4"; throws ValidationError otherwise.
Integrator parse_integrator(const std::string& s);
std::string to_string(DynMode m);
std::string to_string(Integrator i);

struct ScenarioAgent {
  long id = 0;
  Pose2 g0;
  std::optional<std::array<double, 2>> u0;
  std::optional<Momentum> mu0;
  std::optional<Pose2> gT;
};

struct Scenario {
  std::vector<ScenarioAgent> agents;
  std::vector<std::pair<int, int>> edges;  // agent indices, as listed
  bool graph_given = false;
  // raw sigma_pair entries (index pair, weight) kept for conflict checks
  std::vector<std::tuple<int, int, double>> sigma_pair_entries;
  PotentialParams params;
  std::array<double, 2> obstacle_center{0.0, 0.0};
  double obstacle_radius = 1.0;
  double horizon_T = 5.0;
  double dt = 1e-3;
  long n_steps = 5000;
  DynMode mode = DynMode::first_principles;
  Integrator integrator = Integrator::rk4;
  int record_every = 1;

  int size() const { return static_cast<int>(agents.size()); }
  int index_of(long id) const;  // -1 when absent
  /// Interaction graph over agent indices (complete when none was given).
  InteractionGraph graph() const;
  DynOptions dyn_options() const;
};

/// Decodes a scenario without semantic validation (structure and types only).
/// Throws ParseError on malformed JSON, wrong types/shapes, or unknown ids.
Scenario parse_scenario(const nlohmann::json& j);
Scenario parse_scenario_file(const std::string& path);

/// Checks every scenario invariant: graph undirected/connected without
/// self-loops, symmetric nonnegative couplings, fixed obstacle, consistent
/// time grid, and initial feasibility (pair distance > 2 r_bar where a pair
/// potential is active, x^2 + y^2 > (r_bar+1)^2 where an obstacle weight is
/// positive). Throws ValidationError naming the violated invariant.
void validate_scenario(const Scenario& sc);

/// parse + validate.
Scenario load_scenario(const std::string& path);

/// Initial state for simulation; requires exactly one of u0 / mu0 per agent.
SystemState scenario_initial_state(const Scenario& sc);

/// Shooting inputs: gT required for every agent; the guess is mu0 where
/// given, else mapped from u0, else zero.
BoundaryData scenario_boundary(const Scenario& sc);
std::vector<Momentum> scenario_guess(const Scenario& sc);

/// Runs the scenario forward, writes the trajectory CSV (partial with an
/// abort marker on singularity) and a summary to `log`.
int run_simulate(const Scenario& sc, const std::string& out_csv, std::ostream& log);

/// Solves the boundary value problem, logs one line per iteration
/// (iteration, residual norm, lambda) and writes the solution flow CSV.
int run_shoot(const Scenario& sc, const ShootOptions& opts, const std::string& out_csv,
              std::ostream& log);

struct CheckResult {
  std::string name;
  enum Status { pass, fail, expected_fail } status = pass;
  std::string detail;
};

/// Scenario-independent invariant battery (kernel identities, potential
/// invariances, gradient-vs-FD including the documented printed-variant
/// mismatch, short conservation probes).
std::vector<CheckResult> run_kernel_checks();

/// Scenario-specific probes (validation, feasibility, short conservation and
/// reconstruction runs). `sc` may be partially usable; failures are rows.
std::vector<CheckResult> run_scenario_checks(const Scenario& sc);

/// Prints the full check table; returns kExitOk or kExitCheckFailed
/// (expected-fail rows do not fail the run).
int run_check(const Scenario& sc, std::ostream& os);

}  // namespace se2fleet
