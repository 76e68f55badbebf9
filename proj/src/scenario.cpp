#include "se2fleet/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "se2fleet/trajectory_io.hpp"

namespace se2fleet {

using nlohmann::json;

DynMode parse_mode(const std::string& s) {
  if (s == "paper_printed") return DynMode::paper_printed;
  if (s == "first_principles") return DynMode::first_principles;
  throw ValidationError("mode must be 'paper_printed' or 'first_principles', got '" +
                        s + "'");
}

Integrator parse_integrator(const std::string& s) {
  if (s == "euler") return Integrator::euler;
  if (s == "rk4") return Integrator::rk4;
  throw ValidationError("integrator must be 'euler' or 'rk4', got '" + s + "'");
}

std::string to_string(DynMode m) {
  return m == DynMode::paper_printed ? "paper_printed" : "first_principles";
}

std::string to_string(Integrator i) { return i == Integrator::euler ? "euler" : "rk4"; }

namespace {

[[noreturn]] void parse_fail(const std::string& ctx, const std::string& what) {
  throw ParseError("scenario field '" + ctx + "': " + what);
}

double as_number(const json& v, const std::string& ctx) {
  if (!v.is_number()) parse_fail(ctx, "expected a number");
  return v.get<double>();
}

long as_integer(const json& v, const std::string& ctx) {
  if (!v.is_number_integer()) parse_fail(ctx, "expected an integer");
  return v.get<long>();
}

template <std::size_t N>
std::array<double, N> as_array(const json& v, const std::string& ctx) {
  if (!v.is_array() || v.size() != N)
    parse_fail(ctx, "expected an array of " + std::to_string(N) + " numbers");
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = as_number(v[i], ctx);
  return out;
}

// sigma_pair keys look like "1-2" (two agent ids)
std::pair<long, long> parse_edge_key(const std::string& key) {
  const auto dash = key.find('-');
  if (dash == std::string::npos || dash == 0 || dash + 1 >= key.size())
    parse_fail("sigma_pair", "bad edge key '" + key + "', expected 'id-id'");
  try {
    std::size_t used = 0;
    const long a = std::stol(key.substr(0, dash), &used);
    if (used != dash) throw std::invalid_argument(key);
    const std::string rest = key.substr(dash + 1);
    const long b = std::stol(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(key);
    return {a, b};
  } catch (const std::exception&) {
    parse_fail("sigma_pair", "bad edge key '" + key + "', expected 'id-id'");
  }
}

}  // namespace

int Scenario::index_of(long id) const {
  for (int i = 0; i < size(); ++i)
    if (agents[i].id == id) return i;
  return -1;
}

InteractionGraph Scenario::graph() const {
  if (!graph_given) return InteractionGraph::complete(size());
  return InteractionGraph(size(), edges);
}

DynOptions Scenario::dyn_options() const {
  DynOptions o;
  o.mode = mode;
  o.integrator = integrator;
  o.dt = dt;
  o.record_every = record_every;
  return o;
}

Scenario parse_scenario(const json& j) {
  Scenario sc;
  if (!j.is_object()) throw ParseError("scenario must be a JSON object");

  if (!j.contains("agents") || !j["agents"].is_array() || j["agents"].empty())
    throw ParseError("scenario needs a non-empty 'agents' array");
  for (const json& a : j["agents"]) {
    if (!a.is_object()) parse_fail("agents", "each agent must be an object");
    ScenarioAgent agent;
    if (!a.contains("id")) parse_fail("agents", "agent missing 'id'");
    agent.id = as_integer(a["id"], "agents.id");
    const std::string ctx = "agents[" + std::to_string(agent.id) + "]";
    if (!a.contains("g0")) parse_fail(ctx, "missing 'g0'");
    const auto g0 = as_array<3>(a["g0"], ctx + ".g0");
    agent.g0 = Pose2(g0[0], g0[1], g0[2]);
    if (a.contains("u0")) agent.u0 = as_array<2>(a["u0"], ctx + ".u0");
    if (a.contains("mu0")) {
      const auto m = as_array<3>(a["mu0"], ctx + ".mu0");
      agent.mu0 = Momentum{m[0], m[1], m[2]};
    }
    if (a.contains("gT")) {
      const auto gT = as_array<3>(a["gT"], ctx + ".gT");
      agent.gT = Pose2(gT[0], gT[1], gT[2]);
    }
    sc.agents.push_back(agent);
  }
  const int s = sc.size();

  auto index_or_fail = [&](long id, const std::string& ctx) {
    const int idx = sc.index_of(id);
    if (idx < 0)
      parse_fail(ctx, "unknown agent id " + std::to_string(id));
    return idx;
  };

  if (j.contains("graph")) {
    sc.graph_given = true;
    if (!j["graph"].is_array()) parse_fail("graph", "expected an array of id pairs");
    for (const json& e : j["graph"]) {
      if (!e.is_array() || e.size() != 2) parse_fail("graph", "expected [id, id] pairs");
      const long a = as_integer(e[0], "graph"), b = as_integer(e[1], "graph");
      sc.edges.emplace_back(index_or_fail(a, "graph"), index_or_fail(b, "graph"));
    }
  }

  // edge set used for sigma defaults (self-loops and duplicates dealt with
  // later, by validation)
  std::set<std::pair<int, int>> edge_set;
  if (sc.graph_given) {
    for (auto [a, b] : sc.edges)
      if (a != b) edge_set.insert({std::min(a, b), std::max(a, b)});
  } else {
    for (int a = 0; a < s; ++a)
      for (int b = a + 1; b < s; ++b) edge_set.insert({a, b});
  }

  sc.params.sigma_pair = Eigen::MatrixXd::Zero(s, s);
  for (auto [a, b] : edge_set) {
    sc.params.sigma_pair(a, b) = 1.0;
    sc.params.sigma_pair(b, a) = 1.0;
  }
  if (j.contains("sigma_pair")) {
    if (!j["sigma_pair"].is_object())
      parse_fail("sigma_pair", "expected an object keyed by 'id-id'");
    for (const auto& [key, value] : j["sigma_pair"].items()) {
      const auto [ida, idb] = parse_edge_key(key);
      const int a = index_or_fail(ida, "sigma_pair");
      const int b = index_or_fail(idb, "sigma_pair");
      const double w = as_number(value, "sigma_pair['" + key + "']");
      sc.sigma_pair_entries.emplace_back(a, b, w);
      if (edge_set.count({std::min(a, b), std::max(a, b)})) {
        sc.params.sigma_pair(a, b) = w;
        sc.params.sigma_pair(b, a) = w;
      }
    }
  }

  sc.params.sigma_obs = Eigen::VectorXd::Constant(s, 1.0);
  if (j.contains("sigma_obs")) {
    if (!j["sigma_obs"].is_object())
      parse_fail("sigma_obs", "expected an object keyed by agent id");
    for (const auto& [key, value] : j["sigma_obs"].items()) {
      long id = 0;
      try {
        id = std::stol(key);
      } catch (const std::exception&) {
        parse_fail("sigma_obs", "bad agent id key '" + key + "'");
      }
      sc.params.sigma_obs(index_or_fail(id, "sigma_obs")) =
          as_number(value, "sigma_obs['" + key + "']");
    }
  }

  if (j.contains("r_bar")) sc.params.r_bar = as_number(j["r_bar"], "r_bar");
  if (j.contains("obstacle")) {
    const json& o = j["obstacle"];
    if (!o.is_object()) parse_fail("obstacle", "expected an object");
    if (o.contains("center")) sc.obstacle_center = as_array<2>(o["center"], "obstacle.center");
    if (o.contains("radius")) sc.obstacle_radius = as_number(o["radius"], "obstacle.radius");
  }

  const bool has_T = j.contains("horizon_T");
  const bool has_n = j.contains("n_steps");
  if (j.contains("dt")) sc.dt = as_number(j["dt"], "dt");
  if (has_T) sc.horizon_T = as_number(j["horizon_T"], "horizon_T");
  if (has_n) sc.n_steps = as_integer(j["n_steps"], "n_steps");
  if (has_T && !has_n && sc.dt > 0.0)
    sc.n_steps = std::lround(sc.horizon_T / sc.dt);
  else if (has_n && !has_T)
    sc.horizon_T = sc.dt * static_cast<double>(sc.n_steps);
  else if (!has_T && !has_n && sc.dt > 0.0)
    sc.n_steps = std::lround(sc.horizon_T / sc.dt);

  if (j.contains("mode")) sc.mode = parse_mode(j["mode"].get<std::string>());
  if (j.contains("integrator"))
    sc.integrator = parse_integrator(j["integrator"].get<std::string>());
  if (j.contains("record_every"))
    sc.record_every = static_cast<int>(as_integer(j["record_every"], "record_every"));

  return sc;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open scenario file: " + path);
  json j;
  try {
    j = json::parse(is);
  } catch (const json::exception& e) {
    throw ParseError(std::string("scenario JSON: ") + e.what());
  }
  return parse_scenario(j);
}

void validate_scenario(const Scenario& sc) {
  if (sc.agents.empty()) throw ValidationError("scenario has no agents");
  std::set<long> ids;
  for (const ScenarioAgent& a : sc.agents) {
    if (a.id <= 0)
      throw ValidationError("agent ids must be positive, got " + std::to_string(a.id));
    if (!ids.insert(a.id).second)
      throw ValidationError("duplicate agent id " + std::to_string(a.id));
    if (a.u0 && a.mu0)
      throw ValidationError("agent " + std::to_string(a.id) +
                            " specifies both u0 and mu0");
  }

  const InteractionGraph graph = sc.graph();  // throws on self-loops
  if (!graph.connected()) throw ValidationError("graph not connected");

  // conflicting duplicate sigma_pair entries = asymmetric weights
  for (const auto& [a, b, w] : sc.sigma_pair_entries) {
    if (!graph.has_edge(a, b)) {
      std::ostringstream os;
      os << "sigma_pair given for non-edge (" << sc.agents[a].id << ", "
         << sc.agents[b].id << ")";
      throw ValidationError(os.str());
    }
    for (const auto& [a2, b2, w2] : sc.sigma_pair_entries) {
      const bool same_pair = (a == a2 && b == b2) || (a == b2 && b == a2);
      if (same_pair && w != w2) {
        std::ostringstream os;
        os << "sigma_pair asymmetric for edge (" << sc.agents[std::min(a, b)].id << ", "
           << sc.agents[std::max(a, b)].id << ")";
        throw ValidationError(os.str());
      }
    }
  }
  sc.params.validate(&graph);

  if (sc.obstacle_center[0] != 0.0 || sc.obstacle_center[1] != 0.0 ||
      sc.obstacle_radius != 1.0)
    throw ValidationError(
        "obstacle is fixed at center [0, 0] with radius 1 in this version");

  if (!(sc.dt > 0.0)) throw ValidationError("dt must be positive");
  if (sc.n_steps < 1) throw ValidationError("n_steps must be >= 1");
  if (!(sc.horizon_T > 0.0)) throw ValidationError("horizon_T must be positive");
  if (std::abs(sc.dt * static_cast<double>(sc.n_steps) - sc.horizon_T) > 1e-9) {
    std::ostringstream os;
    os << "dt * n_steps = " << sc.dt * static_cast<double>(sc.n_steps)
       << " does not match horizon_T = " << sc.horizon_T << " (within 1e-9)";
    throw ValidationError(os.str());
  }
  if (sc.record_every < 1) throw ValidationError("record_every must be >= 1");

  // initial feasibility, for the potentials that are actually active
  const double contact = 2.0 * sc.params.r_bar;
  for (int i = 0; i < sc.size(); ++i) {
    for (int j = i + 1; j < sc.size(); ++j) {
      if (!graph.has_edge(i, j) || sc.params.sigma_pair(i, j) == 0.0) continue;
      const double dx = sc.agents[i].g0.x - sc.agents[j].g0.x;
      const double dy = sc.agents[i].g0.y - sc.agents[j].g0.y;
      const double dist = std::hypot(dx, dy);
      if (!(dist > contact)) {
        std::ostringstream os;
        os << "agents " << sc.agents[i].id << ", " << sc.agents[j].id
           << " initially in contact: center distance " << dist
           << " must exceed 2*r_bar = " << contact;
        throw ValidationError(os.str());
      }
    }
    if (sc.params.sigma_obs(i) > 0.0) {
      const double guard = sc.params.r_bar + 1.0;
      const double clear2 =
          sc.agents[i].g0.x * sc.agents[i].g0.x + sc.agents[i].g0.y * sc.agents[i].g0.y;
      if (!(clear2 > guard * guard)) {
        std::ostringstream os;
        os << "agent " << sc.agents[i].id << " initially inside the obstacle guard: "
           << "x^2+y^2 = " << clear2 << " must exceed (r_bar+1)^2 = " << guard * guard;
        throw ValidationError(os.str());
      }
    }
  }
}

Scenario load_scenario(const std::string& path) {
  Scenario sc = parse_scenario_file(path);
  validate_scenario(sc);
  return sc;
}

SystemState scenario_initial_state(const Scenario& sc) {
  SystemState state;
  state.agents.resize(sc.size());
  for (int i = 0; i < sc.size(); ++i) {
    const ScenarioAgent& a = sc.agents[i];
    if (a.u0.has_value() == a.mu0.has_value())
      throw ValidationError("agent " + std::to_string(a.id) +
                            " must specify exactly one of u0 / mu0 for simulate");
    state.agents[i].g = a.g0;
    state.agents[i].mu =
        a.mu0 ? *a.mu0 : Momentum{2.0 * (*a.u0)[0], (*a.u0)[1], 0.0};
  }
  reset_alpha(state, sc.params.alpha0);
  return state;
}

BoundaryData scenario_boundary(const Scenario& sc) {
  BoundaryData bd;
  bd.T = sc.horizon_T;
  for (const ScenarioAgent& a : sc.agents) {
    if (!a.gT)
      throw ValidationError("agent " + std::to_string(a.id) +
                            " is missing gT, required for shoot");
    bd.g0.push_back(a.g0);
    bd.gT.push_back(*a.gT);
  }
  return bd;
}

std::vector<Momentum> scenario_guess(const Scenario& sc) {
  std::vector<Momentum> guess;
  for (const ScenarioAgent& a : sc.agents) {
    if (a.mu0)
      guess.push_back(*a.mu0);
    else if (a.u0)
      guess.push_back({2.0 * (*a.u0)[0], (*a.u0)[1], 0.0});
    else
      guess.push_back({});
  }
  return guess;
}

int run_simulate(const Scenario& sc, const std::string& out_csv, std::ostream& log) {
  SystemState initial;
  try {
    validate_scenario(sc);
    initial = scenario_initial_state(sc);
  } catch (const ValidationError& e) {
    log << "validation error: " << e.what() << "\n";
    return kExitValidation;
  }

  const InteractionGraph graph = sc.graph();
  const Trajectory traj =
      integrate(initial, sc.params, graph, sc.dyn_options(), sc.n_steps);

  try {
    write_trajectory_csv_file(traj, out_csv);
  } catch (const ParseError& e) {
    log << "error: " << e.what() << "\n";
    return kExitParse;
  }
  log << trajectory_summary(traj);
  log << "trajectory written to " << out_csv << "\n";
  return traj.aborted ? kExitSingularity : kExitOk;
}

int run_shoot(const Scenario& sc, const ShootOptions& opts_in, const std::string& out_csv,
              std::ostream& log) {
  BoundaryData boundary;
  std::vector<Momentum> guess;
  ShootOptions opts = opts_in;
  opts.dyn = sc.dyn_options();
  InteractionGraph graph;
  try {
    validate_scenario(sc);
    boundary = scenario_boundary(sc);
    guess = scenario_guess(sc);
    graph = sc.graph();
  } catch (const ValidationError& e) {
    log << "validation error: " << e.what() << "\n";
    return kExitValidation;
  }

  ShootResult res;
  try {
    res = solve_shooting_noexcept(guess, boundary, sc.params, graph, opts);
  } catch (const ValidationError& e) {
    log << "validation error: " << e.what() << "\n";
    return kExitValidation;
  }

  log << "iteration, residual_norm, lambda\n";
  for (const ShootIterRecord& r : res.history) {
    log << r.iteration << ", " << r.residual_norm << ", " << r.lambda
        << (r.accepted ? "" : "  (rejected)") << "\n";
  }
  for (std::size_t i = 0; i < res.mu0.size(); ++i) {
    log << "mu0[" << sc.agents[i].id << "] = (" << res.mu0[i].m1 << ", "
        << res.mu0[i].m2 << ", " << res.mu0[i].m3 << ")\n";
  }
  log << "status: "
      << (res.status == ShootStatus::converged
              ? "converged"
              : res.status == ShootStatus::max_iterations ? "max_iterations"
                                                          : "infeasible")
      << " after " << res.iterations << " iterations, residual " << res.residual_norm
      << "\n";

  try {
    write_trajectory_csv_file(res.trajectory, out_csv);
    log << "trajectory written to " << out_csv << "\n";
  } catch (const ParseError& e) {
    log << "error: " << e.what() << "\n";
    return kExitParse;
  }

  switch (res.status) {
    case ShootStatus::converged:
      return kExitOk;
    case ShootStatus::max_iterations:
      return kExitNonConvergence;
    case ShootStatus::infeasible:
    default:
      return kExitSingularity;
  }
}

}  // namespace se2fleet
