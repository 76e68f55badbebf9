#include "se2fleet/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

namespace se2fleet {

InteractionGraph::InteractionGraph(int n_agents,
                                   const std::vector<std::pair<int, int>>& edges) {
  if (n_agents < 0) throw ValidationError("negative agent count");
  neighbors_.resize(n_agents);
  for (auto [i, j] : edges) {
    if (i < 0 || j < 0 || i >= n_agents || j >= n_agents) {
      std::ostringstream os;
      os << "graph edge (" << i << ", " << j << ") out of range for " << n_agents
         << " agents";
      throw ValidationError(os.str());
    }
    if (i == j) {
      std::ostringstream os;
      os << "graph has a self-loop at agent " << i + 1;
      throw ValidationError(os.str());
    }
    if (i > j) std::swap(i, j);
    if (has_edge(i, j)) continue;  // ignore duplicates / mirrored entries
    edges_.emplace_back(i, j);
    neighbors_[i].push_back(j);
    neighbors_[j].push_back(i);
  }
  for (auto& nb : neighbors_) std::sort(nb.begin(), nb.end());
  std::sort(edges_.begin(), edges_.end());
}

InteractionGraph InteractionGraph::complete(int n_agents) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n_agents; ++i)
    for (int j = i + 1; j < n_agents; ++j) edges.emplace_back(i, j);
  return InteractionGraph(n_agents, edges);
}

bool InteractionGraph::has_edge(int i, int j) const {
  if (i < 0 || j < 0 || i >= size() || j >= size()) return false;
  const auto& nb = neighbors_[i];
  return std::find(nb.begin(), nb.end(), j) != nb.end();
}

bool InteractionGraph::connected() const {
  const int n = size();
  if (n <= 1) return true;
  std::vector<char> seen(n, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!q.empty()) {
    const int i = q.front();
    q.pop();
    for (int j : neighbors_[i]) {
      if (!seen[j]) {
        seen[j] = 1;
        ++reached;
        q.push(j);
      }
    }
  }
  return reached == n;
}

PotentialParams PotentialParams::uniform(int s, double sigma_pair_w, double sigma_obs_w,
                                         double r_bar_v) {
  PotentialParams p;
  p.sigma_pair = Eigen::MatrixXd::Constant(s, s, sigma_pair_w);
  p.sigma_pair.diagonal().setZero();
  p.sigma_obs = Eigen::VectorXd::Constant(s, sigma_obs_w);
  p.r_bar = r_bar_v;
  return p;
}

void PotentialParams::validate(const InteractionGraph* graph) const {
  const int s = size();
  if (sigma_pair.rows() != s || sigma_pair.cols() != s)
    throw ValidationError("sigma_pair must be s x s matching sigma_obs length");
  for (int i = 0; i < s; ++i) {
    if (sigma_pair(i, i) != 0.0)
      throw ValidationError("sigma_pair must have zero diagonal");
    if (sigma_obs(i) < 0.0)
      throw ValidationError("sigma_obs weights must be nonnegative");
    for (int j = 0; j < s; ++j) {
      if (sigma_pair(i, j) < 0.0)
        throw ValidationError("sigma_pair weights must be nonnegative");
      if (sigma_pair(i, j) != sigma_pair(j, i)) {
        std::ostringstream os;
        os << "sigma_pair asymmetric for agents " << i + 1 << ", " << j + 1;
        throw ValidationError(os.str());
      }
    }
  }
  if (graph) {
    if (graph->size() != s)
      throw ValidationError("graph size does not match parameter size");
    for (int i = 0; i < s; ++i)
      for (int j = i + 1; j < s; ++j)
        if (!graph->has_edge(i, j) && sigma_pair(i, j) != 0.0) {
          std::ostringstream os;
          os << "sigma_pair nonzero for non-edge (" << i + 1 << ", " << j + 1 << ")";
          throw ValidationError(os.str());
        }
  }
  if (!(r_bar > 0.0)) throw ValidationError("r_bar must be positive");
  if (d_des.size() != 0 && (d_des.rows() != s || d_des.cols() != s))
    throw ValidationError("d_des must be s x s when given");
}

void DynOptions::validate() const {
  if (!(dt > 0.0)) throw ValidationError("dt must be positive");
  if (!control_dims[0] && !control_dims[1] && !control_dims[2])
    throw ValidationError("control_dims must actuate at least one direction");
  if (record_every < 1) throw ValidationError("record_every must be >= 1");
  if (mode == DynMode::paper_printed) {
    const bool unicycle = control_dims[0] && control_dims[1] && !control_dims[2];
    const bool driftless =
        drift_e0.a == 0.0 && drift_e0.v1 == 0.0 && drift_e0.v2 == 0.0;
    if (!unicycle || !driftless)
      throw ValidationError(
          "paper_printed mode is defined for the driftless unicycle "
          "(e1, e2 actuated, zero drift)");
  }
}

Twist pmp_controls(const Momentum& mu) { return {0.5 * mu.m1, mu.m2, 0.0}; }

Twist pmp_controls(const Momentum& mu, const DynOptions& opts) {
  Twist w;
  if (opts.control_dims[0]) w.a = 0.5 * mu.m1;  // |e1|^2 = 2
  if (opts.control_dims[1]) w.v1 = mu.m2;
  if (opts.control_dims[2]) w.v2 = mu.m3;
  return w;
}

namespace {

// (i, j) are 0-based internal indices; messages use 1-based agent numbers.
[[noreturn]] void rethrow_pair(const SingularityError& e, int i, int j) {
  std::ostringstream os;
  os << "agents " << i + 1 << " and " << j + 1 << ": " << e.what();
  throw SingularityError(os.str(), i, j);
}

[[noreturn]] void rethrow_obstacle(const SingularityError& e, int i) {
  std::ostringstream os;
  os << "agent " << i + 1 << " vs obstacle: " << e.what();
  throw SingularityError(os.str(), i);
}

double kinetic(const Momentum& mu, const DynOptions& opts) {
  double k = 0.0;
  if (opts.control_dims[0]) k += 0.25 * mu.m1 * mu.m1;
  if (opts.control_dims[1]) k += 0.5 * mu.m2 * mu.m2;
  if (opts.control_dims[2]) k += 0.5 * mu.m3 * mu.m3;
  return k;
}

}  // namespace

double hamiltonian(const SystemState& state, const PotentialParams& params,
                   const InteractionGraph& graph, const DynOptions& opts) {
  double h = 0.0;
  for (int i = 0; i < state.size(); ++i) {
    const AgentState& ai = state.agents[i];
    h += kinetic(ai.mu, opts) + pairing(ai.mu, opts.drift_e0);
    try {
      h -= u_ext(ai.alpha, params.sigma_obs(i));
    } catch (const SingularityError& e) {
      rethrow_obstacle(e, i);
    }
    for (int j : graph.neighbors(i)) {
      try {
        h -= 0.5 * u_pair(ai.g, state.agents[j].g, params.sigma_pair(i, j), params.r_bar);
      } catch (const SingularityError& e) {
        rethrow_pair(e, i, j);
      }
    }
  }
  return h;
}

double hamiltonian(const SystemState& state, const PotentialParams& params,
                   const InteractionGraph& graph) {
  return hamiltonian(state, params, graph, DynOptions{});
}

SystemDeriv rhs(const SystemState& state, const PotentialParams& params,
                const InteractionGraph& graph, const DynOptions& opts) {
  const int s = state.size();
  SystemDeriv d;
  d.agents.resize(s);
  for (int i = 0; i < s; ++i) {
    const AgentState& ai = state.agents[i];
    const Twist w = pmp_controls(ai.mu, opts);
    const Twist u = opts.drift_e0 + w;

    AgentDeriv& di = d.agents[i];
    const double c = std::cos(ai.g.theta), sn = std::sin(ai.g.theta);
    di.dtheta = u.a;
    di.dx = c * u.v1 - sn * u.v2;
    di.dy = sn * u.v1 + c * u.v2;
    di.dalpha = -bracket(u, ai.alpha);

    Momentum gamma_obs;
    try {
      gamma_obs = grad_obs_ext(ai.alpha, params.sigma_obs(i));
    } catch (const SingularityError& e) {
      rethrow_obstacle(e, i);
    }
    Momentum gamma_pair;
    const GradVariant variant = opts.mode == DynMode::paper_printed
                                    ? GradVariant::printed
                                    : GradVariant::rotated;
    for (int j : graph.neighbors(i)) {
      try {
        gamma_pair = gamma_pair + grad_pair_body(ai.g, state.agents[j].g,
                                                 params.sigma_pair(i, j),
                                                 params.r_bar, variant);
      } catch (const SingularityError& e) {
        rethrow_pair(e, i, j);
      }
    }

    if (opts.mode == DynMode::paper_printed) {
      // verbatim scalar system, signs and the 1/2 factor as published
      di.dmu.m1 = -0.5 * ai.mu.m2 * ai.mu.m3;
      di.dmu.m2 = 0.5 * ai.mu.m1 * ai.mu.m3 - gamma_obs.m2 + gamma_pair.m2;
      di.dmu.m3 = -0.5 * ai.mu.m1 * ai.mu.m2 - gamma_obs.m3 + gamma_pair.m3;
    } else {
      di.dmu = coadjoint_star(u, ai.mu) + gamma_pair + gamma_obs;
    }
  }
  return d;
}

SystemState axpy(const SystemState& state, double c, const SystemDeriv& d) {
  SystemState out;
  out.t = state.t + c;
  out.agents.resize(state.agents.size());
  for (std::size_t i = 0; i < state.agents.size(); ++i) {
    const AgentState& a = state.agents[i];
    const AgentDeriv& di = d.agents[i];
    out.agents[i].g = Pose2(a.g.theta + c * di.dtheta, a.g.x + c * di.dx,
                            a.g.y + c * di.dy);
    out.agents[i].mu = a.mu + c * di.dmu;
    out.agents[i].alpha = a.alpha + c * di.dalpha;
  }
  return out;
}

namespace {

SystemDeriv combine_rk4(const SystemDeriv& k1, const SystemDeriv& k2,
                        const SystemDeriv& k3, const SystemDeriv& k4) {
  SystemDeriv out;
  out.agents.resize(k1.agents.size());
  for (std::size_t i = 0; i < k1.agents.size(); ++i) {
    AgentDeriv& o = out.agents[i];
    const AgentDeriv &a = k1.agents[i], &b = k2.agents[i], &c = k3.agents[i],
                     &d = k4.agents[i];
    o.dtheta = (a.dtheta + 2 * b.dtheta + 2 * c.dtheta + d.dtheta) / 6.0;
    o.dx = (a.dx + 2 * b.dx + 2 * c.dx + d.dx) / 6.0;
    o.dy = (a.dy + 2 * b.dy + 2 * c.dy + d.dy) / 6.0;
    o.dmu = (1.0 / 6.0) * (a.dmu + 2.0 * b.dmu + 2.0 * c.dmu + d.dmu);
    o.dalpha = (1.0 / 6.0) * (a.dalpha + 2.0 * b.dalpha + 2.0 * c.dalpha + d.dalpha);
  }
  return out;
}

}  // namespace

SystemState step(const SystemState& state, const PotentialParams& params,
                 const InteractionGraph& graph, const DynOptions& opts) {
  const double dt = opts.dt;
  if (opts.integrator == Integrator::euler) {
    return axpy(state, dt, rhs(state, params, graph, opts));
  }
  const SystemDeriv k1 = rhs(state, params, graph, opts);
  const SystemDeriv k2 = rhs(axpy(state, 0.5 * dt, k1), params, graph, opts);
  const SystemDeriv k3 = rhs(axpy(state, 0.5 * dt, k2), params, graph, opts);
  const SystemDeriv k4 = rhs(axpy(state, dt, k3), params, graph, opts);
  return axpy(state, dt, combine_rk4(k1, k2, k3, k4));
}

double min_pair_distance(const SystemState& state) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < state.size(); ++i)
    for (int j = i + 1; j < state.size(); ++j) {
      const double dx = state.agents[i].g.x - state.agents[j].g.x;
      const double dy = state.agents[i].g.y - state.agents[j].g.y;
      best = std::min(best, std::hypot(dx, dy));
    }
  return best;
}

double min_obstacle_clearance(const SystemState& state) {
  double best = std::numeric_limits<double>::infinity();
  for (const AgentState& a : state.agents)
    best = std::min(best, std::hypot(a.g.x, a.g.y));
  return best;
}

void reset_alpha(SystemState& state, const Twist& alpha0) {
  for (AgentState& a : state.agents) a.alpha = adjoint(inverse(a.g), alpha0);
}

Trajectory integrate(const SystemState& initial, const PotentialParams& params,
                     const InteractionGraph& graph, const DynOptions& opts,
                     long n_steps) {
  opts.validate();
  params.validate();
  if (n_steps < 0) throw ValidationError("n_steps must be >= 0");

  Trajectory traj;
  traj.min_pair_dist = std::numeric_limits<double>::infinity();
  traj.min_obs_clearance = std::numeric_limits<double>::infinity();
  SystemState s = initial;
  double h0 = 0.0;
  bool have_h0 = false;

  for (long k = 0;; ++k) {
    traj.min_pair_dist = std::min(traj.min_pair_dist, min_pair_distance(s));
    traj.min_obs_clearance = std::min(traj.min_obs_clearance, min_obstacle_clearance(s));

    if (k % opts.record_every == 0 || k == n_steps) {
      TrajectorySample sample;
      sample.t = s.t;
      sample.agents = s.agents;
      sample.controls.reserve(s.agents.size());
      for (const AgentState& a : s.agents)
        sample.controls.push_back(pmp_controls(a.mu, opts));
      try {
        sample.h = hamiltonian(s, params, graph, opts);
      } catch (const SingularityError& e) {
        traj.aborted = true;
        traj.abort_step = k;
        traj.abort_reason = e.what();
        break;
      }
      sample.min_pair_dist = min_pair_distance(s);
      sample.min_obs_clearance = min_obstacle_clearance(s);
      if (!have_h0) {
        h0 = sample.h;
        have_h0 = true;
      }
      traj.h_drift_max = std::max(traj.h_drift_max, std::abs(sample.h - h0));
      traj.samples.push_back(std::move(sample));
    }

    if (k == n_steps) break;
    try {
      s = step(s, params, graph, opts);
    } catch (const SingularityError& e) {
      traj.aborted = true;
      traj.abort_step = k;
      traj.abort_reason = e.what();
      break;
    }
    s.t = initial.t + static_cast<double>(k + 1) * opts.dt;  // avoid drift in t
    traj.n_steps_completed = k + 1;
  }

  traj.final_state = s;
  return traj;
}

Diagnostics diagnostics(const SystemState& state, const PotentialParams& params,
                        const InteractionGraph& graph) {
  Diagnostics d;
  d.h = hamiltonian(state, params, graph);
  d.min_pair_dist = min_pair_distance(state);
  d.min_obs_clearance = min_obstacle_clearance(state);
  d.casimir.reserve(state.agents.size());
  for (const AgentState& a : state.agents)
    d.casimir.push_back(a.mu.m2 * a.mu.m2 + a.mu.m3 * a.mu.m3);
  return d;
}

}  // namespace se2fleet
