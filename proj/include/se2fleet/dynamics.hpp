#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <utility>
#include <vector>

#include "se2fleet/errors.hpp"
#include "se2fleet/potentials.hpp"
#include "se2fleet/se2.hpp"

// Reduced optimality ODEs for a fleet of agents on SE(2): the extremal
// control law, the coupled (g, mu, alpha) vector field in two modes, the
// reduced Hamiltonian, conserved-quantity diagnostics, and fixed-step
// integrators.
//
// Modes
// -----
// `paper_printed` integrates the verbatim scalar system
//   theta' = u1, x' = u2 cos(theta), y' = u2 sin(theta)
//   mu1' = -1/2 mu2 mu3
//   mu2' = +1/2 mu1 mu3 - G0_2 + sum_j Gij_2
//   mu3' = -1/2 mu1 mu2 - G0_3 + sum_j Gij_3
//   alpha' = (0, 1/2 mu1 a3, -1/2 mu1 a2 + mu2 a1)
// with Gij the unrotated (printed) pair gradient and G0 the extended-potential
// gradient, signs as printed. That system is kept exactly as published, typos
// included, for figure replication.
//
// `first_principles` assembles the same flow from kernel operations:
//   u  = e0 + w*,  w* the maximizer of <mu, w> - cost(w) over actuated dims
//   g' = g u,  mu' = ad*_u(mu) + sum_j Gij(rotated) + G0,  alpha' = -[u, alpha]
// Both potential-force signs are positive: that is the unique choice under
// which the reduced Hamiltonian h is conserved along the flow, which is the
// arbiter used here (the system is autonomous, so dh/dt = 0 must hold).

namespace se2fleet {

enum class DynMode { paper_printed, first_principles };
enum class Integrator { euler, rk4 };

/// Static interaction graph over agents 0..n-1 (internal indices).
class InteractionGraph {
public:
  InteractionGraph() = default;
  /// Builds from undirected edges; validates range, self-loops, duplicates.
  InteractionGraph(int n_agents, const std::vector<std::pair<int, int>>& edges);
  static InteractionGraph complete(int n_agents);

  int size() const { return static_cast<int>(neighbors_.size()); }
  const std::vector<int>& neighbors(int i) const { return neighbors_[i]; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  bool has_edge(int i, int j) const;
  bool connected() const;

private:
  std::vector<std::vector<int>> neighbors_;
  std::vector<std::pair<int, int>> edges_;
};

/// Interaction weights and geometry shared by all potential evaluations.
struct PotentialParams {
  Eigen::MatrixXd sigma_pair;  // s x s, symmetric, zero diagonal
  Eigen::VectorXd sigma_obs;   // length s, >= 0 (0 disables the obstacle term)
  double r_bar = 1.0;
  Twist alpha0{1.0, 0.0, 0.0};  // reference advected parameter, default e1
  Eigen::MatrixXd d_des;        // optional desired distances (empty if unused)

  static PotentialParams uniform(int s, double sigma_pair, double sigma_obs,
                                 double r_bar = 1.0);
  static PotentialParams free_motion(int s) { return uniform(s, 0.0, 0.0); }

  int size() const { return static_cast<int>(sigma_obs.size()); }
  /// Throws ValidationError on shape/symmetry/sign violations; when a graph is
  /// given, also requires sigma_pair to vanish off its edges.
  void validate(const InteractionGraph* graph = nullptr) const;
};

struct AgentState {
  Pose2 g;
  Momentum mu;
  Twist alpha{1.0, 0.0, 0.0};
};

struct SystemState {
  std::vector<AgentState> agents;
  double t = 0.0;
  int size() const { return static_cast<int>(agents.size()); }
};

struct DynOptions {
  DynMode mode = DynMode::first_principles;
  Integrator integrator = Integrator::rk4;
  double dt = 1e-3;
  Twist drift_e0{0.0, 0.0, 0.0};
  std::array<bool, 3> control_dims{true, true, false};  // e1, e2 actuated
  int record_every = 1;

  /// Throws ValidationError if dt <= 0, no actuated direction, record_every
  /// < 1, or paper_printed is combined with a drift / non-unicycle actuation.
  void validate() const;
};

/// Time derivative of a SystemState, same layout as the state.
struct AgentDeriv {
  double dtheta = 0.0, dx = 0.0, dy = 0.0;
  Momentum dmu;
  Twist dalpha;
};
struct SystemDeriv {
  std::vector<AgentDeriv> agents;
};

/// PMP extremal controls for the unicycle: u = (1/2 m1, m2, 0). The e3
/// direction is unactuated and pinned to zero.
Twist pmp_controls(const Momentum& mu);

/// Extremal controls restricted to opts.control_dims (excluding drift):
/// w_k = m_k / |e_k|^2 on actuated directions, 0 elsewhere.
Twist pmp_controls(const Momentum& mu, const DynOptions& opts);

/// Reduced Hamiltonian for the unicycle (no drift, e1/e2 actuated):
/// sum_i [ 1/4 (m1)^2 + 1/2 (m2)^2 - u_ext(alpha_i) - 1/2 sum_j u_pair ].
double hamiltonian(const SystemState& state, const PotentialParams& params,
                   const InteractionGraph& graph);

/// General form: adds <mu, e0> for nonzero drift and restricts the kinetic
/// term to actuated directions.
double hamiltonian(const SystemState& state, const PotentialParams& params,
                   const InteractionGraph& graph, const DynOptions& opts);

/// Vector field of the coupled (g, mu, alpha) system in the requested mode.
/// Singularity errors are rethrown with the offending agents identified.
SystemDeriv rhs(const SystemState& state, const PotentialParams& params,
                const InteractionGraph& graph, const DynOptions& opts);

/// state + c * deriv on all coordinates (theta re-wrapped); advances t by c.
SystemState axpy(const SystemState& state, double c, const SystemDeriv& d);

/// One explicit Euler or classical RK4 step of size opts.dt.
SystemState step(const SystemState& state, const PotentialParams& params,
                 const InteractionGraph& graph, const DynOptions& opts);

struct TrajectorySample {
  double t = 0.0;
  std::vector<AgentState> agents;
  std::vector<Twist> controls;  // extremal controls at the sample
  double h = 0.0;
  double min_pair_dist = 0.0;
  double min_obs_clearance = 0.0;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  SystemState final_state;
  // minima tracked at every step, not only recorded samples
  double min_pair_dist = 0.0;
  double min_obs_clearance = 0.0;
  double h_drift_max = 0.0;  // max |h(t) - h(0)| over samples
  long n_steps_completed = 0;
  bool aborted = false;
  long abort_step = -1;
  std::string abort_reason;
};

/// Integrates n_steps fixed steps, recording every opts.record_every-th
/// sample plus the final state. On a Singularity error the partial trajectory
/// is returned with `aborted` set instead of throwing.
Trajectory integrate(const SystemState& initial, const PotentialParams& params,
                     const InteractionGraph& graph, const DynOptions& opts,
                     long n_steps);

struct Diagnostics {
  double h = 0.0;
  double min_pair_dist = 0.0;
  double min_obs_clearance = 0.0;
  std::vector<double> casimir;  // per agent, (m2)^2 + (m3)^2
};

/// Pure readout of conserved-quantity candidates and distances.
Diagnostics diagnostics(const SystemState& state, const PotentialParams& params,
                        const InteractionGraph& graph);

/// Minimum pairwise center distance over all unordered pairs (+inf for a
/// single agent) and minimum distance from the origin over agents.
double min_pair_distance(const SystemState& state);
double min_obstacle_clearance(const SystemState& state);

/// alpha_i(0) = Ad_{g_i(0)^{-1}}(alpha0) for every agent.
void reset_alpha(SystemState& state, const Twist& alpha0);

}  // namespace se2fleet
