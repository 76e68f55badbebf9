#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "se2fleet/dynamics.hpp"

// Single-shooting solver for the two-point boundary value problem: find
// initial costates mu(0) such that the extremal flow reaches the prescribed
// terminal poses g(T). Levenberg-Marquardt on the 3s-dimensional residual
// r(mu0) = concat_i log(gT_i^{-1} g_i(T)), with a forward-difference Jacobian
// (3s + 1 flow evaluations per iteration). Deterministic: fixed evaluation
// order, no randomness, no parallel reductions.

namespace se2fleet {

struct BoundaryData {
  std::vector<Pose2> g0;
  std::vector<Pose2> gT;
  double T = 0.0;

  int size() const { return static_cast<int>(g0.size()); }
  /// Throws ValidationError unless T > 0, sizes match, s >= 1, and the initial
  /// poses are strictly outside every active potential pole.
  void validate(const PotentialParams& params, const InteractionGraph& graph) const;
};

struct ShootOptions {
  double tol = 1e-8;
  int max_iter = 50;
  double fd_step = 1e-6;    // scaled by max(1, |mu0|_inf) per solve
  double damping0 = 1e-3;
  DynOptions dyn;           // forwarded mode/integrator/dt

  long n_steps(double T) const;  // round(T / dyn.dt), >= 1
};

enum class ShootStatus { converged, max_iterations, infeasible };

struct ShootIterRecord {
  int iteration = 0;
  double residual_norm = 0.0;
  double lambda = 0.0;
  bool accepted = true;
};

struct ShootResult {
  std::vector<Momentum> mu0;
  int iterations = 0;
  double residual_norm = 0.0;
  Trajectory trajectory;  // flow of the returned mu0
  bool converged = false;
  ShootStatus status = ShootStatus::converged;
  std::vector<ShootIterRecord> history;
};

/// Terminal-pose mismatch of the flow started at (g0, mu0, alpha from g0).
/// Empty when the flow hits a potential pole before T (infeasible shot).
std::optional<Eigen::VectorXd> shooting_residual(const std::vector<Momentum>& mu0,
                                                 const BoundaryData& boundary,
                                                 const PotentialParams& params,
                                                 const InteractionGraph& graph,
                                                 const ShootOptions& opts);

/// Levenberg-Marquardt solve. Throws SingularityError when no damped step is
/// feasible (including an infeasible initial guess) and NonConvergenceError
/// when the iteration cap is hit; both carry the best iterate's diagnostics.
/// On tolerance success returns the solution, its flow and the iterate log.
ShootResult solve_shooting(const std::vector<Momentum>& guess,
                           const BoundaryData& boundary, const PotentialParams& params,
                           const InteractionGraph& graph, const ShootOptions& opts);

/// Same solve but reporting failure in the result instead of throwing.
ShootResult solve_shooting_noexcept(const std::vector<Momentum>& guess,
                                    const BoundaryData& boundary,
                                    const PotentialParams& params,
                                    const InteractionGraph& graph,
                                    const ShootOptions& opts);

/// Initial-value run from velocity data: velocities (u1, u2) map to costates
/// mu0 = (2 u1, u2, 0) and the system is integrated forward n_steps.
Trajectory ivp_run(const std::vector<std::array<double, 2>>& u0,
                   const std::vector<Pose2>& g0, const PotentialParams& params,
                   const InteractionGraph& graph, const DynOptions& opts, long n_steps);

}  // namespace se2fleet
