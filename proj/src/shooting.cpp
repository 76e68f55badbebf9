#include "se2fleet/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace se2fleet {

void BoundaryData::validate(const PotentialParams& params,
                            const InteractionGraph& graph) const {
  if (!(T > 0.0)) throw ValidationError("horizon T must be positive");
  if (g0.empty()) throw ValidationError("at least one agent required");
  if (g0.size() != gT.size())
    throw ValidationError("g0 and gT must list the same number of agents");
  // probing the potentials at the start detects any active pole
  SystemState s;
  s.agents.resize(g0.size());
  for (std::size_t i = 0; i < g0.size(); ++i) s.agents[i].g = g0[i];
  reset_alpha(s, params.alpha0);
  try {
    (void)hamiltonian(s, params, graph);
  } catch (const SingularityError& e) {
    throw ValidationError(std::string("initial poses infeasible: ") + e.what());
  }
}

long ShootOptions::n_steps(double T) const {
  return std::max(1L, std::lround(T / dyn.dt));
}

namespace {

SystemState initial_state(const std::vector<Momentum>& mu0,
                          const BoundaryData& boundary, const PotentialParams& params) {
  SystemState s;
  s.agents.resize(boundary.g0.size());
  for (std::size_t i = 0; i < boundary.g0.size(); ++i) {
    s.agents[i].g = boundary.g0[i];
    s.agents[i].mu = mu0[i];
  }
  reset_alpha(s, params.alpha0);
  return s;
}

struct FlowEval {
  std::optional<Eigen::VectorXd> residual;
  Trajectory trajectory;
};

FlowEval evaluate_flow(const std::vector<Momentum>& mu0, const BoundaryData& boundary,
                       const PotentialParams& params, const InteractionGraph& graph,
                       const ShootOptions& opts) {
  FlowEval out;
  out.trajectory = integrate(initial_state(mu0, boundary, params), params, graph,
                             opts.dyn, opts.n_steps(boundary.T));
  if (out.trajectory.aborted) return out;
  const int s = boundary.size();
  Eigen::VectorXd r(3 * s);
  for (int i = 0; i < s; ++i) {
    const Twist err =
        log(compose(inverse(boundary.gT[i]), out.trajectory.final_state.agents[i].g));
    r[3 * i] = err.a;
    r[3 * i + 1] = err.v1;
    r[3 * i + 2] = err.v2;
  }
  out.residual = std::move(r);
  return out;
}

std::vector<Momentum> apply_delta(const std::vector<Momentum>& mu0,
                                  const Eigen::VectorXd& delta) {
  std::vector<Momentum> out = mu0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].m1 += delta[3 * i];
    out[i].m2 += delta[3 * i + 1];
    out[i].m3 += delta[3 * i + 2];
  }
  return out;
}

double inf_norm(const std::vector<Momentum>& mu0) {
  double n = 0.0;
  for (const Momentum& m : mu0)
    n = std::max({n, std::abs(m.m1), std::abs(m.m2), std::abs(m.m3)});
  return n;
}

}  // namespace

std::optional<Eigen::VectorXd> shooting_residual(const std::vector<Momentum>& mu0,
                                                 const BoundaryData& boundary,
                                                 const PotentialParams& params,
                                                 const InteractionGraph& graph,
                                                 const ShootOptions& opts) {
  if (static_cast<int>(mu0.size()) != boundary.size())
    throw ValidationError("mu0 list size does not match boundary data");
  return evaluate_flow(mu0, boundary, params, graph, opts).residual;
}

ShootResult solve_shooting(const std::vector<Momentum>& guess,
                           const BoundaryData& boundary, const PotentialParams& params,
                           const InteractionGraph& graph, const ShootOptions& opts) {
  ShootResult res = solve_shooting_noexcept(guess, boundary, params, graph, opts);
  if (res.status == ShootStatus::infeasible)
    throw SingularityError("shooting: every damped step hits a potential pole");
  if (res.status == ShootStatus::max_iterations) {
    std::ostringstream os;
    os << "shooting did not converge: residual " << res.residual_norm << " > tol "
       << opts.tol << " after " << res.iterations << " iterations";
    throw NonConvergenceError(os.str(), res.residual_norm, res.iterations);
  }
  return res;
}

ShootResult solve_shooting_noexcept(const std::vector<Momentum>& guess,
                                    const BoundaryData& boundary,
                                    const PotentialParams& params,
                                    const InteractionGraph& graph,
                                    const ShootOptions& opts) {
  if (static_cast<int>(guess.size()) != boundary.size())
    throw ValidationError("guess list size does not match boundary data");
  if (!(opts.tol > 0.0)) throw ValidationError("tol must be positive");
  if (!(opts.fd_step > 0.0)) throw ValidationError("fd_step must be positive");
  boundary.validate(params, graph);

  const int n = 3 * boundary.size();
  ShootResult res;
  res.mu0 = guess;

  FlowEval cur = evaluate_flow(res.mu0, boundary, params, graph, opts);
  if (!cur.residual) {
    // no finite first residual: nothing to damp toward
    res.status = ShootStatus::infeasible;
    res.trajectory = std::move(cur.trajectory);
    res.residual_norm = std::numeric_limits<double>::infinity();
    return res;
  }
  double rnorm = cur.residual->norm();
  double lambda = opts.damping0;
  res.history.push_back({0, rnorm, lambda, true});

  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    if (rnorm <= opts.tol) break;

    // forward-difference Jacobian, columns in fixed order
    const double h = opts.fd_step * std::max(1.0, inf_norm(res.mu0));
    Eigen::MatrixXd J(n, n);
    bool jacobian_ok = true;
    for (int c = 0; c < n; ++c) {
      Eigen::VectorXd delta = Eigen::VectorXd::Zero(n);
      delta[c] = h;
      const FlowEval pert =
          evaluate_flow(apply_delta(res.mu0, delta), boundary, params, graph, opts);
      if (!pert.residual) {
        jacobian_ok = false;
        break;
      }
      J.col(c) = (*pert.residual - *cur.residual) / h;
    }
    if (!jacobian_ok) {
      res.iterations = iter;
      res.residual_norm = rnorm;
      res.trajectory = std::move(cur.trajectory);
      res.status = ShootStatus::infeasible;
      return res;
    }

    const Eigen::MatrixXd JtJ = J.transpose() * J;
    const Eigen::VectorXd Jtr = J.transpose() * (*cur.residual);

    // damped steps with the same Jacobian until one is accepted
    bool accepted = false;
    bool any_feasible = false;
    constexpr double kLambdaMax = 1e10;
    while (lambda <= kLambdaMax) {
      Eigen::MatrixXd A = JtJ;
      A.diagonal().array() += lambda;
      const Eigen::VectorXd delta = A.ldlt().solve(-Jtr);
      const std::vector<Momentum> cand = apply_delta(res.mu0, delta);
      FlowEval ce = evaluate_flow(cand, boundary, params, graph, opts);
      if (ce.residual) {
        any_feasible = true;
        const double cnorm = ce.residual->norm();
        if (cnorm < rnorm) {
          res.mu0 = cand;
          cur = std::move(ce);
          rnorm = cnorm;
          lambda = std::max(lambda / 4.0, 1e-14);
          accepted = true;
          break;
        }
      }
      lambda *= 4.0;
      res.history.push_back({iter, rnorm, lambda, false});
    }

    res.iterations = iter;
    res.history.push_back({iter, rnorm, lambda, accepted});
    if (!accepted) {
      res.residual_norm = rnorm;
      res.trajectory = std::move(cur.trajectory);
      res.status = any_feasible ? ShootStatus::max_iterations : ShootStatus::infeasible;
      return res;
    }
  }

  res.residual_norm = rnorm;
  res.trajectory = std::move(cur.trajectory);
  res.converged = rnorm <= opts.tol;
  res.status = res.converged ? ShootStatus::converged : ShootStatus::max_iterations;
  return res;
}

Trajectory ivp_run(const std::vector<std::array<double, 2>>& u0,
                   const std::vector<Pose2>& g0, const PotentialParams& params,
                   const InteractionGraph& graph, const DynOptions& opts, long n_steps) {
  if (u0.size() != g0.size())
    throw ValidationError("u0 and g0 must list the same number of agents");
  SystemState s;
  s.agents.resize(g0.size());
  for (std::size_t i = 0; i < g0.size(); ++i) {
    s.agents[i].g = g0[i];
    // PMP inverse of (u1, u2): mu = (2 u1, u2, 0), mu3 defaulting to 0
    s.agents[i].mu = {2.0 * u0[i][0], u0[i][1], 0.0};
  }
  reset_alpha(s, params.alpha0);
  return integrate(s, params, graph, opts, n_steps);
}

}  // namespace se2fleet
