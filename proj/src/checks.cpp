#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "se2fleet/scenario.hpp"
#include "se2fleet/shooting.hpp"

// Invariant battery behind the `check` command. Randomized checks use a fixed
// seed so that the report is reproducible run to run.

namespace se2fleet {

namespace {

constexpr std::uint64_t kSeed = 0x5e2f1ee7u;

struct Sampler {
  std::mt19937_64 rng{kSeed};
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  }
  Pose2 pose(double box = 5.0) {
    return {uniform(-kPi, kPi), uniform(-box, box), uniform(-box, box)};
  }
  Twist twist(double box = 1.0) {
    return {uniform(-box, box), uniform(-box, box), uniform(-box, box)};
  }
  Momentum momentum(double box = 1.0) {
    return {uniform(-box, box), uniform(-box, box), uniform(-box, box)};
  }
  // pose with obstacle clearance and, vs. the origin-pose, pair clearance
  Pose2 clear_pose() {
    for (;;) {
      Pose2 g = pose(8.0);
      if (g.x * g.x + g.y * g.y > 6.0) return g;
    }
  }
};

double twist_dist(const Twist& a, const Twist& b) {
  return std::sqrt(norm_sq(a - b));
}

double momentum_rel_err(const Momentum& a, const Momentum& b) {
  const double num = std::sqrt((a.m1 - b.m1) * (a.m1 - b.m1) +
                               (a.m2 - b.m2) * (a.m2 - b.m2) +
                               (a.m3 - b.m3) * (a.m3 - b.m3));
  const double den = std::max(
      1e-12, std::sqrt(b.m1 * b.m1 + b.m2 * b.m2 + b.m3 * b.m3));
  return num / den;
}

CheckResult make_result(const std::string& name, double worst, double tol) {
  CheckResult r;
  r.name = name;
  r.status = worst <= tol ? CheckResult::pass : CheckResult::fail;
  std::ostringstream os;
  os << "max deviation " << std::scientific << std::setprecision(2) << worst
     << " (tolerance " << tol << ")";
  r.detail = os.str();
  return r;
}

}  // namespace

std::vector<CheckResult> run_kernel_checks() {
  std::vector<CheckResult> out;
  Sampler smp;

  {  // dual basis: <e^i, e_j> = delta_ij through the matrix trace
    double worst = 0.0;
    const Twist basis[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    const Momentum dual[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int i = 0; i < 3; ++i)
      for (int jj = 0; jj < 3; ++jj) {
        const double trace =
            (to_matrix(dual[i]) * to_matrix(basis[jj])).trace();
        const double expected = i == jj ? 1.0 : 0.0;
        worst = std::max(worst, std::abs(trace - expected));
        worst = std::max(worst, std::abs(pairing(dual[i], basis[jj]) - expected));
      }
    out.push_back(make_result("dual basis pairing <e^i, e_j> = delta_ij", worst, 1e-14));
  }

  {  // exp/log round-trip
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const Pose2 g = smp.pose();
      const Pose2 back = exp(log(g));
      worst = std::max({worst, std::abs(wrap_angle(back.theta - g.theta)),
                        std::abs(back.x - g.x), std::abs(back.y - g.y)});
    }
    out.push_back(make_result("exp/log round-trip (1000 samples)", worst, 1e-10));
  }

  {  // Ad homomorphism and ad* adjointness
    double worst_ad = 0.0, worst_coad = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const Pose2 g = smp.pose(), h = smp.pose();
      const Twist xi = smp.twist(), eta = smp.twist();
      const Momentum mu = smp.momentum();
      worst_ad = std::max(worst_ad, twist_dist(adjoint(compose(g, h), xi),
                                               adjoint(g, adjoint(h, xi))));
      worst_coad = std::max(worst_coad,
                            std::abs(pairing(coadjoint_star(xi, mu), eta) -
                                     pairing(mu, bracket(xi, eta))));
    }
    out.push_back(make_result("Ad homomorphism Ad_{gh} = Ad_g Ad_h", worst_ad, 1e-10));
    out.push_back(make_result("ad* adjointness <ad*_xi mu, eta> = <mu, [xi, eta]>",
                              worst_coad, 1e-10));
  }

  {  // u_pair left-invariance
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const Pose2 h = smp.pose();
      Pose2 gi = smp.pose(), gj = smp.pose();
      const double dx = gi.x - gj.x, dy = gi.y - gj.y;
      if (dx * dx + dy * dy <= 4.1) continue;  // keep away from the pole
      worst = std::max(worst, std::abs(u_pair(compose(h, gi), compose(h, gj), 1.0, 1.0) -
                                       u_pair(gi, gj, 1.0, 1.0)));
    }
    out.push_back(
        make_result("u_pair left-invariance under 1000 translations", worst, 1e-12));
  }

  {  // extended-potential equivalence and obstacle isotropy
    double worst_eq = 0.0, worst_rot = 0.0;
    bool witness = false;
    for (int k = 0; k < 500; ++k) {
      const Pose2 g = smp.clear_pose();
      worst_eq = std::max(worst_eq,
                          std::abs(u_ext(adjoint(inverse(g), {1, 0, 0}), 1.0) -
                                   u_obs(g, 1.0, 1.0)));
      const Pose2 rot(smp.uniform(-kPi, kPi), 0.0, 0.0);  // rotation about origin
      worst_rot =
          std::max(worst_rot, std::abs(u_obs(compose(rot, g), 1.0, 1.0) -
                                       u_obs(g, 1.0, 1.0)));
      const Pose2 shift(0.0, 1.0, 0.0);
      const Pose2 moved = compose(shift, g);
      if (moved.x * moved.x + moved.y * moved.y > 6.0 &&
          std::abs(u_obs(moved, 1.0, 1.0) - u_obs(g, 1.0, 1.0)) > 1e-6)
        witness = true;
    }
    out.push_back(make_result("u_ext(Ad_{g^-1} e1) = u_obs(g) for r_bar = 1",
                              worst_eq, 1e-12));
    out.push_back(make_result("u_obs invariant under rotations about the origin",
                              worst_rot, 1e-12));
    CheckResult w;
    w.name = "u_obs changes under a translation witness";
    w.status = witness ? CheckResult::pass : CheckResult::fail;
    w.detail = witness ? "translation changed the value as expected"
                       : "no witness found";
    out.push_back(w);
  }

  {  // analytic gradients vs central finite differences
    double worst_pair = 0.0, worst_obs = 0.0, worst_printed_zero = 0.0;
    double printed_mismatch = 0.0;
    for (int k = 0; k < 100; ++k) {
      Pose2 gi = smp.pose(6.0), gj = smp.pose(6.0);
      const double dx = gi.x - gj.x, dy = gi.y - gj.y;
      if (dx * dx + dy * dy <= 4.5) continue;
      const auto fd = body_gradient_fd(
          gi, [&](const Pose2& g) { return u_pair(g, gj, 1.0, 1.0); }, 1e-5);
      worst_pair = std::max(
          worst_pair,
          momentum_rel_err(grad_pair_body(gi, gj, 1.0, 1.0, GradVariant::rotated), fd));
      printed_mismatch = std::max(
          printed_mismatch,
          momentum_rel_err(grad_pair_body(gi, gj, 1.0, 1.0, GradVariant::printed), fd));

      Pose2 flat(0.0, gi.x, gi.y);  // theta = 0: printed == rotated
      const auto fd0 = body_gradient_fd(
          flat, [&](const Pose2& g) { return u_pair(g, gj, 1.0, 1.0); }, 1e-5);
      worst_printed_zero = std::max(
          worst_printed_zero,
          momentum_rel_err(grad_pair_body(flat, gj, 1.0, 1.0, GradVariant::printed),
                           fd0));

      const Pose2 gc = smp.clear_pose();
      const Twist alpha = adjoint(inverse(gc), {1, 0, 0});
      // d/dt u_ext(alpha(g exp(t e_k))) via the advected parameter
      const auto fd_ext = body_gradient_fd(
          gc,
          [&](const Pose2& g) { return u_ext(adjoint(inverse(g), {1, 0, 0}), 1.0); },
          1e-5);
      worst_obs = std::max(worst_obs,
                           momentum_rel_err(grad_obs_ext(alpha, 1.0), fd_ext));
    }
    out.push_back(make_result("pair gradient (rotated) vs finite differences",
                              worst_pair, 1e-6));
    out.push_back(make_result("extended-potential gradient vs finite differences",
                              worst_obs, 1e-6));
    out.push_back(make_result("pair gradient (printed) vs finite differences at theta = 0",
                              worst_printed_zero, 1e-6));
    CheckResult pr;
    pr.name = "pair gradient (printed) vs finite differences at theta != 0";
    if (printed_mismatch > 1e-3) {
      pr.status = CheckResult::expected_fail;
      std::ostringstream os;
      os << "mismatch " << std::scientific << std::setprecision(2) << printed_mismatch
         << ": documented discrepancy, the printed variant omits the body-frame rotation";
      pr.detail = os.str();
    } else {
      pr.status = CheckResult::fail;
      pr.detail = "expected the documented mismatch, but the variants agree";
    }
    out.push_back(pr);
  }

  {  // short conservation probes on a synthetic two-agent system
    SystemState s;
    s.agents.resize(2);
    s.agents[0].g = Pose2(0.3, -4.0, 3.0);
    s.agents[0].mu = {0.8, 1.0, 0.2};
    s.agents[1].g = Pose2(-0.7, 4.0, 3.5);
    s.agents[1].mu = {-0.5, 0.9, -0.1};
    const PotentialParams params = PotentialParams::uniform(2, 1.0, 1.0);
    reset_alpha(s, params.alpha0);
    const InteractionGraph graph = InteractionGraph::complete(2);
    DynOptions opts;
    opts.dt = 1e-3;
    const Trajectory traj = integrate(s, params, graph, opts, 500);
    const double h0 = traj.samples.front().h;
    const double drift = traj.h_drift_max / std::max(1.0, std::abs(h0));
    CheckResult r = make_result("hamiltonian conservation (first_principles probe)",
                                traj.aborted ? 1.0 : drift, 1e-6);
    out.push_back(r);

    DynOptions free_opts;
    free_opts.dt = 1e-3;
    const PotentialParams free_params = PotentialParams::free_motion(2);
    const Trajectory free_traj = integrate(s, free_params, graph, free_opts, 1000);
    double casimir_drift = 0.0;
    const Diagnostics d0 = diagnostics(s, free_params, graph);
    for (const TrajectorySample& sm : free_traj.samples) {
      const Diagnostics d = diagnostics(SystemState{sm.agents, sm.t}, free_params, graph);
      for (std::size_t i = 0; i < d.casimir.size(); ++i)
        casimir_drift = std::max(casimir_drift, std::abs(d.casimir[i] - d0.casimir[i]));
    }
    out.push_back(make_result("free-motion casimir (mu2^2 + mu3^2) conservation (1 s)",
                              casimir_drift, 1e-10));
  }

  return out;
}

std::vector<CheckResult> run_scenario_checks(const Scenario& sc) {
  std::vector<CheckResult> out;

  bool valid = false;
  {
    CheckResult r;
    r.name = "scenario validation";
    try {
      validate_scenario(sc);
      valid = true;
      r.status = CheckResult::pass;
      r.detail = "all scenario invariants hold";
    } catch (const ValidationError& e) {
      r.status = CheckResult::fail;
      r.detail = e.what();
    }
    out.push_back(r);
  }

  {
    CheckResult r;
    r.name = "graph connectivity";
    try {
      r.status = sc.graph().connected() ? CheckResult::pass : CheckResult::fail;
      r.detail = r.status == CheckResult::pass ? "graph is connected"
                                               : "graph not connected";
    } catch (const ValidationError& e) {
      r.status = CheckResult::fail;
      r.detail = e.what();
    }
    out.push_back(r);
  }

  if (!valid) return out;

  SystemState initial;
  bool have_initial = false;
  try {
    initial = scenario_initial_state(sc);
    have_initial = true;
  } catch (const ValidationError&) {
    CheckResult r;
    r.name = "dynamics probes";
    r.status = CheckResult::pass;
    r.detail = "skipped: scenario has no complete initial data (u0 / mu0)";
    out.push_back(r);
  }

  if (have_initial) {
    const InteractionGraph graph = sc.graph();
    // short probes: 0.5 s at dt = 1e-3, rk4
    DynOptions probe = sc.dyn_options();
    probe.integrator = Integrator::rk4;
    probe.dt = 1e-3;
    probe.record_every = 10;
    const long n = 500;

    {
      DynOptions fp = probe;
      fp.mode = DynMode::first_principles;
      const Trajectory traj = integrate(initial, sc.params, graph, fp, n);
      CheckResult r;
      r.name = "hamiltonian conservation probe (first_principles, 0.5 s)";
      if (traj.aborted) {
        r.status = CheckResult::fail;
        r.detail = "flow aborted: " + traj.abort_reason;
      } else {
        const double h0 = traj.samples.front().h;
        r = make_result(r.name, traj.h_drift_max / std::max(1.0, std::abs(h0)), 1e-6);
      }
      out.push_back(r);
    }

    if (sc.mode == DynMode::paper_printed) {
      DynOptions pp = probe;
      pp.mode = DynMode::paper_printed;
      const Trajectory traj = integrate(initial, sc.params, graph, pp, n);
      CheckResult r;
      r.name = "hamiltonian conservation probe (paper_printed mode)";
      if (traj.aborted) {
        r.status = CheckResult::fail;
        r.detail = "flow aborted: " + traj.abort_reason;
      } else {
        const double h0 = traj.samples.front().h;
        const double drift = traj.h_drift_max / std::max(1.0, std::abs(h0));
        if (drift > 1e-6) {
          r.status = CheckResult::expected_fail;
          std::ostringstream os;
          os << "relative drift " << std::scientific << std::setprecision(2) << drift
             << ": documented discrepancy, the verbatim printed system is not "
                "conservative";
          r.detail = os.str();
        } else {
          r.status = CheckResult::pass;
          r.detail = "printed system conservative on this scenario";
        }
      }
      out.push_back(r);
    }

    {
      const Trajectory traj = integrate(initial, sc.params, graph, probe, n);
      CheckResult r;
      r.name = "alpha reconstruction alpha = Ad_{g^-1} e1 (0.5 s probe)";
      if (traj.aborted) {
        r.status = CheckResult::fail;
        r.detail = "flow aborted: " + traj.abort_reason;
      } else {
        double worst = 0.0;
        for (const TrajectorySample& sm : traj.samples)
          for (const AgentState& a : sm.agents)
            worst = std::max(
                worst, twist_dist(a.alpha, adjoint(inverse(a.g), sc.params.alpha0)));
        r = make_result(r.name, worst, 1e-6);
      }
      out.push_back(r);
    }
  }

  return out;
}

int run_check(const Scenario& sc, std::ostream& os) {
  std::vector<CheckResult> results = run_kernel_checks();
  const std::vector<CheckResult> scenario_rows = run_scenario_checks(sc);
  results.insert(results.end(), scenario_rows.begin(), scenario_rows.end());

  bool any_fail = false;
  for (const CheckResult& r : results) {
    const char* tag = r.status == CheckResult::pass           ? "PASS "
                      : r.status == CheckResult::expected_fail ? "XFAIL"
                                                                : "FAIL ";
    os << "[" << tag << "] " << r.name;
    if (!r.detail.empty()) os << " -- " << r.detail;
    os << "\n";
    if (r.status == CheckResult::fail) any_fail = true;
  }
  os << (any_fail ? "CHECK FAILED" : "CHECK OK") << " ("
     << results.size() << " checks, expected-fail rows document known "
     << "discrepancies of the printed system)\n";
  return any_fail ? kExitCheckFailed : kExitOk;
}

}  // namespace se2fleet
