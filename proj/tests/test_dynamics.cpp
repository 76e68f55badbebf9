// Fleet dynamics tests: graph/parameter validation, the extremal control law,
// frozen right-hand-side values in both modes, conservation probes, and the
// fixed-step integrators.

#include "se2fleet/dynamics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "se2fleet/errors.hpp"
#include "oracles.hpp"

namespace {

using se2fleet::AgentState;
using se2fleet::Diagnostics;
using se2fleet::DynMode;
using se2fleet::DynOptions;
using se2fleet::InteractionGraph;
using se2fleet::Integrator;
using se2fleet::kPi;
using se2fleet::Momentum;
using se2fleet::Pose2;
using se2fleet::PotentialParams;
using se2fleet::SingularityError;
using se2fleet::SystemState;
using se2fleet::Trajectory;
using se2fleet::Twist;
using se2fleet::ValidationError;

SystemState TwoAgentState() {
  SystemState s;
  s.agents.resize(2);
  s.agents[0].g = Pose2(0, 3, 4);
  s.agents[0].mu = Momentum{2, 1, 3};
  s.agents[1].g = Pose2(0, 7, 4);
  s.agents[1].mu = Momentum{-1, 2, 0.5};
  se2fleet::reset_alpha(s, {1, 0, 0});
  return s;
}

TEST(InteractionGraph, CompleteAndAccessors) {
  const InteractionGraph g = InteractionGraph::complete(3);
  EXPECT_EQ(g.size(), 3);
  EXPECT_EQ(g.edges().size(), 3u);
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_TRUE(g.has_edge(2, 1));
  EXPECT_FALSE(g.has_edge(0, 0));
  EXPECT_TRUE(g.connected());
}

TEST(InteractionGraph, ValidationAndNormalization) {
  EXPECT_THROW(InteractionGraph(2, {{0, 2}}), ValidationError);
  EXPECT_THROW(InteractionGraph(2, {{-1, 0}}), ValidationError);
  EXPECT_THROW(InteractionGraph(2, {{1, 1}}), ValidationError);
  // duplicates and mirrored entries collapse to one undirected edge
  const InteractionGraph g(3, {{0, 1}, {1, 0}, {0, 1}, {2, 1}});
  EXPECT_EQ(g.edges().size(), 2u);
  EXPECT_EQ(g.neighbors(1).size(), 2u);
}

TEST(InteractionGraph, Connectivity) {
  EXPECT_TRUE(InteractionGraph(1, {}).connected());
  EXPECT_FALSE(InteractionGraph(2, {}).connected());
  EXPECT_TRUE(InteractionGraph(4, {{0, 1}, {1, 2}, {2, 3}}).connected());
  EXPECT_FALSE(InteractionGraph(4, {{0, 1}, {2, 3}}).connected());
}

TEST(PotentialParams, UniformFactory) {
  const PotentialParams p = PotentialParams::uniform(3, 2.0, 0.5);
  EXPECT_EQ(p.size(), 3);
  EXPECT_DOUBLE_EQ(p.sigma_pair(0, 1), 2.0);
  EXPECT_DOUBLE_EQ(p.sigma_pair(1, 1), 0.0);
  EXPECT_DOUBLE_EQ(p.sigma_obs(2), 0.5);
  EXPECT_NO_THROW(p.validate());
}

TEST(PotentialParams, ValidationFailures) {
  PotentialParams p = PotentialParams::uniform(2, 1.0, 1.0);
  p.sigma_pair(0, 1) = 2.0;  // asymmetric
  EXPECT_THROW(p.validate(), ValidationError);

  p = PotentialParams::uniform(2, 1.0, 1.0);
  p.sigma_pair(0, 0) = 1.0;  // nonzero diagonal
  EXPECT_THROW(p.validate(), ValidationError);

  p = PotentialParams::uniform(2, 1.0, 1.0);
  p.sigma_obs(0) = -0.1;
  EXPECT_THROW(p.validate(), ValidationError);

  p = PotentialParams::uniform(2, 1.0, 1.0);
  p.r_bar = 0.0;
  EXPECT_THROW(p.validate(), ValidationError);

  // nonzero coupling off the graph's edge set
  p = PotentialParams::uniform(3, 1.0, 1.0);
  const InteractionGraph path(3, {{0, 1}, {1, 2}});
  EXPECT_THROW(p.validate(&path), ValidationError);
  p.sigma_pair(0, 2) = p.sigma_pair(2, 0) = 0.0;
  EXPECT_NO_THROW(p.validate(&path));
}

TEST(DynOptions, Validation) {
  DynOptions o;
  EXPECT_NO_THROW(o.validate());
  o.dt = 0.0;
  EXPECT_THROW(o.validate(), ValidationError);
  o = DynOptions{};
  o.record_every = 0;
  EXPECT_THROW(o.validate(), ValidationError);
  o = DynOptions{};
  o.control_dims = {false, false, false};
  EXPECT_THROW(o.validate(), ValidationError);
  // the verbatim mode is pinned to the driftless unicycle
  o = DynOptions{};
  o.mode = DynMode::paper_printed;
  EXPECT_NO_THROW(o.validate());
  o.drift_e0 = {0, 0, 0.1};
  EXPECT_THROW(o.validate(), ValidationError);
  o.drift_e0 = {0, 0, 0};
  o.control_dims = {true, true, true};
  EXPECT_THROW(o.validate(), ValidationError);
}

TEST(PmpControls, UnicycleLaw) {
  const Twist u = se2fleet::pmp_controls({3, -2, 7});
  EXPECT_DOUBLE_EQ(u.a, 1.5);   // m1 / |e1|^2 = 3/2
  EXPECT_DOUBLE_EQ(u.v1, -2.0);
  EXPECT_DOUBLE_EQ(u.v2, 0.0);  // unactuated

  DynOptions all;
  all.control_dims = {true, true, true};
  const Twist w = se2fleet::pmp_controls({3, -2, 7}, all);
  EXPECT_DOUBLE_EQ(w.v2, 7.0);
}

TEST(Hamiltonian, FrozenTwoAgentValue) {
  SystemState s;
  s.agents.resize(2);
  s.agents[0].g = Pose2(0, 3, 4);
  s.agents[0].mu = Momentum{2, 1, 0};
  s.agents[1].g = Pose2(0, 9, 4);
  s.agents[1].mu = Momentum{0, 0, 0};
  se2fleet::reset_alpha(s, {1, 0, 0});
  const PotentialParams p = PotentialParams::uniform(2, 1.0, 1.0);
  const InteractionGraph g = InteractionGraph::complete(2);
  // kinetic 1/4*4 + 1/2*1 = 1.5; obstacle terms 1/42 and 1/186; the shared
  // pair term 1/(2*32) counted half per agent
  const double want = 1.5 - 1.0 / 42.0 - 1.0 / 186.0 - 1.0 / 64.0;
  EXPECT_NEAR(se2fleet::hamiltonian(s, p, g), want, 1e-14);
}

TEST(Rhs, FrozenValuesPaperPrinted) {
  const SystemState s = TwoAgentState();
  const PotentialParams p = PotentialParams::uniform(2, 1.0, 1.0);
  const InteractionGraph g = InteractionGraph::complete(2);
  DynOptions o;
  o.mode = DynMode::paper_printed;
  const se2fleet::SystemDeriv d = se2fleet::rhs(s, p, g, o);

  // agent 1: u = (1, 1, 0); alpha = (1, -4, 3), |alpha|^2 - 6 = 21;
  // pair denominator 16 - 4 = 12, x_12 = -4
  const auto& a = d.agents[0];
  EXPECT_DOUBLE_EQ(a.dtheta, 1.0);
  EXPECT_DOUBLE_EQ(a.dx, 1.0);
  EXPECT_DOUBLE_EQ(a.dy, 0.0);
  EXPECT_DOUBLE_EQ(a.dmu.m1, -1.5);                              // -1/2 mu2 mu3
  EXPECT_NEAR(a.dmu.m2, 3.0 + 1.0 / 147.0 + 1.0 / 36.0, 1e-15);  // obstacle sign "-"
  EXPECT_NEAR(a.dmu.m3, -1.0 + 4.0 / 441.0, 1e-15);
  // alpha' = (0, 1/2 mu1 a3, -1/2 mu1 a2 + mu2 a1)
  EXPECT_DOUBLE_EQ(a.dalpha.a, 0.0);
  EXPECT_DOUBLE_EQ(a.dalpha.v1, 3.0);
  EXPECT_DOUBLE_EQ(a.dalpha.v2, 5.0);
}

TEST(Rhs, FrozenValuesFirstPrinciples) {
  const SystemState s = TwoAgentState();
  const PotentialParams p = PotentialParams::uniform(2, 1.0, 1.0);
  const InteractionGraph g = InteractionGraph::complete(2);
  DynOptions o;
  o.mode = DynMode::first_principles;
  const se2fleet::SystemDeriv d = se2fleet::rhs(s, p, g, o);

  // ad*_u mu = (-3, 3, -1); potential forces enter with "+"
  const auto& a = d.agents[0];
  EXPECT_DOUBLE_EQ(a.dmu.m1, -3.0);  // factor 2 vs the printed -1/2 mu2 mu3
  EXPECT_NEAR(a.dmu.m2, 3.0 + 1.0 / 36.0 - 1.0 / 147.0, 1e-15);
  EXPECT_NEAR(a.dmu.m3, -1.0 - 4.0 / 441.0, 1e-15);
  // kinematics and transport agree across modes
  EXPECT_DOUBLE_EQ(a.dtheta, 1.0);
  EXPECT_DOUBLE_EQ(a.dalpha.v1, 3.0);
  EXPECT_DOUBLE_EQ(a.dalpha.v2, 5.0);
}

TEST(Rhs, SingularityNamesAgentsOneBased) {
  SystemState s;
  s.agents.resize(2);
  s.agents[0].g = Pose2(0, 5, 0);
  s.agents[1].g = Pose2(0, 6.5, 0);  // distance 1.5 < 2 r_bar
  se2fleet::reset_alpha(s, {1, 0, 0});
  const PotentialParams p = PotentialParams::uniform(2, 1.0, 1.0);
  const InteractionGraph g = InteractionGraph::complete(2);
  try {
    se2fleet::rhs(s, p, g, DynOptions{});
    FAIL() << "expected SingularityError";
  } catch (const SingularityError& e) {
    EXPECT_NE(std::string(e.what()).find("agents 1 and 2"), std::string::npos);
  }

  SystemState one;
  one.agents.resize(1);
  one.agents[0].g = Pose2(0, 0.5, 0);  // inside the obstacle guard
  se2fleet::reset_alpha(one, {1, 0, 0});
  try {
    se2fleet::rhs(one, PotentialParams::uniform(1, 0.0, 1.0),
                  InteractionGraph::complete(1), DynOptions{});
    FAIL() << "expected SingularityError";
  } catch (const SingularityError& e) {
    EXPECT_NE(std::string(e.what()).find("agent 1"), std::string::npos);
  }
}

TEST(Axpy, WrapsHeadingAndAdvancesTime) {
  SystemState s;
  s.agents.resize(1);
  s.agents[0].g = Pose2(3.0, 0, 0);
  s.t = 1.0;
  se2fleet::SystemDeriv d;
  d.agents.resize(1);
  d.agents[0].dtheta = 1.0;  // 3.0 + 0.5 stays in range; 3.0 + 1.0 wraps
  const SystemState out = se2fleet::axpy(s, 1.0, d);
  EXPECT_NEAR(out.agents[0].g.theta, 4.0 - 2.0 * kPi, 1e-15);
  EXPECT_DOUBLE_EQ(out.t, 2.0);
}

TEST(Step, EulerIsSingleAxpy) {
  const SystemState s = TwoAgentState();
  const PotentialParams p = PotentialParams::uniform(2, 1.0, 1.0);
  const InteractionGraph g = InteractionGraph::complete(2);
  DynOptions o;
  o.integrator = Integrator::euler;
  o.dt = 0.01;
  const SystemState got = se2fleet::step(s, p, g, o);
  const SystemState want = se2fleet::axpy(s, o.dt, se2fleet::rhs(s, p, g, o));
  for (int i = 0; i < 2; ++i) {
    EXPECT_DOUBLE_EQ(got.agents[i].g.x, want.agents[i].g.x);
    EXPECT_DOUBLE_EQ(got.agents[i].mu.m2, want.agents[i].mu.m2);
    EXPECT_DOUBLE_EQ(got.agents[i].alpha.v2, want.agents[i].alpha.v2);
  }
}

TEST(Step, Rk4FarMoreAccurateThanEuler) {
  // free motion, one agent, compare both integrators at dt = 0.01 against a
  // fine RK4 reference
  SystemState s;
  s.agents.resize(1);
  s.agents[0].g = Pose2(0.2, 0, 0);
  s.agents[0].mu = Momentum{1.0, 1.0, 0.5};
  se2fleet::reset_alpha(s, {1, 0, 0});
  const PotentialParams p = PotentialParams::free_motion(1);
  const InteractionGraph g = InteractionGraph::complete(1);

  auto run = [&](Integrator integ, double dt, long n) {
    DynOptions o;
    o.integrator = integ;
    o.dt = dt;
    SystemState st = s;
    for (long k = 0; k < n; ++k) st = se2fleet::step(st, p, g, o);
    return st;
  };
  const SystemState ref = run(Integrator::rk4, 1e-4, 10000);
  const SystemState rk = run(Integrator::rk4, 0.01, 100);
  const SystemState eu = run(Integrator::euler, 0.01, 100);
  auto err = [&](const SystemState& st) {
    return std::hypot(st.agents[0].g.x - ref.agents[0].g.x,
                      st.agents[0].g.y - ref.agents[0].g.y) +
           std::abs(st.agents[0].mu.m1 - ref.agents[0].mu.m1);
  };
  EXPECT_LT(err(rk), err(eu) / 100.0);
  EXPECT_LT(err(rk), 1e-7);
}

TEST(Conservation, FirstPrinciplesHamiltonianWithPotentials) {
  SystemState s;
  s.agents.resize(2);
  s.agents[0].g = Pose2(0, -4, 1);
  s.agents[0].mu = Momentum{0.5, 1.0, 0.2};
  s.agents[1].g = Pose2(0, 4, 1);
  s.agents[1].mu = Momentum{-0.3, 0.8, 0.0};
  se2fleet::reset_alpha(s, {1, 0, 0});
  const PotentialParams p = PotentialParams::uniform(2, 1.0, 1.0);
  const InteractionGraph g = InteractionGraph::complete(2);
  DynOptions o;
  o.mode = DynMode::first_principles;
  o.integrator = Integrator::rk4;
  o.dt = 1e-3;
  const Trajectory traj = se2fleet::integrate(s, p, g, o, 1000);
  ASSERT_FALSE(traj.aborted);
  EXPECT_LT(traj.h_drift_max, 1e-9);
}

TEST(Conservation, PaperPrintedFreeMotionDrifts) {
  // d/dt h = 1/4 mu1 mu2 mu3 != 0 under the verbatim signs: the printed free
  // system does not conserve the reduced Hamiltonian
  SystemState s;
  s.agents.resize(1);
  s.agents[0].g = Pose2(0, 0, 0);
  s.agents[0].mu = Momentum{1.0, 1.0, 1.0};
  se2fleet::reset_alpha(s, {1, 0, 0});
  const PotentialParams p = PotentialParams::free_motion(1);
  const InteractionGraph g = InteractionGraph::complete(1);
  DynOptions o;
  o.mode = DynMode::paper_printed;
  o.integrator = Integrator::rk4;
  o.dt = 1e-3;
  const Trajectory traj = se2fleet::integrate(s, p, g, o, 1000);
  EXPECT_GT(traj.h_drift_max, 1e-3);

  // while the first-principles free flow conserves it tightly
  o.mode = DynMode::first_principles;
  const Trajectory fp = se2fleet::integrate(s, p, g, o, 1000);
  EXPECT_LT(fp.h_drift_max, 1e-10);
}

TEST(Conservation, CasimirInBothModes) {
  // (mu2)^2 + (mu3)^2 is a Casimir of the free flow in either mode
  SystemState s;
  s.agents.resize(1);
  s.agents[0].g = Pose2(0.3, 1, -2);
  s.agents[0].mu = Momentum{0.7, -1.1, 0.9};
  se2fleet::reset_alpha(s, {1, 0, 0});
  const PotentialParams p = PotentialParams::free_motion(1);
  const InteractionGraph g = InteractionGraph::complete(1);
  for (const DynMode mode : {DynMode::paper_printed, DynMode::first_principles}) {
    DynOptions o;
    o.mode = mode;
    o.integrator = Integrator::rk4;
    o.dt = 1e-3;
    const double c0 = se2fleet::diagnostics(s, p, g).casimir[0];
    const Trajectory traj = se2fleet::integrate(s, p, g, o, 1000);
    const double c1 = se2fleet::diagnostics(traj.final_state, p, g).casimir[0];
    EXPECT_NEAR(c1, c0, 1e-10);
  }
}

TEST(Conservation, AlphaReconstructsFromPoseInBothModes) {
  // alpha(t) must track Ad_{g(t)^{-1}} e1 (transport consistency)
  SystemState s;
  s.agents.resize(2);
  s.agents[0].g = Pose2(0.1, -4, 1);
  s.agents[0].mu = Momentum{0.5, 1.0, 0.2};
  s.agents[1].g = Pose2(-0.4, 4, 1);
  s.agents[1].mu = Momentum{-0.3, 0.8, 0.0};
  se2fleet::reset_alpha(s, {1, 0, 0});
  const PotentialParams p = PotentialParams::uniform(2, 1.0, 1.0);
  const InteractionGraph g = InteractionGraph::complete(2);
  for (const DynMode mode : {DynMode::paper_printed, DynMode::first_principles}) {
    DynOptions o;
    o.mode = mode;
    o.integrator = Integrator::rk4;
    o.dt = 1e-3;
    const Trajectory traj = se2fleet::integrate(s, p, g, o, 1000);
    ASSERT_FALSE(traj.aborted);
    for (const AgentState& a : traj.final_state.agents) {
      const Twist want = se2fleet::adjoint(se2fleet::inverse(a.g), {1, 0, 0});
      EXPECT_NEAR(a.alpha.a, want.a, 1e-6);
      EXPECT_NEAR(a.alpha.v1, want.v1, 1e-6);
      EXPECT_NEAR(a.alpha.v2, want.v2, 1e-6);
    }
  }
}

TEST(ModeDistinction, TrajectoriesDiverge) {
  // the mu1 equations differ by a factor 2, so the two modes must separate
  SystemState s;
  s.agents.resize(1);
  s.agents[0].g = Pose2(0, 0, 0);
  s.agents[0].mu = Momentum{0.5, 1.0, 0.8};
  se2fleet::reset_alpha(s, {1, 0, 0});
  const PotentialParams p = PotentialParams::free_motion(1);
  const InteractionGraph g = InteractionGraph::complete(1);
  DynOptions o;
  o.dt = 1e-3;
  o.mode = DynMode::paper_printed;
  const Trajectory a = se2fleet::integrate(s, p, g, o, 1000);
  o.mode = DynMode::first_principles;
  const Trajectory b = se2fleet::integrate(s, p, g, o, 1000);
  const double gap = std::abs(a.final_state.agents[0].mu.m1 -
                              b.final_state.agents[0].mu.m1);
  EXPECT_GT(gap, 1e-2);
}

TEST(Integrate, RecordingAndClock) {
  SystemState s;
  s.agents.resize(1);
  s.agents[0].g = Pose2(0, 10, 0);
  s.agents[0].mu = Momentum{0, 1, 0};
  se2fleet::reset_alpha(s, {1, 0, 0});
  const PotentialParams p = PotentialParams::free_motion(1);
  const InteractionGraph g = InteractionGraph::complete(1);
  DynOptions o;
  o.dt = 0.25;
  o.record_every = 7;
  const Trajectory traj = se2fleet::integrate(s, p, g, o, 20);
  ASSERT_FALSE(traj.aborted);
  // samples at k = 0, 7, 14 plus the final step 20
  ASSERT_EQ(traj.samples.size(), 4u);
  EXPECT_DOUBLE_EQ(traj.samples[1].t, 7 * 0.25);
  EXPECT_DOUBLE_EQ(traj.samples.back().t, 5.0);  // k * dt, not accumulated sums
  EXPECT_EQ(traj.n_steps_completed, 20);
  EXPECT_DOUBLE_EQ(traj.final_state.t, 5.0);
  // controls recorded alongside the state
  EXPECT_DOUBLE_EQ(traj.samples[0].controls[0].v1, 1.0);
}

TEST(Integrate, MinimaTrackedBetweenRecordedSamples) {
  // flyby: agent 2 crosses agent 1's latitude midway; only the endpoints are
  // recorded but the tracked minimum must see the close approach
  SystemState s;
  s.agents.resize(2);
  s.agents[0].g = Pose2(0, 0, 0);
  s.agents[0].mu = Momentum{0, 0, 0};
  s.agents[1].g = Pose2(kPi / 2, 3, -5);
  s.agents[1].mu = Momentum{0, 1, 0};
  se2fleet::reset_alpha(s, {1, 0, 0});
  const PotentialParams p = PotentialParams::free_motion(2);
  const InteractionGraph g = InteractionGraph::complete(2);
  DynOptions o;
  o.dt = 0.01;
  o.record_every = 1000000;  // endpoints only
  const Trajectory traj = se2fleet::integrate(s, p, g, o, 1000);
  ASSERT_EQ(traj.samples.size(), 2u);
  EXPECT_NEAR(traj.min_pair_dist, 3.0, 1e-9);
  double recorded = std::numeric_limits<double>::infinity();
  for (const auto& sample : traj.samples)
    recorded = std::min(recorded, sample.min_pair_dist);
  EXPECT_GT(recorded, 5.8);  // sqrt(34) at both endpoints
}

TEST(Integrate, AbortsOnMidFlightContact) {
  // two agents drive head-on with a negligible coupling: the barrier cannot
  // deflect them and the flow must stop at the contact pole
  SystemState s;
  s.agents.resize(2);
  s.agents[0].g = Pose2(0, -2.605, 0);
  s.agents[0].mu = Momentum{0, 1, 0};
  s.agents[1].g = Pose2(kPi, 2.605, 0);
  s.agents[1].mu = Momentum{0, 1, 0};
  se2fleet::reset_alpha(s, {1, 0, 0});
  PotentialParams p = PotentialParams::uniform(2, 1e-12, 0.0);
  const InteractionGraph g = InteractionGraph::complete(2);
  DynOptions o;
  o.integrator = Integrator::euler;
  o.dt = 0.01;
  const Trajectory traj = se2fleet::integrate(s, p, g, o, 400);
  EXPECT_TRUE(traj.aborted);
  EXPECT_GT(traj.abort_step, 100);
  EXPECT_LT(traj.abort_step, 200);
  EXPECT_NE(traj.abort_reason.find("agents 1 and 2"), std::string::npos);
  EXPECT_LT(traj.min_pair_dist, 2.1);
}

TEST(Diagnostics, DistanceReadouts) {
  SystemState s;
  s.agents.resize(3);
  s.agents[0].g = Pose2(0, 0, 0);
  s.agents[1].g = Pose2(0, 4, 0);
  s.agents[2].g = Pose2(0, 0, 3);
  EXPECT_DOUBLE_EQ(se2fleet::min_pair_distance(s), 3.0);

  SystemState pair;
  pair.agents.resize(2);
  pair.agents[0].g = Pose2(0, 0, 0);
  pair.agents[1].g = Pose2(0, 3, 4);
  EXPECT_DOUBLE_EQ(se2fleet::min_pair_distance(pair), 5.0);
  EXPECT_DOUBLE_EQ(se2fleet::min_obstacle_clearance(pair), 0.0);

  SystemState one;
  one.agents.resize(1);
  one.agents[0].g = Pose2(0, 3, 4);
  EXPECT_TRUE(std::isinf(se2fleet::min_pair_distance(one)));
  EXPECT_DOUBLE_EQ(se2fleet::min_obstacle_clearance(one), 5.0);
}

TEST(ResetAlpha, AdvectsReferenceParameter) {
  SystemState s;
  s.agents.resize(1);
  s.agents[0].g = Pose2(kPi / 2, 1, 0);
  se2fleet::reset_alpha(s, {1, 0, 0});
  EXPECT_NEAR(s.agents[0].alpha.a, 1.0, 1e-15);
  EXPECT_NEAR(s.agents[0].alpha.v1, 1.0, 1e-15);
  EXPECT_NEAR(s.agents[0].alpha.v2, 0.0, 1e-15);
}

}  // namespace
