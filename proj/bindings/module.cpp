#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "se2fleet/scenario.hpp"
#include "se2fleet/shooting.hpp"
#include "se2fleet/svg.hpp"
#include "se2fleet/trajectory_io.hpp"

namespace py = pybind11;
using namespace se2fleet;

namespace {

std::string repr3(const char* name, double a, double b, double c) {
  std::ostringstream os;
  os.precision(17);
  os << name << "(" << a << ", " << b << ", " << c << ")";
  return os.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "reduced optimality flows for unicycle fleets on SE(2)";

  py::register_exception<ParseError>(m, "ParseError");
  py::register_exception<ValidationError>(m, "ValidationError");
  py::register_exception<SingularityError>(m, "SingularityError");
  py::register_exception<NonConvergenceError>(m, "NonConvergenceError");

  py::class_<Twist>(m, "Twist")
      .def(py::init<>())
      .def(py::init<double, double, double>(), py::arg("a"), py::arg("v1"),
           py::arg("v2"))
      .def_readwrite("a", &Twist::a)
      .def_readwrite("v1", &Twist::v1)
      .def_readwrite("v2", &Twist::v2)
      .def("__repr__",
           [](const Twist& t) { return repr3("Twist", t.a, t.v1, t.v2); });

  py::class_<Momentum>(m, "Momentum")
      .def(py::init<>())
      .def(py::init<double, double, double>(), py::arg("m1"), py::arg("m2"),
           py::arg("m3"))
      .def_readwrite("m1", &Momentum::m1)
      .def_readwrite("m2", &Momentum::m2)
      .def_readwrite("m3", &Momentum::m3)
      .def("__repr__",
           [](const Momentum& mu) { return repr3("Momentum", mu.m1, mu.m2, mu.m3); });

  py::class_<Pose2>(m, "Pose2")
      .def(py::init<>())
      .def(py::init<double, double, double>(), py::arg("theta"), py::arg("x"),
           py::arg("y"))
      .def_readonly("theta", &Pose2::theta)
      .def_readonly("x", &Pose2::x)
      .def_readonly("y", &Pose2::y)
      .def_static("identity", &Pose2::identity)
      .def("__repr__",
           [](const Pose2& g) { return repr3("Pose2", g.theta, g.x, g.y); });

  // kernel
  m.def("wrap_angle", &wrap_angle);
  m.def("compose", &compose);
  m.def("inverse", &inverse);
  m.def("exp", [](const Twist& xi) { return se2fleet::exp(xi); });
  m.def("log", [](const Pose2& g) { return se2fleet::log(g); });
  m.def("bracket", &bracket);
  m.def("pairing", &pairing);
  m.def("inner", &inner);
  m.def("norm_sq", &norm_sq);
  m.def("adjoint", &adjoint);
  m.def("coadjoint_star", &coadjoint_star);
  m.def("cotangent_lift_position_gradient", &cotangent_lift_position_gradient);
  m.def("pose_matrix", [](const Pose2& g) { return to_matrix(g); });
  m.def("twist_matrix", [](const Twist& t) { return to_matrix(t); });
  m.def("momentum_matrix", [](const Momentum& mu) { return to_matrix(mu); });

  // potentials
  py::enum_<GradVariant>(m, "GradVariant")
      .value("rotated", GradVariant::rotated)
      .value("printed", GradVariant::printed);
  m.def("cost", &cost);
  m.def("u_pair", &u_pair, py::arg("gi"), py::arg("gj"), py::arg("sigma") = 1.0,
        py::arg("r_bar") = 1.0);
  m.def("u_obs", &u_obs, py::arg("g"), py::arg("sigma") = 1.0, py::arg("r_bar") = 1.0);
  m.def("u_ext", &u_ext, py::arg("alpha"), py::arg("sigma") = 1.0);
  m.def(
      "grad_pair_body",
      [](const Pose2& gi, const Pose2& gj, double sigma, double r_bar,
         GradVariant variant) { return grad_pair_body(gi, gj, sigma, r_bar, variant); },
      py::arg("gi"), py::arg("gj"), py::arg("sigma") = 1.0, py::arg("r_bar") = 1.0,
      py::arg("variant") = GradVariant::rotated);
  m.def("grad_obs_ext", &grad_obs_ext, py::arg("alpha"), py::arg("sigma") = 1.0);
  m.def(
      "u_combined",
      [](const Pose2& gi, const std::vector<Pose2>& neighbors, double sigma_tilde,
         double r_bar, const std::vector<double>& d_des) {
        return u_combined(gi, neighbors, sigma_tilde, r_bar, d_des);
      },
      py::arg("gi"), py::arg("neighbors"), py::arg("sigma_tilde") = 1.0,
      py::arg("r_bar") = 1.0, py::arg("d_des") = std::vector<double>{});
  m.def(
      "grad_combined_fd",
      [](const Pose2& gi, const std::vector<Pose2>& neighbors, double sigma_tilde,
         double r_bar, const std::vector<double>& d_des, double step) {
        return grad_combined_fd(gi, neighbors, sigma_tilde, r_bar, d_des, step);
      },
      py::arg("gi"), py::arg("neighbors"), py::arg("sigma_tilde") = 1.0,
      py::arg("r_bar") = 1.0, py::arg("d_des") = std::vector<double>{},
      py::arg("step") = 1e-5);

  // dynamics
  py::enum_<DynMode>(m, "DynMode")
      .value("paper_printed", DynMode::paper_printed)
      .value("first_principles", DynMode::first_principles);
  py::enum_<Integrator>(m, "Integrator")
      .value("euler", Integrator::euler)
      .value("rk4", Integrator::rk4);

  py::class_<InteractionGraph>(m, "InteractionGraph")
      .def(py::init<int, const std::vector<std::pair<int, int>>&>(), py::arg("n_agents"),
           py::arg("edges"))
      .def_static("complete", &InteractionGraph::complete)
      .def("size", &InteractionGraph::size)
      .def("connected", &InteractionGraph::connected)
      .def("has_edge", &InteractionGraph::has_edge);

  py::class_<PotentialParams>(m, "PotentialParams")
      .def(py::init<>())
      .def_static("uniform", &PotentialParams::uniform, py::arg("s"),
                  py::arg("sigma_pair"), py::arg("sigma_obs"), py::arg("r_bar") = 1.0)
      .def_static("free_motion", &PotentialParams::free_motion)
      .def_readwrite("sigma_pair", &PotentialParams::sigma_pair)
      .def_readwrite("sigma_obs", &PotentialParams::sigma_obs)
      .def_readwrite("r_bar", &PotentialParams::r_bar)
      .def_readwrite("alpha0", &PotentialParams::alpha0);

  py::class_<AgentState>(m, "AgentState")
      .def(py::init<>())
      .def_readwrite("g", &AgentState::g)
      .def_readwrite("mu", &AgentState::mu)
      .def_readwrite("alpha", &AgentState::alpha);

  py::class_<SystemState>(m, "SystemState")
      .def(py::init<>())
      .def_readwrite("agents", &SystemState::agents)
      .def_readwrite("t", &SystemState::t);

  py::class_<DynOptions>(m, "DynOptions")
      .def(py::init<>())
      .def_readwrite("mode", &DynOptions::mode)
      .def_readwrite("integrator", &DynOptions::integrator)
      .def_readwrite("dt", &DynOptions::dt)
      .def_readwrite("drift_e0", &DynOptions::drift_e0)
      .def_readwrite("record_every", &DynOptions::record_every);

  m.def("pmp_controls", py::overload_cast<const Momentum&>(&pmp_controls));
  m.def("hamiltonian",
        py::overload_cast<const SystemState&, const PotentialParams&,
                          const InteractionGraph&>(&hamiltonian));
  m.def("step", &step);
  m.def("reset_alpha", [](SystemState& s, const Twist& alpha0) {
    reset_alpha(s, alpha0);
    return s;
  });

  py::class_<TrajectorySample>(m, "TrajectorySample")
      .def_readonly("t", &TrajectorySample::t)
      .def_readonly("agents", &TrajectorySample::agents)
      .def_readonly("controls", &TrajectorySample::controls)
      .def_readonly("h", &TrajectorySample::h)
      .def_readonly("min_pair_dist", &TrajectorySample::min_pair_dist)
      .def_readonly("min_obs_clearance", &TrajectorySample::min_obs_clearance);

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("samples", &Trajectory::samples)
      .def_readonly("final_state", &Trajectory::final_state)
      .def_readonly("min_pair_dist", &Trajectory::min_pair_dist)
      .def_readonly("min_obs_clearance", &Trajectory::min_obs_clearance)
      .def_readonly("h_drift_max", &Trajectory::h_drift_max)
      .def_readonly("n_steps_completed", &Trajectory::n_steps_completed)
      .def_readonly("aborted", &Trajectory::aborted)
      .def_readonly("abort_reason", &Trajectory::abort_reason);

  m.def("integrate", &integrate, py::arg("initial"), py::arg("params"), py::arg("graph"),
        py::arg("opts"), py::arg("n_steps"));

  py::class_<Diagnostics>(m, "Diagnostics")
      .def_readonly("h", &Diagnostics::h)
      .def_readonly("min_pair_dist", &Diagnostics::min_pair_dist)
      .def_readonly("min_obs_clearance", &Diagnostics::min_obs_clearance)
      .def_readonly("casimir", &Diagnostics::casimir);
  m.def("diagnostics", &diagnostics);

  // shooting
  py::class_<BoundaryData>(m, "BoundaryData")
      .def(py::init<>())
      .def_readwrite("g0", &BoundaryData::g0)
      .def_readwrite("gT", &BoundaryData::gT)
      .def_readwrite("T", &BoundaryData::T);

  py::class_<ShootOptions>(m, "ShootOptions")
      .def(py::init<>())
      .def_readwrite("tol", &ShootOptions::tol)
      .def_readwrite("max_iter", &ShootOptions::max_iter)
      .def_readwrite("fd_step", &ShootOptions::fd_step)
      .def_readwrite("damping0", &ShootOptions::damping0)
      .def_readwrite("dyn", &ShootOptions::dyn);

  py::enum_<ShootStatus>(m, "ShootStatus")
      .value("converged", ShootStatus::converged)
      .value("max_iterations", ShootStatus::max_iterations)
      .value("infeasible", ShootStatus::infeasible);

  py::class_<ShootResult>(m, "ShootResult")
      .def_readonly("mu0", &ShootResult::mu0)
      .def_readonly("iterations", &ShootResult::iterations)
      .def_readonly("residual_norm", &ShootResult::residual_norm)
      .def_readonly("trajectory", &ShootResult::trajectory)
      .def_readonly("converged", &ShootResult::converged)
      .def_readonly("status", &ShootResult::status);

  m.def("shooting_residual", &shooting_residual);
  m.def("solve_shooting", &solve_shooting_noexcept, py::arg("guess"),
        py::arg("boundary"), py::arg("params"), py::arg("graph"), py::arg("opts"));
  m.def("ivp_run", &ivp_run);

  // scenario + files
  py::class_<Scenario>(m, "Scenario")
      .def_readonly("horizon_T", &Scenario::horizon_T)
      .def_readonly("dt", &Scenario::dt)
      .def_readonly("n_steps", &Scenario::n_steps)
      .def_readwrite("mode", &Scenario::mode)
      .def_readwrite("integrator", &Scenario::integrator)
      .def_property_readonly("n_agents", &Scenario::size)
      .def_property_readonly("params",
                             [](const Scenario& sc) { return sc.params; })
      .def("graph", &Scenario::graph)
      .def("initial_state", [](const Scenario& sc) { return scenario_initial_state(sc); });

  m.def("load_scenario", &load_scenario);
  m.def("parse_scenario_file", &parse_scenario_file);
  m.def("validate_scenario", &validate_scenario);
  m.def(
      "simulate",
      [](const Scenario& sc, const std::string& out_csv) {
        std::ostringstream log;
        const int code = run_simulate(sc, out_csv, log);
        return py::make_tuple(code, log.str());
      },
      py::arg("scenario"), py::arg("out_csv"),
      "run the scenario forward; returns (exit_code, log_text)");
  m.def(
      "shoot",
      [](const Scenario& sc, const std::string& out_csv, double tol, int max_iter) {
        ShootOptions opts;
        opts.tol = tol;
        opts.max_iter = max_iter;
        std::ostringstream log;
        const int code = run_shoot(sc, opts, out_csv, log);
        return py::make_tuple(code, log.str());
      },
      py::arg("scenario"), py::arg("out_csv"), py::arg("tol") = 1e-8,
      py::arg("max_iter") = 50);
  m.def(
      "check",
      [](const Scenario& sc) {
        std::ostringstream log;
        const int code = run_check(sc, log);
        return py::make_tuple(code, log.str());
      },
      py::arg("scenario"));
  m.def(
      "plot_csv",
      [](const std::string& csv_path, const std::string& svg_path, double r_bar) {
        emit_svg_file(read_trajectory_csv_file(csv_path), r_bar, svg_path);
      },
      py::arg("csv_path"), py::arg("svg_path"), py::arg("r_bar") = 1.0);
}
