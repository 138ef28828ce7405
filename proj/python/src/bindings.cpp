#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "porb/action.hpp"
#include "porb/continuation.hpp"
#include "porb/diagnostics.hpp"
#include "porb/errors.hpp"
#include "porb/optimizer.hpp"
#include "porb/problem.hpp"
#include "porb/trajectory.hpp"

namespace py = pybind11;
using namespace porb;

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Direct-method solver for planar two-center escape orbits: odd "
      "polygonal trajectories, exact discrete action gradients, descent, "
      "and certified growth/energy/residual diagnostics.";

  auto base = py::register_exception<Error>(m, "SolverError");
  py::register_exception<CollisionError>(m, "CollisionError", base.ptr());
  py::register_exception<DegenerateError>(m, "DegenerateError", base.ptr());
  py::register_exception<SymmetryError>(m, "SymmetryError", base.ptr());
  py::register_exception<InfeasibleInitError>(m, "InfeasibleInitError",
                                              base.ptr());
  py::register_exception<OutOfRangeError>(m, "OutOfRangeError", base.ptr());
  py::register_exception<StalledError>(m, "StalledError", base.ptr());
  py::register_exception<CollisionTrapError>(m, "CollisionTrapError",
                                             base.ptr());
  py::register_exception<MaxItersError>(m, "MaxItersError", base.ptr());
  py::register_exception<WindowError>(m, "WindowError", base.ptr());
  py::register_exception<InsufficientDataError>(m, "InsufficientDataError",
                                                base.ptr());
  py::register_exception<FormatError>(m, "FormatError", base.ptr());
  py::register_exception<ParameterRangeError>(m, "ParameterRangeError",
                                              PyExc_ValueError);

  py::class_<Vec2>(m, "Vec2")
      .def(py::init<double, double>(), py::arg("x"), py::arg("y"))
      .def(py::init([](py::tuple t) {
        if (t.size() != 2) throw py::value_error("expected a 2-tuple");
        return Vec2{t[0].cast<double>(), t[1].cast<double>()};
      }))
      .def_readwrite("x", &Vec2::x)
      .def_readwrite("y", &Vec2::y)
      .def("__repr__", [](const Vec2& v) {
        return "Vec2(" + std::to_string(v.x) + ", " + std::to_string(v.y) +
               ")";
      });
  py::implicitly_convertible<py::tuple, Vec2>();

  py::class_<ProblemSpec>(m, "ProblemSpec")
      .def(py::init<double, double>(), py::arg("alpha"), py::arg("mu") = 0.5)
      .def_readonly("alpha", &ProblemSpec::alpha)
      .def_readonly("mu", &ProblemSpec::mu)
      .def_readonly("center1", &ProblemSpec::center1)
      .def_readonly("center2", &ProblemSpec::center2)
      .def("symmetric", &ProblemSpec::symmetric);

  m.def("potential", &potential, py::arg("spec"), py::arg("point"),
        py::arg("delta") = kDefaultCollisionDelta);
  m.def("potential_gradient", &potential_gradient, py::arg("spec"),
        py::arg("point"), py::arg("delta") = kDefaultCollisionDelta);
  m.def("energy", &energy, py::arg("spec"), py::arg("point"),
        py::arg("velocity"), py::arg("delta") = kDefaultCollisionDelta);
  m.def("sitnikov_rhs", &sitnikov_rhs, py::arg("alpha"), py::arg("r"),
        py::arg("z"));
  m.def(
      "min_center_distance",
      [](const ProblemSpec& spec, Vec2 p) {
        return min_center_distance(spec, p);
      },
      py::arg("spec"), py::arg("point"));

  py::class_<Initializer>(m, "Initializer")
      .def_static("zero_offset", &Initializer::zero_offset)
      .def_static("y_power", &Initializer::y_power, py::arg("beta"))
      .def_static("linear_ray", &Initializer::linear_ray, py::arg("velocity"));

  py::class_<OddTrajectory>(m, "OddTrajectory")
      .def(py::init<double, std::vector<Vec2>>(), py::arg("horizon"),
           py::arg("nodes"))
      .def_property_readonly("horizon", &OddTrajectory::horizon)
      .def_property_readonly("node_count", &OddTrajectory::node_count)
      .def_property_readonly("step", &OddTrajectory::step)
      .def_property_readonly("nodes", &OddTrajectory::nodes)
      .def("node", &OddTrajectory::node, py::arg("k"))
      .def("value_at", &OddTrajectory::value_at, py::arg("t"))
      .def("sobolev_norm", &OddTrajectory::sobolev_norm)
      .def("sup_norm", &OddTrajectory::sup_norm)
      .def("min_node_speed", &OddTrajectory::min_node_speed)
      .def("min_node_speed_segment", &OddTrajectory::min_node_speed_segment)
      .def("terminal_speed", &OddTrajectory::terminal_speed)
      .def("refine", &OddTrajectory::refine, py::arg("factor"));

  m.def("make_uniform", &make_uniform, py::arg("horizon"),
        py::arg("node_count"), py::arg("init"),
        py::arg("spec") = ProblemSpec(1.0, 0.5),
        py::arg("delta") = kDefaultCollisionDelta);
  m.def(
      "trajectory_min_center_distance",
      [](const ProblemSpec& spec, const OddTrajectory& traj) {
        return min_center_distance(spec, traj);
      },
      py::arg("spec"), py::arg("trajectory"));
  m.def("write_trajectory_csv", &write_trajectory_csv, py::arg("trajectory"),
        py::arg("path"));
  m.def("read_trajectory_csv", &read_trajectory_csv, py::arg("path"),
        py::arg("symmetry_tol") = 1e-9);

  py::class_<ActionEvaluation>(m, "ActionEvaluation")
      .def_readonly("value", &ActionEvaluation::value)
      .def_readonly("kinetic", &ActionEvaluation::kinetic)
      .def_readonly("potential", &ActionEvaluation::potential)
      .def_readonly("gradient", &ActionEvaluation::gradient)
      .def_readonly("min_center_distance",
                    &ActionEvaluation::min_center_distance);
  m.def("action", &action, py::arg("spec"), py::arg("trajectory"),
        py::arg("delta") = kDefaultCollisionDelta);

  py::class_<BoundConstants>(m, "BoundConstants")
      .def_readonly("beta", &BoundConstants::beta)
      .def_readonly("theta", &BoundConstants::theta)
      .def_readonly("c", &BoundConstants::c);
  m.def("test_trajectory_y_axis", &test_trajectory_y_axis, py::arg("horizon"),
        py::arg("beta"), py::arg("node_count"));
  m.def("bound_constants", &bound_constants, py::arg("alpha"),
        py::arg("beta"));
  m.def("optimal_beta", &optimal_beta, py::arg("alpha"));
  m.def("is_odd_rational", &is_odd_rational, py::arg("beta"),
        py::arg("max_den") = 99);

  py::class_<MinimizeOptions>(m, "MinimizeOptions")
      .def(py::init<>())
      .def_readwrite("grad_tol", &MinimizeOptions::grad_tol)
      .def_readwrite("max_iters", &MinimizeOptions::max_iters)
      .def_readwrite("armijo_c", &MinimizeOptions::armijo_c)
      .def_readwrite("backtrack_ratio", &MinimizeOptions::backtrack_ratio)
      .def_readwrite("memory", &MinimizeOptions::memory)
      .def_readwrite("collision_delta", &MinimizeOptions::collision_delta)
      .def_readwrite("record_iterations", &MinimizeOptions::record_iterations);

  py::class_<IterationRecord>(m, "IterationRecord")
      .def_readonly("iter", &IterationRecord::iter)
      .def_readonly("action", &IterationRecord::action)
      .def_readonly("grad_norm", &IterationRecord::grad_norm)
      .def_readonly("step_size", &IterationRecord::step_size)
      .def_readonly("min_center_distance",
                    &IterationRecord::min_center_distance);

  py::class_<MinimizeReport>(m, "MinimizeReport")
      .def_readonly("trajectory", &MinimizeReport::trajectory)
      .def_readonly("action_value", &MinimizeReport::action_value)
      .def_readonly("grad_norm", &MinimizeReport::grad_norm)
      .def_readonly("iterations", &MinimizeReport::iterations)
      .def_readonly("converged", &MinimizeReport::converged)
      .def_readonly("min_center_distance",
                    &MinimizeReport::min_center_distance)
      .def_readonly("terminal_speed", &MinimizeReport::terminal_speed)
      .def_readonly("energy_mean", &MinimizeReport::energy_mean)
      .def_readonly("energy_spread", &MinimizeReport::energy_spread)
      .def_readonly("history", &MinimizeReport::history);

  py::enum_<MinimizeStatus>(m, "MinimizeStatus")
      .value("Converged", MinimizeStatus::Converged)
      .value("MaxIters", MinimizeStatus::MaxIters)
      .value("Stalled", MinimizeStatus::Stalled)
      .value("CollisionTrap", MinimizeStatus::CollisionTrap);

  py::class_<MinimizeOutcome>(m, "MinimizeOutcome")
      .def_readonly("status", &MinimizeOutcome::status)
      .def_readonly("report", &MinimizeOutcome::report);

  m.def("try_minimize", &try_minimize, py::arg("spec"), py::arg("start"),
        py::arg("options") = MinimizeOptions{});
  m.def("minimize", &minimize, py::arg("spec"), py::arg("start"),
        py::arg("options") = MinimizeOptions{});
  m.def("natural_boundary_check", &natural_boundary_check, py::arg("report"));

  py::class_<EnergySample>(m, "EnergySample")
      .def_readonly("t", &EnergySample::t)
      .def_readonly("h", &EnergySample::h);
  py::class_<EnergyStats>(m, "EnergyStats")
      .def_readonly("mean", &EnergyStats::mean)
      .def_readonly("spread", &EnergyStats::spread)
      .def_readonly("count", &EnergyStats::count);
  m.def("energy_profile", &energy_profile, py::arg("spec"),
        py::arg("trajectory"), py::arg("delta") = kDefaultCollisionDelta);
  m.def("energy_stats", &energy_stats, py::arg("spec"), py::arg("trajectory"),
        py::arg("window_fraction") = 0.8,
        py::arg("delta") = kDefaultCollisionDelta);
  m.def("el_residual", &el_residual, py::arg("spec"), py::arg("trajectory"),
        py::arg("delta") = kDefaultCollisionDelta);
  m.def("kinetic_bound_margin", &kinetic_bound_margin, py::arg("spec"),
        py::arg("point"), py::arg("delta") = kDefaultCollisionDelta);
  m.def("zero_energy_kinetic_bound", &zero_energy_kinetic_bound,
        py::arg("spec"), py::arg("trajectory"),
        py::arg("delta") = kDefaultCollisionDelta);

  py::class_<SweepRow>(m, "SweepRow")
      .def(py::init<>())
      .def_readwrite("n", &SweepRow::n)
      .def_readwrite("node_count", &SweepRow::node_count)
      .def_readwrite("a_n", &SweepRow::a_n)
      .def_readwrite("h_n", &SweepRow::h_n)
      .def_readwrite("energy_spread", &SweepRow::energy_spread)
      .def_readwrite("sup_norm", &SweepRow::sup_norm)
      .def_readwrite("min_speed", &SweepRow::min_speed)
      .def_readwrite("el_residual", &SweepRow::el_residual)
      .def_readwrite("terminal_speed", &SweepRow::terminal_speed)
      .def_readwrite("converged", &SweepRow::converged)
      .def_readwrite("iterations", &SweepRow::iterations)
      .def_readwrite("action_margin", &SweepRow::action_margin)
      .def_readwrite("energy_margin", &SweepRow::energy_margin)
      .def_readwrite("supnorm_margin", &SweepRow::supnorm_margin)
      .def_readwrite("supnorm_vacuous", &SweepRow::supnorm_vacuous);

  py::class_<BoundMargin>(m, "BoundMargin")
      .def_readonly("n", &BoundMargin::n)
      .def_readonly("threshold", &BoundMargin::threshold)
      .def_readonly("margin", &BoundMargin::margin)
      .def_readonly("vacuous", &BoundMargin::vacuous);

  m.def("certify_action_bound", &certify_action_bound, py::arg("rows"),
        py::arg("constants"));
  m.def("certify_energy_bound", &certify_energy_bound, py::arg("rows"),
        py::arg("constants"));
  m.def("certify_supnorm_growth", &certify_supnorm_growth, py::arg("rows"),
        py::arg("constants"), py::arg("alpha"));
  m.def("nondecreasing_within", &nondecreasing_within, py::arg("values"),
        py::arg("slack"));
  m.def("window_convergence", &window_convergence, py::arg("trajectories"),
        py::arg("a"), py::arg("b"), py::arg("samples_per_unit") = 64);

  py::class_<OdePath>(m, "OdePath")
      .def_readonly("t", &OdePath::t)
      .def_readonly("q", &OdePath::q)
      .def_readonly("v", &OdePath::v)
      .def_readonly("energy_drift", &OdePath::energy_drift);
  m.def("integrate_ode", &integrate_ode, py::arg("spec"), py::arg("q0"),
        py::arg("v0"), py::arg("total"), py::arg("dt"),
        py::arg("delta") = kDefaultCollisionDelta);

  m.def("fit_growth_exponent",
        py::overload_cast<const std::vector<double>&,
                          const std::vector<double>&>(&fit_growth_exponent),
        py::arg("horizons"), py::arg("values"));

  py::class_<ContinuationReport>(m, "ContinuationReport")
      .def_readonly("alpha", &ContinuationReport::alpha)
      .def_readonly("beta", &ContinuationReport::beta)
      .def_readonly("theta", &ContinuationReport::theta)
      .def_readonly("c", &ContinuationReport::c)
      .def_readonly("rows", &ContinuationReport::rows)
      .def_readonly("fitted_theta", &ContinuationReport::fitted_theta);

  const SweepConfig sweep_defaults;
  py::class_<SweepConfig>(m, "SweepConfig")
      .def(py::init([](double alpha, double mu, std::vector<double> horizons,
                       int nodes_per_unit, double beta,
                       const MinimizeOptions& options,
                       double window_halfwidth, int threads) {
             SweepConfig c;
             c.alpha = alpha;
             c.mu = mu;
             c.horizons = std::move(horizons);
             c.nodes_per_unit = nodes_per_unit;
             c.beta = beta;
             c.options = options;
             c.window_halfwidth = window_halfwidth;
             c.threads = threads;
             return c;
           }),
           py::arg("alpha") = sweep_defaults.alpha,
           py::arg("mu") = sweep_defaults.mu,
           py::arg("horizons") = sweep_defaults.horizons,
           py::arg("nodes_per_unit") = sweep_defaults.nodes_per_unit,
           py::arg("beta") = sweep_defaults.beta,
           py::arg("options") = sweep_defaults.options,
           py::arg("window_halfwidth") = sweep_defaults.window_halfwidth,
           py::arg("threads") = sweep_defaults.threads)
      .def_readwrite("alpha", &SweepConfig::alpha)
      .def_readwrite("mu", &SweepConfig::mu)
      .def_readwrite("horizons", &SweepConfig::horizons)
      .def_readwrite("nodes_per_unit", &SweepConfig::nodes_per_unit)
      .def_readwrite("beta", &SweepConfig::beta)
      .def_readwrite("options", &SweepConfig::options)
      .def_readwrite("window_halfwidth", &SweepConfig::window_halfwidth)
      .def_readwrite("threads", &SweepConfig::threads);

  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("report", &SweepResult::report)
      .def_readonly("trajectories", &SweepResult::trajectories)
      .def_readonly("window_deltas", &SweepResult::window_deltas)
      .def_readonly("window_halfwidth", &SweepResult::window_halfwidth)
      .def_readonly("start_beta", &SweepResult::start_beta)
      .def_readonly("all_converged", &SweepResult::all_converged);

  m.def("run_sweep", &run_sweep, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
}
