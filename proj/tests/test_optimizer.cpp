#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "porb/action.hpp"
#include "porb/diagnostics.hpp"
#include "porb/errors.hpp"
#include "porb/optimizer.hpp"
#include "porb/trajectory.hpp"

using namespace porb;

namespace {

OddTrajectory flipped_y(const OddTrajectory& traj) {
  std::vector<Vec2> nodes;
  for (const auto& p : traj.nodes()) nodes.push_back({p.x, -p.y});
  return OddTrajectory(traj.horizon(), nodes);
}

}  // namespace

TEST_CASE("descent from the axis profile converges and never climbs") {
  ProblemSpec spec(1.0);
  auto start = make_uniform(5.0, 80, Initializer::y_power(optimal_beta(1.0)));
  MinimizeOptions opts;
  opts.record_iterations = true;
  auto report = minimize(spec, start, opts);

  CHECK(report.converged);
  CHECK(report.grad_norm <= opts.grad_tol);
  CHECK(report.action_value <= action(spec, start).value);
  CHECK(report.min_center_distance > opts.collision_delta);

  REQUIRE(!report.history.empty());
  CHECK(report.history.front().iter == 0);
  CHECK(report.history.front().step_size == 0.0);
  CHECK(static_cast<int>(report.history.size()) == report.iterations + 1);
  const double eps = std::numeric_limits<double>::epsilon();
  for (std::size_t i = 1; i < report.history.size(); ++i) {
    const double prev = report.history[i - 1].action;
    // Near the floor of representable action values a gradient-shrinking
    // step may round one ulp up; anything beyond a few ulps is a real climb.
    CHECK(report.history[i].action <=
          prev + 4.0 * eps * std::max(1.0, std::fabs(prev)));
    CHECK(report.history[i].min_center_distance > opts.collision_delta);
  }
}

TEST_CASE("converged action respects the growth certificate") {
  ProblemSpec spec(1.0);
  auto start = make_uniform(10.0, 160, Initializer::y_power(0.6));
  auto report = minimize(spec, start);
  REQUIRE(report.converged);
  // Minimizer value is below the value of the admissible test family:
  // c * n^theta with (theta, c) = (0.4, 6.8) at beta = 3/5.
  CHECK(report.action_value <= 6.8 * std::pow(10.0, 0.4));
  CHECK(report.action_value > 0.0);
}

TEST_CASE("descent commutes with the vertical reflection") {
  ProblemSpec spec(1.0);
  auto start = testutil::random_feasible(spec, 3.0, 24, 314);
  auto up = try_minimize(spec, start);
  auto down = try_minimize(spec, flipped_y(start));
  REQUIRE(up.status == MinimizeStatus::Converged);
  REQUIRE(down.status == MinimizeStatus::Converged);

  CHECK(std::fabs(up.report.action_value - down.report.action_value) <=
        1e-9 * std::fabs(up.report.action_value));

  // Stronger than the tolerance above: the iteration is equivariant bit for
  // bit, because negation is exact and every reduction keeps operand order.
  CHECK(up.report.action_value == down.report.action_value);
  CHECK(up.report.iterations == down.report.iterations);
  for (int k = 1; k <= up.report.trajectory.node_count(); ++k) {
    CHECK(up.report.trajectory.node(k).x == down.report.trajectory.node(k).x);
    CHECK(up.report.trajectory.node(k).y ==
          -down.report.trajectory.node(k).y);
  }
}

TEST_CASE("iteration budget is reported and enforced") {
  ProblemSpec spec(1.0);
  auto start = make_uniform(5.0, 40, Initializer::y_power(0.7));
  MinimizeOptions opts;
  opts.max_iters = 1;
  auto outcome = try_minimize(spec, start, opts);
  CHECK(outcome.status == MinimizeStatus::MaxIters);
  CHECK_FALSE(outcome.report.converged);
  CHECK(outcome.report.iterations == 1);
  CHECK_THROWS_AS(minimize(spec, start, opts), MaxItersError);
}

TEST_CASE("tighter tolerance on a finer grid reduces the residual") {
  ProblemSpec spec(1.0);
  auto solve = [&](double tol, int m) {
    MinimizeOptions opts;
    opts.grad_tol = tol;
    auto traj = make_uniform(5.0, m, Initializer::y_power(2.0 / 3.0));
    auto report = minimize(spec, traj, opts);
    return el_residual(spec, report.trajectory);
  };
  const double fine_tight = solve(1e-8, 160);
  const double coarse_tight = solve(1e-8, 80);
  const double coarse_loose = solve(1e-4, 80);
  CHECK(fine_tight < coarse_loose);
  CHECK(fine_tight < coarse_tight);
  CHECK(coarse_tight <= coarse_loose * 1.05);
}

TEST_CASE("the zero trajectory is already stationary") {
  // Equal pulls from the two centers cancel along the whole degenerate path,
  // so the gradient starts below any reasonable tolerance.
  ProblemSpec spec(1.0);
  auto start = make_uniform(5.0, 64, Initializer::zero_offset());
  auto report = minimize(spec, start);
  CHECK(report.converged);
  CHECK(report.iterations == 0);
  CHECK(report.action_value == doctest::Approx(20.0).epsilon(1e-14));
  CHECK(report.terminal_speed == 0.0);
  CHECK(natural_boundary_check(report) == 0.0);
}

TEST_CASE("free endpoint of a converged run comes to rest") {
  ProblemSpec spec(1.0);
  auto start = make_uniform(6.0, 96, Initializer::y_power(2.0 / 3.0));
  auto report = minimize(spec, start);
  REQUIRE(report.converged);
  // The start profile has terminal slope beta * n^(beta-1), far from rest.
  const double beta = 2.0 / 3.0;
  CHECK(start.terminal_speed() ==
        doctest::Approx(beta * std::pow(6.0, beta - 1.0)).epsilon(1e-2));
  CHECK(natural_boundary_check(report) <
        0.05 * start.terminal_speed());
}

TEST_CASE("an infeasible start is rejected up front") {
  ProblemSpec spec(1.0);
  std::vector<Vec2> nodes = {{0.5, 0.0}, {1.0, 1.0}};
  CHECK_THROWS_AS(minimize(spec, OddTrajectory(1.0, nodes)), CollisionError);
}

TEST_CASE("option validation") {
  ProblemSpec spec(1.0);
  auto start = make_uniform(2.0, 16, Initializer::y_power(0.6));
  auto check_throws = [&](auto mutate) {
    MinimizeOptions opts;
    mutate(opts);
    CHECK_THROWS_AS(minimize(spec, start, opts), ParameterRangeError);
  };
  check_throws([](MinimizeOptions& o) { o.grad_tol = -1.0; });
  check_throws([](MinimizeOptions& o) { o.grad_tol = 0.0; });
  check_throws([](MinimizeOptions& o) { o.max_iters = 0; });
  check_throws([](MinimizeOptions& o) { o.armijo_c = 0.6; });
  check_throws([](MinimizeOptions& o) { o.armijo_c = 0.0; });
  check_throws([](MinimizeOptions& o) { o.backtrack_ratio = 1.0; });
  check_throws([](MinimizeOptions& o) { o.memory = -1; });
}

TEST_CASE("plain preconditioned descent works without history") {
  ProblemSpec spec(1.0);
  auto start = make_uniform(4.0, 32, Initializer::y_power(0.7));
  MinimizeOptions opts;
  opts.memory = 0;
  auto report = minimize(spec, start, opts);
  CHECK(report.converged);
  CHECK(report.grad_norm <= opts.grad_tol);
}
