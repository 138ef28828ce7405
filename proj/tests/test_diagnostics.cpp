#include <cmath>
#include <cstdlib>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "porb/action.hpp"
#include "porb/continuation.hpp"
#include "porb/diagnostics.hpp"
#include "porb/errors.hpp"
#include "porb/optimizer.hpp"
#include "porb/trajectory.hpp"

using namespace porb;

TEST_CASE("energy of the resting path is exactly minus the central pull") {
  ProblemSpec spec(1.0);
  auto traj = make_uniform(5.0, 80, Initializer::zero_offset());
  auto profile = energy_profile(spec, traj);
  REQUIRE(profile.size() == 80u);
  // v = 0 and U(0) = 2 for alpha = 1: h = -2 at every midpoint, exactly.
  for (const auto& s : profile) CHECK(s.h == -2.0);

  auto stats = energy_stats(spec, traj, 0.8);
  CHECK(stats.mean == -2.0);
  CHECK(stats.spread == 0.0);
  CHECK(stats.count == 64);

  CHECK(energy_stats(spec, traj, 1.0).count == 80);
  CHECK_THROWS_AS(energy_stats(spec, traj, 0.0), ParameterRangeError);
  CHECK_THROWS_AS(energy_stats(spec, traj, 1.2), ParameterRangeError);
  CHECK_THROWS_AS(energy_stats(spec, traj, 1e-9), WindowError);
}

TEST_CASE("energy spread exposes a non-stationary profile") {
  ProblemSpec spec(1.0);
  auto traj = test_trajectory_y_axis(10.0, 0.6, 160);
  auto stats = energy_stats(spec, traj);
  CHECK(stats.spread > 0.1 * (1.0 + std::fabs(stats.mean)));
}

TEST_CASE("equation residual vanishes on the resting path only") {
  ProblemSpec spec(1.0);
  auto zero = make_uniform(5.0, 80, Initializer::zero_offset());
  CHECK(el_residual(spec, zero) == 0.0);

  auto rough = testutil::random_feasible(spec, 3.0, 24, 99);
  CHECK(el_residual(spec, rough) > 1e-2);

  auto tiny = make_uniform(1.0, 2, Initializer::y_power(0.6));
  CHECK_THROWS_AS(el_residual(spec, tiny), ParameterRangeError);
}

TEST_CASE("pointwise kinetic bound holds with margin") {
  ProblemSpec spec(1.0);
  // At (0, sqrt(3)/2) both centers sit at distance 1: U = 1, and the bound
  // evaluates to (2*3/4 + 1/2)^(-1/2) = 1/sqrt(2).
  const Vec2 apex{0.0, std::sqrt(3.0) / 2.0};
  CHECK(kinetic_bound_margin(spec, apex) ==
        doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)).epsilon(1e-12));

  std::mt19937_64 gen(123);
  for (double alpha : {0.5, 1.0, 1.5}) {
    ProblemSpec s(alpha);
    for (int i = 0; i < 1000; ++i) {
      const Vec2 p = testutil::random_feasible_point(s, gen, 5.0, 1e-4);
      CHECK(kinetic_bound_margin(s, p) >= 0.0);
    }
  }

  auto traj = make_uniform(2.0, 16, Initializer::y_power(0.6));
  auto margins = zero_energy_kinetic_bound(spec, traj);
  REQUIRE(margins.size() == 17u);
  // Anchor margin: U(0) = 2 against bound (1/2)^(-1/2).
  CHECK(margins[0] == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-12));
  for (double m : margins) CHECK(m >= 0.0);
}

TEST_CASE("certificates evaluate their margins row by row") {
  auto k = bound_constants(1.0, 0.6);  // theta = 0.4, c = 6.8

  SweepRow row;
  row.n = 10.0;
  row.a_n = 0.5 * k.c * std::pow(10.0, k.theta);
  row.h_n = -0.5;
  row.sup_norm = 2.0;

  auto act = certify_action_bound({row}, k);
  REQUIRE(act.size() == 1u);
  CHECK(act[0].n == 10.0);
  CHECK(act[0].threshold ==
        doctest::Approx(k.c * std::pow(10.0, k.theta)).epsilon(1e-15));
  CHECK(act[0].margin == doctest::Approx(row.a_n).epsilon(1e-12));
  CHECK_FALSE(act[0].vacuous);
  CHECK(certify_action_bound({}, k).empty());

  auto en = certify_energy_bound({row}, k);
  REQUIRE(en.size() == 1u);
  const double eth = 0.5 * k.c * std::pow(10.0, k.theta - 1.0);
  CHECK(en[0].threshold == doctest::Approx(eth).epsilon(1e-14));
  CHECK(en[0].margin == doctest::Approx(eth + 0.5).epsilon(1e-14));

  SweepRow small = row;
  small.n = 1.0;
  auto sup = certify_supnorm_growth({small, row}, k, 1.0);
  REQUIRE(sup.size() == 2u);
  // At n = 1 the floor (2/c)^2 / 2 - 5/8 is negative: nothing to certify.
  CHECK(sup[0].vacuous);
  CHECK_FALSE(sup[1].vacuous);
  const double floor10 =
      0.5 * (std::pow(2.0 * std::pow(10.0, 1.0 - k.theta) / k.c, 2.0) - 1.25);
  CHECK(sup[1].threshold == doctest::Approx(floor10).epsilon(1e-12));
  CHECK(sup[1].margin == doctest::Approx(4.0 - floor10).epsilon(1e-12));
}

TEST_CASE("trend helper tolerates the allowed slack only") {
  CHECK(nondecreasing_within({1.0, 2.0, 3.0}, 0.0));
  CHECK(nondecreasing_within({1.0, 0.995, 2.0}, 0.01));
  CHECK_FALSE(nondecreasing_within({1.0, 0.9, 2.0}, 0.01));
  CHECK(nondecreasing_within({}, 0.0));
  CHECK(nondecreasing_within({5.0}, 0.0));
}

TEST_CASE("window distance between trajectory families") {
  ProblemSpec spec(1.0);
  auto a = make_uniform(10.0, 160, Initializer::y_power(0.6), spec);
  auto b = make_uniform(12.0, 192, Initializer::y_power(0.6), spec);

  CHECK(window_convergence({a, a}, -5.0, 5.0) == std::vector<double>{0.0});

  std::vector<Vec2> flipped;
  for (const auto& p : a.nodes()) flipped.push_back({p.x, -p.y});
  OddTrajectory c(a.horizon(), flipped);
  auto deltas = window_convergence({a, c}, -5.0, 5.0);
  REQUIRE(deltas.size() == 1u);
  CHECK(deltas[0] > 1.0);

  auto two = window_convergence({a, b}, -5.0, 5.0);
  CHECK(two.size() == 1u);

  CHECK_THROWS_AS(window_convergence({a, b}, -15.0, 15.0), WindowError);
  CHECK_THROWS_AS(window_convergence({a, b}, -5.0, 5.0, 0),
                  ParameterRangeError);
  CHECK_THROWS_AS(window_convergence({a, b}, 5.0, -5.0),
                  ParameterRangeError);
  CHECK(window_convergence({a}, -5.0, 5.0).empty());
}

TEST_CASE("time stepping conserves energy away from the centers") {
  ProblemSpec spec(1.0);

  auto resting = integrate_ode(spec, {0.0, 0.0}, {0.0, 0.0}, 1.0, 1e-2);
  CHECK(resting.energy_drift == 0.0);
  CHECK(resting.q.back().x == 0.0);
  CHECK(resting.q.back().y == 0.0);

  // Vertical launch fast enough to escape: the path stays clear of the
  // centers, so fourth-order steps hold the energy to near roundoff.
  auto path = integrate_ode(spec, {0.0, 1.0}, {0.0, 1.4}, 2.0, 1e-3);
  REQUIRE(path.t.size() == 2001u);
  CHECK(path.t.front() == 0.0);
  CHECK(path.t.back() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(path.energy_drift <= 1e-10);

  CHECK_THROWS_AS(integrate_ode(spec, {0.0, 1.0}, {0.0, 0.0}, 1.0, 0.0),
                  ParameterRangeError);
  CHECK_THROWS_AS(integrate_ode(spec, {0.5, 0.0}, {0.0, 0.0}, 1.0, 1e-3),
                  CollisionError);
}

TEST_CASE("log-log slope recovery") {
  std::vector<double> n = {10.0, 20.0, 40.0, 80.0};
  std::vector<double> v;
  for (double x : n) v.push_back(3.0 * std::pow(x, 0.42));
  CHECK(fit_growth_exponent(n, v) == doctest::Approx(0.42).epsilon(1e-10));

  std::vector<double> flat = {7.0, 7.0, 7.0, 7.0};
  CHECK(std::fabs(fit_growth_exponent(n, flat)) <= 1e-12);

  CHECK_THROWS_AS(fit_growth_exponent({10.0, 20.0}, {1.0, 2.0}),
                  InsufficientDataError);
  CHECK_THROWS_AS(fit_growth_exponent(n, {1.0, 2.0, -3.0, 4.0}),
                  InsufficientDataError);
  CHECK_THROWS_AS(fit_growth_exponent({2.0, 2.0, 2.0}, {1.0, 1.0, 1.0}),
                  InsufficientDataError);

  std::vector<SweepRow> rows(3);
  for (int i = 0; i < 3; ++i) {
    rows[i].n = n[i];
    rows[i].a_n = v[i];
  }
  CHECK(fit_growth_exponent(rows) == doctest::Approx(0.42).epsilon(1e-10));
}

TEST_CASE("small continuation sweep end to end") {
  SweepConfig config;
  config.alpha = 1.0;
  config.horizons = {2.0, 4.0, 6.0};
  config.nodes_per_unit = 16;
  config.threads = 2;
  auto result = run_sweep(config);

  CHECK(result.all_converged);
  CHECK(result.start_beta == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  // Requested window [-5, 5] does not fit in [-2, 2]; it is clamped.
  CHECK(result.window_halfwidth == 2.0);
  REQUIRE(result.report.rows.size() == 3u);
  REQUIRE(result.trajectories.size() == 3u);
  CHECK(result.window_deltas.size() == 2u);

  double prev_n = 0.0;
  for (const auto& row : result.report.rows) {
    CHECK(row.n > prev_n);
    prev_n = row.n;
    CHECK(row.converged);
    CHECK(row.a_n > 0.0);
    CHECK(row.h_n < 0.0);
    CHECK(row.action_margin > 0.0);
    CHECK(row.energy_margin > 0.0);
    CHECK(row.min_speed > 0.0);
    CHECK(row.node_count == static_cast<int>(16 * row.n));
  }
  CHECK(std::isfinite(result.report.fitted_theta));
  CHECK(result.report.alpha == 1.0);
  CHECK(result.report.theta == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("sweep validation and thread selection") {
  SweepConfig bad;
  bad.horizons = {};
  CHECK_THROWS_AS(run_sweep(bad), ParameterRangeError);
  bad.horizons = {-1.0, 2.0};
  CHECK_THROWS_AS(run_sweep(bad), ParameterRangeError);
  bad.horizons = {2.0, 4.0};
  bad.nodes_per_unit = 0;
  CHECK_THROWS_AS(run_sweep(bad), ParameterRangeError);

  CHECK(sweep_thread_count(5) == 5);
  setenv("PARABOLIC_ORBITS_THREADS", "3", 1);
  CHECK(sweep_thread_count(0) == 3);
  unsetenv("PARABOLIC_ORBITS_THREADS");
  CHECK(sweep_thread_count(0) >= 1);
}
