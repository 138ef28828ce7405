"""Smoke test for the python module: every major operation once, no pytest."""

import math
import os
import tempfile

import parabolic_orbits as po


def expect_raises(exc, fn, *args, **kwargs):
    try:
        fn(*args, **kwargs)
    except exc:
        return
    raise AssertionError(f"{fn} did not raise {exc.__name__}")


def main():
    # Problem setup and validation.
    spec = po.ProblemSpec(1.0)
    assert spec.alpha == 1.0 and spec.mu == 0.5
    assert spec.center1.x == -0.5 and spec.center2.x == 0.5
    expect_raises(po.ParameterRangeError, po.ProblemSpec, 5.0)
    expect_raises(ValueError, po.ProblemSpec, 5.0)  # registered as ValueError

    apex = po.Vec2(0.0, math.sqrt(3.0) / 2.0)
    assert abs(po.potential(spec, apex) - 1.0) < 1e-14
    assert po.kinetic_bound_margin(spec, apex) > 0.0
    assert abs(po.sitnikov_rhs(alpha=1.0, r=0.0, z=2.0) + 0.25) < 1e-15
    assert po.optimal_beta(1.0) == 2.0 / 3.0
    assert po.is_odd_rational(3.0 / 5.0) and not po.is_odd_rational(2.0 / 3.0)
    k = po.bound_constants(1.0, 0.6)
    assert abs(k.theta - 0.4) < 1e-15 and abs(k.c - 6.8) < 1e-12

    # Action of the resting path: pure potential, 2 per unit time.
    zero = po.make_uniform(5.0, 80, po.Initializer.zero_offset())
    ev = po.action(spec, zero)
    assert ev.kinetic == 0.0 and abs(ev.value - 20.0) < 1e-12
    assert len(ev.gradient) == 80

    # A node at a center is a collision, reported through the exception tree.
    bad = po.OddTrajectory(1.0, [po.Vec2(0.25, 0.1), po.Vec2(0.5, 0.0)])
    expect_raises(po.CollisionError, po.action, spec, bad)
    expect_raises(po.SolverError, po.action, spec, bad)

    # Minimize one small problem and inspect the report. The terminal
    # difference quotient scales with the step, so the grid is chosen to
    # put it under the 1e-2 sanity cap.
    start = po.make_uniform(2.0, 64, po.Initializer.y_power(2.0 / 3.0))
    opts = po.MinimizeOptions()
    opts.record_iterations = True
    report = po.minimize(spec, start, opts)
    assert report.converged and report.grad_norm <= opts.grad_tol
    assert report.action_value < po.action(spec, start).value
    assert po.natural_boundary_check(report) < 1e-2
    assert len(report.history) == report.iterations + 1

    stats = po.energy_stats(spec, report.trajectory)
    assert stats.mean < 0.0
    assert stats.spread <= 1e-3 * (1.0 + abs(stats.mean))
    assert po.el_residual(spec, report.trajectory) < 1.0

    # Bit-exact trajectory round trip through CSV.
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "orbit.csv")
        po.write_trajectory_csv(report.trajectory, path)
        back = po.read_trajectory_csv(path)
        assert back.node_count == report.trajectory.node_count
        for i in range(1, back.node_count + 1):
            assert back.node(i).x == report.trajectory.node(i).x
            assert back.node(i).y == report.trajectory.node(i).y

    # Continuation sweep over two horizons, certified margins included.
    cfg = po.SweepConfig(alpha=1.0, horizons=[2.0, 4.0], nodes_per_unit=12)
    assert po.SweepConfig().nodes_per_unit == 16
    result = po.run_sweep(cfg)
    assert result.all_converged
    rows = result.report.rows
    assert len(rows) == 2 and rows[0].n == 2.0
    assert all(r.h_n < 0.0 and r.a_n > 0.0 for r in rows)
    assert len(result.window_deltas) == 1
    assert result.window_halfwidth == 2.0

    deltas = po.window_convergence(result.trajectories, -2.0, 2.0)
    assert len(deltas) == 1 and deltas[0] >= 0.0

    # Independent integration conserves energy on an escaping orbit.
    path = po.integrate_ode(spec, po.Vec2(0.0, 1.0), po.Vec2(0.0, 1.4),
                            2.0, 1e-3)
    assert path.energy_drift <= 1e-10
    assert len(path.t) == len(path.q) == len(path.v)

    slope = po.fit_growth_exponent(
        [10.0, 20.0, 40.0], [3.0 * n ** 0.42 for n in [10.0, 20.0, 40.0]])
    assert abs(slope - 0.42) < 1e-10

    print("ok")


if __name__ == "__main__":
    main()
