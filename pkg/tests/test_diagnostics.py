"""Failure detectors: divergence time, self-crossing, drift, bundled report."""

import math

import numpy as np
import pytest

from lvdiag import (
    InitialValueProblem,
    MethodKind,
    PopulationState,
    PositivityError,
    Trajectory,
    conservation_drift,
    divergence_time,
    estimate_period,
    failure_report,
    integrate,
    preset,
    sample_series,
    self_intersection,
    taylor_coefficients,
)

CASE_V = preset("case-V")
CASE_I = preset("case-I")

GRID_10 = np.linspace(0.0, 10.0, 2001)

# Divergence times for delta=1 on [0,10] with 2001 samples, pinned.
T_DIV_I_ORDER_10 = 0.145
T_DIV_V_ORDER_10 = 0.86
# Where the default-order phase curve of the unit case first crosses itself.
CROSSING_V_ORDER_5 = (15, 173, 2.738777975372945, 2.317415878824727)


def _ivp(case, t_end):
    return InitialValueProblem(case.params, case.initial, t_end)


def _series_trajectory(case, order, grid=GRID_10):
    ivp = _ivp(case, float(grid[-1]))
    return ivp, sample_series(taylor_coefficients(ivp, order), grid)


def test_divergence_time_none_for_identical_trajectories():
    ivp = _ivp(CASE_V, 10.0)
    ref = integrate(ivp, t_grid=GRID_10)
    assert divergence_time(ref, ref) is None


def test_divergence_time_pinned_values():
    for case, expected in ((CASE_I, T_DIV_I_ORDER_10), (CASE_V, T_DIV_V_ORDER_10)):
        ivp, approx = _series_trajectory(case, 10)
        ref = integrate(ivp, t_grid=GRID_10)
        assert divergence_time(approx, ref) == expected


def test_divergence_time_monotone_in_delta():
    ivp, approx = _series_trajectory(CASE_V, 8)
    ref = integrate(ivp, t_grid=GRID_10)
    times = [divergence_time(approx, ref, delta) for delta in (0.25, 1.0, 4.0)]
    assert None not in times
    assert times[0] <= times[1] <= times[2]


def test_divergence_time_validation():
    ivp = _ivp(CASE_V, 10.0)
    ref = integrate(ivp, t_grid=GRID_10)
    other = integrate(ivp, t_grid=np.linspace(0.0, 10.0, 1001))
    with pytest.raises(ValueError):
        divergence_time(other, ref)
    with pytest.raises(ValueError):
        divergence_time(ref, ref, delta=0.0)


def test_self_intersection_figure_eight():
    crossing = self_intersection(
        Trajectory([0.0, 1.0, 2.0, 3.0], [-1.0, 1.0, 1.0, -1.0], [-1.0, 1.0, -1.0, 1.0])
    )
    assert (crossing.i, crossing.j) == (0, 2)
    assert crossing.point == (0.0, 0.0)


def test_self_intersection_needs_four_samples():
    with pytest.raises(ValueError):
        self_intersection(Trajectory([0.0, 1.0, 2.0], [0.0, 1.0, 2.0], [0.0, 1.0, 0.0]))


def test_self_intersection_convex_loop_is_simple():
    theta = np.linspace(0.0, 2.0 * math.pi, 101)
    circle = Trajectory(np.linspace(0.0, 1.0, 101), np.cos(theta), np.sin(theta))
    assert self_intersection(circle) is None


def test_self_intersection_collinear_backtrack_counts():
    # The last segment retraces part of the first one along y = 0.
    hook = Trajectory(
        [0.0, 1.0, 2.0, 3.0, 4.0],
        [0.0, 2.0, 2.0, 3.0, 1.0],
        [0.0, 0.0, 1.0, 0.0, 0.0],
    )
    crossing = self_intersection(hook)
    assert (crossing.i, crossing.j) == (0, 3)
    assert crossing.point == (1.0, 0.0)


def test_self_intersection_invariant_under_similarity():
    ivp, approx = _series_trajectory(CASE_V, 5)
    before = self_intersection(approx)
    moved = Trajectory(approx.t, 1000.0 * approx.x + 50.0, 1000.0 * approx.y - 20.0)
    after = self_intersection(moved)
    assert (before.i, before.j) == (after.i, after.j)


def test_self_intersection_pinned_crossing():
    _, approx = _series_trajectory(CASE_V, 5)
    crossing = self_intersection(approx)
    i, j, x, y = CROSSING_V_ORDER_5
    assert (crossing.i, crossing.j) == (i, j)
    assert crossing.point[0] == pytest.approx(x, rel=1e-12)
    assert crossing.point[1] == pytest.approx(y, rel=1e-12)


def test_reference_orbit_is_simple_over_one_period():
    ivp = _ivp(CASE_V, 10.0)
    period = estimate_period(ivp)
    window = InitialValueProblem(CASE_V.params, CASE_V.initial, period)
    traj = integrate(window, t_grid=np.linspace(0.0, period, 2001))
    assert self_intersection(traj) is None


def test_conservation_drift_constant_trajectory_is_zero():
    flat = Trajectory([0.0, 1.0, 2.0], [3.0, 3.0, 3.0], [2.0, 2.0, 2.0])
    assert conservation_drift(flat, CASE_V.params) == 0.0


def test_conservation_drift_skips_nonpositive_samples():
    traj = Trajectory([0.0, 1.0, 2.0], [1.0, 0.0, 1.0], [1.0, 1.0, 1.0])
    assert conservation_drift(traj, CASE_V.params) == 0.0


def test_conservation_drift_requires_positive_anchor():
    traj = Trajectory([0.0, 1.0], [0.0, 1.0], [1.0, 1.0])
    with pytest.raises(PositivityError):
        conservation_drift(traj, CASE_V.params)


def test_series_drift_dwarfs_the_reference_drift():
    short = _ivp(CASE_V, 3.0)
    grid = np.linspace(0.0, 3.0, 601)
    ref_drift = conservation_drift(integrate(short, t_grid=grid), CASE_V.params)
    series_drift = conservation_drift(
        sample_series(taylor_coefficients(short, 10), grid), CASE_V.params
    )
    assert series_drift > 1e3 * ref_drift


def test_failure_report_unit_case_order_5():
    report = failure_report(_ivp(CASE_V, 10.0), MethodKind.TAYLOR, 5)
    assert report.method is MethodKind.TAYLOR
    assert report.order == 5
    assert report.divergence_time == 1.0050000000000001
    assert report.max_invariant_drift == pytest.approx(159.46149033337852, rel=1e-9)
    assert report.max_invariant_drift_ref <= 1e-8
    assert (report.self_intersection.i, report.self_intersection.j) == (15, 173)
    assert report.closed_orbit_ref is True
    assert report.closed_orbit is False
    assert report.period_estimate == pytest.approx(7.603020304410167, abs=1e-8)
    assert report.excluded_samples == 1571


def test_failure_report_large_amplitude_case_order_5():
    report = failure_report(_ivp(CASE_I, 10.0), MethodKind.TAYLOR, 5)
    assert report.divergence_time == 0.12
    assert report.period_estimate is None
    assert report.closed_orbit_ref is False
    assert report.closed_orbit is False
    assert report.self_intersection is None
    assert report.excluded_samples == 1986


def test_failure_report_decoupled_high_order_is_clean():
    ivp = InitialValueProblem(preset("decoupled").params, PopulationState(1.0, 1.0), 1.0)
    report = failure_report(ivp, MethodKind.TAYLOR, 30, t_end=1.0)
    assert report.divergence_time is None
    assert report.period_estimate is None
    assert report.self_intersection is None
    assert report.excluded_samples == 0
    assert report.max_invariant_drift <= 1e-12


def test_failure_report_validation():
    ivp = _ivp(CASE_V, 10.0)
    with pytest.raises(ValueError):
        failure_report(ivp, MethodKind.TAYLOR, 5, t_end=-1.0)
    with pytest.raises(ValueError):
        failure_report(ivp, MethodKind.TAYLOR, 5, points=1)
