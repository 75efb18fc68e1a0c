"""Adaptive reference integration of the prey-predator equations.

The stepper is the explicit embedded Runge-Kutta pair of Dormand & Prince
(seven stages, FSAL): the fifth-order result propagates the state and the
difference against the embedded fourth-order result drives a
proportional-integral step controller.  Each accepted step also carries the
quartic interpolation polynomial of Shampine, so trajectories can be sampled
on arbitrary grids without constraining the step sequence.

Interior trajectories are advanced in logarithmic population coordinates:
with both populations strictly positive the transform is smooth, it makes
positivity structural, and relative error control keeps the huge dynamic
range of large-amplitude orbits resolved (populations dive far below any
absolute tolerance while their logarithms stay moderate).  States starting
on a coordinate axis stay in the original variables, as the axes are
invariant lines of the flow.

No structural correction (e.g. projection onto the conserved level set) is
applied; whatever drift the scheme produces is left visible to diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import (
    DivergenceError,
    PeriodNotFoundError,
    StepSizeUnderflowError,
)
from .model import _field
from .series import InitialValueProblem, _validated_grid
from .trajectory import Trajectory

# Dormand-Prince 5(4) tableau.
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = (
    np.array([], dtype=float),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
)
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84])
# Fifth-order minus embedded fourth-order weights (error estimate).
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])
# Shampine's fourth-order interpolant: columns are the theta^1..theta^4 weights.
_P = np.array(
    [
        [1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
        [0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
        [0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
        [0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
        [0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
    ]
)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
# PI controller exponents for a fourth-order error estimate.
_ALPHA = 0.7 / 5.0
_BETA = 0.4 / 5.0
# Steps below this fraction of the horizon indicate stiffness or blow-up.
_MIN_STEP_FRACTION = 1e-14
_MAX_STEPS = 1_000_000

# Horizon of the return search, in units of the linearised angular period.
_PERIOD_SEARCH_FACTOR = 100.0
_PERIOD_BISECT_TOL = 1e-10


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = math.inf
    initial_step: float | None = None

    def __post_init__(self):
        if not (0.0 < self.rel_tol < 1.0) or not (0.0 < self.abs_tol < 1.0):
            raise ValueError(
                f"tolerances must lie in (0, 1), got rel_tol={self.rel_tol}, abs_tol={self.abs_tol}"
            )
        if not self.max_step > 0.0:
            raise ValueError(f"max_step must be positive, got {self.max_step}")
        if self.initial_step is not None and not 0.0 < self.initial_step < math.inf:
            raise ValueError(f"initial_step must be positive and finite, got {self.initial_step}")


@dataclass(frozen=True)
class _Step:
    """One accepted step with its dense-output weights q (2x4)."""

    t0: float
    t1: float
    y0: np.ndarray
    y1: np.ndarray
    q: np.ndarray

    def interpolate(self, t):
        theta = (t - self.t0) / (self.t1 - self.t0)
        powers = np.array([theta, theta**2, theta**3, theta**4])
        return self.y0 + self.q @ powers


def _exp(z):
    try:
        return math.exp(z)
    except OverflowError:
        return math.inf


def _make_flow(p, x0, y0):
    """Pick integration coordinates for the initial state.

    Returns the transformed initial vector, the right-hand side in those
    coordinates, and the map back to populations.  Interior states run in
    log populations; a state on an axis stays there, so it keeps the
    original coordinates.
    """
    if x0 > 0.0 and y0 > 0.0:

        def rhs(w):
            return np.array([p.a - p.b * _exp(w[1]), -p.c + p.d * _exp(w[0])])

        def to_phys(w):
            return np.array([_exp(w[0]), _exp(w[1])])

        return np.array([math.log(x0), math.log(y0)]), rhs, to_phys

    def rhs(w):
        fx, fy = _field(p, w[0], w[1])
        return np.array([fx, fy])

    return np.array([x0, y0], dtype=float), rhs, lambda w: w


def _error_norm(err, scale):
    return math.sqrt(float(np.mean((err / scale) ** 2)))


def _initial_step(rhs, y0, f0, horizon, cfg):
    """Curvature-based starting step (two trial evaluations)."""
    scale = cfg.abs_tol + cfg.rel_tol * np.abs(y0)
    d0 = math.sqrt(float(np.mean((y0 / scale) ** 2)))
    d1 = math.sqrt(float(np.mean((f0 / scale) ** 2)))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, horizon)
    f1 = rhs(y0 + h0 * f0)
    d2 = math.sqrt(float(np.mean(((f1 - f0) / scale) ** 2))) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100.0 * h0, h1, horizon, cfg.max_step)


def _adaptive_steps(rhs, y0, horizon, cfg):
    """Yield accepted steps from 0 to the horizon."""
    y = np.asarray(y0, dtype=float)
    f = rhs(y)
    if not np.all(np.isfinite(f)):
        raise DivergenceError(f"vector field not finite at the initial state {y!r}")
    h = cfg.initial_step if cfg.initial_step is not None else _initial_step(rhs, y, f, horizon, cfg)
    h = min(h, cfg.max_step, horizon)
    floor = _MIN_STEP_FRACTION * horizon
    t = 0.0
    err_prev = 1.0
    rejected_nonfinite = False
    k = np.empty((7, 2))
    for _ in range(_MAX_STEPS):
        if t >= horizon:
            return
        clipped = horizon - t <= h
        if clipped:
            h = horizon - t
        if h < floor:
            if rejected_nonfinite:
                raise DivergenceError(
                    f"state left the finite range near t={t!r} (blow-up)"
                )
            raise StepSizeUnderflowError(
                f"step size {h!r} fell below {floor!r} at t={t!r}; problem too stiff at this tolerance"
            )
        # Overflow in a trial stage is an expected, handled outcome (the step
        # is rejected below), so evaluate the stages without numpy warnings.
        with np.errstate(over="ignore", invalid="ignore"):
            k[0] = f
            for i in range(1, 6):
                k[i] = rhs(y + h * (_A[i] @ k[:i]))
            y1 = y + h * (_B @ k[:6])
            k[6] = rhs(y1)
        finite = bool(np.all(np.isfinite(y1)) and np.all(np.isfinite(k)))
        if finite:
            scale = cfg.abs_tol + cfg.rel_tol * np.maximum(np.abs(y), np.abs(y1))
            err_norm = _error_norm(h * (_E @ k), scale)
        else:
            err_norm = math.inf
        if finite and err_norm <= 1.0:
            t1 = horizon if clipped else t + h
            yield _Step(t, t1, y, y1, h * (k.T @ _P))
            safe = max(err_norm, 1e-10)
            factor = _SAFETY * safe**-_ALPHA * err_prev**_BETA
            err_prev = safe
            t, y, f = t1, y1, k[6].copy()
            rejected_nonfinite = False
        else:
            rejected_nonfinite = not finite
            factor = _MIN_FACTOR if not finite else min(1.0, _SAFETY * err_norm**-_ALPHA)
        h = min(h * min(_MAX_FACTOR, max(_MIN_FACTOR, factor)), cfg.max_step)
    raise StepSizeUnderflowError(f"step budget of {_MAX_STEPS} exceeded before t={horizon!r}")


def integrate(
    ivp: InitialValueProblem,
    cfg: IntegratorConfig | None = None,
    t_grid=None,
    with_residuals: bool = False,
) -> Trajectory:
    """Integrate the problem and sample it on ``t_grid``.

    The grid must be strictly increasing and contained in [0, ivp.t_end];
    samples strictly inside a step come from the dense-output interpolant.
    With ``t_grid=None`` the accepted step boundaries themselves are returned.
    When ``with_residuals`` is set the trajectory carries the drift of the
    conserved quantity per sample, which requires positive populations.
    """
    from .model import _conserved

    cfg = cfg or IntegratorConfig()
    p = ivp.params
    y0_phys = np.array([ivp.initial.x, ivp.initial.y])
    w0, rhs, to_phys = _make_flow(p, ivp.initial.x, ivp.initial.y)
    if t_grid is None:
        grid = None
        horizon = ivp.t_end
    else:
        grid = _validated_grid(t_grid)
        if grid[-1] > ivp.t_end:
            raise ValueError(f"grid ends at {grid[-1]} beyond t_end={ivp.t_end}")
        horizon = float(grid[-1])
    times, states = [], []
    idx = 0
    if grid is None:
        times.append(0.0)
        states.append(y0_phys)
    else:
        while idx < grid.size and grid[idx] == 0.0:
            times.append(0.0)
            states.append(y0_phys)
            idx += 1
    if horizon > 0.0 and (grid is None or idx < grid.size):
        for step in _adaptive_steps(rhs, w0, horizon, cfg):
            if grid is None:
                times.append(step.t1)
                states.append(to_phys(step.y1))
                continue
            while idx < grid.size and grid[idx] <= step.t1:
                tg = float(grid[idx])
                w = step.y1 if tg == step.t1 else step.interpolate(tg)
                states.append(to_phys(w))
                times.append(tg)
                idx += 1
            if idx == grid.size:
                break
        # Rounding can leave the last grid point a hair past the final step.
        while grid is not None and idx < grid.size:
            times.append(float(grid[idx]))
            states.append(states[-1])
            idx += 1
    xs = np.array([s[0] for s in states])
    ys = np.array([s[1] for s in states])
    if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
        raise DivergenceError("a sampled state left the finite range (blow-up)")
    residuals = None
    if with_residuals:
        anchor = _conserved(p, xs[0], ys[0])
        residuals = np.array([_conserved(p, x, y) - anchor for x, y in zip(xs, ys)])
    return Trajectory(np.array(times), xs, ys, residuals)


def estimate_period(ivp: InitialValueProblem, cfg: IntegratorConfig | None = None) -> float:
    """Orbit period from the first directed return to the start section.

    The section is the line through the initial state normal to the faster
    changing component (y when dy/dt is nonzero at t=0, x otherwise); a return
    counts only when crossed in the same direction as at departure.  The root
    is polished by bisection on the dense output to 1e-10 in time.  The search
    gives up past 100/sqrt(a*c), i.e. about sixteen linearised revolutions.
    """
    cfg = cfg or IntegratorConfig()
    p = ivp.params
    x0, y0 = ivp.initial.x, ivp.initial.y
    if x0 <= 0.0 or y0 <= 0.0:
        raise ValueError(f"period estimation needs a strictly positive state, got ({x0}, {y0})")
    fx0, fy0 = _field(p, x0, y0)
    if fx0 == 0.0 and fy0 == 0.0:
        raise PeriodNotFoundError(
            f"initial state ({x0}, {y0}) is an equilibrium; the orbit is degenerate"
        )
    comp = 1 if fy0 != 0.0 else 0
    level = y0 if comp == 1 else x0
    direction = 1.0 if (fy0 if comp == 1 else fx0) > 0.0 else -1.0
    horizon = _PERIOD_SEARCH_FACTOR / math.sqrt(p.a * p.c)
    w0, rhs, to_phys = _make_flow(p, x0, y0)
    g_prev = 0.0
    for step in _adaptive_steps(rhs, w0, horizon, cfg):
        g_new = direction * (to_phys(step.y1)[comp] - level)
        if g_prev < 0.0 <= g_new:
            lo, hi = step.t0, step.t1
            while hi - lo > _PERIOD_BISECT_TOL:
                mid = 0.5 * (lo + hi)
                if direction * (to_phys(step.interpolate(mid))[comp] - level) >= 0.0:
                    hi = mid
                else:
                    lo = mid
            return 0.5 * (lo + hi)
        g_prev = g_new
    raise PeriodNotFoundError(
        f"no return to the start section within t={horizon!r}; the orbit may not be closed"
    )


def closed_orbit_check(
    traj: Trajectory,
    ivp: InitialValueProblem,
    eps: float,
    period: float | None = None,
) -> bool:
    """Whether the curve comes back to its initial point around one period.

    Measures the minimum distance from the first sample to the polyline
    restricted to t in [0.5*T, 1.5*T], T being the estimated period (computed
    from the problem unless supplied).  The trajectory must span at least one
    period.
    """
    if not eps > 0.0:
        raise ValueError(f"eps must be positive, got {eps}")
    if period is None:
        period = estimate_period(ivp)
    if traj.t[-1] < period:
        raise ValueError(
            f"trajectory ends at t={traj.t[-1]} but one period is {period}; span at least one period"
        )
    mask = (traj.t >= 0.5 * period) & (traj.t <= 1.5 * period)
    if int(np.count_nonzero(mask)) < 2:
        raise ValueError("fewer than two samples fall in the return window [0.5*T, 1.5*T]")
    px, py = traj.x[0], traj.y[0]
    x = traj.x[mask]
    y = traj.y[mask]
    ax, ay = x[:-1], y[:-1]
    dx, dy = np.diff(x), np.diff(y)
    length_sq = dx * dx + dy * dy
    with np.errstate(invalid="ignore", divide="ignore"):
        s = np.clip(
            np.where(length_sq > 0.0, ((px - ax) * dx + (py - ay) * dy) / length_sq, 0.0),
            0.0,
            1.0,
        )
    dist_sq = (ax + s * dx - px) ** 2 + (ay + s * dy - py) ** 2
    best = float(np.min(dist_sq[np.isfinite(dist_sq)], initial=math.inf))
    return bool(best < eps * eps)
