"""Truncated power-series solutions about t = 0.

The series coefficients follow from substituting x(t) = sum X[n] t**n,
y(t) = sum Y[n] t**n into the model equations and matching powers of t:

    (n+1) * X[n+1] =  a * X[n] - b * sum_{k=0..n} X[k] * Y[n-k]
    (n+1) * Y[n+1] = -c * Y[n] + d * sum_{k=0..n} X[k] * Y[n-k]

with X[0] = x0 and Y[0] = y0.  The first-order coefficients are written in
their factored closed forms x0*(a - b*y0) and y0*(d*x0 - c) so they match
those expressions bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .exceptions import NonFiniteError
from .model import ModelParams, PopulationState, _as_finite_float
from .trajectory import Trajectory

# Coefficients below this magnitude carry no growth information; if the whole
# sampled tail sits under it the series is treated as entire.
_GROWTH_FLOOR = 1e-300


@dataclass(frozen=True)
class InitialValueProblem:
    params: ModelParams
    initial: PopulationState
    t_end: float

    def __post_init__(self):
        object.__setattr__(self, "t_end", _as_finite_float(self.t_end, "t_end"))
        if self.t_end <= 0.0:
            raise ValueError(f"t_end must be positive, got {self.t_end}")


@dataclass(frozen=True)
class SeriesSolution:
    """Polynomial pair (x, y) stored lowest degree first, length order + 1."""

    order: int
    x_coeffs: np.ndarray
    y_coeffs: np.ndarray

    def __post_init__(self):
        if self.order != int(self.order) or self.order < 0:
            raise ValueError(f"order must be a non-negative integer, got {self.order!r}")
        object.__setattr__(self, "order", int(self.order))
        for name in ("x_coeffs", "y_coeffs"):
            coeffs = np.asarray(getattr(self, name), dtype=float)
            if coeffs.shape != (self.order + 1,):
                raise ValueError(f"{name} must have length order + 1 = {self.order + 1}")
            object.__setattr__(self, name, coeffs)


def taylor_coefficients(ivp: InitialValueProblem, order: int) -> SeriesSolution:
    """Series coefficients of the solution through the requested order.

    The convolution in the recurrence is accumulated with math.fsum, so each
    coefficient is the correctly rounded value of its defining expression.
    """
    if order != int(order) or order < 0:
        raise ValueError(f"order must be a non-negative integer, got {order!r}")
    order = int(order)
    p = ivp.params
    x0, y0 = ivp.initial.x, ivp.initial.y
    X = np.zeros(order + 1)
    Y = np.zeros(order + 1)
    X[0], Y[0] = x0, y0
    if order >= 1:
        X[1] = x0 * (p.a - p.b * y0)
        Y[1] = y0 * (p.d * x0 - p.c)
    for n in range(1, order):
        conv = math.fsum(X[k] * Y[n - k] for k in range(n + 1))
        X[n + 1] = (p.a * X[n] - p.b * conv) / (n + 1)
        Y[n + 1] = (-p.c * Y[n] + p.d * conv) / (n + 1)
    return SeriesSolution(order, X, Y)


def evaluate_series(s: SeriesSolution, t: float) -> tuple[float, float]:
    """Horner evaluation of both polynomials at time t."""
    t = float(t)
    if not math.isfinite(t):
        raise NonFiniteError(f"evaluation time must be finite, got {t!r}")
    return float(npoly.polyval(t, s.x_coeffs)), float(npoly.polyval(t, s.y_coeffs))


def _validated_grid(t_grid) -> np.ndarray:
    grid = np.asarray(t_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("time grid must be a non-empty 1-d array")
    if not np.all(np.isfinite(grid)):
        raise NonFiniteError("time grid must be finite")
    if grid[0] < 0.0:
        raise ValueError(f"time grid must start at or after 0, got {grid[0]}")
    if grid.size > 1 and not np.all(np.diff(grid) > 0.0):
        raise ValueError("time grid must be strictly increasing")
    return grid


def sample_series(s: SeriesSolution, t_grid) -> Trajectory:
    """Evaluate the series on a grid and wrap the samples as a trajectory."""
    grid = _validated_grid(t_grid)
    return Trajectory(grid, npoly.polyval(grid, s.x_coeffs), npoly.polyval(grid, s.y_coeffs))


def coefficient_growth(s: SeriesSolution) -> float:
    """Convergence-radius estimate from the root test on the coefficient tail.

    Uses the reciprocal of the largest |coeff[n]|**(1/n) over the top half of
    the available orders, both components pooled.  Returns math.inf when every
    tail coefficient is too small to carry growth information (entire-looking
    series).  Needs order >= 5 to have a meaningful tail.
    """
    if s.order < 5:
        raise ValueError(f"growth estimate needs order >= 5, got {s.order}")
    start = s.order // 2 + 1
    largest_root = 0.0
    for coeffs in (s.x_coeffs, s.y_coeffs):
        for n in range(start, s.order + 1):
            magnitude = abs(coeffs[n])
            if magnitude >= _GROWTH_FLOOR:
                largest_root = max(largest_root, magnitude ** (1.0 / n))
    if largest_root == 0.0:
        return math.inf
    return 1.0 / largest_root
