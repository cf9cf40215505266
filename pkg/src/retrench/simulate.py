"""Fixed-step RK4 integration of the stopping dynamics ``x' = v, v' = u(t)``.

Steps are laid out on the hold grid ``h = T/m`` (plus any extra breakpoints a
tabulated signal brings), so no step ever straddles a jump of the control.
Within a step the control is read from the piece that contains the step, so
the stage at the step's end point never picks up the next period's value.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .model import (
    ControlSignal,
    NumericBlowup,
    State,
    SystemParams,
    UsageError,
    control_values,
    eval_control,
    require_compatible,
)

_MERGE_TOL = 1e-12


@dataclass(frozen=True)
class GridSpec:
    substeps_per_period: int = 100

    def __post_init__(self):
        m = self.substeps_per_period
        if isinstance(m, bool) or int(m) != m or m < 1:
            raise UsageError(f"substeps_per_period must be an integer >= 1, got {m!r}")


@dataclass(frozen=True, eq=False)
class Trajectory:
    t: np.ndarray
    x: np.ndarray
    v: np.ndarray
    params: SystemParams
    substeps_per_period: int

    def __post_init__(self):
        for arr in (self.t, self.x, self.v):
            arr.setflags(write=False)

    def __len__(self) -> int:
        return len(self.t)

    @property
    def samples(self) -> list[tuple[float, State]]:
        return [(float(t), State(float(x), float(v))) for t, x, v in zip(self.t, self.x, self.v)]

    @property
    def initial(self) -> State:
        return State(float(self.x[0]), float(self.v[0]))

    @property
    def final(self) -> State:
        return State(float(self.x[-1]), float(self.v[-1]))

    def rows(self) -> Iterator[tuple[float, float, float]]:
        for t, x, v in zip(self.t, self.x, self.v):
            yield float(t), float(x), float(v)


def hold_grid(params: SystemParams, grid: GridSpec, extra_breakpoints=()) -> np.ndarray:
    """Sample times: every ``k*T`` exactly, ``m`` equal substeps per period."""
    m = grid.substeps_per_period
    T = params.T
    times = np.add.outer(np.arange(params.N) * T, np.arange(m) * (T / m)).ravel()
    times = np.append(times, params.T_stop)
    tol = _MERGE_TOL * max(1.0, params.T_stop)
    extra = [b for b in extra_breakpoints
             if 0.0 < b < params.T_stop and np.min(np.abs(times - b)) > tol]
    if extra:
        times = np.union1d(times, extra)
    return times


def _rk4_sweep(times: np.ndarray, u0: np.ndarray, umid: np.ndarray, u1: np.ndarray,
               x0: float, v0: float) -> tuple[np.ndarray, np.ndarray]:
    n = len(times)
    xs = np.empty(n)
    vs = np.empty(n)
    x, v = x0, v0
    xs[0], vs[0] = x, v
    for j in range(n - 1):
        h = times[j + 1] - times[j]
        # f(x, v, u) = (v, u)
        k1x, k1v = v, u0[j]
        k2x, k2v = v + 0.5 * h * k1v, umid[j]
        k3x, k3v = v + 0.5 * h * k2v, umid[j]
        k4x, k4v = v + h * k3v, u1[j]
        x = x + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        v = v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        xs[j + 1], vs[j + 1] = x, v
    return xs, vs


def _check_finite(times, xs, vs):
    bad = ~(np.isfinite(xs) & np.isfinite(vs))
    if bad.any():
        raise NumericBlowup(float(times[int(np.argmax(bad))]))


def integrate(params: SystemParams, signal: ControlSignal, grid: GridSpec = GridSpec(),
              initial: State | None = None) -> Trajectory:
    """Integrate from ``initial`` (default ``(0, V)``) over ``[0, T_stop]``."""
    require_compatible(signal, params)
    times = hold_grid(params, grid, signal.breakpoints)
    t0, t1 = times[:-1], times[1:]
    mid = 0.5 * (t0 + t1)
    u0 = control_values(signal, params, t0, mid)
    umid = control_values(signal, params, mid, mid)
    u1 = control_values(signal, params, t1, mid)
    if initial is None:
        initial = State(0.0, params.V)
    with np.errstate(over="ignore", invalid="ignore"):
        xs, vs = _rk4_sweep(times, u0, umid, u1, initial.x, initial.v)
    _check_finite(times, xs, vs)
    return Trajectory(t=times, x=xs, v=vs, params=params,
                      substeps_per_period=grid.substeps_per_period)


def integrate_unaligned(params: SystemParams, signal: ControlSignal,
                        n_steps: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Uniform-step RK4 that samples the control at raw stage times.

    Diagnostic only: steps may straddle hold breakpoints and stages read
    whichever piece their own time falls in. Used to show that breakpoint
    alignment in :func:`integrate` matters.
    """
    times = np.linspace(0.0, params.T_stop, n_steps + 1)
    t0, t1 = times[:-1], times[1:]
    mid = 0.5 * (t0 + t1)
    u0 = np.array([eval_control(signal, params, t) for t in t0])
    umid = np.array([eval_control(signal, params, t) for t in mid])
    u1 = np.array([eval_control(signal, params, t) for t in t1])
    with np.errstate(over="ignore", invalid="ignore"):
        xs, vs = _rk4_sweep(times, u0, umid, u1, 0.0, params.V)
    _check_finite(times, xs, vs)
    return times, xs, vs


def require_same_grid(a: Trajectory, b: Trajectory) -> None:
    if len(a.t) != len(b.t) or not np.allclose(a.t, b.t, rtol=0.0, atol=_MERGE_TOL):
        raise UsageError("trajectories are sampled on different time grids")


def deviation_series(a: Trajectory, b: Trajectory) -> list[tuple[float, float, float]]:
    require_same_grid(a, b)
    dx = np.abs(a.x - b.x)
    dv = np.abs(a.v - b.v)
    return [(float(t), float(p), float(q)) for t, p, q in zip(a.t, dx, dv)]
