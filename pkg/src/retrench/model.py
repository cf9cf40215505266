"""Problem constants, control signals and hold-period bookkeeping.

Conventions used throughout the package:

* ``T = T_stop / N`` is computed, never supplied, so ``N * T == T_stop``
  holds by construction.
* The hold staircase is left-continuous at every breakpoint ``k*T`` (value of
  period ``k``) and takes the period-1 value at ``t = 0`` (its right limit).
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np


class DomainError(ValueError):
    """Input outside the domain of an operation."""


class UsageError(ValueError):
    """Operands that cannot be combined (e.g. mismatched sample grids)."""


class InvariantViolation(RuntimeError):
    """An internal consistency check failed; indicates a bug."""


class NumericBlowup(ArithmeticError):
    """Integration produced a non-finite state."""

    def __init__(self, t: float):
        super().__init__(f"non-finite state at t={t!r}")
        self.t = t


# Slack for time comparisons against the [0, T_stop] domain.
_TIME_EPS = 1e-12


def _positive_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise DomainError(f"{name} must be positive and finite, got {value!r}")
    return value


@dataclass(frozen=True)
class SystemParams:
    V: float
    T_stop: float
    N: int
    T: float
    a: float
    a_D: float

    def check_time(self, t: float) -> float:
        return _check_time(t, self.T_stop)


def make_params(V: float, T_stop: float, N: int) -> SystemParams:
    """Derive the full constant set from initial speed, stop time and period count.

    ``a`` makes the linear ramp stop the train exactly at ``T_stop``; ``a_D``
    does the same for the zero-order-hold staircase with ``N`` periods.
    """
    V = _positive_finite("V", V)
    T_stop = _positive_finite("T_stop", T_stop)
    if isinstance(N, bool) or int(N) != N or N < 1:
        raise DomainError(f"N must be an integer >= 1, got {N!r}")
    N = int(N)
    T = T_stop / N
    a = 2.0 * V / T_stop**2
    a_D = 2.0 * V / (T_stop**2 * (1.0 + 1.0 / N))
    return SystemParams(V=V, T_stop=T_stop, N=N, T=T, a=a, a_D=a_D)


@dataclass(frozen=True)
class State:
    x: float
    v: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.v)):
            raise DomainError(f"state components must be finite, got ({self.x}, {self.v})")


def _check_time(t: float, t_end: float) -> float:
    t = float(t)
    if not (-_TIME_EPS <= t <= t_end * (1.0 + _TIME_EPS) + _TIME_EPS):
        raise DomainError(f"t={t!r} outside [0, {t_end!r}]")
    return min(max(t, 0.0), t_end)


def period_index(T: float, t: float, N: int | None = None) -> int:
    """Hold period containing ``t``: ``ceil(t/T)``, with period 1 at ``t = 0``.

    When ``N`` is given the time is range-checked against ``[0, N*T]``.
    """
    if N is not None:
        t = _check_time(t, N * T)
    elif t < 0.0 or not math.isfinite(t):
        raise DomainError(f"t={t!r} must be a finite non-negative time")
    k = max(1, math.ceil(t / T))
    # the quotient can round across an integer; settle against k*T directly
    if k > 1 and (k - 1) * T >= t:
        k -= 1
    elif k * T < t:
        k += 1
    if N is not None:
        k = min(k, N)
    return k


def delta_t(T: float, t: float, N: int | None = None) -> float:
    """Time elapsed inside the current hold period; equals ``T`` at ``t = k*T``."""
    k = period_index(T, t, N)
    if N is not None:
        t = _check_time(t, N * T)
    return t - (k - 1) * T


@dataclass(frozen=True)
class LinearRamp:
    """Continuous control ``u(t) = -a t``."""

    breakpoints: tuple = field(default=(), init=False)


@dataclass(frozen=True)
class StaircaseZOH:
    """Zero-order-hold control ``u_D(t) = -k a_D T`` on period ``k``."""

    N: int
    T: float
    breakpoints: tuple = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "breakpoints", tuple(k * self.T for k in range(1, self.N)))


@dataclass(frozen=True)
class Tabulated:
    """Left-continuous piecewise-constant signal.

    ``values[i]`` applies on ``(knots[i], knots[i+1]]``; ``values[0]`` also
    applies at ``knots[0]``.
    """

    knots: tuple
    values: tuple
    breakpoints: tuple = field(init=False)

    def __post_init__(self):
        knots = tuple(float(k) for k in self.knots)
        values = tuple(float(v) for v in self.values)
        if len(knots) < 2 or len(values) != len(knots) - 1:
            raise DomainError("Tabulated needs len(values) == len(knots) - 1 >= 1")
        if any(b <= a for a, b in zip(knots, knots[1:])):
            raise DomainError("Tabulated knots must be strictly increasing")
        if not all(math.isfinite(v) for v in values + knots):
            raise DomainError("Tabulated knots and values must be finite")
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "breakpoints", knots[1:-1])

    @classmethod
    def constant(cls, value: float, t_end: float) -> "Tabulated":
        return cls(knots=(0.0, t_end), values=(value,))

    def piece(self, t: float) -> int:
        i = bisect.bisect_left(self.knots, t) - 1
        return min(max(i, 0), len(self.values) - 1)


ControlSignal = Union[LinearRamp, StaircaseZOH, Tabulated]


def linear_ramp() -> LinearRamp:
    return LinearRamp()


def staircase(params: SystemParams) -> StaircaseZOH:
    return StaircaseZOH(N=params.N, T=params.T)


def require_compatible(signal: ControlSignal, params: SystemParams) -> None:
    """Reject signals whose own time layout disagrees with ``params``."""
    if isinstance(signal, StaircaseZOH):
        if signal.N != params.N or not math.isclose(signal.T, params.T, rel_tol=1e-12):
            raise UsageError(f"staircase (N={signal.N}, T={signal.T}) does not match params "
                             f"(N={params.N}, T={params.T})")
    elif isinstance(signal, Tabulated):
        if signal.knots[0] > _TIME_EPS or signal.knots[-1] < params.T_stop * (1.0 - _TIME_EPS):
            raise UsageError("tabulated signal does not cover [0, T_stop]")


def eval_control(signal: ControlSignal, params: SystemParams, t: float,
                 anchor: float | None = None) -> float:
    """Acceleration commanded by ``signal`` at time ``t``.

    For piecewise-constant signals ``anchor`` selects the piece to read
    (any time strictly inside that piece); the integrator uses it so stage
    evaluations at a step's end point see the step's own piece rather than
    the neighbouring one.
    """
    t = params.check_time(t)
    where = t if anchor is None else anchor
    if isinstance(signal, LinearRamp):
        return -params.a * t
    if isinstance(signal, StaircaseZOH):
        k = period_index(signal.T, where, signal.N)
        return -k * params.a_D * signal.T
    if isinstance(signal, Tabulated):
        if where > signal.knots[-1] * (1.0 + _TIME_EPS) or where < signal.knots[0] - _TIME_EPS:
            raise DomainError(f"t={where!r} outside tabulated range")
        return signal.values[signal.piece(where)]
    raise TypeError(f"unknown control signal {signal!r}")



def control_values(signal: ControlSignal, params: SystemParams,
                   times: np.ndarray, anchors: np.ndarray) -> np.ndarray:
    """Vectorised :func:`eval_control` (no range checking)."""
    times = np.asarray(times, dtype=float)
    anchors = np.asarray(anchors, dtype=float)
    if isinstance(signal, LinearRamp):
        return -params.a * times
    if isinstance(signal, StaircaseZOH):
        k = np.clip(np.ceil(anchors / signal.T), 1, signal.N)
        return -k * params.a_D * signal.T
    if isinstance(signal, Tabulated):
        idx = np.searchsorted(np.asarray(signal.knots), anchors, side="left") - 1
        idx = np.clip(idx, 0, len(signal.values) - 1)
        return np.asarray(signal.values)[idx]
    raise TypeError(f"unknown control signal {signal!r}")
