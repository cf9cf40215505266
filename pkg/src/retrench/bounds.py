"""Input-to-state deviation bounds between the ramp and staircase models.

The deviation of two solutions of ``x' = f(x, u)`` that differ only in their
input obeys::

    sup_t |x^u - x^w| <= K2 * ||u - w||_2,   K2 = exp(k_f T_stop) * ||k_u||_2

where ``k_f`` and ``k_u`` are Lipschitz constants of ``f`` in state and input.
For ``f(x, v, u) = (v, u)`` both constants are 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from .model import (
    ControlSignal,
    SystemParams,
    control_values,
    linear_ramp,
    require_compatible,
    staircase,
)
from .simulate import GridSpec, Trajectory, hold_grid, require_same_grid


@dataclass(frozen=True)
class LipschitzData:
    k_f: float
    k_u: float
    T_stop: float

    def __post_init__(self):
        if self.k_f < 0 or self.k_u < 0:
            raise ValueError("Lipschitz constants must be non-negative")

    @property
    def K_f(self) -> float:
        return self.k_f * self.T_stop


def train_lipschitz(params: SystemParams) -> LipschitzData:
    # df1/dv = 1, df2/du = 1, every other partial derivative is zero
    return LipschitzData(k_f=1.0, k_u=1.0, T_stop=params.T_stop)


def safe_exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def k2_constant(lip: LipschitzData, T_stop: float | None = None) -> float:
    """``exp(k_f T_stop) * k_u * sqrt(T_stop)``; ``inf`` when the exponential overflows."""
    T_stop = lip.T_stop if T_stop is None else T_stop
    input_norm = lip.k_u * math.sqrt(T_stop)
    if input_norm == 0.0:
        return 0.0
    return safe_exp(lip.k_f * T_stop) * input_norm


def staircase_gap_bound(params: SystemParams) -> float:
    return params.a_D * params.T


def l2_control_gap_bound(params: SystemParams) -> float:
    return params.a_D * params.T * math.sqrt(params.T_stop)


def gronwall_bound(params: SystemParams) -> float:
    scale = params.a_D * params.T * params.T_stop
    return safe_exp(params.T_stop) * scale if scale else 0.0


def l2_control_gap_numeric(uA: ControlSignal, uB: ControlSignal, params: SystemParams,
                           grid: GridSpec = GridSpec()) -> float:
    """Composite-trapezoid ``||uA - uB||_2`` over ``[0, T_stop]``.

    Nodes are the hold grid plus both signals' breakpoints; each panel reads
    one-sided values so jumps never get averaged across.
    """
    require_compatible(uA, params)
    require_compatible(uB, params)
    times = hold_grid(params, grid, tuple(uA.breakpoints) + tuple(uB.breakpoints))
    t0, t1 = times[:-1], times[1:]
    mid = 0.5 * (t0 + t1)
    d0 = control_values(uA, params, t0, mid) - control_values(uB, params, t0, mid)
    d1 = control_values(uA, params, t1, mid) - control_values(uB, params, t1, mid)
    integral = float(np.sum(0.5 * (t1 - t0) * (d0**2 + d1**2)))
    return math.sqrt(integral)


def linf_deviation(a: Trajectory, b: Trajectory) -> tuple[float, float]:
    require_same_grid(a, b)
    return float(np.max(np.abs(a.x - b.x))), float(np.max(np.abs(a.v - b.v)))


@dataclass(frozen=True)
class BoundReport:
    k2: float
    l2_gap_numeric: float
    l2_gap_bound: float
    staircase_bound: float
    gronwall_bound: float
    measured_linf_x: float
    measured_linf_v: float

    @property
    def sound(self) -> bool:
        return (self.measured_linf_x <= self.gronwall_bound
                and self.measured_linf_v <= self.gronwall_bound
                and self.l2_gap_numeric <= self.l2_gap_bound)

    @property
    def numeric_bound(self) -> float:
        """K2 times the measured L2 gap: the bound before overestimating the L2 gap."""
        return self.k2 * self.l2_gap_numeric

    def items(self) -> list[tuple[str, object]]:
        out = [(f.name, getattr(self, f.name)) for f in fields(self)]
        out.insert(2, ("numeric_bound", self.numeric_bound))
        out.append(("sound", self.sound))
        return out


def bound_report(params: SystemParams, traj_cont: Trajectory, traj_zoh: Trajectory,
                 grid: GridSpec = GridSpec(), u_cont: ControlSignal | None = None,
                 u_zoh: ControlSignal | None = None) -> BoundReport:
    u_cont = linear_ramp() if u_cont is None else u_cont
    u_zoh = staircase(params) if u_zoh is None else u_zoh
    dx, dv = linf_deviation(traj_cont, traj_zoh)
    return BoundReport(
        k2=k2_constant(train_lipschitz(params)),
        l2_gap_numeric=l2_control_gap_numeric(u_cont, u_zoh, params, grid),
        l2_gap_bound=l2_control_gap_bound(params),
        staircase_bound=staircase_gap_bound(params),
        gronwall_bound=gronwall_bound(params),
        measured_linf_x=dx,
        measured_linf_v=dv,
    )
