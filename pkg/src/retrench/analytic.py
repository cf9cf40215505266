"""Closed-form trajectories of the continuous and zero-order-hold stopping models."""

from __future__ import annotations

import math

from .model import InvariantViolation, State, SystemParams, delta_t, period_index

_CONSISTENCY_RTOL = 1e-9


def continuous_state(params: SystemParams, t: float) -> State:
    t = params.check_time(t)
    return State(x=params.V * t - params.a * t**3 / 6.0, v=params.V - params.a * t**2 / 2.0)


def continuous_stop_distance(params: SystemParams) -> float:
    return 2.0 / 3.0 * params.V * params.T_stop


def _period_and_offset(params: SystemParams, t: float) -> tuple[int, float]:
    t = params.check_time(t)
    return period_index(params.T, t, params.N), delta_t(params.T, t, params.N)


def discrete_velocity(params: SystemParams, t: float) -> float:
    k, dt = _period_and_offset(params, t)
    T, a_D = params.T, params.a_D
    return params.V - a_D * T**2 * (k - 1) * k / 2.0 - k * a_D * T * dt


def discrete_position(params: SystemParams, t: float) -> float:
    """Distance covered under the hold staircase by time ``t``.

    Completed periods ``1..k-1`` contribute ``(k-1) V T - a_D T^3 (k-1) k (2k-1) / 12``
    (the per-period displacements summed in closed form); period ``k`` adds its
    partial displacement over ``delta_t``.
    """
    k, dt = _period_and_offset(params, t)
    V, T, a_D = params.V, params.T, params.a_D
    done = (k - 1) * V * T - a_D * T**3 * (k - 1) * k * (2 * k - 1) / 12.0
    v_start = V - a_D * T**2 * (k - 1) * k / 2.0
    return done + v_start * dt - 0.5 * k * a_D * T * dt**2


def discrete_state(params: SystemParams, t: float) -> State:
    return State(x=discrete_position(params, t), v=discrete_velocity(params, t))


def discrete_stop_distance(params: SystemParams) -> float:
    """Stopping distance under the hold staircase.

    Evaluated both with ``a_D`` explicit and with ``a_D`` eliminated; the two
    must agree, otherwise :class:`InvariantViolation` is raised.
    """
    V, T_stop, N, T, a_D = params.V, params.T_stop, params.N, params.T, params.a_D
    with_a = V * T_stop - a_D * T**3 * (2 * N**3 + 3 * N**2 + N) / 12.0
    without_a = V * T_stop * (1.0 - (2 * N**2 + 3 * N + 1) / (6 * N**2 + 6 * N))
    if not math.isclose(with_a, without_a, rel_tol=_CONSISTENCY_RTOL, abs_tol=0.0):
        raise InvariantViolation(f"stop distance forms disagree: {with_a!r} vs {without_a!r}")
    return with_a


def exact_final_gap(params: SystemParams) -> float:
    # algebraically equal to V * T_stop / (6 N); no higher-order terms survive
    return params.a_D * params.T * params.T_stop**2 * (1.0 + 1.0 / params.N) / 12.0
