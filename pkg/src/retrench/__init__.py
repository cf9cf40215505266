"""Continuous vs zero-order-hold train stopping: exact solutions, RK4 simulation,
input-to-state deviation bounds, and retrenchment/refinement proof obligations."""

from .model import (
    ControlSignal,
    DomainError,
    InvariantViolation,
    LinearRamp,
    NumericBlowup,
    StaircaseZOH,
    State,
    SystemParams,
    Tabulated,
    UsageError,
    delta_t,
    eval_control,
    linear_ramp,
    make_params,
    period_index,
    staircase,
)
from .simulate import GridSpec, Trajectory, deviation_series, integrate

__all__ = [
    "ControlSignal", "DomainError", "GridSpec", "InvariantViolation", "LinearRamp",
    "NumericBlowup", "StaircaseZOH", "State", "SystemParams", "Tabulated", "Trajectory",
    "UsageError", "delta_t", "deviation_series", "eval_control", "integrate", "linear_ramp",
    "make_params", "period_index", "staircase",
]
