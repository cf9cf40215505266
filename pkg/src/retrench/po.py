"""Refinement and retrenchment proof obligations over trajectory fragments.

The correctness obligation is checked for one concrete fragment against a
caller-supplied abstract witness fragment (the existential over abstract
fragments is discharged by that witness, not searched for)::

    R(x, y) and W(is, js, x, y)  ==>  (R(x', y') and O(x', y')) or C(x', y')

Refinement is the special case ``W = In``, ``O = Out``, ``C = false``.

Predicates may return a plain ``bool`` or a :class:`Check`, which carries the
scalar values behind the verdict so they end up in the witness record.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any, Callable

from . import bounds
from .model import (
    ControlSignal,
    State,
    SystemParams,
    Tabulated,
    UsageError,
    linear_ramp,
    staircase,
)
from .simulate import GridSpec, Trajectory, integrate, require_same_grid


@dataclass(frozen=True)
class Check:
    holds: bool
    values: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return bool(self.holds)


def _evaluate(pred: Callable[..., Any], *args) -> tuple[bool, dict]:
    out = pred(*args)
    if isinstance(out, Check):
        return bool(out), dict(out.values)
    return bool(out), {}


def always_true(*_args) -> bool:
    return True


def always_false(*_args) -> bool:
    return False


def state_identity(tol: float = 0.0) -> Callable[[State, State], Check]:
    """Retrieve relation ``x == y`` componentwise, up to ``tol``."""

    def identity(a: State, c: State) -> Check:
        dx, dv = abs(a.x - c.x), abs(a.v - c.v)
        return Check(dx <= tol and dv <= tol, {"abs_dx": dx, "abs_dv": dv, "tol": tol})

    return identity


@dataclass(frozen=True)
class Fragment:
    trajectory: Trajectory
    input: ControlSignal
    outputs: tuple = ()

    def __post_init__(self):
        if isinstance(self.input, Tabulated):
            t_end = float(self.trajectory.t[-1])
            if self.input.knots[0] > 0.0 or self.input.knots[-1] < t_end * (1 - 1e-12):
                raise UsageError("fragment input does not cover the trajectory time span")


@dataclass(frozen=True)
class RetrenchmentData:
    R: Callable[[State, State], Any]
    W: Callable[[ControlSignal, ControlSignal, State, State], Any]
    O: Callable[[State, State], Any]
    C: Callable[[State, State], Any]


class Verdict(str, enum.Enum):
    PASS = "pass"
    FAIL_HYPOTHESIS_UNMET = "fail_hypothesis_unmet"
    FAIL_CONCLUSION = "fail_conclusion"


@dataclass(frozen=True)
class POResult:
    verdict: Verdict
    witness: dict

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS


def train_fragments(params: SystemParams, grid: GridSpec = GridSpec(),
                    concrete_initial: State | None = None) -> tuple[Fragment, Fragment]:
    """Ramp-driven (abstract) and staircase-driven (concrete) fragments over ``[0, T_stop]``."""
    ramp, stairs = linear_ramp(), staircase(params)
    abstract = Fragment(integrate(params, ramp, grid), ramp)
    concrete = Fragment(integrate(params, stairs, grid, initial=concrete_initial), stairs)
    return abstract, concrete


def check_init_po(abstract_init: State, concrete_init: State, R) -> bool:
    return _evaluate(R, abstract_init, concrete_init)[0]


def train_retrenchment_data(params: SystemParams, grid: GridSpec = GridSpec(),
                            o_bound: float | None = None) -> RetrenchmentData:
    """Retrenchment data relating the ramp model (abstract) to the hold model (concrete).

    ``R`` is trivially true; ``W`` demands equal start states and an input L2
    gap within ``a_D T sqrt(T_stop)``; ``O`` bounds both final state gaps by the
    Gronwall bound (overridable through ``o_bound`` for negative controls);
    ``C`` is false.
    """
    l2_bound = bounds.l2_control_gap_bound(params)
    o_bound = bounds.gronwall_bound(params) if o_bound is None else float(o_bound)

    def W(u_abs, u_con, x: State, y: State) -> Check:
        l2 = bounds.l2_control_gap_numeric(u_abs, u_con, params, grid)
        ok = x.x == y.x and x.v == y.v and l2 <= l2_bound
        return Check(ok, {
            "start_abs_dx": abs(x.x - y.x),
            "start_abs_dv": abs(x.v - y.v),
            "l2_gap": l2,
            "l2_gap_bound": l2_bound,
        })

    def O(x: State, y: State) -> Check:
        dx, dv = abs(x.x - y.x), abs(x.v - y.v)
        return Check(dx <= o_bound and dv <= o_bound,
                     {"abs_dx": dx, "abs_dv": dv, "o_bound": o_bound})

    return RetrenchmentData(R=always_true, W=W, O=O, C=always_false)


def _throughout(O, a: Trajectory, c: Trajectory) -> tuple[bool, dict]:
    """Apply ``O`` at every shared sample time, reporting the first failure."""
    for t, xa, va, xc, vc in zip(a.t, a.x, a.v, c.x, c.v):
        ok, _ = _evaluate(O, State(float(xa), float(va)), State(float(xc), float(vc)))
        if not ok:
            return False, {"first_failure_t": float(t)}
    return True, {"first_failure_t": math.nan}


def check_retrenchment_po(abstract: Fragment, concrete: Fragment,
                          data: RetrenchmentData) -> POResult:
    """Evaluate the retrenchment correctness obligation on one fragment pair.

    ``fail_hypothesis_unmet`` means ``R and W`` did not hold for the before
    data: the obligation is vacuously true there but the instance says
    nothing, so it is not reported as a pass. The conclusion requires ``O``
    at the final states and at every shared sample.
    """
    a, c = abstract.trajectory, concrete.trajectory
    require_same_grid(a, c)
    x, y = a.initial, c.initial
    x1, y1 = a.final, c.final

    witness: dict = {}

    def record(prefix: str, ok: bool, values: dict) -> bool:
        witness[prefix] = ok
        for key, val in values.items():
            witness[f"{prefix}.{key}"] = val
        return ok

    r_before = record("R_before", *_evaluate(data.R, x, y))
    w = record("W", *_evaluate(data.W, abstract.input, concrete.input, x, y))
    r_after = record("R_after", *_evaluate(data.R, x1, y1))
    o_final = record("O_final", *_evaluate(data.O, x1, y1))
    o_all = record("O_all_samples", *_throughout(data.O, a, c))
    conceded = record("C", *_evaluate(data.C, x1, y1))

    if not (r_before and w):
        verdict = Verdict.FAIL_HYPOTHESIS_UNMET
    elif (r_after and o_final and o_all) or conceded:
        verdict = Verdict.PASS
    else:
        verdict = Verdict.FAIL_CONCLUSION
    return POResult(verdict=verdict, witness=witness)


def check_refinement_po(abstract: Fragment, concrete: Fragment, R, In, Out) -> POResult:
    """Refinement correctness as the retrenchment with ``W = In``, ``O = Out``, ``C = false``."""
    data = RetrenchmentData(
        R=R,
        W=lambda u_abs, u_con, _x, _y: In(u_abs, u_con),
        O=lambda _x1, _y1: Out(abstract.outputs, concrete.outputs),
        C=always_false,
    )
    return check_retrenchment_po(abstract, concrete, data)


@dataclass(frozen=True)
class Corroboration:
    holds: bool
    lhs: float
    rhs: float


def corroboration(params: SystemParams) -> Corroboration:
    """Exact final gap vs the Gronwall bound, after cancelling ``a_D T T_stop``."""
    lhs = params.T_stop / 12.0 * (1.0 + 1.0 / params.N)
    rhs = bounds.safe_exp(params.T_stop)
    return Corroboration(holds=lhs <= rhs, lhs=lhs, rhs=rhs)

