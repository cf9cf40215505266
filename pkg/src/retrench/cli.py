"""Command-line entry point.

Subcommands:

- solve:    closed-form constants and stopping distances
- simulate: RK4 trajectories of both models as CSV
            (t, x_cont, v_cont, x_zoh, v_zoh, abs_dx, abs_dv)
- bound:    deviation bounds vs measured deviation
- check:    initialisation PO, retrenchment PO and the exact-gap corroboration
- sweep:    per-N table
            (N, T, a_D, D_D, gap_exact, l2_gap, gronwall_bound, po_verdict)

Exit codes: 0 success, 1 a PO or soundness check failed, 2 usage/config error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from . import analytic, bounds, po, report
from .model import DomainError, SystemParams, UsageError, linear_ramp, make_params, staircase
from .simulate import GridSpec, integrate

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

SIMULATE_COLUMNS = ("t", "x_cont", "v_cont", "x_zoh", "v_zoh", "abs_dx", "abs_dv")
SWEEP_COLUMNS = ("N", "T", "a_D", "D_D", "gap_exact", "l2_gap", "gronwall_bound", "po_verdict")


@dataclass(frozen=True)
class RunConfig:
    command: str
    V: float = 20.0
    T_stop: float = 10.0
    N: int = 10
    m: int = 100
    fmt: str | None = None
    output: str | None = None
    options: dict = field(default_factory=dict)

    def params(self, N: int | None = None) -> SystemParams:
        return make_params(self.V, self.T_stop, self.N if N is None else N)

    def grid(self) -> GridSpec:
        return GridSpec(self.m)


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--v", type=float, default=20.0, help="initial velocity V (m/s)")
    common.add_argument("--t-stop", type=float, default=10.0, help="stopping time T_stop (s)")
    common.add_argument("--m", type=_positive_int, default=100, help="RK4 substeps per hold period")
    common.add_argument("--format", choices=("csv", "report"), default=None, dest="fmt")
    common.add_argument("--output", default=None, help="write to this path instead of stdout")

    with_n = argparse.ArgumentParser(add_help=False)
    with_n.add_argument("--n", type=_positive_int, default=10, help="number of hold periods N")

    parser = argparse.ArgumentParser(
        prog="retrench",
        description="Continuous vs zero-order-hold train stopping: simulation, bounds, POs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common, with_n], help="closed-form report")
    sub.add_parser("simulate", parents=[common, with_n], help="trajectories as CSV")
    bound = sub.add_parser("bound", parents=[common, with_n], help="deviation bound report")
    bound.add_argument("--gronwall-scale", type=float, default=1.0,
                       help=argparse.SUPPRESS)
    check = sub.add_parser("check", parents=[common, with_n], help="PO checks")
    check.add_argument("--o-bound-scale", type=float, default=1.0,
                       help="scale the output-relation bound (negative-control harness)")
    sweep = sub.add_parser("sweep", parents=[common], help="per-N table")
    sweep.add_argument("--n-min", type=_positive_int, default=1)
    sweep.add_argument("--n-max", type=_positive_int, default=64)
    sweep.add_argument("--doubling", action="store_true",
                       help="only N = n_min, 2 n_min, 4 n_min, ... up to n_max")
    return parser


def parse_config(argv: Sequence[str]) -> RunConfig:
    ns = build_parser().parse_args(argv)
    known = {"command", "v", "t_stop", "n", "m", "fmt", "output"}
    options = {k: v for k, v in vars(ns).items() if k not in known}
    return RunConfig(command=ns.command, V=ns.v, T_stop=ns.t_stop, N=getattr(ns, "n", 10),
                     m=ns.m, fmt=ns.fmt, output=ns.output, options=options)


def _solve(cfg: RunConfig) -> tuple[str, int]:
    p = cfg.params()
    D = analytic.continuous_stop_distance(p)
    D_D = analytic.discrete_stop_distance(p)
    items = [
        ("V", p.V), ("T_stop", p.T_stop), ("N", p.N), ("T", p.T), ("a", p.a), ("a_D", p.a_D),
        ("D", D), ("D_D", D_D), ("gap_exact", analytic.exact_final_gap(p)),
        ("abs_D_minus_D_D", abs(D - D_D)),
    ]
    if cfg.fmt == "csv":
        return report.csv_text(("field", "value"), items), EXIT_OK
    return report.key_value_block(items), EXIT_OK


def _simulate(cfg: RunConfig) -> tuple[str, int]:
    p, grid = cfg.params(), cfg.grid()
    cont = integrate(p, linear_ramp(), grid)
    zoh = integrate(p, staircase(p), grid)
    if cfg.fmt == "report":
        dx, dv = bounds.linf_deviation(cont, zoh)
        items = [
            ("samples", len(cont)), ("x_cont_final", cont.final.x), ("v_cont_final", cont.final.v),
            ("x_zoh_final", zoh.final.x), ("v_zoh_final", zoh.final.v),
            ("linf_dx", dx), ("linf_dv", dv),
        ]
        return report.key_value_block(items), EXIT_OK
    dx = np.abs(cont.x - zoh.x)
    dv = np.abs(cont.v - zoh.v)
    rows = zip(cont.t, cont.x, cont.v, zoh.x, zoh.v, dx, dv)
    return report.csv_text(SIMULATE_COLUMNS, ([float(c) for c in r] for r in rows)), EXIT_OK


def _bound(cfg: RunConfig) -> tuple[str, int]:
    p, grid = cfg.params(), cfg.grid()
    rep = bounds.bound_report(p, integrate(p, linear_ramp(), grid),
                              integrate(p, staircase(p), grid), grid)
    scale = cfg.options.get("gronwall_scale", 1.0)
    if scale != 1.0:
        rep = replace(rep, gronwall_bound=rep.gronwall_bound * scale)
    text = report.bound_report_csv(rep) if cfg.fmt == "csv" else report.bound_report_text(rep)
    return text, EXIT_OK if rep.sound else EXIT_FAIL


def _check(cfg: RunConfig) -> tuple[str, int]:
    p, grid = cfg.params(), cfg.grid()
    abstract, concrete = po.train_fragments(p, grid)
    o_bound = bounds.gronwall_bound(p) * cfg.options.get("o_bound_scale", 1.0)
    data = po.train_retrenchment_data(p, grid, o_bound=o_bound)
    init_ok = po.check_init_po(abstract.trajectory.initial, concrete.trajectory.initial, data.R)
    result = po.check_retrenchment_po(abstract, concrete, data)
    corr = po.corroboration(p)
    refinement = po.check_refinement_po(abstract, concrete, po.state_identity(),
                                        po.always_true, po.always_true)
    ok = init_ok and result.passed and corr.holds
    if cfg.fmt == "csv":
        rows = [("init_po", init_ok), ("verdict", result.verdict), *result.witness.items(),
                ("corroboration", corr.holds), ("corroboration.lhs", corr.lhs),
                ("corroboration.rhs", corr.rhs),
                ("refinement_identity_verdict", refinement.verdict)]
        return report.csv_text(("field", "value"), rows), EXIT_OK if ok else EXIT_FAIL
    text = report.key_value_block([("init_po", init_ok)])
    text += report.po_result_text(result)
    text += "[corroboration]\n" + report.key_value_block(
        [("holds", corr.holds), ("lhs", corr.lhs), ("rhs", corr.rhs)])
    text += "[refinement PO, R = identity (informational)]\n" + report.key_value_block(
        [("verdict", refinement.verdict)])
    text += f"overall = {'pass' if ok else 'fail'}\n"
    return text, EXIT_OK if ok else EXIT_FAIL


def sweep_rows(cfg: RunConfig, Ns: Sequence[int]) -> list[tuple]:
    grid = cfg.grid()
    rows = []
    for N in Ns:
        p = cfg.params(N)
        abstract, concrete = po.train_fragments(p, grid)
        result = po.check_retrenchment_po(abstract, concrete, po.train_retrenchment_data(p, grid))
        rows.append((N, p.T, p.a_D, analytic.discrete_stop_distance(p),
                     analytic.exact_final_gap(p),
                     bounds.l2_control_gap_numeric(abstract.input, concrete.input, p, grid),
                     bounds.gronwall_bound(p), result.verdict))
    return rows


def _sweep(cfg: RunConfig) -> tuple[str, int]:
    lo, hi = cfg.options["n_min"], cfg.options["n_max"]
    if lo > hi:
        raise UsageError(f"--n-min ({lo}) exceeds --n-max ({hi})")
    if cfg.options.get("doubling"):
        Ns = []
        n = lo
        while n <= hi:
            Ns.append(n)
            n *= 2
    else:
        Ns = list(range(lo, hi + 1))
    rows = sweep_rows(cfg, Ns)
    ok = all(r[-1] is po.Verdict.PASS for r in rows)
    if cfg.fmt == "report":
        width = 16
        lines = ["".join(c.rjust(width) for c in SWEEP_COLUMNS)]
        lines += ["".join(report.fmt(v).rjust(width) for v in r) for r in rows]
        return "\n".join(lines) + "\n", EXIT_OK if ok else EXIT_FAIL
    return report.csv_text(SWEEP_COLUMNS, rows), EXIT_OK if ok else EXIT_FAIL


_DEFAULT_FORMAT = {"solve": "report", "simulate": "csv", "bound": "report",
                   "check": "report", "sweep": "csv"}
_COMMANDS = {"solve": _solve, "simulate": _simulate, "bound": _bound,
             "check": _check, "sweep": _sweep}


def run(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if cfg.fmt is None:
        cfg = replace(cfg, fmt=_DEFAULT_FORMAT[cfg.command])
    try:
        text, code = _COMMANDS[cfg.command](cfg)
    except (DomainError, UsageError) as exc:
        print(f"retrench {cfg.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.output:
        with open(cfg.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    try:
        code = run()
        sys.stdout.flush()
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head)
        sys.stderr.close()
        code = EXIT_OK
    sys.exit(code)


if __name__ == "__main__":
    main()
