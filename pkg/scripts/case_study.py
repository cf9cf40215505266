"""Canonical train-stopping case study: closed forms, simulation, bounds and POs.

    python scripts/case_study.py [--v 20] [--t-stop 10] [--n 10] [--m 100]
"""

import argparse

from retrench import analytic, bounds, po
from retrench.model import linear_ramp, make_params, staircase
from retrench.report import bound_report_text, key_value_block, po_result_text
from retrench.simulate import GridSpec, integrate


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--v", type=float, default=20.0)
    ap.add_argument("--t-stop", type=float, default=10.0)
    ap.add_argument("--n", type=int, default=10)
    ap.add_argument("--m", type=int, default=100)
    args = ap.parse_args()

    p = make_params(args.v, args.t_stop, args.n)
    grid = GridSpec(args.m)
    print(key_value_block([
        ("a", p.a), ("a_D", p.a_D),
        ("D (ramp)", analytic.continuous_stop_distance(p)),
        ("D_D (hold)", analytic.discrete_stop_distance(p)),
        ("exact final gap", analytic.exact_final_gap(p)),
    ]))
    cont = integrate(p, linear_ramp(), grid)
    zoh = integrate(p, staircase(p), grid)
    print(bound_report_text(bounds.bound_report(p, cont, zoh, grid)))

    abstract, concrete = po.train_fragments(p, grid)
    print(po_result_text(po.check_retrenchment_po(abstract, concrete, po.train_retrenchment_data(p, grid))))
    refinement = po.check_refinement_po(abstract, concrete, po.state_identity(), po.always_true, po.always_true)
    print(po_result_text(refinement, title="refinement PO, R = identity"))
    corr = po.corroboration(p)
    print(f"corroboration: {corr.lhs:.6g} <= {corr.rhs:.6g} -> {corr.holds}")


if __name__ == "__main__":
    main()
