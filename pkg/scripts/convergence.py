"""Gap and bound against N, written as CSV for plotting.

Columns: N, gap_exact, gap_simulated, linf_x, linf_v, l2_gap, l2_bound, gronwall_bound

    python scripts/convergence.py --n-max 256 --output convergence.csv
"""

import argparse
import sys

from retrench import analytic, bounds
from retrench.model import linear_ramp, make_params, staircase
from retrench.report import csv_text
from retrench.simulate import GridSpec, integrate

COLUMNS = ("N", "gap_exact", "gap_simulated", "linf_x", "linf_v", "l2_gap", "l2_bound", "gronwall_bound")


def rows(V, T_stop, Ns, grid):
    for N in Ns:
        p = make_params(V, T_stop, N)
        cont = integrate(p, linear_ramp(), grid)
        zoh = integrate(p, staircase(p), grid)
        dx, dv = bounds.linf_deviation(cont, zoh)
        yield (N, analytic.exact_final_gap(p), cont.final.x - zoh.final.x, dx, dv,
               bounds.l2_control_gap_numeric(linear_ramp(), staircase(p), p, grid),
               bounds.l2_control_gap_bound(p), bounds.gronwall_bound(p))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--v", type=float, default=20.0)
    ap.add_argument("--t-stop", type=float, default=10.0)
    ap.add_argument("--n-max", type=int, default=128)
    ap.add_argument("--m", type=int, default=50)
    ap.add_argument("--output", default=None)
    args = ap.parse_args()

    Ns = []
    n = 1
    while n <= args.n_max:
        Ns.append(n)
        n *= 2
    text = csv_text(COLUMNS, rows(args.v, args.t_stop, Ns, GridSpec(args.m)))
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    main()
