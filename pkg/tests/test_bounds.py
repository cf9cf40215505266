import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from retrench import analytic, bounds
from retrench.model import Tabulated, eval_control, linear_ramp, make_params, staircase
from retrench.simulate import GridSpec, integrate


def exact_l2_gap(p):
    """||u - u_D||_2 by adaptive quadrature, one period at a time."""
    total = 0.0
    for k in range(1, p.N + 1):
        val, _ = quad(lambda t: (-p.a * t + k * p.a_D * p.T) ** 2, (k - 1) * p.T, k * p.T,
                      epsabs=1e-14, epsrel=1e-13)
        total += val
    return math.sqrt(total)


def test_train_lipschitz(canonical):
    lip = bounds.train_lipschitz(canonical)
    assert (lip.k_f, lip.k_u) == (1.0, 1.0)
    assert lip.K_f == canonical.T_stop


def test_k2_constant():
    assert bounds.k2_constant(bounds.LipschitzData(1, 1, 10.0)) == pytest.approx(
        math.exp(10) * math.sqrt(10), rel=1e-15)
    assert bounds.k2_constant(bounds.LipschitzData(1, 1, 10.0)) == pytest.approx(6.9654e4, rel=1e-4)
    assert bounds.k2_constant(bounds.LipschitzData(0, 1, 4.0)) == 2.0
    assert bounds.k2_constant(bounds.LipschitzData(1, 1, 1.0), T_stop=1e-12) < 1e-5
    assert bounds.k2_constant(bounds.LipschitzData(1, 1, 1e4)) == math.inf
    with pytest.raises(ValueError):
        bounds.LipschitzData(-1, 1, 1.0)


def test_staircase_gap_bound(canonical):
    assert bounds.staircase_gap_bound(canonical) == pytest.approx(4 / 11, rel=1e-15)
    ramp, stairs = linear_ramp(), staircase(canonical)
    eps = 1e-12
    start = eval_control(ramp, canonical, eps) - eval_control(stairs, canonical, eps)
    end = eval_control(ramp, canonical, 10.0) - eval_control(stairs, canonical, 10.0)
    assert start == pytest.approx(canonical.a_D * canonical.T, abs=1e-9)
    assert end == pytest.approx(-canonical.a_D * canonical.T, abs=1e-9)


@given(V=st.floats(1, 50), T_stop=st.floats(1, 12), N=st.integers(1, 64))
@settings(max_examples=40, deadline=None)
def test_pointwise_staircase_bound(V, T_stop, N):
    p = make_params(V, T_stop, N)
    ramp, stairs = linear_ramp(), staircase(p)
    bound = bounds.staircase_gap_bound(p)
    for t in np.linspace(0.0, T_stop, 2001):
        gap = abs(eval_control(ramp, p, t) - eval_control(stairs, p, t))
        assert gap <= bound + 1e-12


def test_l2_bound_values(canonical):
    assert bounds.l2_control_gap_bound(canonical) == pytest.approx(4 / 11 * math.sqrt(10), rel=1e-15)
    assert bounds.l2_control_gap_bound(canonical) == pytest.approx(1.14996, abs=1e-4)
    # shrinking T_stop at fixed deceleration (V ~ T_stop^2) drives the bound to 0
    shrinking = [bounds.l2_control_gap_bound(make_params(0.2 * t**2, t, 10)) for t in (1e-1, 1e-3, 1e-5)]
    assert shrinking == sorted(shrinking, reverse=True) and shrinking[-1] < 1e-8


def test_l2_bound_decreases_with_N():
    values = [bounds.l2_control_gap_bound(make_params(20, 10, n)) for n in (1, 2, 4, 8, 16, 32, 64)]
    assert all(b < a for a, b in zip(values, values[1:]))


def test_l2_numeric_against_quadrature(canonical):
    exact = exact_l2_gap(canonical)
    ramp, stairs = linear_ramp(), staircase(canonical)
    assert bounds.l2_control_gap_numeric(ramp, ramp, canonical) == 0.0
    fine = bounds.l2_control_gap_numeric(ramp, stairs, canonical, GridSpec(1000))
    finer = bounds.l2_control_gap_numeric(ramp, stairs, canonical, GridSpec(2000))
    assert abs(fine - finer) <= 1e-6
    assert finer == pytest.approx(exact, abs=1e-6)
    assert bounds.l2_control_gap_numeric(ramp, stairs, canonical) <= bounds.l2_control_gap_bound(canonical)


def test_l2_numeric_handles_tabulated_breakpoints():
    p = make_params(1.0, 2.0, 1)
    a = Tabulated(knots=(0.0, 0.5, 2.0), values=(1.0, 0.0))
    b = Tabulated.constant(0.0, 2.0)
    # jump at 0.5 is off the hold grid: panels must split there
    assert bounds.l2_control_gap_numeric(a, b, p, GridSpec(3)) == pytest.approx(math.sqrt(0.5), rel=1e-14)


def test_gronwall_bound(canonical):
    g = bounds.gronwall_bound(canonical)
    assert g == pytest.approx(math.exp(10) * 4 / 11 * 10, rel=1e-15)
    assert g == pytest.approx(8.0096e4, rel=1e-4)
    factored = bounds.k2_constant(bounds.train_lipschitz(canonical)) * bounds.l2_control_gap_bound(canonical)
    assert g == pytest.approx(factored, rel=1e-14)
    seq = [bounds.gronwall_bound(make_params(20, 10, n)) for n in (1, 10, 100, 10_000, 10**7)]
    assert all(b < a for a, b in zip(seq, seq[1:]))
    assert seq[-1] < 1e-6 * seq[0]
    assert bounds.gronwall_bound(make_params(1, 1000, 1)) == math.inf


def test_linf_deviation(canonical, grid):
    cont = integrate(canonical, linear_ramp(), grid)
    zoh = integrate(canonical, staircase(canonical), grid)
    assert bounds.linf_deviation(cont, cont) == (0.0, 0.0)
    dx, dv = bounds.linf_deviation(cont, zoh)
    assert dx == pytest.approx(10 / 3, abs=1e-6)
    assert int(np.argmax(np.abs(cont.x - zoh.x))) == len(cont) - 1
    assert dx <= 8.0096e4 and dv <= 8.0096e4


def test_linf_dense_search_peaks_at_stop(canonical):
    ts = np.linspace(0, 10, 20001)
    gaps = [analytic.continuous_state(canonical, t).x - analytic.discrete_position(canonical, t) for t in ts]
    assert np.all(np.diff(gaps) >= -1e-12)
    assert max(gaps) == pytest.approx(10 / 3, abs=1e-9)


def test_bound_report(canonical, grid):
    cont = integrate(canonical, linear_ramp(), grid)
    zoh = integrate(canonical, staircase(canonical), grid)
    rep = bounds.bound_report(canonical, cont, zoh, grid)
    assert rep.sound
    assert rep.measured_linf_x <= rep.numeric_bound <= rep.gronwall_bound
    assert rep.staircase_bound == pytest.approx(4 / 11)
    broken = dataclasses.replace(rep, gronwall_bound=rep.measured_linf_x / 2)
    assert not broken.sound
    names = [k for k, _ in rep.items()]
    assert names[-1] == "sound" and "gronwall_bound" in names


def test_bound_report_random_sweep(sweep_sets, grid):
    for p in sweep_sets:
        cont = integrate(p, linear_ramp(), grid)
        zoh = integrate(p, staircase(p), grid)
        rep = bounds.bound_report(p, cont, zoh, grid)
        assert rep.sound
        assert max(rep.measured_linf_x, rep.measured_linf_v) <= rep.numeric_bound <= rep.gronwall_bound
