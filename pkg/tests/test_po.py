import math

import pytest

from retrench import analytic, bounds
from retrench.model import State, Tabulated, UsageError, make_params
from retrench.po import (
    Check,
    Fragment,
    Verdict,
    always_false,
    always_true,
    check_init_po,
    check_refinement_po,
    check_retrenchment_po,
    corroboration,
    state_identity,
    train_fragments,
    train_retrenchment_data,
)
from retrench.simulate import GridSpec


@pytest.fixture(scope="module")
def fragments(canonical, grid):
    return train_fragments(canonical, grid)


def test_init_po():
    start = State(0.0, 20.0)
    assert check_init_po(start, State(0.0, 20.0), always_true)
    assert not check_init_po(start, State(1.0, 20.0), state_identity())
    assert check_init_po(start, State(1.0, 20.0), always_true)


def test_train_data_predicates(canonical, grid, fragments):
    data = train_retrenchment_data(canonical, grid)
    a, c = fragments
    assert data.R(State(0, 0), State(5, 5))
    w = data.W(a.input, c.input, a.trajectory.initial, c.trajectory.initial)
    assert w and w.values["l2_gap"] <= 1.14996
    o = data.O(a.trajectory.final, c.trajectory.final)
    assert o and o.values["abs_dx"] == pytest.approx(10 / 3, abs=1e-6)
    assert o.values["o_bound"] == pytest.approx(8.0096e4, rel=1e-4)
    assert not data.C(a.trajectory.final, c.trajectory.final)


def test_retrenchment_passes_canonical(canonical, grid, fragments):
    result = check_retrenchment_po(*fragments, train_retrenchment_data(canonical, grid))
    assert result.verdict is Verdict.PASS and result.passed
    w = result.witness
    assert w["W.l2_gap"] <= w["W.l2_gap_bound"]
    assert w["O_final.abs_dx"] <= w["O_final.o_bound"]
    assert w["O_final.abs_dv"] <= 1e-9
    assert w["O_all_samples"] is True and w["C"] is False


def test_retrenchment_negative_control_halved_bound(canonical, grid, fragments):
    data = train_retrenchment_data(canonical, grid, o_bound=analytic.exact_final_gap(canonical) / 2)
    result = check_retrenchment_po(*fragments, data)
    assert result.verdict is Verdict.FAIL_CONCLUSION
    assert result.witness["O_final.abs_dx"] > result.witness["O_final.o_bound"]


def test_retrenchment_perturbed_start(canonical, grid):
    frags = train_fragments(canonical, grid, concrete_initial=State(0.0, canonical.V + 1))
    result = check_retrenchment_po(*frags, train_retrenchment_data(canonical, grid))
    assert result.verdict is Verdict.FAIL_HYPOTHESIS_UNMET
    assert result.witness["W.start_abs_dv"] == 1.0
    # witness still carries the after-state data
    assert "O_final.abs_dx" in result.witness


def test_concession_rescues_conclusion(canonical, grid, fragments):
    base = train_retrenchment_data(canonical, grid, o_bound=0.0)
    data = type(base)(R=base.R, W=base.W, O=base.O, C=always_true)
    assert check_retrenchment_po(*fragments, data).passed


def test_o_checked_throughout(canonical, grid, fragments):
    # O that only fails strictly inside the interval must still fail the PO
    a, c = fragments
    x_mid = a.trajectory.x[len(a.trajectory) // 2]

    def O(x, y):
        return Check(abs(x.x - x_mid) > 1e-12)

    base = train_retrenchment_data(canonical, grid)
    data = type(base)(R=base.R, W=base.W, O=O, C=always_false)
    result = check_retrenchment_po(a, c, data)
    assert result.witness["O_final"] is True
    assert result.witness["O_all_samples"] is False
    assert result.witness["O_all_samples.first_failure_t"] == pytest.approx(5.0)
    assert result.verdict is Verdict.FAIL_CONCLUSION


def test_refinement_po(fragments):
    a, c = fragments
    assert check_refinement_po(a, a, state_identity(), always_true, always_true).passed
    ident = check_refinement_po(a, c, state_identity(), always_true, always_true)
    assert ident.verdict is Verdict.FAIL_CONCLUSION
    assert ident.witness["R_before"] is True and ident.witness["R_after"] is False
    assert ident.witness["R_after.abs_dx"] == pytest.approx(10 / 3, abs=1e-6)
    assert check_refinement_po(a, c, always_true, always_true, always_true).passed
    assert check_refinement_po(a, c, always_true, always_false, always_true).verdict is (
        Verdict.FAIL_HYPOTHESIS_UNMET)


def test_refinement_fails_retrenchment_passes_for_every_N():
    grid = GridSpec(20)
    for N in (1, 2, 3, 5, 8, 13, 21, 34, 55, 64):
        p = make_params(20.0, 10.0, N)
        a, c = train_fragments(p, grid)
        assert check_refinement_po(a, c, state_identity(), always_true, always_true).verdict is (
            Verdict.FAIL_CONCLUSION)
        assert check_retrenchment_po(a, c, train_retrenchment_data(p, grid)).passed


def test_grid_mismatch(canonical):
    a, _ = train_fragments(canonical, GridSpec(10))
    _, c = train_fragments(canonical, GridSpec(20))
    with pytest.raises(UsageError):
        check_retrenchment_po(a, c, train_retrenchment_data(canonical))


def test_fragment_input_must_cover(canonical, fragments):
    with pytest.raises(UsageError):
        Fragment(fragments[0].trajectory, Tabulated.constant(0.0, 5.0))


def test_corroboration(canonical, sweep_sets):
    c = corroboration(canonical)
    assert c.holds
    assert c.lhs == pytest.approx(11 / 12, rel=1e-15)
    assert c.rhs == pytest.approx(22026.4658, rel=1e-8)
    assert all(corroboration(p).holds for p in sweep_sets)
    assert corroboration(make_params(1.0, 1e-6, 1)).holds
    # consistent with the exact gap against the Gronwall bound
    for p in sweep_sets:
        assert (analytic.exact_final_gap(p) <= bounds.gronwall_bound(p)) == corroboration(p).holds
    assert corroboration(make_params(1.0, 1000.0, 1)).rhs == math.inf
