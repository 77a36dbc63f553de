from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mfrag.catalog import uniform
from mfrag.cli import load_setup
from mfrag.errors import (
    InvalidSetup,
    LabelMismatch,
    MissingCompanion,
    NonSquareSelection,
    PivotNotAllowable,
)
from mfrag.incrimination import (
    Reason,
    SetupContext,
    allowable_pivot,
    bad_submatrix_nonzero,
    incriminates,
    incrimination_dichotomy,
    verify_companion,
)
from mfrag.matroid import relabel
from mfrag.partial_field import pf_make
from mfrag.pmatrix import PMatrix, matroid_from_pmatrix
from oracles import bases_of_standard_form, label_bases
from test_pmatrix import matrix_strategy

GF3 = pf_make("GF(3)")
GF5 = pf_make("GF(5)")
U24 = uniform(2, 4)


def ones_over_gf3():
    return PMatrix.from_entries(GF3, ["1", "2"], ["3", "4"], [[1, 1], [1, 1]])


def test_incriminating_set_examples():
    A = ones_over_gf3()
    hit = incriminates(U24, A, ["1", "2", "3", "4"])
    assert hit.reason is Reason.ZERO_BUT_BASIS and hit.det_value.is_zero()
    assert incriminates(U24, A, ["1", "3"]) is None
    with pytest.raises(NonSquareSelection):
        incriminates(U24, A, ["1", "3", "4"])


def test_genuine_representation_has_no_incriminating_set():
    A = PMatrix.from_entries(GF3, ["1", "2"], ["3", "4"], [[1, 1], [1, 2]])
    assert incrimination_dichotomy(U24, A).represents
    for Z in (["1", "3"], ["2", "4"], ["1", "2", "3", "4"]):
        assert incriminates(U24, A, Z) is None


def test_dichotomy_examples():
    d = incrimination_dichotomy(U24, ones_over_gf3())
    assert not d.represents and d.witness.Z == {"1", "2", "3", "4"}
    reg = pf_make("regular")
    bad = PMatrix.from_entries(reg, ["x1", "x2"], ["y1", "y2"], [[1, 1], [-1, 1]])
    M = relabel(U24, dict(zip("1234", ["x1", "x2", "y1", "y2"])))
    d = incrimination_dichotomy(M, bad)
    assert d.witness.reason is Reason.NOT_IN_P
    assert d.to_json()["witness"]["det"] == "2"
    with pytest.raises(LabelMismatch):
        incrimination_dichotomy(uniform(2, 5), ones_over_gf3())


@pytest.mark.parametrize("p", [3, 5])
@settings(max_examples=50, deadline=None)
@given(data=st.data())
def test_dichotomy_is_exclusive_and_exhaustive(p, data):
    """Over a prime field, Represents exactly when the basis families agree."""
    rows, cols, entries = data.draw(matrix_strategy(p))
    other = data.draw(st.lists(st.lists(st.integers(0, p - 1), min_size=len(cols), max_size=len(cols)), min_size=len(rows), max_size=len(rows)))
    pf = pf_make(f"GF({p})")
    A = PMatrix.from_entries(pf, rows, cols, entries)
    M = matroid_from_pmatrix(PMatrix.from_entries(pf, rows, cols, other))
    d = incrimination_dichotomy(M, A)
    same = bases_of_standard_form(rows, cols, entries, p) == label_bases(M)
    assert d.represents == same
    if not d.represents:
        assert incriminates(M, A, d.witness.Z) == d.witness


def test_companion_conditions_hold_for_u26(instances):
    ctx = load_setup(str(instances / "u26-incriminated.ctx"))
    D = ctx.A.restrict(["1", "2", "3", "4"])
    check = verify_companion(ctx.M, ctx.A, "5", "6", D, ["1", "2", "3", "4"])
    assert check.ok


def test_companion_condition_failures():
    reg = pf_make("regular")
    rows, cols = ["r1", "r2"], ["c1", "c2", "a", "b"]
    A = PMatrix.from_entries(reg, rows, cols, [[1, 0, 1, 0], [-1, 1, 1, 1]])
    M = matroid_from_pmatrix(PMatrix.from_entries(GF3, rows, cols, [[1, 0, 1, 0], [2, 1, 1, 1]]))
    D = A.restrict(["r1", "r2", "c1", "c2"])
    check = verify_companion(M, A, "a", "b", D, ["r1", "r2", "c1", "c2"])
    assert check.minus_a_pmatrix and not check.minus_b_pmatrix
    assert not check.ok
    other = PMatrix.from_entries(reg, ["r1", "r2"], ["c1", "c2"], [[1, 1], [1, 0]])
    assert not verify_companion(M, A, "a", "b", other, ["r1", "r2", "c1", "c2"]).scaling_to_D


def _second_form_context():
    """B = {x, y, p}; M differs from M[I|A] only on the square {x, y, a, b}."""
    rows, cols = ["x", "y", "p"], ["q", "c", "a", "b"]
    A = PMatrix.from_entries(GF5, rows, cols, [[1, 1, 1, 1], [1, 2, 1, 2], [1, 0, 0, 0]])
    M = matroid_from_pmatrix(PMatrix.from_entries(GF5, rows, cols, [[1, 1, 1, 1], [1, 2, 1, 1], [1, 0, 0, 0]]))
    return SetupContext(M, U24, "a", "b", frozenset(rows), "x", "y", A)


def test_allowable_pivot_first_form(instances):
    ctx = load_setup(str(instances / "u26-incriminated.ctx"))
    new = allowable_pivot(ctx, "1", "3")
    assert (new.x, new.y) == ("3", "2")
    assert new.B == {"3", "2"}
    assert incriminates(new.M, new.A, ["5", "6", "3", "2"]) is not None


def test_allowable_pivot_second_form():
    ctx = _second_form_context()
    assert incriminates(ctx.M, ctx.A, ["a", "b", "x", "y"]).reason is Reason.NONZERO_BUT_DEPENDENT
    new = allowable_pivot(ctx, "p", "q")
    assert (new.x, new.y) == ("x", "y") and new.B == {"x", "y", "q"}
    assert incriminates(new.M, new.A, ["a", "b", "x", "y"]) is not None


def test_pivots_that_are_not_allowed():
    ctx = _second_form_context()
    with pytest.raises(PivotNotAllowable):
        allowable_pivot(ctx, "p", "c")
    with pytest.raises(PivotNotAllowable):
        allowable_pivot(ctx, "x", "a")
    rows, cols = ["x", "y", "p"], ["q", "a", "b"]
    A = PMatrix.from_entries(GF5, rows, cols, [[1, 1, 1], [1, 1, 2], [1, 1, 0]])
    bad = SetupContext(ctx.M, U24, "a", "b", frozenset(rows), "x", "y", A)
    with pytest.raises(PivotNotAllowable):
        allowable_pivot(bad, "p", "q")
    with pytest.raises(MissingCompanion):
        allowable_pivot(SetupContext(ctx.M, U24, "a", "b", frozenset(rows), "x", "y"), "p", "q")


def test_bad_submatrix(instances):
    ctx = load_setup(str(instances / "u26-incriminated.ctx"))
    assert bad_submatrix_nonzero(ctx)
    zero_xb = PMatrix.from_entries(GF5, ["x", "y", "p"], ["q", "c", "a", "b"], [[1, 1, 1, 0], [1, 2, 1, 2], [1, 0, 0, 0]])
    assert not bad_submatrix_nonzero(replace(_second_form_context(), A=zero_xb))
    with pytest.raises(MissingCompanion):
        bad_submatrix_nonzero(load_setup(str(instances / "u26-size.ctx")))


def test_setup_validation(instances):
    ctx = load_setup(str(instances / "u26-incriminated.ctx"))
    assert ctx.validate() is ctx
    with pytest.raises(InvalidSetup):
        SetupContext(ctx.M, U24, "1", "2", frozenset({"1", "2"}), "1", "2").validate()
    M = uniform(3, 6)
    with pytest.raises(InvalidSetup):
        SetupContext(M, U24, "5", "6", frozenset({"1", "2"}), "1", "2").validate()
