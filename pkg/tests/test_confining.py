from itertools import combinations

import pytest

from mfrag.catalog import uniform
from mfrag.cli import load_setup
from mfrag.confining import (
    confining_sets,
    confining_sets_for,
    good_separation,
    strong_element_audit,
)
from mfrag.connectivity import is_3connected, is_cosegment, is_vertical_3sep, is_z_closed_mask
from mfrag.errors import NotRobustNonStrong, PreconditionViolated
from mfrag.formats import read_mtd
from mfrag.incrimination import SetupContext
from mfrag.lemmas import minor_for
from mfrag.minors import _strong_flags

from conftest import INSTANCES
from oracles import NaiveConfining

U24 = uniform(2, 4)


def _strong_mask(M, N, B):
    if N is None:
        return 0
    si_ok, co_ok = _strong_flags(M, N)
    return sum(1 << i for i in range(M.n) if (si_ok[i] if B >> i & 1 else co_ok[i]))


def test_confining_sets_match_naive_oracle(small_corpus):
    """Every corpus matroid, every basis, every {x, y} inside it."""
    compared = found = 0
    for _, M in small_corpus:
        if M.r < 2:
            continue
        oracle = NaiveConfining(M)
        N = minor_for(M)
        for B in M.bases:
            strong = _strong_mask(M, N, B)
            strong_labels = M.labels(strong)
            for x, y in combinations(M.ordered(B), 2):
                got = {c.G: c.overlap for c in confining_sets_for(M, B, x, y, strong)}
                assert got == oracle.find(M.labels(B), x, y, strong_labels)
                compared += 1
                found += len(got)
    assert compared > 1000 and found > 0


def test_overlap_two_sets_are_cosegments(small_corpus):
    for _, M in small_corpus:
        if M.r < 2 or not is_3connected(M):
            continue
        for B in M.bases:
            for x, y in combinations(M.ordered(B), 2):
                for c in confining_sets_for(M, B, x, y, M.full):
                    assert c.T | c.T2 == c.G
                    if c.overlap == 2:
                        assert len(c.G) == 4 and is_cosegment(M, M.mask(c.G))
                    else:
                        assert c.strong_witness in c.G


def test_four_point_cosegment_in_u46():
    M = uniform(4, 6)
    found = confining_sets_for(M, M.mask(list("1234")), "1", "2", 0)
    assert [sorted(c.G) for c in found] == [["1", "2", "5", "6"]]
    assert found[0].overlap == 2 and found[0].strong_witness is None


def test_no_triads_means_no_confining_sets():
    M = uniform(2, 5)
    assert confining_sets_for(M, M.mask(["1", "2"]), "1", "2", M.full) == []
    with pytest.raises(PreconditionViolated):
        confining_sets_for(M, M.mask(["1", "2"]), "1", "3", 0)


def test_overlap_one_needs_a_strong_witness(small_corpus):
    """Some overlap-1 candidate exists that only survives with strong elements."""
    for _, M in small_corpus:
        if M.r < 2:
            continue
        for B in M.bases:
            for x, y in combinations(M.ordered(B), 2):
                with_all = confining_sets_for(M, B, x, y, M.full)
                if any(c.overlap == 1 for c in with_all):
                    without = confining_sets_for(M, B, x, y, 0)
                    assert all(c.overlap == 2 for c in without)
                    return
    pytest.fail("no overlap-1 confining set in the corpus")


def test_confining_sets_of_a_setup(instances):
    ctx = load_setup(str(instances / "ag23e.ctx"))
    oracle = NaiveConfining(ctx.Mp)
    got = {c.G: c.overlap for c in confining_sets(ctx)}
    assert got == oracle.find(ctx.B, ctx.x, ctx.y, ctx.Mp.labels(ctx.strong_mask()))


def test_audit_passes_on_the_ag23e_setup(instances):
    ctx = load_setup(str(instances / "ag23e.ctx"))
    report = strong_element_audit(ctx)
    assert report.ok
    assert len(report.strong_outside) <= 2


def test_audit_flags_three_strong_elements(small_corpus):
    """A deletion pair with no incriminating matrix need not satisfy the lemmas."""
    M = dict(small_corpus)["gf3-n8-r3-10"]
    ctx = SetupContext(M, U24, "1", "2", frozenset({"3", "4", "6"}), "3", "4")
    report = strong_element_audit(ctx)
    assert report.strong_outside == ("5", "6", "7")
    assert report.checks["atmost2outxy"] and report.checks["nostrongbasis"]
    assert {"element": "6"} in report.checks["nostrongbasis"]
    assert not report.ok


@pytest.fixture(scope="module")
def ternary9():
    return read_mtd(INSTANCES / "ternary9-r3.mtd")


def test_good_separation_postconditions(ternary9):
    ctx = SetupContext(ternary9, U24, "1", "3", frozenset({"2", "4", "6"}), "2", "4")
    assert is_3connected(ctx.Mp)
    g = good_separation(ctx, "5")
    W = ctx.Mp.dual() if g.in_dual else ctx.Mp
    X, Y, zb = W.mask(g.record.X), W.mask(g.record.Y), W.bit("5")
    assert is_vertical_3sep(W, X, zb, Y) and is_z_closed_mask(W, zb, Y)
    assert g.z_closed_before and g.n_side_small and g.flexible_outside_s_prime
    assert len(g.trimmed) <= 1
    # Without an incriminating matrix S' need not sit inside Y; it is reported.
    assert not g.s_prime_in_Y and not g.ok


def test_good_separation_rejects_strong_elements(ternary9):
    ctx = SetupContext(ternary9, U24, "1", "3", frozenset({"2", "4", "6"}), "2", "4")
    strong = ctx.Mp.labels(ctx.strong_mask())
    for z in strong:
        if z not in ("2", "4"):
            with pytest.raises(NotRobustNonStrong):
                good_separation(ctx, z)
    with pytest.raises(NotRobustNonStrong):
        good_separation(ctx, "2")
