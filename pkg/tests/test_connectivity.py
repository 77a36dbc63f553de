from itertools import combinations

import pytest
from hypothesis import given, settings

from mfrag.catalog import catalog, uniform, wheel
from mfrag.connectivity import (
    cl_or_clstar_membership,
    detachable_pairs,
    fcl,
    has_vertical_3sep_through,
    is_3connected,
    is_3connected_up_to_series,
    is_connected,
    is_vertical_3sep,
    is_z_closed_mask,
    lam,
    si_is_3connected,
    vertical_3seps_through,
    z_closed_separation,
)
from mfrag.errors import HypothesisFailed, NoVerticalSeparation, Not3Connected, NotAFan
from mfrag.fans import fan_end_kind, fan_type, fans, is_fan
from mfrag.matroid import relabel, series_extension, two_sum
from mfrag.paths import is_path_of_3seps, path_of_3seps, single_step_witness
from oracles import label_bases, rank_of
from test_matroid import gf3_matroids


def brute_lambda(bases, ground, X):
    Y = set(ground) - set(X)
    return rank_of(bases, X) + rank_of(bases, Y) - rank_of(bases, ground)


def brute_3connected(M):
    bases = label_bases(M)
    g = list(M.ground)
    for k in (1, 2):
        for size in range(k, len(g) - k + 1):
            for X in combinations(g, size):
                if brute_lambda(bases, g, X) < k:
                    return False
    return True


def test_lambda_values():
    assert lam(uniform(2, 4), ["1", "2"]) == 2
    K4 = catalog("MK4")
    assert lam(K4, ["12", "13", "23"]) == 2


def test_three_connectivity_examples():
    assert is_3connected(uniform(2, 4))
    assert is_3connected(catalog("MK4"))
    a = relabel(uniform(2, 4), {"1": "a", "2": "b", "3": "c", "4": "p"})
    b = relabel(uniform(2, 4), {"1": "d", "2": "e", "3": "f", "4": "p"})
    assert not is_3connected(two_sum(a, b, "p"))


@settings(max_examples=60, deadline=None)
@given(gf3_matroids(max_n=7))
def test_three_connectivity_matches_brute_force(M):
    assert is_3connected(M) == brute_3connected(M)


def test_up_to_series_pairs():
    U24 = uniform(2, 4)
    one = series_extension(U24, "1", "5")
    assert is_3connected_up_to_series(one)
    two = series_extension(one, "1", "6")
    assert not is_3connected_up_to_series(two)
    assert is_3connected_up_to_series(U24)


def test_vertical_separations():
    assert all(not has_vertical_3sep_through(uniform(2, 5), z) for z in uniform(2, 5).ground)
    K4 = catalog("MK4")
    assert all(not vertical_3seps_through(K4, z) for z in K4.ground)
    W4 = wheel(4)
    for s in ["s1", "s2", "s3", "s4"]:
        assert not si_is_3connected(W4.contract([s]))
        recs = vertical_3seps_through(W4, s)
        assert recs
        for rec in recs:
            assert is_vertical_3sep(W4, W4.mask(rec.X), W4.bit(s), W4.mask(rec.Y))
    for r in ["r1", "r2", "r3", "r4"]:
        assert not vertical_3seps_through(W4, r)


def test_closure_membership():
    flags = cl_or_clstar_membership(uniform(2, 4), ["1", "2"], "3")
    assert flags["in_cl"]
    M = catalog("MK4")
    triad = ["12", "13", "14"]
    rest = [e for e in M.ground if e not in triad]
    for e in triad:
        flags = cl_or_clstar_membership(M, [t for t in triad if t != e], e)
        assert flags["in_clstar"]
    assert fcl(M, rest) == set(M.ground)


def test_full_closure_in_wheel():
    W4 = wheel(4)
    full = fcl(W4, ["r1", "s1"])
    assert {"r1", "s1", "s2"} <= full


def test_fans_in_small_matroids():
    K4 = catalog("MK4")
    assert is_fan(K4, ["12", "13", "23", "34"])
    assert fan_type(K4, ["12", "13", "23", "34"], ["12", "23", "14"]) == "I"
    whirl_fans = fans(catalog("whirl(3)"))
    assert whirl_fans and all(len(f.ordering) >= 5 for f in whirl_fans)
    W4 = wheel(4)
    order = ["r1", "s2", "r2", "s3"]
    assert is_fan(W4, order)
    assert fan_end_kind(W4, order, "r1") == "spoke" or fan_end_kind(W4, order, "r1") == "rim"
    with pytest.raises(NotAFan):
        fan_end_kind(W4, order, "s2")


def test_paths_in_wheel():
    W4 = wheel(4)
    A, Z, B = ["r1", "s1"], ["s2", "r2"], ["r3", "s3", "r4", "s4"]
    for z in Z:
        assert single_step_witness(W4, A, Z, B, z) is not None
    path = path_of_3seps(W4, A, Z, B)
    assert is_path_of_3seps(W4, [sorted(p) for p in path.parts])
    assert len(path.parts) == 4
    assert path_of_3seps(W4, A, [], ["s2", "r2", "r3", "s3", "r4", "s4"]).parts[0] == set(A)


def test_path_hypothesis_failure_is_reported():
    U = uniform(3, 7)
    with pytest.raises(HypothesisFailed):
        path_of_3seps(U, ["1", "2"], ["3"], ["4", "5", "6", "7"])


def _brute_detachable(M):
    out = []
    for a, b in combinations(M.ground, 2):
        ops = []
        if brute_3connected(M.delete([a, b])):
            ops.append("delete")
        if brute_3connected(M.contract([a, b])):
            ops.append("contract")
        if ops:
            out.append({"pair": [a, b], "ops": ops})
    return out


@pytest.mark.parametrize("name", ["U(2,5)", "U(3,6)", "MK4", "wheel(4)", "F7"])
def test_detachable_pairs_match_brute_force(name):
    M = catalog(name)
    assert detachable_pairs(M) == _brute_detachable(M)


def test_detachable_pair_values():
    assert len(detachable_pairs(uniform(2, 5))) == 10
    assert all(d["ops"] == ["delete"] for d in detachable_pairs(uniform(2, 5)))
    assert detachable_pairs(uniform(3, 6)) == []
    assert detachable_pairs(catalog("MK4")) == []


def test_z_closed_separations_over_corpus(small_corpus):
    """Whenever a record comes back it is vertical and z-closed.

    Without an N-minor to bound it, growing Y by full closure can absorb
    every element, in which case the procedure reports failure instead.
    """
    returned = refused = 0
    for _, M in small_corpus:
        if not is_3connected(M):
            continue
        for z in M.ground:
            if si_is_3connected(M.contract([z])):
                continue
            try:
                rec = z_closed_separation(M, z)
            except NoVerticalSeparation:
                refused += 1
                continue
            zb = M.bit(z)
            X, Y = M.mask(rec.X), M.mask(rec.Y)
            assert is_vertical_3sep(M, X, zb, Y)
            assert is_z_closed_mask(M, zb, Y)
            assert rec.z_closed_Y
            returned += 1
    assert returned > 0 and refused > 0


def test_z_closed_separation_preconditions():
    with pytest.raises(NoVerticalSeparation):
        z_closed_separation(uniform(2, 5), "1")
    a = relabel(uniform(2, 4), {"1": "a", "2": "b", "3": "c", "4": "p"})
    b = relabel(uniform(2, 4), {"1": "d", "2": "e", "3": "f", "4": "p"})
    with pytest.raises(Not3Connected):
        z_closed_separation(two_sum(a, b, "p"), "a")


def test_connected_examples():
    assert is_connected(uniform(2, 4))
    assert not is_connected(uniform(4, 4))
