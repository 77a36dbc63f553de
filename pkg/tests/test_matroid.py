import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mfrag.catalog import catalog, catalog_names, is_binary, uniform, vector_matroid
from mfrag.connectivity import is_3connected, is_connected, lam
from mfrag.deltawye import delta_wye_relatives, delta_y, wye_delta
from mfrag.errors import (
    BadBasepoint,
    EmptyGroundSet,
    ExchangeAxiomViolation,
    LabelCollision,
    NotATriangle,
    UnknownName,
)
from mfrag.isomorphism import isomorphic
from mfrag.matroid import (
    matroid_from_bases,
    minor_B,
    relabel,
    series_classes,
    simplify,
    cosimplify,
    two_sum,
)
from oracles import brute_isomorphic, label_bases, minor_bases, rank_of


@st.composite
def gf3_matroids(draw, max_rank=4, max_n=7):
    r = draw(st.integers(1, max_rank))
    n = draw(st.integers(r, max_n))
    vecs = [tuple(1 if i == j else 0 for i in range(r)) for j in range(r)]
    for _ in range(n - r):
        vecs.append(tuple(draw(st.lists(st.integers(0, 2), min_size=r, max_size=r))))
    return vector_matroid("GF(3)", [str(i) for i in range(1, n + 1)], vecs)


def test_building_from_bases():
    U12 = matroid_from_bases(["1", "2"], [["1"], ["2"]])
    assert U12 == uniform(1, 2)
    U24 = matroid_from_bases("1234", [[a, b] for a in "1234" for b in "1234" if a < b])
    assert U24 == uniform(2, 4)
    with pytest.raises(ExchangeAxiomViolation):
        matroid_from_bases("123", [["1"], ["2", "3"]])
    with pytest.raises(EmptyGroundSet):
        matroid_from_bases([], [[]])


def test_rank_and_closure():
    U24 = uniform(2, 4)
    assert U24.rank(["1"]) == 1 and U24.closure(["1"]) == {"1"}
    assert U24.closure(["1", "2"]) == set(U24.ground)
    K4 = catalog("MK4")
    assert K4.closure(["12", "13"]) == {"12", "13", "23"}


def test_circuits():
    assert {frozenset(c) for c in uniform(2, 4).circuits()} == {frozenset(c) for c in ["123", "124", "134", "234"]}
    assert uniform(1, 2).circuits() == [frozenset({"1", "2"})]
    circ = catalog("MK4").circuits()
    assert len(circ) == 7
    assert sorted(len(c) for c in circ) == [3, 3, 3, 3, 4, 4, 4]


def test_dual_and_minors():
    U24, U25 = uniform(2, 4), uniform(2, 5)
    assert U24.dual() == U24
    assert U25.delete(["5"]) == U24
    assert U25.contract(["5"]) == uniform(1, 4)
    M = minor_B(U24, ["1", "2"], ["2", "3"])
    assert M.ground == ("2", "3")
    assert label_bases(M) == {frozenset({"2"}), frozenset({"3"})}
    assert minor_B(U24, ["1", "2"], U24.ground) == U24
    with pytest.raises(EmptyGroundSet):
        minor_B(U24, ["1", "2"], [])


def test_simplification_keeps_smallest_label():
    M = uniform(2, 5).contract(["1"])
    si, cmap = simplify(M)
    assert si.ground == ("2",) and si.r == 1
    assert cmap["2"] == {"2", "3", "4", "5"}
    assert simplify(uniform(2, 4))[0] == uniform(2, 4)


def test_isomorphism_basics():
    U24 = uniform(2, 4)
    assert isomorphic(U24, U24) is not None
    other = relabel(U24, dict(zip("1234", "abcd")))
    f = isomorphic(U24, other)
    assert f is not None and set(f.values()) == set("abcd")
    assert isomorphic(U24, uniform(1, 4)) is None


def test_two_sum():
    a = relabel(uniform(2, 4), {"1": "a", "2": "b", "3": "c", "4": "p"})
    b = relabel(uniform(2, 4), {"1": "d", "2": "e", "3": "f", "4": "p"})
    S = two_sum(a, b, "p")
    assert S.n == 6 and S.r == 3
    assert is_connected(S) and not is_3connected(S)
    assert lam(S, ["a", "b", "c"]) == 1
    loopy = matroid_from_bases(["p", "q"], [["q"]])
    with pytest.raises(BadBasepoint):
        two_sum(a, loopy, "p")
    with pytest.raises(LabelCollision):
        two_sum(a, relabel(uniform(2, 4), {"1": "a", "2": "x", "3": "y", "4": "p"}), "p")


def test_catalog():
    assert isomorphic(catalog("whirl(2)"), uniform(2, 4)) is not None
    assert is_binary(catalog("MK4")) and not is_binary(uniform(2, 4))
    F7 = catalog("F7")
    assert (F7.n, F7.r, len(F7.bases)) == (7, 3, 28)
    assert catalog("F7*") == F7.dual()
    with pytest.raises(UnknownName):
        catalog("nonsense")
    for name in catalog_names():
        M = catalog(name)
        assert M.n <= 16


def test_delta_y_on_k4_gives_k23():
    K4 = catalog("MK4")
    K23 = catalog("K23")
    for T in K4.triangles():
        assert isomorphic(delta_y(K4, K4.labels(T)), K23) is not None
    assert delta_y(uniform(2, 4), ["1", "2", "3"]).n == 4
    with pytest.raises(NotATriangle):
        delta_y(K4, ["12", "13", "14"])


@pytest.mark.parametrize("name", catalog_names())
def test_delta_y_round_trip_over_catalog(name):
    M = catalog(name)
    for T in M.triangles():
        labels = M.labels(T)
        D = delta_y(M, labels)
        if D.crk(D.mask(labels)) == 3 and D.mask(labels) in set(D.triads()):
            assert isomorphic(wye_delta(D, labels), M) is not None


def test_delta_wye_relatives_of_ag23e():
    rel = delta_wye_relatives(catalog("AG23e"))
    assert [(M.n, M.r) for M in rel] == [(8, 3), (8, 4), (8, 5)]


@settings(max_examples=50, deadline=None)
@given(gf3_matroids())
def test_rank_matches_bases(M):
    bases = label_bases(M)
    rng = random.Random(M.n * 31 + len(bases))
    for _ in range(10):
        S = [e for e in M.ground if rng.random() < 0.5]
        assert M.rank(S) == rank_of(bases, S)
        assert M.corank(S) == len(S) + rank_of(bases, set(M.ground) - set(S)) - M.r


@settings(max_examples=50, deadline=None)
@given(gf3_matroids(), st.data())
def test_minors_match_rank_function(M, data):
    e = data.draw(st.sampled_from(M.ground))
    bases = label_bases(M)
    assert label_bases(M.delete([e])) == minor_bases(bases, M.ground, (), (e,))
    assert label_bases(M.contract([e])) == minor_bases(bases, M.ground, (e,), ())
    assert M.contract([e]).dual() == M.dual().delete([e])
    assert M.dual().dual() == M


@settings(max_examples=40, deadline=None)
@given(gf3_matroids(max_n=6), st.randoms(use_true_random=False))
def test_isomorphism_against_brute_force(M, rnd):
    labels = list(M.ground)
    shuffled = labels[:]
    rnd.shuffle(shuffled)
    N = relabel(M, dict(zip(labels, shuffled)))
    assert isomorphic(M, N) is not None
    D = M.dual()
    assert (isomorphic(M, D) is not None) == brute_isomorphic(label_bases(M), M.ground, label_bases(D), D.ground)


@settings(max_examples=40, deadline=None)
@given(gf3_matroids())
def test_series_classes_partition_ground(M):
    classes = series_classes(M)
    total = 0
    for c in classes:
        assert total & c == 0
        total |= c
    co, _ = cosimplify(M)
    assert co.n <= M.n
