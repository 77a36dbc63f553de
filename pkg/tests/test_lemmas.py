import pytest

from mfrag.catalog import catalog, uniform
from mfrag.connectivity import is_3connected
from mfrag.errors import UnknownLemma
from mfrag.fans import is_fan
from mfrag.isomorphism import isomorphic
from mfrag.lemmas import lemma_ids, minor_for, verify, verify_many
from mfrag.matroid import simplify

FANENDS_COUNTEREXAMPLES = {"gf3-n7-r3-3", "gf3-n7-r4-8"}


@pytest.fixture(scope="module")
def results(request):
    corpus = request.getfixturevalue("small_corpus")
    return {lemma: verify_many(lemma, corpus) for lemma in lemma_ids()}


def test_lemma_registry():
    assert len(lemma_ids()) == 17
    with pytest.raises(UnknownLemma):
        verify("nonsense", uniform(2, 4))


@pytest.mark.parametrize("lemma", [l for l in lemma_ids() if l != "fanends"])
def test_lemma_holds_on_corpus(results, lemma):
    res = results[lemma]
    assert res.checks > 0, f"{lemma} was never exercised"
    assert res.passed, res.failures[:3]


def test_fan_ends_counterexamples_are_reported(results):
    res = results["fanends"]
    assert not res.passed
    assert {f["instance"] for f in res.failures} == FANENDS_COUNTEREXAMPLES
    assert len(res.failures) == 24


def test_fan_ends_counterexample_is_genuine(small_corpus):
    """A 5-element maximal fan in rank 3 whose spoke end still gives a 3-connected si(M/f)."""
    M = dict(small_corpus)["gf3-n7-r3-3"]
    assert is_3connected(M)
    order = ["2", "1", "7", "6", "5"]
    assert is_fan(M, order)
    rest = [e for e in M.ground if e not in order]
    assert not any(is_fan(M, [e] + order) or is_fan(M, order + [e]) for e in rest)
    si = simplify(M.contract(["5"]))[0]
    assert isomorphic(si, uniform(2, 3)) is not None and is_3connected(si)


def test_parallel_run_matches_serial(small_corpus):
    entries = [e for e in small_corpus if e[1].n <= 7]
    serial = verify_many("uncrossing", entries, jobs=1)
    parallel = verify_many("uncrossing", entries, jobs=2)
    assert serial.to_json() == parallel.to_json()


def test_minor_choice():
    assert isomorphic(minor_for(uniform(2, 5)), uniform(2, 4)) is not None
    assert isomorphic(minor_for(catalog("F7")), catalog("MK4")) is not None
    assert minor_for(uniform(1, 3)) is None


def test_result_json_shape(small_corpus):
    res = verify_many("bixby", small_corpus[:5])
    data = res.to_json()
    assert data["lemma"] == "bixby" and data["instance_count"] == 5
    assert data["passed"] and data["failed_instances"] == 0
