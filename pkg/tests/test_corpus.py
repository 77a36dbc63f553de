import json
from itertools import combinations, product

import pytest

from mfrag.catalog import catalog, catalog_names
from mfrag.connectivity import is_3connected
from mfrag.corpus import gf_corpus, load_corpus, parse_corpus_spec
from mfrag.errors import CorpusTooLarge
from mfrag.isomorphism import isomorphic
from mfrag.matroid import matroid_from_bases
from oracles import bases_of_standard_form, brute_isomorphic, label_bases, rank_of


def _brute_3connected(bases, ground):
    r = rank_of(bases, ground)
    for k in (1, 2):
        for size in range(k, len(ground) - k + 1):
            for X in combinations(ground, size):
                Y = set(ground) - set(X)
                if rank_of(bases, X) + rank_of(bases, Y) - r < k:
                    return False
    return True


def brute_corpus(p, n_max):
    """3-connected GF(p) matroids with 4 <= n <= n_max, one per isomorphism class.

    Enumerates every standard-form matrix [I | A] whose columns are nonzero,
    pairwise non-parallel and not unit vectors (anything else has a loop,
    a parallel pair or a 2-element series class), then dedupes by brute force.
    """
    classes = []
    for n in range(4, n_max + 1):
        for r in range(2, n - 1):
            rows = [f"r{i}" for i in range(r)]
            cols = [f"c{j}" for j in range(n - r)]
            for flat in product(range(p), repeat=r * (n - r)):
                A = [list(flat[i * (n - r) : (i + 1) * (n - r)]) for i in range(r)]
                vecs = [tuple(A[i][j] for i in range(r)) for j in range(n - r)]
                if any(sum(1 for x in v if x) < 2 for v in vecs):
                    continue
                bases = bases_of_standard_form(rows, cols, A, p)
                ground = rows + cols
                if not _brute_3connected(bases, ground):
                    continue
                if any(
                    len(g) == n and len(b) == len(bases) and brute_isomorphic(b, g, bases, ground)
                    for b, g in classes
                ):
                    continue
                classes.append((bases, ground))
    return classes


def _sizes(entries):
    return sorted(M.n for M in entries)


def test_binary_corpus_matches_brute_force():
    got = gf_corpus(2, 7)
    want = brute_corpus(2, 7)
    assert _sizes(got) == sorted(len(g) for _, g in want)
    for M in got:
        assert any(brute_isomorphic(label_bases(M), M.ground, b, g) for b, g in want)


def test_ternary_corpus_matches_brute_force():
    got = gf_corpus(3, 6)
    want = brute_corpus(3, 6)
    assert _sizes(got) == sorted(len(g) for _, g in want)
    for M in got:
        assert any(brute_isomorphic(label_bases(M), M.ground, b, g) for b, g in want)


def test_corpus_sizes(corpus_cache):
    assert len(load_corpus("all-gf2-upto(8)", corpus_cache)) == 6
    assert len(load_corpus("all-gf3-upto(8)", corpus_cache)) == 33
    for entry in load_corpus("all-gf3-upto(8)", corpus_cache):
        assert is_3connected(entry.matroid)


def test_binary_corpus_contents(corpus_cache):
    entries = load_corpus("all-gf2-upto(8)", corpus_cache)
    for name in ["MK4", "F7", "F7*", "wheel(4)"]:
        assert any(isomorphic(catalog(name), e.matroid) is not None for e in entries)


def test_cache_round_trip(tmp_path):
    first = load_corpus("all-gf2-upto(7)", tmp_path)
    files = list(tmp_path.glob("corpus-gf2-7-*.json"))
    assert len(files) == 1
    data = json.loads(files[0].read_text())
    assert len(data) == len(first)
    second = load_corpus("all-gf2-upto(7)", tmp_path)
    assert [(e.name, e.matroid) for e in second] == [(e.name, e.matroid) for e in first]


def test_cache_directory_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("MFRAG_CACHE_DIR", str(tmp_path))
    load_corpus("all-gf2-upto(6)")
    assert list(tmp_path.glob("corpus-gf2-6-*.json"))


def test_corpus_specs():
    assert parse_corpus_spec("catalog") == ("catalog", None)
    assert parse_corpus_spec("all-gf3-upto(7)") == ("gf3", 7)
    with pytest.raises(CorpusTooLarge):
        parse_corpus_spec("all-gf2-upto(12)")
    with pytest.raises(ValueError):
        parse_corpus_spec("everything")
    names = [e.name for e in load_corpus("catalog")]
    assert names == [n for n in catalog_names()]


def test_entries_build_valid_matroids(corpus_cache):
    for entry in load_corpus("all-gf2-upto(8)", corpus_cache):
        M = entry.matroid
        rebuilt = matroid_from_bases(M.ground, [M.labels(b) for b in M.bases])
        assert rebuilt == M
