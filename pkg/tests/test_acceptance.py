"""Acceptance checks, one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` (the verdict lines are
printed straight to the terminal) or as ``python tests/test_acceptance.py``.
"""

import random
import subprocess
import sys
import time
from itertools import combinations, product

import pytest

from mfrag.catalog import catalog, catalog_names, uniform
from mfrag.confining import confining_sets_for
from mfrag.corpus import load_corpus
from mfrag.deltawye import delta_wye_relatives, delta_y, wye_delta
from mfrag.errors import NoNMinor
from mfrag.formats import dump_ctx, dump_mtd, dump_pmx, read_ctx, read_mtd, read_pmx
from mfrag.incrimination import incriminates, incrimination_dichotomy
from mfrag.isomorphism import isomorphic
from mfrag.lemmas import minor_for, verify_many
from mfrag.minors import classify_elements, is_strictly_fragile
from mfrag.partial_field import pf_make
from mfrag.pmatrix import PMatrix, matroid_from_pmatrix, pivot
from mfrag.theorems import classify_mainthm1, classify_mainthm2, enumerate_setups

from conftest import INSTANCES
from oracles import NaiveConfining, bases_of_standard_form, brute_removal_table, exchange_ok, label_bases
from test_confining import _strong_mask

U24 = uniform(2, 4)

LEMMAS = [
    "bixby", "longline3conn", "seriesindependent", "seriesnotbasisstrong", "calc1", "calc2",
    "gutspluscoguts1", "uncrossing", "fanends", "f2f3", "keepingN", "cplminorlemma", "CPL2",
    "existsv3sep", "pathgenerator", "triadin4circuit",
]


def report(capsys, number, ok, detail):
    with capsys.disabled():
        print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'} ({detail})")
    return ok


def _random_matrix(rng, p, max_rows=5, max_cols=5):
    m, n = rng.randint(1, max_rows), rng.randint(1, max_cols)
    rows = [f"r{i}" for i in range(m)]
    cols = [f"c{j}" for j in range(n)]
    return rows, cols, [[rng.randrange(p) for _ in cols] for _ in rows]


@pytest.fixture(scope="module")
def corpus(corpus_cache):
    return (
        load_corpus("catalog")
        + load_corpus("all-gf2-upto(8)", corpus_cache)
        + load_corpus("all-gf3-upto(8)", corpus_cache)
    )


def test_criterion_1_pivot_invariance(capsys):
    rng = random.Random(1)
    start = time.perf_counter()
    bad = pivots = 0
    for k in range(200):
        p = (5, 7)[k % 2]
        rows, cols, entries = _random_matrix(rng, p)
        A = PMatrix.from_entries(pf_make(f"GF({p})"), rows, cols, entries)
        M = matroid_from_pmatrix(A)
        for x, y in product(rows, cols):
            if A.entry(x, y).is_zero():
                continue
            pivots += 1
            Ap = pivot(A, x, y)
            if matroid_from_pmatrix(Ap) != M or pivot(Ap, y, x) != A:
                bad += 1
    elapsed = time.perf_counter() - start
    ok = bad == 0 and elapsed < 30
    assert report(capsys, 1, ok, f"{pivots} pivots, {bad} violations, {elapsed:.1f}s")


def test_criterion_2_exchange_axiom(capsys):
    gf2 = pf_make("GF(2)")
    count = bad = 0
    for m, n in product(range(1, 4), repeat=2):
        rows = [f"r{i}" for i in range(m)]
        cols = [f"c{j}" for j in range(n)]
        for bits in product([0, 1], repeat=m * n):
            entries = [list(bits[i * n : (i + 1) * n]) for i in range(m)]
            M = matroid_from_pmatrix(PMatrix.from_entries(gf2, rows, cols, entries), check=False)
            count += 1
            bad += not exchange_ok(label_bases(M))
    rng = random.Random(2)
    gf5 = pf_make("GF(5)")
    for _ in range(200):
        rows, cols, entries = _random_matrix(rng, 5)
        M = matroid_from_pmatrix(PMatrix.from_entries(gf5, rows, cols, entries))
        count += 1
        bad += not exchange_ok(label_bases(M))
    assert report(capsys, 2, bad == 0, f"{count} matrices, {bad} violations")


def test_criterion_3_lemma_harness(corpus, capsys):
    start = time.perf_counter()
    failing = {}
    for lemma in LEMMAS:
        res = verify_many(lemma, corpus, jobs=1)
        if not res.passed:
            failing[lemma] = sorted({f["instance"] for f in res.failures})
    elapsed = time.perf_counter() - start
    ok = not failing and elapsed < 600
    detail = f"{len(LEMMAS)} lemmas over {len(corpus)} matroids, {elapsed:.0f}s"
    if failing:
        detail += ", counterexamples: " + "; ".join(f"{k} on {', '.join(v)}" for k, v in failing.items())
    assert report(capsys, 3, ok, detail)


def test_criterion_4_fragility_oracle(capsys):
    cases = [uniform(2, 5), uniform(3, 5), uniform(3, 6), catalog("whirl(3)")]
    bad = 0
    for M in cases:
        table = brute_removal_table(M, U24)
        got = {c.element: (c.deletable, c.contractible) for c in classify_elements(M, U24)}
        bad += got != table
        bad += is_strictly_fragile(M, U24) != all(not (d and c) for d, c in table.values())
    try:
        classify_elements(catalog("F7"), U24)
        bad += 1
    except NoNMinor:
        pass
    assert report(capsys, 4, bad == 0, f"{len(cases) + 1} pairs, {bad} mismatches")


def test_criterion_5_confining_oracle(corpus, capsys):
    compared = bad = 0
    for _, M in corpus + [("U46", uniform(4, 6))]:
        if M.r < 2:
            continue
        oracle = NaiveConfining(M)
        N = minor_for(M)
        for B in M.bases:
            strong = _strong_mask(M, N, B)
            for x, y in combinations(M.ordered(B), 2):
                got = {c.G: c.overlap for c in confining_sets_for(M, B, x, y, strong)}
                bad += got != oracle.find(M.labels(B), x, y, M.labels(strong))
                compared += 1
    U46 = uniform(4, 6)
    hit = confining_sets_for(U46, U46.mask(["1", "2", "3", "4"]), "1", "2", 0)
    ok = bad == 0 and any(c.G == frozenset("1256") for c in hit)
    assert report(capsys, 5, ok, f"{compared} (matroid, basis, pair) choices, {bad} mismatches, U4,6 positive found: {bool(hit)}")


def test_criterion_6_delta_wye(capsys):
    K4, K23 = catalog("MK4"), catalog("K23")
    bad = sum(isomorphic(delta_y(K4, K4.labels(T)), K23) is None for T in K4.triangles())
    # only coindependent triangles become triads, so only they can be undone
    trips = skipped = 0
    for name in catalog_names():
        M = catalog(name)
        for T in M.triangles():
            if M.crk(T) != 3:
                skipped += 1
                continue
            labels = M.labels(T)
            D = delta_y(M, labels, require_coindependent=True)
            trips += 1
            bad += D.mask(labels) not in set(D.triads()) or isomorphic(wye_delta(D, labels), M) is None
    detail = f"4 K4 triangles, {trips} round trips, {bad} failures, {skipped} non-coindependent triangles skipped"
    assert report(capsys, 6, bad == 0, detail)


def _excluded_minors():
    named = ["U25", "U35", "F7", "F7*", "F7minus", "F7minus*", "AG23e", "P8"]
    out = [(n, catalog(n) if n not in ("U25", "U35") else uniform(int(n[1]), int(n[2]))) for n in named]
    # the first relative is AG23e itself
    out += [(f"AG23e-dy{i}", M) for i, M in enumerate(delta_wye_relatives(catalog("AG23e"))) if i]
    return out


def test_criterion_7_structural_constants(capsys):
    bad = total = 0
    notes = []
    for name, M in _excluded_minors():
        n = 0
        for ctx in enumerate_setups(M, U24):
            n += 1
            v1, v2 = classify_mainthm1(ctx), classify_mainthm2(ctx)
            if M.n <= U24.n + 16:
                bad += not v1.flags["a"]
            if M.r <= U24.r + 8:
                bad += not v2.flags["b"]
        total += n
        if n == 0:
            notes.append(f"{name}: no valid deletion pair")
    detail = f"{total} setups, {bad} disagreements"
    if notes:
        detail += "; " + "; ".join(notes)
    assert report(capsys, 7, bad == 0 and total > 0, detail)


def test_criterion_8_dichotomy(capsys):
    rng = random.Random(8)
    bad = incriminated = 0
    for k in range(500):
        p = (3, 5)[k % 2]
        pf = pf_make(f"GF({p})")
        rows, cols, entries = _random_matrix(rng, p, 4, 4)
        if rng.random() < 0.5:
            other = entries
        else:
            other = [[rng.randrange(p) for _ in cols] for _ in rows]
        A = PMatrix.from_entries(pf, rows, cols, entries)
        M = matroid_from_pmatrix(PMatrix.from_entries(pf, rows, cols, other))
        d = incrimination_dichotomy(M, A)
        same = bases_of_standard_form(rows, cols, entries, p) == label_bases(M)
        if d.represents != same or d.represents == (d.witness is not None):
            bad += 1
        elif not d.represents:
            incriminated += 1
            bad += incriminates(M, A, d.witness.Z) != d.witness
    assert report(capsys, 8, bad == 0, f"500 pairs, {incriminated} incriminated, {bad} violations")


CLI_RUNS = [
    ["analyze", "--matroid", "U25", "--minor", "U24"],
    ["classify", "--ctx", str(INSTANCES / "ag23e.ctx"), "--theorem", "2"],
    ["pivot", "--matrix", str(INSTANCES / "gf5-2x2.pmx"), "--on", "x,y"],
    ["verify", "--lemma", "bixby", "--corpus", "catalog"],
]


def test_criterion_9_round_trips_and_determinism(capsys):
    dumpers = {".pmx": (read_pmx, dump_pmx), ".mtd": (read_mtd, dump_mtd), ".ctx": (read_ctx, dump_ctx)}
    files = bad = 0
    for path in sorted(INSTANCES.iterdir()):
        if path.suffix in dumpers:
            read, dump = dumpers[path.suffix]
            files += 1
            bad += dump(read(path)) != path.read_text()
    for argv in CLI_RUNS:
        cmd = [sys.executable, "-m", "mfrag", *argv]
        first = subprocess.run(cmd, capture_output=True).stdout
        second = subprocess.run(cmd, capture_output=True).stdout
        bad += first != second or not first
    assert report(capsys, 9, bad == 0, f"{files} files, {len(CLI_RUNS)} reports run twice, {bad} differences")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
