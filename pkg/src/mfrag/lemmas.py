"""Exhaustive checkers for the pure-matroid lemmas.

Each verifier takes one matroid and returns ``(checks, counterexamples)``:
how many instances of the hypothesis it examined and a list of JSON-ready
dicts, one per failed conclusion.  Verifiers skip matroids that do not meet
the standing hypotheses (usually 3-connectivity), reporting zero checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable

import numpy as np

from .catalog import catalog, is_binary, uniform
from .connectivity import (
    _vertical_masks,
    co_is_3connected,
    is_3connected,
    is_connected,
    is_cosegment,
    is_vertical_3sep,
    is_z_closed_mask,
    lambda_table,
    si_is_3connected,
    z_closed_separation,
)
from .errors import HypothesisFailed, NoVerticalSeparation, UnknownLemma
from .fans import fan_end_kind
from .isomorphism import isomorphic
from .matroid import (
    Matroid,
    _popcount_table,
    bits_of,
    cosimplify,
    parallel_classes,
    popcount,
    series_classes,
    simplify,
)
from .minors import _keeps, has_minor
from .paths import _is_path, _witness, path_of_3seps

__all__ = ["LEMMAS", "LemmaResult", "verify", "verify_many", "lemma_ids", "minor_for"]

Check = tuple[int, list[dict]]


def _lab(M: Matroid, mask: int) -> list[str]:
    return M.ordered(mask)


def _si3(M: Matroid, i: int) -> bool:
    key = ("si3", i)
    v = M._cache.get(key)
    if v is None:
        v = si_is_3connected(M.contract_mask(1 << i))
        M._cache[key] = v
    return v


def _co3(M: Matroid, i: int) -> bool:
    key = ("co3", i)
    v = M._cache.get(key)
    if v is None:
        v = co_is_3connected(M.delete_mask(1 << i))
        M._cache[key] = v
    return v


def minor_for(M: Matroid) -> Matroid | None:
    """U(2,4) for non-binary M; M(K4) for binary M with such a minor; else None."""
    if not is_binary(M):
        N = uniform(2, 4)
    else:
        N = catalog("MK4")
    return N if _keeps(M, N) else None


def _embedding(M: Matroid, N: Matroid) -> int | None:
    """Mask of the ground set of one N-minor of M."""
    rec = has_minor(M, N)
    if rec is None:
        return None
    return M.full & ~M.mask(list(rec.contract) + list(rec.delete))


def _three_sep_masks(M: Matroid) -> np.ndarray:
    lt = lambda_table(M)
    return np.nonzero(lt <= 2)[0]


# ---------------------------------------------------------------------------
# connectivity lemmas


def check_bixby(M: Matroid) -> Check:
    if not is_3connected(M):
        return 0, []
    bad = []
    for i in range(M.n):
        if not (_si3(M, i) or _co3(M, i)):
            bad.append({"element": M.ground[i]})
    return M.n, bad


def check_existsv3sep(M: Matroid) -> Check:
    """Both directions: si(M/e) is not 3-connected iff some (X, e, Y) is vertical."""
    if not is_3connected(M):
        return 0, []
    bad = []
    for i in range(M.n):
        has = bool(_vertical_masks(M, 1 << i))
        if has == _si3(M, i):
            bad.append({"element": M.ground[i], "si_3connected": _si3(M, i), "vertical": has})
    return M.n, bad


def _lines(M: Matroid) -> list[int]:
    """Rank-2 flats with at least four elements."""
    out = set()
    for i, j in combinations(range(M.n), 2):
        pair = (1 << i) | (1 << j)
        if M.rk(pair) == 2:
            L = M.cl(pair)
            if popcount(L) >= 4:
                out.add(L)
    return sorted(out)


def check_longline3conn(M: Matroid) -> Check:
    if not is_3connected(M):
        return 0, []
    bad = []
    checks = 0
    for L in _lines(M):
        for i in bits_of(L):
            checks += 1
            if not is_3connected(M.delete_mask(1 << i)):
                bad.append({"line": _lab(M, L), "element": M.ground[i]})
    return checks, bad


def _series_in_whole(M: Matroid, i: int) -> list[int]:
    """Series classes of M\\e, lifted to masks of M."""
    D = M.delete_mask(1 << i)
    keep = [k for k in range(M.n) if k != i]
    return [sum(1 << keep[k] for k in bits_of(c)) for c in series_classes(D)]


def check_seriesindependent(M: Matroid) -> Check:
    if not is_3connected(M):
        return 0, []
    u13 = uniform(1, 3)
    bad = []
    checks = 0
    for u in range(M.n):
        if not _co3(M, u):
            continue
        classes = _series_in_whole(M, u)
        is_u13 = None
        for S, T in combinations(classes, 2):
            checks += 1
            if M.is_independent(S | T):
                continue
            if is_u13 is None:
                is_u13 = isomorphic(cosimplify(M.delete_mask(1 << u))[0], u13) is not None
            if not is_u13:
                bad.append({"u": M.ground[u], "S": _lab(M, S), "S2": _lab(M, T)})
    return checks, bad


def check_seriesnotbasisstrong(M: Matroid) -> Check:
    if not is_3connected(M):
        return 0, []
    u13 = uniform(1, 3)
    bad = []
    checks = 0
    for u in range(M.n):
        if not _co3(M, u):
            continue
        if isomorphic(cosimplify(M.delete_mask(1 << u))[0], u13) is not None:
            continue
        classes = _series_in_whole(M, u)
        nontrivial = [c for c in classes if popcount(c) >= 2]
        for S in nontrivial:
            for s in bits_of(S):
                if _si3(M, s):
                    continue
                checks += 1
                fails = []
                if popcount(S) != 2:
                    fails.append("i")
                if len(nontrivial) != 2:
                    fails.append("ii")
                if not any(_si3(M, t) for t in bits_of(S) if t != s):
                    fails.append("iii")
                if fails:
                    bad.append({"u": M.ground[u], "S": _lab(M, S), "s": M.ground[s], "failed": fails})
    return checks, bad


def check_calc1(M: Matroid) -> Check:
    if not is_3connected(M):
        return 0, []
    lt = lambda_table(M)
    bad = []
    checks = 0
    for X in np.nonzero(lt == 2)[0]:
        X = int(X)
        clx, cclx = M.cl(X), M.ccl(X)
        for e in range(M.n):
            b = 1 << e
            if X & b:
                continue
            checks += 1
            sep = int(lt[X | b]) <= 2
            near = bool((clx | cclx) & b)
            if sep != near:
                bad.append({"X": _lab(M, X), "e": M.ground[e], "separating": sep, "in_cl_or_clstar": near})
    return checks, bad


def check_calc2(M: Matroid) -> Check:
    if not is_3connected(M):
        return 0, []
    lt = lambda_table(M)
    pc = _popcount_table(M.n)
    bad = []
    checks = 0
    for X in np.nonzero((lt == 2) & (pc >= 3))[0]:
        X = int(X)
        Y = M.full & ~X
        clY, cclY = M.cl(Y), M.ccl(Y)
        for x in bits_of(X):
            b = 1 << x
            R = X & ~b
            checks += 1
            in_cl, in_ccl = bool(M.cl(R) & b), bool(M.ccl(R) & b)
            if not (in_cl or in_ccl):
                bad.append({"X": _lab(M, X), "x": M.ground[x], "failed": "i"})
            guts = in_cl and bool(clY & b)
            coguts = in_ccl and bool(cclY & b)
            exact = int(lt[R]) == 2
            if exact != (guts != coguts):
                bad.append({"X": _lab(M, X), "x": M.ground[x], "failed": "ii", "exact": exact, "guts": guts, "coguts": coguts})
    return checks, bad


def check_gutspluscoguts1(M: Matroid) -> Check:
    if not is_3connected(M):
        return 0, []
    lt = lambda_table(M)
    pc = _popcount_table(M.n)
    bad = []
    checks = 0
    for X in np.nonzero((lt <= 2) & (pc >= 3) & (pc <= M.n - 3))[0]:
        X = int(X)
        Y = M.full & ~X
        g = X & M.cl(Y)
        c = X & M.ccl(Y)
        checks += 1
        if g and c and (popcount(g) != 1 or popcount(c) != 1):
            bad.append({"X": _lab(M, X), "X_cl_Y": _lab(M, g), "X_clstar_Y": _lab(M, c)})
    return checks, bad


def check_uncrossing(M: Matroid) -> Check:
    if not is_3connected(M):
        return 0, []
    lt = lambda_table(M)
    pc = _popcount_table(M.n)
    seps = _three_sep_masks(M).astype(np.int64)
    full = M.full
    bad = []
    checks = 0
    for X in seps:
        X = int(X)
        inter = seps & X
        union = seps | X
        big_inter = pc[inter] >= 2
        rest_big = pc[full & ~union] >= 2
        checks += int(big_inter.sum() + rest_big.sum())
        f1 = np.nonzero(big_inter & (lt[union] > 2))[0]
        f2 = np.nonzero(rest_big & (lt[inter] > 2))[0]
        for k in f1[:3]:
            bad.append({"X": _lab(M, X), "Y": _lab(M, int(seps[k])), "failed": "i"})
        for k in f2[:3]:
            bad.append({"X": _lab(M, X), "Y": _lab(M, int(seps[k])), "failed": "ii"})
    return checks, bad


# ---------------------------------------------------------------------------
# fans


def _all_fans(M: Matroid, min_len: int = 4) -> list[tuple[int, ...]]:
    """Every fan ordering with at least ``min_len`` elements, one orientation each."""
    tri, tda = set(M.triangles()), set(M.triads())
    out = []

    def grow(seq: tuple[int, ...], used: int, want_triangle: bool):
        if len(seq) >= min_len and seq <= seq[::-1]:
            out.append(seq)
        fam = tri if want_triangle else tda
        for k in range(M.n):
            if used >> k & 1:
                continue
            t = (1 << seq[-2]) | (1 << seq[-1]) | (1 << k)
            if t in fam:
                grow(seq + (k,), used | 1 << k, not want_triangle)

    for start, fam in ((True, tri), (False, tda)):
        for t in fam:
            b = bits_of(t)
            for i, j, k in ((b[0], b[1], b[2]), (b[0], b[2], b[1]), (b[1], b[0], b[2]),
                            (b[1], b[2], b[0]), (b[2], b[0], b[1]), (b[2], b[1], b[0])):
                grow((i, j, k), t, not start)
    return sorted(set(out))


def check_fanends(M: Matroid) -> Check:
    if M.n < 7 or not is_3connected(M):
        return 0, []
    bad = []
    checks = 0
    for seq in _all_fans(M):
        order = [M.ground[i] for i in seq]
        for end in (seq[0], seq[-1]):
            checks += 1
            kind = fan_end_kind(M, order, M.ground[end])
            si3, co3 = _si3(M, end), _co3(M, end)
            ok = (co3 and not si3) if kind == "spoke" else (si3 and not co3)
            if not ok:
                bad.append({"fan": order, "end": M.ground[end], "kind": kind, "si3": si3, "co3": co3})
    return checks, bad


def check_f2f3(M: Matroid) -> Check:
    tri, tda = M.triangles(), M.triads()
    bad = []
    checks = 0
    for i in range(M.n):
        tr = [t for t in tri if t >> i & 1]
        if len(tr) != 1:
            continue
        f3 = i
        for f2 in bits_of(tr[0] & ~(1 << f3)):
            td = [t for t in tda if t >> f2 & 1]
            if len(td) != 1 or not td[0] >> f3 & 1:
                continue
            f1 = bits_of(tr[0] & ~(1 << f2) & ~(1 << f3))[0]
            f4 = bits_of(td[0] & ~(1 << f2) & ~(1 << f3))[0]
            if f1 == f4:
                continue
            checks += 1
            a = simplify(M.contract_mask(1 << f3))[0]
            b = cosimplify(M.delete_mask(1 << f2))[0]
            if isomorphic(a, b) is None:
                bad.append({"f": [M.ground[k] for k in (f1, f2, f3, f4)]})
    return checks, bad


def check_triadin4circuit(M: Matroid) -> Check:
    if not is_3connected(M):
        return 0, []
    tri = set(M.triangles())
    tda = M.triads()
    circuits4 = [c for c in M.circuit_masks() if popcount(c) == 4]
    bad = []
    checks = 0
    for T in tda:
        for C in circuits4:
            if C & T != T:
                continue
            for bmid in bits_of(T):
                a, c = [k for k in bits_of(T) if k != bmid]
                checks += 1
                if _co3(M, a) or _co3(M, c):
                    continue
                ii = any(((1 << a) | (1 << k) | (1 << bmid)) in tri for k in range(M.n)) and any(
                    ((1 << bmid) | (1 << c) | (1 << k)) in tri for k in range(M.n)
                )
                if ii:
                    continue
                iii = any(not T >> f & 1 and is_cosegment(M, T | 1 << f) for f in range(M.n))
                if iii:
                    continue
                bad.append({"triad": [M.ground[a], M.ground[bmid], M.ground[c]], "circuit": _lab(M, C)})
    return checks, bad


# ---------------------------------------------------------------------------
# keeping an N-minor


def check_keepingN(M: Matroid) -> Check:
    if not is_3connected(M):
        return 0, []
    u23 = uniform(2, 3)
    tri = M.triangles()
    bad = []
    checks = 0
    for e in range(M.n):
        if not _si3(M, e):
            continue
        Me = M.contract_mask(1 << e)
        keep = [k for k in range(M.n) if k != e]
        in_par = 0
        for c in parallel_classes(Me):
            if popcount(c) >= 2:
                in_par |= c
        si_u23 = None
        for k, f in enumerate(keep):
            checks += 1
            fb = 1 << k
            if not is_connected(Me.delete_mask(fb)):
                if si_u23 is None:
                    si_u23 = isomorphic(simplify(Me)[0], u23) is not None
                no_tri = not any(t >> e & 1 and t >> f & 1 for t in tri)
                if not (si_u23 and no_tri):
                    bad.append({"e": M.ground[e], "f": M.ground[f], "failed": "first"})
            if not in_par & fb and not is_connected(Me.contract_mask(fb)):
                bad.append({"e": M.ground[e], "f": M.ground[f], "failed": "moreover"})
    return checks, bad


def _cpl_single(Q: Matroid, N: Matroid, where: str) -> Check:
    """2-separations of the connected matroid Q against one N-embedding."""
    en = _embedding(Q, N)
    if en is None:
        return 0, []
    lt = lambda_table(Q)
    pc = _popcount_table(Q.n)
    bad = []
    checks = 0
    for X in np.nonzero((lt <= 1) & (pc >= 2) & (pc <= Q.n - 2))[0]:
        X = int(X)
        Y = Q.full & ~X
        if X > Y:
            continue
        checks += 1
        sides = [S for S in (X, Y) if popcount(S & en) <= 1]
        if not sides:
            bad.append({"in": where, "X": _lab(Q, X), "failed": "side"})
            continue
        for S in sides:
            for s in bits_of(S):
                b = 1 << s
                Qc = Q.contract_mask(b)
                if is_connected(Qc) and not _keeps(Qc, N):
                    bad.append({"in": where, "X": _lab(Q, X), "s": Q.ground[s], "failed": "i"})
                Qd = Q.delete_mask(b)
                if is_connected(Qd) and not _keeps(Qd, N):
                    bad.append({"in": where, "X": _lab(Q, X), "s": Q.ground[s], "failed": "ii"})
    return checks, bad


def check_cplminorlemma(M: Matroid) -> Check:
    """Applied to the connected, not 3-connected single-element minors of M."""
    if not is_3connected(M):
        return 0, []
    N = minor_for(M)
    if N is None:
        return 0, []
    checks, bad = 0, []
    for i in range(M.n):
        for op, Q in (("\\", M.delete_mask(1 << i)), ("/", M.contract_mask(1 << i))):
            if Q.n < N.n or not is_connected(Q) or is_3connected(Q) or not _keeps(Q, N):
                continue
            c, b = _cpl_single(Q, N, f"M{op}{M.ground[i]}")
            checks += c
            bad.extend(b)
    return checks, bad


def check_CPL2(M: Matroid) -> Check:
    if not is_3connected(M):
        return 0, []
    N = minor_for(M)
    if N is None:
        return 0, []
    bad = []
    checks = 0
    for z in range(M.n):
        zb = 1 << z
        Mz = M.contract_mask(zb)
        if not _keeps(Mz, N):
            continue
        seps = _vertical_masks(M, zb)
        if not seps:
            continue
        keep = [k for k in range(M.n) if k != z]
        en_small = _embedding(Mz, N)
        en = sum(1 << keep[k] for k in bits_of(en_small))
        for x0, y0 in seps:
            for X, Y in ((x0, y0), (y0, x0)):
                if popcount(X & en) > 1:
                    continue
                checks += 1
                where = {"z": M.ground[z], "X": _lab(M, X)}
                dele = {i: _keeps(M.delete_mask(1 << i), N) for i in bits_of(X)}
                con = {i: _keeps(M.contract_mask(1 << i), N) for i in bits_of(X)}
                not_del = [i for i in bits_of(X) if not dele[i]]
                if len(not_del) > 1:
                    bad.append({**where, "failed": "at most one non-deletable"})
                    continue
                clY = M.cl(Y)
                if M.cl(Y | zb) == (Y | zb):
                    if not all(con.values()):
                        bad.append({**where, "failed": "i contractible"})
                    for x in not_del:
                        if not (M.ccl(Y) >> x & 1 and M.cl(X & ~(1 << x)) & zb):
                            bad.append({**where, "x": M.ground[x], "failed": "i moreover"})
                else:
                    if not all(con[i] for i in bits_of(X & ~clY)):
                        bad.append({**where, "failed": "ii contractible"})
                    for x in not_del:
                        cond1 = bool(M.ccl(clY) >> x & 1) and not clY >> x & 1
                        cond2 = bool(M.cl(X & ~clY & ~(1 << x)) & zb)
                        if not (cond1 and cond2):
                            bad.append({**where, "x": M.ground[x], "failed": "ii moreover"})
    return checks, bad


# ---------------------------------------------------------------------------
# separations through an element


PATH_MAX_N = 8
PATH_MAX_Z = 3


def check_pathgenerator(M: Matroid) -> Check:
    """All partitions (A, Z, B) with |Z| <= 3 on matroids with at most 8 elements."""
    if M.n > PATH_MAX_N or not is_3connected(M):
        return 0, []
    lt = lambda_table(M)
    bad = []
    checks = 0
    full = M.full
    for zsize in range(1, PATH_MAX_Z + 1):
        for zc in combinations(range(M.n), zsize):
            Z = sum(1 << i for i in zc)
            rest = bits_of(full & ~Z)
            for k in range(1 << len(rest)):
                A = sum(1 << rest[j] for j in range(len(rest)) if k >> j & 1)
                B = full & ~Z & ~A
                if popcount(A) < 2 or popcount(B) < 2:
                    continue
                # the hypothesis forces A and B to be 3-separating
                if lt[A] > 2 or lt[B] > 2:
                    continue
                if not all(_witness(M, A, Z, B, 1 << z) for z in zc):
                    continue
                checks += 1
                try:
                    p = path_of_3seps(M, M.labels(A), M.labels(Z), M.labels(B))
                except HypothesisFailed as exc:
                    bad.append({"A": _lab(M, A), "Z": _lab(M, Z), "B": _lab(M, B), "error": str(exc)})
                    continue
                if not _is_path(M, [M.mask(part) for part in p.parts]):
                    bad.append({"A": _lab(M, A), "Z": _lab(M, Z), "B": _lab(M, B), "error": "not a path"})
    return checks, bad


def check_existszclosed(M: Matroid) -> Check:
    """For z with M/z keeping N and si(M/z) not 3-connected."""
    if not is_3connected(M):
        return 0, []
    N = minor_for(M)
    if N is None:
        return 0, []
    bad = []
    checks = 0
    for z in range(M.n):
        zb = 1 << z
        Mz = M.contract_mask(zb)
        if _si3(M, z) or not _keeps(Mz, N):
            continue
        keep = [k for k in range(M.n) if k != z]
        en = [keep[k] for k in bits_of(_embedding(Mz, N))]
        checks += 1
        try:
            rec = z_closed_separation(M, M.ground[z], [M.ground[k] for k in en])
        except NoVerticalSeparation as exc:
            bad.append({"z": M.ground[z], "error": str(exc)})
            continue
        X, Y = M.mask(rec.X), M.mask(rec.Y)
        enm = sum(1 << k for k in en)
        if not (is_vertical_3sep(M, X, zb, Y) and is_z_closed_mask(M, zb, Y) and popcount(Y & enm) <= 1):
            bad.append({"z": M.ground[z], "separation": rec.to_json()})
    return checks, bad


# ---------------------------------------------------------------------------
# registry


LEMMAS: dict[str, Callable[[Matroid], Check]] = {
    "bixby": check_bixby,
    "existsv3sep": check_existsv3sep,
    "longline3conn": check_longline3conn,
    "seriesindependent": check_seriesindependent,
    "seriesnotbasisstrong": check_seriesnotbasisstrong,
    "calc1": check_calc1,
    "calc2": check_calc2,
    "gutspluscoguts1": check_gutspluscoguts1,
    "uncrossing": check_uncrossing,
    "fanends": check_fanends,
    "f2f3": check_f2f3,
    "keepingN": check_keepingN,
    "cplminorlemma": check_cplminorlemma,
    "CPL2": check_CPL2,
    "pathgenerator": check_pathgenerator,
    "triadin4circuit": check_triadin4circuit,
    "existszclosed": check_existszclosed,
}


def lemma_ids() -> list[str]:
    return list(LEMMAS)


@dataclass
class LemmaResult:
    lemma: str
    instances: list[dict] = field(default_factory=list)

    @property
    def checks(self) -> int:
        return sum(i["checks"] for i in self.instances)

    @property
    def failures(self) -> list[dict]:
        return [{"instance": i["name"], **c} for i in self.instances for c in i["counterexamples"]]

    @property
    def passed(self) -> bool:
        return all(i["passed"] for i in self.instances)

    def to_json(self) -> dict:
        return {
            "lemma": self.lemma,
            "instance_count": len(self.instances),
            "checks": self.checks,
            "passed": self.passed,
            "failed_instances": sum(not i["passed"] for i in self.instances),
            "instances": self.instances,
        }


def _get(lemma_id: str) -> Callable[[Matroid], Check]:
    try:
        return LEMMAS[lemma_id]
    except KeyError:
        raise UnknownLemma(f"unknown lemma {lemma_id!r}; known: {', '.join(LEMMAS)}") from None


def verify(lemma_id: str, M: Matroid) -> Check:
    return _get(lemma_id)(M)


def _run_one(args) -> tuple[str, int, list[dict]]:
    lemma_id, name, ground, bases = args
    M = Matroid(ground, bases)
    checks, bad = LEMMAS[lemma_id](M)
    return name, checks, bad


def verify_many(lemma_id: str, entries: Iterable[tuple[str, Matroid]], jobs: int = 1) -> LemmaResult:
    """Run a verifier over named matroids; the result does not depend on ``jobs``."""
    _get(lemma_id)
    entries = list(entries)
    result = LemmaResult(lemma_id)
    if jobs > 1 and len(entries) > 1:
        from concurrent.futures import ProcessPoolExecutor

        payload = [(lemma_id, name, list(M.ground), sorted(M.bases)) for name, M in entries]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_run_one, payload))
    else:
        outcomes = []
        for name, M in entries:
            checks, bad = LEMMAS[lemma_id](M)
            outcomes.append((name, checks, bad))
    for name, checks, bad in outcomes:
        result.instances.append({"name": name, "checks": checks, "passed": not bad, "counterexamples": bad})
    return result
