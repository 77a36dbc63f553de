"""Named matroids with fixed labels.

Labels:

* ``U(m,n)`` -- ``"1"`` .. ``"n"``; shorthands ``U24`` and ``U2,4`` accepted
* ``wheel(r)``, ``whirl(r)`` -- spokes ``s1..sr`` and rims ``r1..rr``, where
  ``si`` joins the hub to rim vertex i and ``ri`` joins rim vertices i, i+1
* ``MK4`` -- edges ``"12" "13" "14" "23" "24" "34"`` of K4
* ``K23`` -- edges ``a1 a2 a3 b1 b2 b3`` joining hubs a, b to vertices 1..3
* ``F7``, ``F7minus``, ``AG23e``, ``P8`` -- ``"1"`` .. ``"n"``

A trailing ``*`` on any name gives the dual.
"""

from __future__ import annotations

import re
from functools import lru_cache
from itertools import combinations
from typing import Mapping, Sequence

from .errors import UnknownName
from .matroid import Matroid, popcount
from .partial_field import pf_make
from .pmatrix import PMatrix, all_minors, matroid_from_pmatrix

__all__ = [
    "catalog",
    "catalog_names",
    "uniform",
    "wheel",
    "whirl",
    "graphic_matroid",
    "vector_matroid",
    "is_binary",
]


def uniform(m: int, n: int) -> Matroid:
    if not 0 <= m <= n:
        raise UnknownName(f"U({m},{n}) needs 0 <= m <= n")
    ground = [str(i) for i in range(1, n + 1)]
    bases = {sum(1 << i for i in c) for c in combinations(range(n), m)}
    return Matroid(ground, bases)


def graphic_matroid(edges: Mapping[str, tuple[str, str]]) -> Matroid:
    """Cycle matroid of a multigraph given as label -> (u, v)."""
    ground = Matroid.sort_labels(edges)
    ends = [edges[l] for l in ground]
    vertices = sorted({v for e in ends for v in e})

    def forest(mask: int) -> bool:
        parent = {v: v for v in vertices}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for i, (u, v) in enumerate(ends):
            if mask >> i & 1:
                ru, rv = find(u), find(v)
                if ru == rv:
                    return False
                parent[ru] = rv
        return True

    n = len(ground)
    # bases are the largest forests
    for k in range(n, -1, -1):
        best = [m for m in (sum(1 << i for i in c) for c in combinations(range(n), k)) if forest(m)]
        if best:
            return Matroid(ground, best)
    raise AssertionError("the empty edge set is a forest")


def vector_matroid(field: str, labels: Sequence[str], vectors: Sequence[Sequence[int]]) -> Matroid:
    """Column matroid of the given vectors over a finite field."""
    pf = pf_make(field)
    cols = [[pf.raw_from_int(x) for x in v] for v in vectors]
    rows = len(vectors[0])
    n = len(labels)
    # the largest column sets with a nonzero maximal minor are the bases
    mat = PMatrix(pf, [f"_r{i}" for i in range(rows)], list(labels), [[cols[j][i] for j in range(n)] for i in range(rows)])
    dets = all_minors(mat)
    best = 0
    bases: dict[int, set[int]] = {}
    for (rm, cm), d in dets.items():
        if not pf.raw_is_zero(d):
            k = popcount(cm)
            bases.setdefault(k, set()).add(cm)
            best = max(best, k)
    order = Matroid.sort_labels(labels)
    pos = [order.index(l) for l in labels]
    lifted = {sum(1 << pos[j] for j in range(n) if m >> j & 1) for m in bases.get(best, {0})}
    return Matroid(order, lifted)


def _wheel_edges(r: int) -> dict[str, tuple[str, str]]:
    edges = {}
    for i in range(1, r + 1):
        edges[f"s{i}"] = ("h", f"v{i}")
        edges[f"r{i}"] = (f"v{i}", f"v{i % r + 1}")
    return edges


def wheel(r: int) -> Matroid:
    """The rank-r wheel; the catalog names go up to r = 5, this builder to 8."""
    if not 2 <= r <= 8:
        raise UnknownName(f"wheel({r}) needs 2 <= r <= 8")
    return graphic_matroid(_wheel_edges(r))


def whirl(r: int) -> Matroid:
    """The wheel with its rim circuit-hyperplane relaxed to a basis."""
    W = wheel(r)
    rim = W.mask(f"r{i}" for i in range(1, r + 1))
    return Matroid(W.ground, W.bases | {rim})


_F7_REDUCED = [[1, 1, 0, 1], [1, 0, 1, 1], [0, 1, 1, 1]]
_P8_REDUCED = [[0, 1, 1, -1], [1, 0, 1, 1], [1, 1, 0, 1], [-1, 1, 1, 0]]


def _standard_form(field: str, reduced: list[list[int]]) -> Matroid:
    r, c = len(reduced), len(reduced[0])
    rows = [str(i) for i in range(1, r + 1)]
    cols = [str(i) for i in range(r + 1, r + c + 1)]
    return matroid_from_pmatrix(PMatrix.from_entries(pf_make(field), rows, cols, reduced))


def _ag23e() -> Matroid:
    pts = [(1, x, y) for x in range(3) for y in range(3) if (x, y) != (2, 2)]
    return vector_matroid("GF(3)", [str(i) for i in range(1, 9)], pts)


_FIXED = {
    "MK4": lambda: graphic_matroid(
        {"12": ("1", "2"), "13": ("1", "3"), "14": ("1", "4"), "23": ("2", "3"), "24": ("2", "4"), "34": ("3", "4")}
    ),
    "K23": lambda: graphic_matroid(
        {f"{h}{i}": (h, str(i)) for h in "ab" for i in range(1, 4)}
    ),
    "F7": lambda: _standard_form("GF(2)", _F7_REDUCED),
    "F7minus": lambda: _standard_form("GF(3)", _F7_REDUCED),
    "AG23e": _ag23e,
    "P8": lambda: _standard_form("GF(3)", _P8_REDUCED),
}

_U_RE = [
    re.compile(r"^U\((\d+),(\d+)\)$"),
    re.compile(r"^U(\d+),(\d+)$"),
    re.compile(r"^U(\d)(\d)$"),
]
_FAMILY_RE = re.compile(r"^(wheel|whirl)\((\d+)\)$")


@lru_cache(maxsize=None)
def catalog(name: str) -> Matroid:
    """Look up a named matroid; see the module docstring for labels."""
    text = name.strip().replace(" ", "")
    if text.endswith("*"):
        return catalog(text[:-1]).dual()
    for pattern in _U_RE:
        m = pattern.match(text)
        if m:
            a, b = int(m.group(1)), int(m.group(2))
            if not 0 <= a <= b <= 10 or b == 0:
                raise UnknownName(f"uniform matroid {name!r} outside the catalog (m <= n <= 10)")
            return uniform(a, b)
    m = _FAMILY_RE.match(text)
    if m:
        r = int(m.group(2))
        if r > 5:
            raise UnknownName(f"{name!r} outside the catalog (r <= 5)")
        return wheel(r) if m.group(1) == "wheel" else whirl(r)
    if text in _FIXED:
        return _FIXED[text]()
    raise UnknownName(f"unknown catalog matroid {name!r}")


def catalog_names() -> list[str]:
    """Representative names: small uniform matroids, wheels, whirls and the fixed list."""
    names = [f"U({m},{n})" for n in range(2, 7) for m in range(1, n)]
    names += [f"wheel({r})" for r in range(3, 6)] + [f"whirl({r})" for r in range(2, 6)]
    names += list(_FIXED)
    return names


def is_binary(M: Matroid) -> bool:
    """True iff M has no U(2,4) minor.

    Uses the parity characterisation: M is binary exactly when every circuit
    meets every cocircuit in an even number of elements.
    """
    cached = M._cache.get("binary")
    if cached is None:
        cocirc = M.cocircuit_masks()
        cached = all(popcount(c & d) % 2 == 0 for c in M.circuit_masks() for d in cocirc)
        M._cache["binary"] = cached
    return cached
