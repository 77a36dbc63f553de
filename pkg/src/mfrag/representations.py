"""Brute-force representations over small finite fields and the finite
stabilizer check."""

from __future__ import annotations

from collections import deque
from itertools import product

from .errors import NoNMinor, NotRepresentable, TooLarge
from .matroid import Matroid, bits_of, popcount
from .minors import has_minor
from .partial_field import PartialField, pf_make
from .pmatrix import PMatrix, matroid_from_pmatrix, scaling_equivalent

__all__ = ["ENTRY_CAP", "enumerate_representations", "stabilizer_check_finite"]

ENTRY_CAP = 12


def _field(field: str | PartialField) -> PartialField:
    pf = pf_make(field) if isinstance(field, str) else field
    if not pf.is_finite:
        raise ValueError(f"{pf.name} is not a finite field")
    return pf


def _support(M: Matroid, B: int) -> tuple[list[int], list[int], set[tuple[int, int]]]:
    rows = bits_of(B)
    cols = bits_of(M.full & ~B)
    supp = set()
    for j in cols:
        # fundamental circuit of j with respect to B
        for i in rows:
            if M.is_basis((B & ~(1 << i)) | (1 << j)):
                supp.add((i, j))
    return rows, cols, supp


def _forest(rows: list[int], cols: list[int], supp: set[tuple[int, int]]) -> set[tuple[int, int]]:
    """Edges of a BFS spanning forest of the bipartite support graph."""
    adj: dict[tuple[str, int], list[tuple[str, int]]] = {("r", i): [] for i in rows}
    adj.update({("c", j): [] for j in cols})
    for i, j in sorted(supp):
        adj[("r", i)].append(("c", j))
        adj[("c", j)].append(("r", i))
    seen = set()
    tree = set()
    for root in [("r", i) for i in rows] + [("c", j) for j in cols]:
        if root in seen:
            continue
        seen.add(root)
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w in seen:
                    continue
                seen.add(w)
                edge = (u[1], w[1]) if u[0] == "r" else (w[1], u[1])
                tree.add(edge)
                queue.append(w)
    return tree


def _default_basis(M: Matroid) -> int:
    return min(M.bases)


def enumerate_representations(M: Matroid, field, basis=None) -> list[PMatrix]:
    """Every B x B* matrix A over the field with M[I|A] = M, up to scaling.

    The zero pattern is forced by the fundamental circuits of B.  Entries on
    a spanning forest of the support are fixed to 1, which loses nothing up
    to row and column scaling; the rest range over the nonzero elements.
    Survivors are deduplicated pairwise by scaling equivalence.
    """
    pf = _field(field)
    B = _default_basis(M) if basis is None else M.mask(basis)
    if not M.is_basis(B):
        from .errors import NotABasis

        raise NotABasis("the given set is not a basis")
    r = popcount(B)
    if r * (M.n - r) > ENTRY_CAP:
        raise TooLarge(f"r(n - r) = {r * (M.n - r)} exceeds the cap {ENTRY_CAP}")
    rows, cols, supp = _support(M, B)
    tree = _forest(rows, cols, supp)
    free = sorted(supp - tree)
    units = [u.v for u in pf.units()]
    one = pf.raw_from_int(1)
    zero = pf.raw_from_int(0)
    rl = [M.ground[i] for i in rows]
    cl = [M.ground[j] for j in cols]
    rpos = {i: k for k, i in enumerate(rows)}
    cpos = {j: k for k, j in enumerate(cols)}
    classes: list[PMatrix] = []
    for values in product(units, repeat=len(free)):
        raw = [[zero] * len(cols) for _ in rows]
        for i, j in tree:
            raw[rpos[i]][cpos[j]] = one
        for (i, j), v in zip(free, values):
            raw[rpos[i]][cpos[j]] = v
        A = PMatrix(pf, rl, cl, raw)
        if matroid_from_pmatrix(A, check=False) != M:
            continue
        if any(scaling_equivalent(C, A) is not None for C in classes):
            continue
        classes.append(A)
    if not classes:
        raise NotRepresentable(f"M has no representation over {pf.name}")
    return classes


def stabilizer_check_finite(N: Matroid, M: Matroid, field) -> bool:
    """Whether N stabilizes M over the field, by enumeration.

    N is placed as M/C\\D using a minor recipe; B is C plus a basis of
    M/C\\D, so each representation restricts to one of N on the remaining
    rows and columns.  N stabilizes M when no two inequivalent
    representations of M have scaling-equivalent restrictions.
    """
    recipe = has_minor(M, N)
    if recipe is None:
        raise NoNMinor("M has no N-minor")
    C, D = M.mask(recipe.contract), M.mask(recipe.delete)
    minor = M.minor_mask(C, D)
    B_small = minor.labels(_default_basis(minor))
    B = C | M.mask(B_small)
    reps = enumerate_representations(M, field, M.labels(B))
    keep = [l for l in M.ground if not (C | D) >> M.index(l) & 1]
    restricted = [A.restrict(keep) for A in reps]
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            if scaling_equivalent(restricted[i], restricted[j]) is not None:
                return False
    return True
