"""Delta-Y and Y-Delta exchange.

The Delta-Y exchange on a triangle T glues a copy of M(K4) to M along T by
the generalised parallel connection and then deletes T.  Flats of the
connection are the sets meeting each side in a flat; their rank is
r1(F1) + r2(F2) - r(F1 n T).  Every other rank follows by taking the
minimum over flats containing the set.

Each new element sits opposite one member of T in K4 and inherits its label.
"""

from __future__ import annotations

import numpy as np

from .catalog import graphic_matroid
from .errors import NotATriad, NotATriangle, TriangleNotCoindependent
from .matroid import Matroid, _popcount_table, bits_of, popcount

__all__ = ["delta_y", "wye_delta", "flats_table", "delta_wye_relatives"]

# K4 on vertices 1..4 with T = {t1, t2, t3} the triangle on 1, 2, 3 and
# oi the edge disjoint from ti
_K4 = graphic_matroid(
    {
        "t1": ("1", "2"),
        "t2": ("1", "3"),
        "t3": ("2", "3"),
        "o1": ("3", "4"),
        "o2": ("2", "4"),
        "o3": ("1", "4"),
    }
)


def flats_table(M: Matroid) -> np.ndarray:
    """Boolean array over all subsets: True exactly at the flats of M."""
    rk = M.rank_table
    flat = np.ones(1 << M.n, dtype=bool)
    for i in range(M.n):
        v = rk.reshape(-1, 2, 1 << i)
        f = flat.reshape(-1, 2, 1 << i)
        # a set missing element i is not closed if adding i keeps the rank
        f[:, 0, :] &= v[:, 1, :] > v[:, 0, :]
    return flat


def _superset_min(a: np.ndarray, n: int) -> None:
    for i in range(n):
        v = a.reshape(-1, 2, 1 << i)
        np.minimum(v[:, 0, :], v[:, 1, :], out=v[:, 0, :])


def delta_y(M: Matroid, T, require_coindependent: bool = False) -> Matroid:
    """Replace the triangle T of M by a triad.

    The construction is defined for every triangle.  When T is not
    coindependent the image of T is not a triad of the result, so the move
    cannot be undone; pass ``require_coindependent=True`` to reject that case.
    """
    tmask = M.mask(T)
    if popcount(tmask) != 3 or tmask not in set(M.triangles()):
        raise NotATriangle(f"{sorted(M.labels(tmask))} is not a triangle")
    if require_coindependent and M.crk(tmask) != 3:
        raise TriangleNotCoindependent(f"{sorted(M.labels(tmask))} is not coindependent")
    t_idx = bits_of(tmask)
    n = M.n
    # ground of the connection: M's elements, then o1, o2, o3 at bits n..n+2
    k4 = _K4
    k4_t = [k4.index(f"t{i}") for i in (1, 2, 3)]
    k4_o = [k4.index(f"o{i}") for i in (1, 2, 3)]

    def k4_to_p(mask: int) -> int:
        out = 0
        for j in range(3):
            if mask >> k4_t[j] & 1:
                out |= 1 << t_idx[j]
            if mask >> k4_o[j] & 1:
                out |= 1 << (n + j)
        return out

    big = 1 << 6
    flat1 = flats_table(k4)
    flat2 = flats_table(M)
    rk1 = k4.rank_table
    rk2 = M.rank_table
    by_t: dict[int, list[int]] = {}
    for f in np.nonzero(flat2)[0]:
        f = int(f)
        by_t.setdefault(f & tmask, []).append(f)
    vals = np.full(1 << (n + 3), big, dtype=np.int16)
    for f1 in np.nonzero(flat1)[0]:
        f1 = int(f1)
        p1 = k4_to_p(f1)
        t_part = p1 & tmask
        shared = min(popcount(t_part), 2)
        for f2 in by_t.get(t_part, ()):
            v = int(rk1[f1]) + int(rk2[f2]) - shared
            idx = p1 | f2
            if v < vals[idx]:
                vals[idx] = v
    _superset_min(vals, n + 3)
    keep = ((1 << (n + 3)) - 1) & ~tmask
    idx = np.arange(1 << (n + 3), dtype=np.int64)
    r_keep = int(vals[keep])
    pc = _popcount_table(n + 3)
    hits = np.nonzero(((idx & ~keep) == 0) & (pc == r_keep) & (vals == r_keep))[0]
    # relabel: oi takes the label of ti
    labels = [M.ground[i] for i in range(n)] + [M.ground[t] for t in t_idx]
    kept = [i for i in range(n + 3) if keep >> i & 1]
    ground = Matroid.sort_labels(labels[i] for i in kept)
    pos = {l: k for k, l in enumerate(ground)}
    spread = [1 << pos[labels[i]] for i in range(n + 3)]
    bases = set()
    for h in hits:
        h = int(h)
        bases.add(sum(spread[i] for i in bits_of(h)))
    return Matroid(ground, bases)


def wye_delta(M: Matroid, T, require_independent: bool = False) -> Matroid:
    """Replace the triad T of M by a triangle (the dual move)."""
    tmask = M.mask(T)
    if popcount(tmask) != 3 or tmask not in set(M.triads()):
        raise NotATriad(f"{sorted(M.labels(tmask))} is not a triad")
    if require_independent and M.rk(tmask) != 3:
        raise TriangleNotCoindependent(f"{sorted(M.labels(tmask))} is not independent")
    return delta_y(M.dual(), T).dual()


def delta_wye_relatives(M: Matroid) -> list[Matroid]:
    """M and every matroid reachable from it by reversible Delta-Y and Y-Delta
    moves, one per isomorphism class, in discovery order."""
    from .isomorphism import isomorphic

    found = [M]
    todo = [M]
    while todo:
        cur = todo.pop(0)
        moves = [delta_y(cur, cur.labels(t)) for t in cur.triangles() if cur.crk(t) == 3]
        moves += [wye_delta(cur, cur.labels(t)) for t in cur.triads() if cur.rk(t) == 3]
        for X in moves:
            if not any(isomorphic(X, Y) is not None for Y in found):
                found.append(X)
                todo.append(X)
    return found
