"""Connectivity calculus: lambda, separations, vertical 3-separations,
full closure, z-closed sets and detachable pairs.

Conventions: lambda(S) = r(S) + r(E - S) - r(E).  A k-separation is a
partition (X, Y) with lambda(X) <= k - 1 and |X|, |Y| >= k; it is exact when
lambda(X) = k - 1.  A matroid is 3-connected when it has no 1- or
2-separation, read literally, so U(1,2) and U(2,3) are 3-connected.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

import numpy as np

from .errors import DegenerateSide, NoVerticalSeparation, Not3Connected
from .matroid import Matroid, _popcount_table, bits_of, mask_key, natural_key, popcount, series_classes, simplify, cosimplify

__all__ = [
    "SeparationRecord",
    "lam",
    "lambda_table",
    "is_connected",
    "is_3connected",
    "is_3connected_up_to_series",
    "components",
    "separations",
    "make_separation",
    "is_vertical_3sep",
    "vertical_3seps_through",
    "cl_or_clstar_membership",
    "guts",
    "coguts",
    "fcl",
    "is_z_closed",
    "z_closed_separation",
    "detachable_pairs",
    "is_segment",
    "is_cosegment",
    "si_is_3connected",
    "co_is_3connected",
]


def _sorted(labels: Iterable[str]) -> list[str]:
    return sorted(labels, key=natural_key)


@dataclass(frozen=True)
class SeparationRecord:
    """A partition (X, Y) or (X, {z}, Y) with its connectivity data.

    ``lam`` is lambda(X u z) (lambda(X) when there is no z); guts and coguts
    are those of (X u z, Y).
    """

    X: frozenset[str]
    Y: frozenset[str]
    z: str | None = None
    lam: int = 0
    exact: bool = False
    vertical: bool = False
    z_closed_Y: bool = False
    guts: frozenset[str] = field(default_factory=frozenset)
    coguts: frozenset[str] = field(default_factory=frozenset)

    def to_json(self) -> dict:
        return {
            "X": _sorted(self.X),
            "z": self.z,
            "Y": _sorted(self.Y),
            "lambda": self.lam,
            "exact": self.exact,
            "vertical": self.vertical,
            "z_closed_Y": self.z_closed_Y,
            "guts": _sorted(self.guts),
            "coguts": _sorted(self.coguts),
        }


# ---------------------------------------------------------------------------
# lambda and k-connectivity


def lambda_table(M: Matroid) -> np.ndarray:
    t = M._cache.get("lambda")
    if t is None:
        rk = M.rank_table.astype(np.int16)
        t = rk + rk[::-1] - M.r
        M._cache["lambda"] = t
    return t


def lam_mask(M: Matroid, S: int) -> int:
    return M.rk(S) + M.rk(M.full & ~S) - M.r


def lam(M: Matroid, S: Iterable[str]) -> int:
    """lambda(S) = r(S) + r(E - S) - r(E) for a proper nonempty S."""
    s = M.mask(S)
    if s == 0 or s == M.full:
        raise DegenerateSide("S must be a nonempty proper subset of the ground set")
    return lam_mask(M, s)


def _has_separation(M: Matroid, k: int) -> bool:
    if M.n < 2 * k:
        return False
    lt = lambda_table(M)
    pc = _popcount_table(M.n)
    return bool(np.any((lt <= k - 1) & (pc >= k) & (pc <= M.n - k)))


def is_connected(M: Matroid) -> bool:
    c = M._cache.get("connected")
    if c is None:
        c = not _has_separation(M, 1)
        M._cache["connected"] = c
    return c


def is_3connected(M: Matroid) -> bool:
    c = M._cache.get("3connected")
    if c is None:
        c = is_connected(M) and not _has_separation(M, 2)
        M._cache["3connected"] = c
    return c


def si_is_3connected(M: Matroid) -> bool:
    return is_3connected(simplify(M)[0])


def co_is_3connected(M: Matroid) -> bool:
    return is_3connected(cosimplify(M)[0])


def is_3connected_up_to_series(M: Matroid) -> bool:
    """co(M) is 3-connected and every non-trivial series class is a pair."""
    return co_is_3connected(M) and all(popcount(c) <= 2 for c in series_classes(M))


def components(M: Matroid) -> list[int]:
    """Connected components as masks (loops and coloops are singletons)."""
    parent = list(range(M.n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for c in M.circuit_masks():
        b = bits_of(c)
        for j in b[1:]:
            ri, rj = find(b[0]), find(j)
            if ri != rj:
                parent[ri] = rj
    comp: dict[int, int] = {}
    for i in range(M.n):
        comp[find(i)] = comp.get(find(i), 0) | (1 << i)
    return sorted(comp.values(), key=mask_key)


# ---------------------------------------------------------------------------
# separation records


def guts_mask(M: Matroid, P: int) -> int:
    Q = M.full & ~P
    return M.cl(P) & M.cl(Q)


def coguts_mask(M: Matroid, P: int) -> int:
    Q = M.full & ~P
    return M.ccl(P) & M.ccl(Q)


def guts(M: Matroid, P: Iterable[str]) -> frozenset[str]:
    return M.labels(guts_mask(M, M.mask(P)))


def coguts(M: Matroid, P: Iterable[str]) -> frozenset[str]:
    return M.labels(coguts_mask(M, M.mask(P)))


def is_vertical_3sep(M: Matroid, X: int, z: int, Y: int) -> bool:
    """(X, {z}, Y) with z a single-element mask."""
    if X & Y or X & z or Y & z or (X | Y | z) != M.full:
        return False
    rk = M.rk
    if rk(X) < 3 or rk(Y) < 3:
        return False
    if rk(X | z) != rk(X) or rk(Y | z) != rk(Y):
        return False
    return lam_mask(M, X) <= 2 and lam_mask(M, X | z) <= 2


def _record(M: Matroid, X: int, Y: int, z: int = 0, k: int = 3, z_closed: bool = False) -> SeparationRecord:
    P = X | z
    lam_value = lam_mask(M, P)
    if z:
        vertical = is_vertical_3sep(M, X, z, Y)
        exact = lam_value == 2 and lam_mask(M, X) == 2
    else:
        vertical = lam_value <= 2 and popcount(X) >= 3 and popcount(Y) >= 3 and min(M.rk(X), M.rk(Y)) >= 3
        exact = lam_value == k - 1
    return SeparationRecord(
        X=M.labels(X),
        Y=M.labels(Y),
        z=M.ground[bits_of(z)[0]] if z else None,
        lam=lam_value,
        exact=exact,
        vertical=vertical,
        z_closed_Y=z_closed,
        guts=M.labels(guts_mask(M, P)),
        coguts=M.labels(coguts_mask(M, P)),
    )


def make_separation(M: Matroid, X: Iterable[str], Y: Iterable[str], z: str | None = None, k: int = 3) -> SeparationRecord:
    xm, ym = M.mask(X), M.mask(Y)
    zm = M.bit(z) if z is not None else 0
    if xm & ym or (xm | ym | zm) != M.full or (zm & (xm | ym)):
        raise DegenerateSide("the sides must partition the ground set")
    if not xm or not ym:
        raise DegenerateSide("both sides must be nonempty")
    zc = bool(zm) and is_z_closed_mask(M, zm, ym)
    return _record(M, xm, ym, zm, k, zc)


def separations(M: Matroid, k: int, min_side: int | None = None) -> list[SeparationRecord]:
    """Every partition (X, Y) with lambda(X) <= k - 1 and both sides >= min_side.

    Each unordered partition appears once, with X the side that sorts first
    by (size, index tuple); the list is sorted the same way.
    """
    if k not in (1, 2, 3):
        raise ValueError("k must be 1, 2 or 3")
    side = k if min_side is None else min_side
    lt = lambda_table(M)
    pc = _popcount_table(M.n)
    hits = np.nonzero((lt <= k - 1) & (pc >= side) & (pc <= M.n - side))[0]
    out = []
    for x in hits:
        x = int(x)
        y = M.full & ~x
        if mask_key(x) < mask_key(y):
            out.append(x)
    out.sort(key=mask_key)
    return [_record(M, x, M.full & ~x, 0, k) for x in out]


def vertical_3seps_through(M: Matroid, z: str) -> list[SeparationRecord]:
    """All vertical 3-separations (X, z, Y), X the side sorting first."""
    if not is_3connected(M):
        raise Not3Connected("vertical separations are only enumerated for 3-connected matroids")
    zb = M.bit(z)
    return [_record(M, x, y, zb) for x, y in _vertical_masks(M, zb)]


def _vertical_masks(M: Matroid, zb: int) -> list[tuple[int, int]]:
    n = M.n
    idx = np.arange(1 << n, dtype=np.int64)
    rk = M.rank_table.astype(np.int16)
    lt = lambda_table(M)
    X = idx
    Y = (M.full ^ zb) ^ idx
    ok = (X & zb) == 0
    ok &= rk >= 3
    Ys = np.where(ok, Y, 0)
    ok &= rk[Ys] >= 3
    Xz = X | zb
    ok &= rk[Xz] == rk
    ok &= rk[Ys | zb] == rk[Ys]
    ok &= lt <= 2
    ok &= lt[Xz] <= 2
    out = []
    for x in np.nonzero(ok)[0]:
        x = int(x)
        y = (M.full ^ zb) ^ x
        if mask_key(x) < mask_key(y):
            out.append((x, y))
    out.sort(key=lambda p: mask_key(p[0]))
    return out


def has_vertical_3sep_through(M: Matroid, z: str) -> bool:
    return bool(_vertical_masks(M, M.bit(z)))


def cl_or_clstar_membership(M: Matroid, X: Iterable[str], e: str) -> dict[str, bool]:
    xm = M.mask(X)
    eb = M.bit(e)
    if xm & eb:
        raise ValueError("e must lie outside X")
    return {"in_cl": bool(M.cl(xm) & eb), "in_clstar": bool(M.ccl(xm) & eb)}


# ---------------------------------------------------------------------------
# full closure and z-closed sets


def fcl_mask(M: Matroid, A: int) -> int:
    while True:
        B = M.ccl(M.cl(A))
        if B == A:
            return A
        A = B


def fcl(M: Matroid, A: Iterable[str]) -> frozenset[str]:
    """The smallest set containing A that is both closed and coclosed."""
    return M.labels(fcl_mask(M, M.mask(A)))


def is_z_closed_mask(M: Matroid, zb: int, Y: int) -> bool:
    return M.ccl(Y) == Y and (M.cl(Y) & ~zb) == Y


def is_z_closed(M: Matroid, z: str, Y: Iterable[str]) -> bool:
    """Y = cl*(Y) and Y = cl(Y) - {z}."""
    return is_z_closed_mask(M, M.bit(z), M.mask(Y))


def _lift(M: Matroid, removed: int, mask: int) -> int:
    """Inverse of re-indexing after removing ``removed`` from M's ground set."""
    keep = [i for i in range(M.n) if not removed >> i & 1]
    return sum(1 << keep[k] for k in bits_of(mask))


def _drop(M: Matroid, removed: int, mask: int) -> int:
    keep = [i for i in range(M.n) if not removed >> i & 1]
    return sum(1 << k for k, i in enumerate(keep) if mask >> i & 1)


def z_closed_separation(M: Matroid, z: str, n_ground: Iterable[str] | None = None) -> SeparationRecord:
    """A vertical 3-separation (X, z, Y) with Y z-closed.

    Starts from a vertical 3-separation through z whose Y side meets
    ``n_ground`` in at most one element, then replaces Y by its full closure
    in M/z.
    """
    if not is_3connected(M):
        raise Not3Connected("M must be 3-connected")
    zb = M.bit(z)
    hint = M.mask(n_ground) if n_ground is not None else 0
    seps = _vertical_masks(M, zb)
    if not seps:
        raise NoVerticalSeparation(f"si(M/{z}) is 3-connected; no vertical 3-separation through {z}")
    Mz = M.contract_mask(zb)
    for x, y in seps:
        for X, Y in ((x, y), (y, x)):
            if popcount(Y & hint) > 1:
                continue
            Yg = _lift(M, zb, fcl_mask(Mz, _drop(M, zb, Y)))
            Xg = M.full & ~zb & ~Yg
            if popcount(Yg & hint) <= 1 and is_vertical_3sep(M, Xg, zb, Yg):
                return _record(M, Xg, Yg, zb, 3, is_z_closed_mask(M, zb, Yg))
    raise NoVerticalSeparation("no vertical 3-separation with a small N-side grows to a z-closed one")


# ---------------------------------------------------------------------------
# misc


def is_segment(M: Matroid, S: int) -> bool:
    """Every 3-subset of S is a triangle (|S| >= 3)."""
    if popcount(S) < 3 or M.rk(S) != 2:
        return False
    return all(M.rk((1 << a) | (1 << b)) == 2 for a, b in combinations(bits_of(S), 2))


def is_cosegment(M: Matroid, S: int) -> bool:
    return is_segment(M.dual(), S)


def detachable_pairs(M: Matroid) -> list[dict]:
    """Pairs {a, b} such that M\\a,b or M/a,b is 3-connected."""
    if not is_3connected(M):
        raise Not3Connected("M must be 3-connected")
    out = []
    for i, j in combinations(range(M.n), 2):
        pair = (1 << i) | (1 << j)
        ops = []
        if is_3connected(M.delete_mask(pair)):
            ops.append("delete")
        if is_3connected(M.contract_mask(pair)):
            ops.append("contract")
        if ops:
            out.append({"pair": [M.ground[i], M.ground[j]], "ops": ops})
    return out
