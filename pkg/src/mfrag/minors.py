"""N-minor search and the element taxonomy built on it.

An element e of M is N-deletable if M\\e has an N-minor and N-contractible
if M/e has one; flexible elements are both, essential elements neither.
Relative to a basis B, e is (N,B)-robust when it can be removed the way its
side of B suggests (contract if e is in B, delete otherwise) and
(N,B)-strong when moreover si(M/e) (resp. co(M\\e)) is 3-connected and keeps
the N-minor.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .catalog import is_binary, wheel, whirl
from .connectivity import (
    SeparationRecord,
    co_is_3connected,
    is_3connected,
    is_connected,
    lam_mask,
    make_separation,
)
from .errors import (
    NNotApplicable,
    NoBasisMeetsConstraints,
    NoNMinor,
    NotABasis,
    PreconditionViolated,
)
from .isomorphism import invariant_signature, isomorphic
from .matroid import (
    Matroid,
    MinorRecipe,
    bits_of,
    cosimplify,
    natural_key,
    popcount,
    series_classes,
    simplify,
    subsets_of,
)

__all__ = [
    "ElementClassification",
    "RobustBasis",
    "SplitterSequence",
    "has_minor",
    "has_minor_mask",
    "naive_has_minor",
    "classify_elements",
    "is_fragile",
    "is_strictly_fragile",
    "robust_basis_search",
    "splitter_sequence",
    "part_matroid",
    "n_stable",
    "unstable_series_pairs",
    "is_wheel_or_whirl",
]


# ---------------------------------------------------------------------------
# minor search


def _compress(keep: int, family) -> frozenset[int]:
    pos = bits_of(keep)
    out = set()
    for m in family:
        v = 0
        for k, i in enumerate(pos):
            if m >> i & 1:
                v |= 1 << k
        out.add(v)
    return frozenset(out)


def has_minor_mask(M: Matroid, N: Matroid) -> tuple[int, int] | None:
    """(C, D) masks with M/C\\D isomorphic to N, or None.

    Contract sets are independent sets of size r(M) - r(N) in combinations
    order; delete sets are then chosen among the rest.  With C independent,
    M/C\\D has rank r(N) exactly when D is coindependent in M/C, and its
    bases are B - C for the bases B with C <= B and B n D empty.
    """
    key = ("minor", N)
    if key in M._cache:
        return M._cache[key]
    result = _search_minor(M, N)
    M._cache[key] = result
    return result


def _search_minor(M: Matroid, N: Matroid) -> tuple[int, int] | None:
    kc = M.r - N.r
    kd = (M.n - M.r) - (N.n - N.r)
    if kc < 0 or kd < 0:
        return None
    if N.n == M.n:
        return (0, 0) if isomorphic(M, N) is not None else None
    if is_binary(M) and not is_binary(N):
        return None
    target = len(N.bases)
    sig = invariant_signature(N)
    seen: dict[frozenset[int], bool] = {}
    for C in combinations(range(M.n), kc):
        cm = sum(1 << i for i in C)
        if not M.is_independent(cm):
            continue
        through = [b for b in M.bases if b & cm == cm]
        rest = [i for i in range(M.n) if not cm >> i & 1]
        for D in combinations(rest, kd):
            dm = sum(1 << i for i in D)
            fam = [b & ~cm for b in through if not b & dm]
            if len(fam) != target:
                continue
            keep = M.full & ~(cm | dm)
            cf = _compress(keep, fam)
            hit = seen.get(cf)
            if hit is None:
                cand = Matroid([M.ground[i] for i in bits_of(keep)], cf)
                hit = invariant_signature(cand) == sig and isomorphic(cand, N) is not None
                seen[cf] = hit
            if hit:
                return cm, dm
    return None


def has_minor(M: Matroid, N: Matroid) -> MinorRecipe | None:
    """Some recipe (C, D) with M/C\\D isomorphic to N, or None."""
    hit = has_minor_mask(M, N)
    if hit is None:
        return None
    return MinorRecipe(M.labels(hit[0]), M.labels(hit[1]))


def naive_has_minor(M: Matroid, N: Matroid) -> bool:
    """Reference search over every disjoint (C, D), with no pruning or memo."""
    for C in subsets_of(M.full):
        for D in subsets_of(M.full & ~C):
            if M.n - popcount(C | D) != N.n:
                continue
            if isomorphic(M.minor_mask(C, D), N) is not None:
                return True
    return False


def _keeps(M: Matroid, N: Matroid) -> bool:
    return M.n >= N.n and has_minor_mask(M, N) is not None


# ---------------------------------------------------------------------------
# element taxonomy


@dataclass(frozen=True)
class ElementClassification:
    element: str
    deletable: bool
    contractible: bool
    robust: bool | None = None
    strong: bool | None = None

    @property
    def flexible(self) -> bool:
        return self.deletable and self.contractible

    @property
    def essential(self) -> bool:
        return not (self.deletable or self.contractible)

    def to_json(self) -> dict:
        out = {
            "element": self.element,
            "deletable": self.deletable,
            "contractible": self.contractible,
            "flexible": self.flexible,
            "essential": self.essential,
        }
        if self.robust is not None:
            out["robust"] = self.robust
            out["strong"] = self.strong
        return out


def _removal_flags(M: Matroid, N: Matroid) -> tuple[list[bool], list[bool]]:
    cached = M._cache.get(("removal", N))
    if cached is None:
        dele = [_keeps(M.delete_mask(1 << i), N) for i in range(M.n)]
        con = [_keeps(M.contract_mask(1 << i), N) for i in range(M.n)]
        cached = (dele, con)
        M._cache[("removal", N)] = cached
    return cached


def _strong_flags(M: Matroid, N: Matroid) -> tuple[list[bool], list[bool]]:
    """Per element: si(M/e) 3-connected with an N-minor; co(M\\e) likewise."""
    cached = M._cache.get(("strong", N))
    if cached is None:
        dele, con = _removal_flags(M, N)
        si_ok, co_ok = [], []
        for i in range(M.n):
            b = 1 << i
            s = simplify(M.contract_mask(b))[0] if con[i] else None
            si_ok.append(s is not None and is_3connected(s) and _keeps(s, N))
            c = cosimplify(M.delete_mask(b))[0] if dele[i] else None
            co_ok.append(c is not None and is_3connected(c) and _keeps(c, N))
        cached = (si_ok, co_ok)
        M._cache[("strong", N)] = cached
    return cached


def _basis_mask(M: Matroid, B) -> int:
    bm = M.mask(B)
    if not M.is_basis(bm):
        raise NotABasis(f"{sorted(M.labels(bm), key=natural_key)} is not a basis")
    return bm


def classify_elements(M: Matroid, N: Matroid, B=None) -> list[ElementClassification]:
    if not _keeps(M, N):
        raise NoNMinor("M has no N-minor")
    bm = None if B is None else _basis_mask(M, B)
    dele, con = _removal_flags(M, N)
    if bm is not None:
        si_ok, co_ok = _strong_flags(M, N)
    out = []
    for i, e in enumerate(M.ground):
        robust = strong = None
        if bm is not None:
            inside = bool(bm >> i & 1)
            robust = con[i] if inside else dele[i]
            strong = si_ok[i] if inside else co_ok[i]
        out.append(ElementClassification(e, dele[i], con[i], robust, strong))
    return out


def is_fragile(M: Matroid, N: Matroid) -> bool:
    """No element is N-flexible."""
    if M.n <= N.n:
        return True
    dele, con = _removal_flags(M, N)
    return not any(d and c for d, c in zip(dele, con))


def is_strictly_fragile(M: Matroid, N: Matroid) -> bool:
    return _keeps(M, N) and is_fragile(M, N)


# ---------------------------------------------------------------------------
# robust bases


@dataclass(frozen=True)
class RobustBasis:
    basis: frozenset[str]
    robust_count: int
    robust: frozenset[str]
    strong: frozenset[str]

    def to_json(self) -> dict:
        return {
            "basis": sorted(self.basis, key=natural_key),
            "robust_count": self.robust_count,
            "robust_outside_xy": sorted(self.robust, key=natural_key),
            "strong": sorted(self.strong, key=natural_key),
        }


def robust_basis_search(Mp: Matroid, N: Matroid, x: str, y: str, triad_z: str | None = None) -> RobustBasis:
    """A basis containing {x, y} with the most (N,B)-robust elements outside {x, y}.

    With ``triad_z`` the basis must display the triad {x, y, z}: that set has
    to be a triad of Mp, z must lie outside B and be (N,B)-strong.  Ties go
    to the smallest basis bitmask.
    """
    if not _keeps(Mp, N):
        raise NoNMinor("Mp has no N-minor")
    xy = Mp.mask([x, y])
    if popcount(xy) != 2:
        raise NoBasisMeetsConstraints("x and y must be distinct")
    zb = 0
    if triad_z is not None:
        zb = Mp.bit(triad_z)
        if (xy | zb) not in set(Mp.triads()):
            raise NoBasisMeetsConstraints(f"{{{x}, {y}, {triad_z}}} is not a triad")
    dele, con = _removal_flags(Mp, N)
    si_ok, co_ok = _strong_flags(Mp, N)
    best = None
    for b in sorted(Mp.bases):
        if b & xy != xy:
            continue
        if zb:
            iz = bits_of(zb)[0]
            if b & zb or not co_ok[iz]:
                continue
        robust = 0
        strong = 0
        for i in range(Mp.n):
            inside = b >> i & 1
            if con[i] if inside else dele[i]:
                robust |= 1 << i
            if si_ok[i] if inside else co_ok[i]:
                strong |= 1 << i
        count = popcount(robust & ~xy)
        if best is None or count > best[1]:
            best = (b, count, robust & ~xy, strong)
    if best is None:
        raise NoBasisMeetsConstraints("no basis meets the constraints")
    b, count, robust, strong = best
    return RobustBasis(Mp.labels(b), count, Mp.labels(robust), Mp.labels(strong))


# ---------------------------------------------------------------------------
# splitter sequences


@dataclass(frozen=True)
class SplitterSequence:
    recipe: MinorRecipe
    order: tuple[str, ...]

    def to_json(self) -> dict:
        return {"recipe": self.recipe.to_json(), "order": list(self.order)}


def is_wheel_or_whirl(N: Matroid) -> bool:
    """Wheels and whirls of rank at least 3."""
    r = N.r
    if N.n != 2 * r or r < 3 or r > 8:
        return False
    return isomorphic(N, wheel(r)) is not None or isomorphic(N, whirl(r)) is not None


def splitter_sequence(M: Matroid, N: Matroid) -> SplitterSequence | None:
    """Remove elements one at a time, keeping 3-connectivity and an N-minor.

    Depth-first search trying deletions before contractions, each in ground
    order.  Returns None only if the search is exhausted.
    """
    if N.n < 4 or not is_3connected(N):
        raise PreconditionViolated("N must be 3-connected with at least four elements")
    if is_wheel_or_whirl(N):
        raise PreconditionViolated("N must be neither a wheel nor a whirl")
    if not is_3connected(M):
        raise PreconditionViolated("M must be 3-connected")
    if not _keeps(M, N):
        raise NoNMinor("M has no N-minor")
    dead: set[tuple[int, int]] = set()

    def rec(cur: Matroid, C: int, D: int, moves: list[tuple[str, bool]]):
        if cur.n == N.n:
            return moves
        for contract in (False, True):
            for i in range(cur.n):
                label = cur.ground[i]
                g = M.bit(label)
                state = (C | g, D) if contract else (C, D | g)
                if state in dead:
                    continue
                nxt = cur.contract_mask(1 << i) if contract else cur.delete_mask(1 << i)
                if is_3connected(nxt) and _keeps(nxt, N):
                    found = rec(nxt, *state, moves + [(label, contract)])
                    if found is not None:
                        return found
                dead.add(state)
        return None

    moves = rec(M, 0, 0, [])
    if moves is None:
        return None
    C = frozenset(l for l, c in moves if c)
    D = frozenset(l for l, c in moves if not c)
    return SplitterSequence(MinorRecipe(C, D), tuple(l for l, _ in moves))


# ---------------------------------------------------------------------------
# 2-sum parts, N-stability and unstable series pairs


def _fresh_label(M: Matroid, base: str = "p") -> str:
    label = base
    k = 0
    while label in M._index:
        k += 1
        label = f"{base}{k}"
    return label


def part_matroid(M: Matroid, X, p: str | None = None) -> Matroid:
    """The part M_X of the 2-sum decomposition along the 2-separation (X, E - X).

    Its ground set is X plus a basepoint p with r(S) = r_M(S) and
    r(S u p) = r_M(S u Y) - r_M(Y) + 1 for S <= X.
    """
    xm = M.mask(X) if not isinstance(X, int) else X
    ym = M.full & ~xm
    if lam_mask(M, xm) != 1 or popcount(xm) < 2 or popcount(ym) < 2:
        raise PreconditionViolated("X must be one side of a 2-separation")
    p = p or _fresh_label(M)
    rx, ry = M.rk(xm), M.rk(ym)
    xb = bits_of(xm)
    ground = Matroid.sort_labels([M.ground[i] for i in xb] + [p])
    pos = {l: k for k, l in enumerate(ground)}
    pbit = 1 << pos[p]
    bases = set()
    for size_in_x, with_p in ((rx, False), (rx - 1, True)):
        for combo in combinations(xb, size_in_x):
            s = sum(1 << i for i in combo)
            rank = M.rk(s | ym) - ry + 1 if with_p else M.rk(s)
            if rank == rx:
                v = sum(1 << pos[M.ground[i]] for i in combo)
                bases.add(v | pbit if with_p else v)
    return Matroid(ground, bases)


def n_stable(M: Matroid, N: Matroid) -> tuple[bool, SeparationRecord | None]:
    """Whether every 2-separation (X, Y) whose X side avoids N has a binary part M_X.

    The X side of a 2-separation avoids N (meets some N-minor in at most one
    element) exactly when the other part M_Y has an N-minor.
    """
    if is_binary(N):
        raise NNotApplicable("N must be non-binary")
    if not is_connected(M):
        raise PreconditionViolated("M must be connected")
    if not _keeps(M, N):
        raise NoNMinor("M has no N-minor")
    if is_3connected(M):
        return True, None
    from .connectivity import lambda_table
    import numpy as np

    lt = lambda_table(M)
    seen = set()
    for xm in np.nonzero(lt == 1)[0]:
        xm = int(xm)
        ym = M.full & ~xm
        if popcount(xm) < 2 or popcount(ym) < 2 or xm in seen:
            continue
        seen.add(xm)
        MX = part_matroid(M, xm)
        MY = part_matroid(M, ym)
        if _keeps(MY, N) and not is_binary(MX):
            return False, make_separation(M, M.labels(xm), M.labels(ym), k=2)
    return True, None


def unstable_series_pairs(M: Matroid, e: str, N: Matroid) -> list[list[str]]:
    """Non-trivial series classes S of M\\e such that S u e spans a U(2,4) part of M.

    S is reported when (S u e, rest) is a 2-separation of M whose part on
    S u e is isomorphic to U(2,4).
    """
    from .catalog import uniform

    eb = M.bit(e)
    Md = M.delete_mask(eb)
    if not co_is_3connected(Md):
        raise PreconditionViolated(f"M\\{e} is not 3-connected up to series pairs")
    if not _keeps(Md, N):
        raise PreconditionViolated(f"M\\{e} has no N-minor")
    u24 = uniform(2, 4)
    out = []
    for cls in series_classes(Md):
        if popcount(cls) < 2:
            continue
        labels = Md.labels(cls)
        xm = M.mask(labels) | eb
        if popcount(M.full & ~xm) < 2 or lam_mask(M, xm) != 1:
            continue
        if isomorphic(part_matroid(M, xm), u24) is not None:
            out.append(sorted(labels, key=natural_key))
    return sorted(out, key=lambda s: [natural_key(l) for l in s])
