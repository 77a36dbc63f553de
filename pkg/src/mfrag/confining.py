"""Confining sets, the strong-element audit and good separations for z."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .connectivity import (
    SeparationRecord,
    _record,
    is_3connected,
    is_cosegment,
    is_z_closed_mask,
    z_closed_separation,
)
from .errors import NotRobustNonStrong, PreconditionViolated
from .incrimination import SetupContext
from .matroid import Matroid, bits_of, mask_key, natural_key, popcount
from .minors import _removal_flags, has_minor, unstable_series_pairs

__all__ = [
    "ConfiningSet",
    "confining_sets",
    "confining_sets_for",
    "AuditReport",
    "strong_element_audit",
    "GoodSeparation",
    "good_separation",
]


def _sorted(labels: Iterable[str]) -> list[str]:
    return sorted(labels, key=natural_key)


@dataclass(frozen=True)
class ConfiningSet:
    G: frozenset[str]
    T: frozenset[str]
    T2: frozenset[str]
    overlap: int
    strong_witness: str | None = None

    def to_json(self) -> dict:
        return {
            "G": _sorted(self.G),
            "T": _sorted(self.T),
            "T2": _sorted(self.T2),
            "overlap": self.overlap,
            "strong_witness": self.strong_witness,
        }


def confining_sets_for(Mp: Matroid, B: int, x: str, y: str, strong: int) -> list[ConfiningSet]:
    """Confining sets of Mp for the basis mask B, the pair {x, y} and strong-element mask.

    G must be {x, y} plus two or three cobasis elements, so we enumerate
    those, test coclosure, and only then look for the two triads.  The triad
    pair reported is the first one in (mask_key(T), mask_key(T')) order;
    sets are listed by mask_key(G).
    """
    xy = Mp.mask([x, y])
    if popcount(xy) != 2 or B & xy != xy:
        raise PreconditionViolated("x and y must be distinct elements of B")
    triads = sorted(Mp.triads(), key=mask_key)
    cob = [i for i in range(Mp.n) if not B >> i & 1]
    out = []
    for size in (2, 3):
        for combo in combinations(cob, size):
            S = sum(1 << i for i in combo)
            G = S | xy
            if Mp.ccl(S) & G != G:
                continue
            inside = [t for t in triads if t & G == t]
            if len(inside) < 2:
                continue
            want = 6 - popcount(G)  # |T n T'| for |G| = 4 or 5
            pair = None
            for i, t in enumerate(inside):
                for t2 in inside[i + 1 :]:
                    if t | t2 == G and popcount(t & t2) == want:
                        pair = (t, t2)
                        break
                if pair:
                    break
            if pair is None:
                continue
            hits = S & strong
            if want == 1 and not hits:
                continue
            witness = Mp.ground[bits_of(hits)[0]] if hits else None
            out.append(ConfiningSet(Mp.labels(G), Mp.labels(pair[0]), Mp.labels(pair[1]), want, witness))
    out.sort(key=lambda c: mask_key(Mp.mask(c.G)))
    return out


def confining_sets(ctx: SetupContext) -> list[ConfiningSet]:
    Mp = ctx.Mp
    if not is_3connected(Mp):
        raise PreconditionViolated("M\\a,b must be 3-connected")
    return confining_sets_for(Mp, ctx.Bmask, ctx.x, ctx.y, ctx.strong_mask())


# ---------------------------------------------------------------------------
# audit


@dataclass(frozen=True)
class AuditReport:
    strong_outside: tuple[str, ...]
    checks: dict  # lemma name -> list of violations (empty means it held)

    @property
    def ok(self) -> bool:
        return not any(self.checks.values())

    def to_json(self) -> dict:
        return {
            "strong_outside_xy": list(self.strong_outside),
            "checks": {k: {"ok": not v, "violations": v} for k, v in sorted(self.checks.items())},
            "ok": self.ok,
        }


def _cosegments_through(Mp: Matroid, u: int) -> list[int]:
    """Cosegments with at least four elements containing bit u."""
    near = 0
    for t in Mp.triads():
        if t >> u & 1:
            near |= t
    near &= ~(1 << u)
    out = []
    pool = bits_of(near)
    for size in range(3, len(pool) + 1):
        for combo in combinations(pool, size):
            C = (1 << u) | sum(1 << i for i in combo)
            if is_cosegment(Mp, C):
                out.append(C)
    return out


def strong_element_audit(ctx: SetupContext) -> AuditReport:
    """Check the conclusions about (N,B)-strong elements outside {x, y}.

    Checks: strong elements avoid B; long cosegments through one have four
    elements meeting B in {x, y}; there are at most two; a four-element
    cosegment meeting B in {x, y} leaves none outside it; unstable series
    pairs of M\\a,b,u meet B only inside {x, y}.
    """
    ctx.validate()
    Mp, N = ctx.Mp, ctx.N
    B = ctx.Bmask
    xy = Mp.mask([ctx.x, ctx.y])
    outside = ctx.strong_mask() & ~xy
    strong_labels = tuple(_sorted(Mp.labels(outside)))
    checks: dict[str, list] = {
        "nostrongbasis": [],
        "nostronglongline": [],
        "atmost2outxy": [],
        "cosegstrongbound": [],
        "unstablemeetsxy": [],
    }
    for u in bits_of(outside & B):
        checks["nostrongbasis"].append({"element": Mp.ground[u]})
    for u in bits_of(outside):
        for C in _cosegments_through(Mp, u):
            if popcount(C) != 4 or C & B != xy:
                checks["nostronglongline"].append({"element": Mp.ground[u], "cosegment": _sorted(Mp.labels(C))})
    if popcount(outside) > 2:
        checks["atmost2outxy"].append({"strong": list(strong_labels)})
    cob = [i for i in range(Mp.n) if not B >> i & 1]
    for c, d in combinations(cob, 2):
        C = xy | (1 << c) | (1 << d)
        if is_cosegment(Mp, C) and outside & ~C:
            checks["cosegstrongbound"].append(
                {"cosegment": _sorted(Mp.labels(C)), "strong_outside": _sorted(Mp.labels(outside & ~C))}
            )
    M = ctx.M
    for u in bits_of(outside):
        ul = Mp.ground[u]
        pairs = set()
        for keep, gone in ((ctx.b, ctx.a), (ctx.a, ctx.b)):
            try:
                found = unstable_series_pairs(M.delete([gone, ul]), keep, N)
            except PreconditionViolated:
                continue
            pairs.update(tuple(s) for s in found)
        for S in sorted(pairs, key=lambda s: [natural_key(l) for l in s]):
            if Mp.mask(S) & B & ~xy:
                checks["unstablemeetsxy"].append({"element": ul, "series_pair": list(S)})
    return AuditReport(strong_labels, checks)


# ---------------------------------------------------------------------------
# good separations


@dataclass(frozen=True)
class GoodSeparation:
    """A good separation (X, z, Y) for z, taken in M\\a,b or its dual.

    ``in_dual`` says the separation is one of (M\\a,b)*; ``trimmed`` lists the
    elements moved from Y to X.
    """

    record: SeparationRecord
    in_dual: bool
    trimmed: tuple[str, ...]
    z_closed_before: bool
    s_prime_in_Y: bool
    n_side_small: bool
    flexible_outside_s_prime: bool

    @property
    def ok(self) -> bool:
        return (
            self.record.vertical
            and self.z_closed_before
            and self.s_prime_in_Y
            and self.n_side_small
            and self.flexible_outside_s_prime
            and len(self.trimmed) <= 1
        )

    def to_json(self) -> dict:
        return {
            "separation": self.record.to_json(),
            "in_dual": self.in_dual,
            "trimmed": list(self.trimmed),
            "z_closed_before": self.z_closed_before,
            "s_prime_in_Y": self.s_prime_in_Y,
            "n_side_small": self.n_side_small,
            "flexible_outside_s_prime": self.flexible_outside_s_prime,
            "ok": self.ok,
        }


def good_separation(ctx: SetupContext, z: str) -> GoodSeparation:
    """Build a good separation for a robust, non-strong element z outside {x, y}.

    For z in B we work in M\\a,b and place an N-minor of M\\a,b/z; for z in
    B* we work in the dual with an N-minor of M\\a,b\\z.  The z-closed
    separation keeps that minor's ground set on X except for at most one
    element, then the elements of Y - S' that are not (N,B)-robust move to X.
    """
    Mp, N = ctx.Mp, ctx.N
    zi = Mp.index(z)
    zb = 1 << zi
    if z in (ctx.x, ctx.y):
        raise NotRobustNonStrong(f"{z!r} must lie outside {{x, y}}")
    if not ctx.robust_mask() & zb or ctx.strong_mask() & zb:
        raise NotRobustNonStrong(f"{z!r} is not (N,B)-robust but non-strong")
    in_basis = bool(ctx.Bmask & zb)
    W = Mp if in_basis else Mp.dual()
    minus = Mp.contract([z]) if in_basis else Mp.delete([z])
    recipe = has_minor(minus, N)
    n_ground = set(minus.ground) - set(recipe.contract) - set(recipe.delete)
    rec = z_closed_separation(W, z, n_ground)
    Xm, Ym = W.mask(rec.X), W.mask(rec.Y)
    z_closed = is_z_closed_mask(W, zb, Ym)
    sp = W.mask(ctx.s_prime())
    robust = ctx.robust_mask()
    trim = Ym & ~sp & ~robust
    Xg, Yg = Xm | trim, Ym & ~trim
    final = _record(W, Xg, Yg, zb, 3, is_z_closed_mask(W, zb, Yg))
    dele, con = _removal_flags(Mp, N)
    flexible = all(dele[i] and con[i] for i in bits_of(Yg & ~sp))
    nmask = W.mask(n_ground)
    return GoodSeparation(
        record=final,
        in_dual=not in_basis,
        trimmed=tuple(_sorted(W.labels(trim))),
        z_closed_before=z_closed,
        s_prime_in_Y=sp & Yg == sp,
        n_side_small=popcount(Yg & nmask) <= 1,
        flexible_outside_s_prime=flexible,
    )
