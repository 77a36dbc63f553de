"""Outcome classifiers for the two structure theorems and the hypothesis
checker for the non-representability certificate.

The classifiers only evaluate outcome predicates.  Whether M really is an
excluded minor is the caller's assumption.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Iterable

from .connectivity import is_3connected, is_connected
from .deltawye import wye_delta
from .errors import InvalidSetup, MfragError, UnknownLabel
from .fans import fan_type, is_fan
from .incrimination import SetupContext, incriminates
from .matroid import Matroid, bits_of, mask_key, minor_B, natural_key, popcount
from .minors import _keeps, _removal_flags, _strong_flags, is_strictly_fragile, n_stable

__all__ = [
    "OutcomeVerdict",
    "RobustBasisChoice",
    "robust_bases",
    "classify_mainthm1",
    "classify_mainthm2",
    "check_notrepcert_hypotheses",
    "enumerate_setups",
]

SIZE_SLACK = 16
RANK_SLACK = 8


def _sorted(labels: Iterable[str]) -> list[str]:
    return sorted(labels, key=natural_key)


@dataclass(frozen=True)
class OutcomeVerdict:
    theorem: int
    flags: dict
    evidence: dict
    notes: dict = field(default_factory=dict)

    @property
    def any_holds(self) -> bool:
        return any(self.flags.values())

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "flags": dict(sorted(self.flags.items())),
            "evidence": self.evidence,
            "notes": self.notes,
            "any_holds": self.any_holds,
        }


# ---------------------------------------------------------------------------
# robust bases


@dataclass(frozen=True)
class RobustBasisChoice:
    bases: tuple[int, ...]  # every basis attaining the maximum, ascending
    robust_count: int
    constrained: bool  # some basis has a strong element outside {x, y}
    fallback: bool  # constrained, but no basis displays a strong triad


class _Flags:
    """Per-element removal and strong flags of M\\a,b, plus basis-relative views."""

    def __init__(self, Mp: Matroid, N: Matroid):
        self.Mp = Mp
        self.dele, self.con = _removal_flags(Mp, N)
        self.si_ok, self.co_ok = _strong_flags(Mp, N)
        n = Mp.n
        self.dm = sum(1 << i for i in range(n) if self.dele[i])
        self.cm = sum(1 << i for i in range(n) if self.con[i])
        self.sim = sum(1 << i for i in range(n) if self.si_ok[i])
        self.com = sum(1 << i for i in range(n) if self.co_ok[i])
        self.flexible = self.dm & self.cm

    def robust(self, B: int) -> int:
        return (self.cm & B) | (self.dm & ~B & self.Mp.full)

    def strong(self, B: int) -> int:
        return (self.sim & B) | (self.com & ~B & self.Mp.full)


def _robust_bases(Mp: Matroid, F: _Flags, xy: int) -> RobustBasisChoice:
    triads = set(Mp.triads())
    pool = sorted(b for b in Mp.bases if b & xy == xy)
    if not pool:
        raise InvalidSetup("no basis of M\\a,b contains {x, y}")
    constrained = any(F.strong(b) & ~xy for b in pool)
    fallback = False
    allowed = pool
    if constrained:
        zs = [i for i in range(Mp.n) if (xy | 1 << i) in triads and F.co_ok[i]]
        shown = [b for b in pool if any(not b >> i & 1 for i in zs)]
        if shown:
            allowed = shown
        else:
            fallback = True
    counts = {b: popcount(F.robust(b) & ~xy) for b in allowed}
    best = max(counts.values())
    return RobustBasisChoice(tuple(b for b in allowed if counts[b] == best), best, constrained, fallback)


def robust_bases(Mp: Matroid, N: Matroid, x: str, y: str) -> RobustBasisChoice:
    """All robust bases of Mp for the pair {x, y}.

    A robust basis contains {x, y} and has the most (N,B)-robust elements
    outside {x, y}.  When some basis has a strong element outside {x, y},
    the competition is restricted to bases B displaying a triad {x, y, z}
    with z outside B and (N,B)-strong; if no basis displays one, the
    restriction is dropped and ``fallback`` is set.
    """
    return _robust_bases(Mp, _Flags(Mp, N), Mp.mask([x, y]))


def _fragility_clause(Mp: Matroid, F: _Flags, B: int, xy: int) -> dict | None:
    """Outcome b(i) / c for one basis, with evidence or None."""
    if F.flexible:
        return None
    outside = F.robust(B) & ~B & ~xy
    if popcount(outside) > 1:
        return None
    ev = {"basis": _sorted(Mp.labels(B)), "robust_outside_xy": _sorted(Mp.labels(F.robust(B) & ~xy))}
    if outside:
        z = bits_of(outside)[0]
        if not F.strong(B) >> z & 1 or (xy | outside) not in set(Mp.triads()):
            return None
        ev["z"] = Mp.ground[z]
        ev["triad"] = _sorted(Mp.labels(xy | outside))
    return ev


def _cocircuit_clause(ctx: SetupContext, z: str) -> dict | None:
    M = ctx.M
    C = M.mask([ctx.a, ctx.b, ctx.x, ctx.y, z])
    if C not in set(M.cocircuit_masks()):
        return None
    tri = set(M.triangles())
    for p in (ctx.a, ctx.b):
        T = M.mask([p, ctx.x, ctx.y])
        if T in tri:
            return {"cocircuit": _sorted(M.labels(C)), "triangle": _sorted(M.labels(T)), "z": z}
    return None


def _flexible_triad_clause(ctx: SetupContext, F: _Flags, B: int, xy: int) -> dict | None:
    """Outcome b(ii) for one basis."""
    Mp = ctx.Mp
    if not F.flexible:
        return None
    triads = set(Mp.triads())
    for z in range(Mp.n):
        if B >> z & 1 or not F.strong(B) >> z & 1:
            continue
        S = xy | 1 << z
        if S not in triads or F.flexible & ~S or F.robust(B) & ~S:
            continue
        co = _cocircuit_clause(ctx, Mp.ground[z])
        if co is None:
            continue
        return {"basis": _sorted(Mp.labels(B)), "z": Mp.ground[z], "triad": _sorted(Mp.labels(S)), **co}
    return None


def _fan_is_maximal(Mp: Matroid, order: list[str]) -> bool:
    rest = [e for e in Mp.ground if e not in order]
    return not any(is_fan(Mp, [e] + order) or is_fan(Mp, order + [e]) for e in rest)


def _type2_fan_clause(ctx: SetupContext, F: _Flags, B: int, xy: int) -> dict | None:
    """Outcome b(iii) for one basis; z in the cocircuit clause may be z1 or z2."""
    Mp = ctx.Mp
    if not F.flexible:
        return None
    Bl = Mp.labels(B)
    others = [i for i in range(Mp.n) if not xy >> i & 1]
    for z1, z2 in permutations(others, 2):
        if not F.strong(B) >> z1 & 1:
            continue
        S = xy | 1 << z1 | 1 << z2
        if F.flexible & ~S or F.robust(B) & ~S:
            continue
        order = [Mp.ground[z2], Mp.ground[z1], ctx.x, ctx.y]
        if not is_fan(Mp, order) or fan_type(Mp, order, Bl) != "II":
            continue
        if not _fan_is_maximal(Mp, order):
            continue
        for z in (z1, z2):
            co = _cocircuit_clause(ctx, Mp.ground[z])
            if co is not None:
                return {
                    "basis": _sorted(Bl),
                    "z1": Mp.ground[z1],
                    "z2": Mp.ground[z2],
                    "fan": order,
                    "cocircuit_uses": "z1" if z == z1 else "z2",
                    **co,
                }
    return None


def _first(bases: Iterable[int], fn) -> dict | None:
    for b in bases:
        ev = fn(b)
        if ev is not None:
            return ev
    return None


def classify_mainthm1(ctx: SetupContext) -> OutcomeVerdict:
    """Evaluate the outcomes (a), (b)(i), (b)(ii), (b)(iii) of the first theorem.

    (b) is existential over robust bases, so each clause is tried on every
    robust basis in ascending mask order and the first witness is kept.
    """
    ctx.validate()
    M, N, Mp = ctx.M, ctx.N, ctx.Mp
    F = _Flags(Mp, N)
    xy = Mp.mask([ctx.x, ctx.y])
    choice = _robust_bases(Mp, F, xy)
    ev_a = {"size": M.n, "bound": N.n + SIZE_SLACK}
    found = {
        "b_i": _first(choice.bases, lambda b: _fragility_clause(Mp, F, b, xy)),
        "b_ii": _first(choice.bases, lambda b: _flexible_triad_clause(ctx, F, b, xy)),
        "b_iii": _first(choice.bases, lambda b: _type2_fan_clause(ctx, F, b, xy)),
    }
    flags = {"a": M.n <= N.n + SIZE_SLACK, **{k: v is not None for k, v in found.items()}}
    evidence = {"a": ev_a, **{k: v for k, v in found.items() if v is not None}}
    notes = {
        "robust_bases": len(choice.bases),
        "robust_count": choice.robust_count,
        "triad_constrained": choice.constrained,
        "triad_constraint_dropped": choice.fallback,
        "fragile": not F.flexible,
        "flexible": _sorted(Mp.labels(F.flexible)),
    }
    return OutcomeVerdict(1, flags, evidence, notes)


def enumerate_setups(M: Matroid, N: Matroid, every_basis: bool = False):
    """Setup contexts (without companion matrix) for every valid deletion pair.

    A pair {a, b} qualifies when M\\a,b is 3-connected with an N-minor and
    has the rank of M.  By default one context per pair is produced, using
    the smallest basis and its two smallest elements as {x, y}; with
    ``every_basis`` every basis and every {x, y} inside it is produced.
    """
    for a, b in combinations(M.ground, 2):
        Mp = M.delete([a, b])
        if Mp.r != M.r or Mp.r < 2 or not is_3connected(Mp) or not _keeps(Mp, N):
            continue
        for B in sorted(Mp.bases, key=mask_key):
            labels = Mp.ordered(B)
            pairs = combinations(labels, 2) if every_basis else [tuple(labels[:2])]
            for x, y in pairs:
                yield SetupContext(M, N, a, b, frozenset(labels), x, y)
            if not every_basis:
                break


# ---------------------------------------------------------------------------
# second theorem


def _deletion_pair(M0: Matroid, N0: Matroid, prefer: tuple[str, str]) -> tuple[str, str] | None:
    def ok(a: str, b: str) -> bool:
        Mp = M0.delete([a, b])
        return is_3connected(Mp) and _keeps(Mp, N0)

    if set(prefer) <= set(M0.ground) and ok(*prefer):
        return prefer
    for a, b in combinations(M0.ground, 2):
        if ok(a, b):
            return a, b
    return None


def _xy_pair(Mp: Matroid, prefer: tuple[str, str]) -> tuple[str, str] | None:
    if set(prefer) <= set(Mp.ground) and Mp.is_independent(Mp.mask(prefer)):
        return prefer
    for x, y in combinations(Mp.ground, 2):
        if Mp.is_independent(Mp.mask([x, y])):
            return x, y
    return None


def _candidates(ctx: SetupContext):
    yield "M", ctx.M, ctx.N
    dual_N = ctx.N.dual()
    Md = ctx.M.dual()
    for T in sorted(ctx.M.triangles(), key=mask_key):
        labels = _sorted(ctx.M.labels(T))
        try:
            M0 = wye_delta(Md, labels)
        except MfragError:
            continue
        yield "Y-Delta(M*) on " + ",".join(labels), M0, dual_N


def _theorem2_flags(ctx: SetupContext, M0: Matroid, N0: Matroid) -> tuple[dict, dict, dict] | None:
    pair = _deletion_pair(M0, N0, (ctx.a, ctx.b))
    if pair is None:
        return None
    Mp = M0.delete(list(pair))
    xy_l = _xy_pair(Mp, (ctx.x, ctx.y))
    flags = {"a": M0.n <= N0.n + SIZE_SLACK, "b": M0.r <= N0.r + RANK_SLACK}
    evidence = {
        "a": {"size": M0.n, "bound": N0.n + SIZE_SLACK},
        "b": {"rank": M0.r, "bound": N0.r + RANK_SLACK},
    }
    notes = {"pair": list(pair), "xy": list(xy_l) if xy_l else None}
    flags["c"] = False
    if xy_l is not None:
        F = _Flags(Mp, N0)
        xy = Mp.mask(xy_l)
        choice = _robust_bases(Mp, F, xy)
        ev = _first(choice.bases, lambda b: _fragility_clause(Mp, F, b, xy))
        flags["c"] = ev is not None
        if ev is not None:
            evidence["c"] = ev
        notes["robust_count"] = choice.robust_count
    return flags, evidence, notes


def classify_mainthm2(ctx: SetupContext) -> OutcomeVerdict:
    """Evaluate (a), (b), (c) of the second theorem over the candidate pairs.

    Candidates are (M, N) and then (Y-Delta(M*), N*) for each triangle of M
    in mask order.  The first candidate with a deletion pair satisfying some
    outcome is reported with all of its flags.
    """
    ctx.validate()
    checked = []
    last = None
    for name, M0, N0 in _candidates(ctx):
        got = _theorem2_flags(ctx, M0, N0)
        checked.append(name)
        if got is None:
            continue
        flags, evidence, notes = got
        last = (name, flags, evidence, notes)
        if any(flags.values()):
            notes = {**notes, "candidate": name, "candidates_checked": checked}
            return OutcomeVerdict(2, flags, evidence, notes)
    flags = {"a": False, "b": False, "c": False}
    notes = {"candidate": None, "candidates_checked": checked, "anomaly": True}
    if last is not None:
        notes["last_candidate"] = last[0]
    return OutcomeVerdict(2, flags, {}, notes)


# ---------------------------------------------------------------------------
# certificate hypotheses


def check_notrepcert_hypotheses(ctx: SetupContext, C, Z, Z1, Z2) -> dict:
    """Evaluate the hypotheses of the non-representability certificate.

    Keys: ``fragile`` (M_B[C] strictly N-fragile) and ``i``..``vi``.  Here B
    is the context basis, which is also a basis of M.  Condition (vi) needs
    the companion matrix and is None without one.
    """
    M, N = ctx.M, ctx.N
    sets = {}
    for name, S in (("C", C), ("Z", Z), ("Z1", Z1), ("Z2", Z2)):
        S = set(S)
        bad = S - set(M.ground)
        if bad:
            raise UnknownLabel(f"{name} has unknown labels {_sorted(bad)}")
        sets[name] = S
    C, Z, Z1, Z2 = (sets[k] for k in ("C", "Z", "Z1", "Z2"))
    a, b, x, y = ctx.a, ctx.b, ctx.x, ctx.y
    B = set(ctx.B)
    reasons: dict[str, str] = {}

    def mb(S: set) -> Matroid | None:
        if not S:
            return None
        return minor_B(M, B, S)

    def stable(S: set, key: str) -> bool:
        Q = mb(S)
        if Q is None:
            reasons[key] = "empty set"
            return False
        try:
            return n_stable(Q, N)[0]
        except MfragError as exc:
            reasons[key] = f"{type(exc).__name__}: {exc}"
            return False

    mc = mb(C)
    flags = {
        "fragile": mc is not None and is_strictly_fragile(mc, N),
        "i": a in Z1 - Z2 and b in Z2 - Z1,
        "ii": (C | {x, y}) <= Z <= (Z1 & Z2),
    }
    mz = mb(Z)
    flags["iii"] = mz is not None and is_connected(mz)
    flags["iv"] = stable(Z1, "iv")
    flags["v"] = stable(Z2, "v")
    W = Z1 | Z2
    if ctx.A is None:
        flags["vi"] = None
        reasons["vi"] = "no companion matrix"
    elif not {a, b, x, y} <= W:
        flags["vi"] = False
        reasons["vi"] = "{a, b, x, y} is not inside Z1 u Z2"
    else:
        AW = ctx.A.restrict(W)
        flags["vi"] = incriminates(mb(W), AW, [a, b, x, y]) is not None
    flags["reasons"] = reasons
    return flags
