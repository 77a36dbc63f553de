"""Matroids given by an explicit family of bases.

The ground set is a tuple of string labels in natural order (``"2"`` sorts
before ``"10"``); bit ``i`` of every mask refers to ``ground[i]``.  Rank,
independence and the circuit list are derived lazily from the basis family
with vectorised subset transforms over all 2^n subsets, so the ground set is
capped at 16 elements.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping

import numpy as np

from .errors import (
    BadBasepoint,
    EmptyGroundSet,
    ExchangeAxiomViolation,
    LabelCollision,
    NotABasis,
    TooLarge,
    UnknownLabel,
)

__all__ = [
    "Matroid",
    "MinorRecipe",
    "natural_key",
    "popcount",
    "bits_of",
    "matroid_from_bases",
    "exchange_violation",
    "rank",
    "closure",
    "coclosure",
    "circuits",
    "cocircuits",
    "dual",
    "delete",
    "contract",
    "minor",
    "minor_B",
    "simplify",
    "cosimplify",
    "two_sum",
    "direct_sum",
    "relabel",
    "parallel_extension",
    "series_extension",
]

MAX_GROUND = 16

_NAT = re.compile(r"(\d+)")


def natural_key(label: str):
    return tuple((0, int(p)) if p.isdigit() else (1, p) for p in _NAT.split(label) if p)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def bits_of(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def mask_key(mask: int):
    """Sort key: size first, then the ascending index tuple."""
    return popcount(mask), tuple(bits_of(mask))


@lru_cache(maxsize=None)
def _popcount_table(n: int) -> np.ndarray:
    pc = np.zeros(1 << n, dtype=np.int8)
    for i in range(n):
        pc.reshape(-1, 2, 1 << i)[:, 1, :] += 1
    return pc


def _superset_or(a: np.ndarray, n: int) -> None:
    """In place: a[S] |= a[T] for every T containing S."""
    for i in range(n):
        v = a.reshape(-1, 2, 1 << i)
        v[:, 0, :] |= v[:, 1, :]


def _subset_max(a: np.ndarray, n: int) -> None:
    """In place: a[S] = max over subsets T of S of a[T]."""
    for i in range(n):
        v = a.reshape(-1, 2, 1 << i)
        np.maximum(v[:, 1, :], v[:, 0, :], out=v[:, 1, :])


def _family_rank(n: int, bases: Iterable[int]) -> tuple[np.ndarray, np.ndarray]:
    indep = np.zeros(1 << n, dtype=bool)
    indep[np.fromiter(bases, dtype=np.int64)] = True
    _superset_or(indep, n)
    rk = np.where(indep, _popcount_table(n), 0).astype(np.int8)
    _subset_max(rk, n)
    return indep, rk


@dataclass(frozen=True)
class MinorRecipe:
    """A minor M / contract \\ delete, as label sets."""

    contract: frozenset[str]
    delete: frozenset[str]

    def __post_init__(self):
        if self.contract & self.delete:
            raise ValueError("contract and delete sets must be disjoint")

    def to_json(self) -> dict:
        return {
            "contract": sorted(self.contract, key=natural_key),
            "delete": sorted(self.delete, key=natural_key),
        }


class Matroid:
    """Immutable matroid on at most 16 labelled elements."""

    __slots__ = ("ground", "n", "r", "bases", "_index", "_cache")

    def __init__(self, ground: Iterable[str], bases: Iterable[int]):
        ground = tuple(ground)
        if len(ground) > MAX_GROUND:
            raise TooLarge(f"ground set has {len(ground)} elements; the limit is {MAX_GROUND}")
        self.ground = ground
        self.n = len(ground)
        self.bases = frozenset(bases)
        if not self.bases:
            raise ValueError("a matroid needs at least one basis")
        self.r = popcount(next(iter(self.bases)))
        self._index = {l: i for i, l in enumerate(ground)}
        self._cache: dict = {}

    @staticmethod
    def sort_labels(labels: Iterable[str]) -> tuple[str, ...]:
        return tuple(sorted((str(l) for l in labels), key=natural_key))

    # -- labels and masks -------------------------------------------------
    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def mask(self, labels: Iterable[str] | str) -> int:
        if isinstance(labels, str):
            labels = [labels]
        out = 0
        for l in labels:
            try:
                out |= 1 << self._index[l]
            except KeyError:
                raise UnknownLabel(f"{l!r} is not in the ground set") from None
        return out

    def bit(self, label: str) -> int:
        return self.mask([label])

    def labels(self, mask: int) -> frozenset[str]:
        return frozenset(self.ground[i] for i in bits_of(mask))

    def ordered(self, mask: int) -> list[str]:
        return [self.ground[i] for i in bits_of(mask)]

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownLabel(f"{label!r} is not in the ground set") from None

    # -- derived tables ---------------------------------------------------
    def _tables(self):
        t = self._cache.get("tables")
        if t is None:
            t = _family_rank(self.n, self.bases)
            self._cache["tables"] = t
        return t

    @property
    def rank_table(self) -> np.ndarray:
        return self._tables()[1]

    @property
    def indep_table(self) -> np.ndarray:
        return self._tables()[0]

    @property
    def corank_table(self) -> np.ndarray:
        """Dual rank of every subset: |S| + r(E - S) - r(E)."""
        t = self._cache.get("corank")
        if t is None:
            t = (_popcount_table(self.n) + self.rank_table[::-1] - self.r).astype(np.int8)
            self._cache["corank"] = t
        return t

    def rk(self, mask: int) -> int:
        return int(self.rank_table[mask])

    def crk(self, mask: int) -> int:
        return popcount(mask) + int(self.rank_table[self.full ^ mask]) - self.r

    def is_independent(self, mask: int) -> bool:
        return bool(self.indep_table[mask])

    def is_basis(self, mask: int) -> bool:
        return mask in self.bases

    def cl(self, mask: int) -> int:
        rt = self.rank_table
        base = rt[mask]
        out = mask
        for i in range(self.n):
            b = 1 << i
            if not mask & b and rt[mask | b] == base:
                out |= b
        return out

    def ccl(self, mask: int) -> int:
        ct = self.corank_table
        base = ct[mask]
        out = mask
        for i in range(self.n):
            b = 1 << i
            if not mask & b and ct[mask | b] == base:
                out |= b
        return out

    def circuit_masks(self) -> list[int]:
        c = self._cache.get("circuits")
        if c is None:
            indep = self.indep_table
            allsub = np.ones(1 << self.n, dtype=bool)
            for i in range(self.n):
                a = allsub.reshape(-1, 2, 1 << i)
                ind = indep.reshape(-1, 2, 1 << i)
                a[:, 1, :] &= ind[:, 0, :]
            found = np.nonzero(~indep & allsub)[0]
            c = sorted((int(m) for m in found), key=mask_key)
            self._cache["circuits"] = c
        return c

    def cocircuit_masks(self) -> list[int]:
        return self.dual().circuit_masks()

    def loops(self) -> int:
        return sum(1 << i for i in range(self.n) if self.rank_table[1 << i] == 0)

    def coloops(self) -> int:
        return sum(1 << i for i in range(self.n) if self.corank_table[1 << i] == 0)

    # -- label-level oracles ----------------------------------------------
    def rank(self, S: Iterable[str] = None) -> int:
        return self.r if S is None else self.rk(self.mask(S))

    def corank(self, S: Iterable[str] = None) -> int:
        return self.n - self.r if S is None else self.crk(self.mask(S))

    def closure(self, S: Iterable[str]) -> frozenset[str]:
        return self.labels(self.cl(self.mask(S)))

    def coclosure(self, S: Iterable[str]) -> frozenset[str]:
        return self.labels(self.ccl(self.mask(S)))

    def circuits(self) -> list[frozenset[str]]:
        return [self.labels(c) for c in self.circuit_masks()]

    def cocircuits(self) -> list[frozenset[str]]:
        return [self.labels(c) for c in self.cocircuit_masks()]

    def basis_sets(self) -> list[frozenset[str]]:
        return [self.labels(b) for b in sorted(self.bases, key=mask_key)]

    def triangles(self) -> list[int]:
        return [c for c in self.circuit_masks() if popcount(c) == 3]

    def triads(self) -> list[int]:
        return [c for c in self.cocircuit_masks() if popcount(c) == 3]

    # -- constructions ----------------------------------------------------
    def dual(self) -> Matroid:
        d = self._cache.get("dual")
        if d is None:
            full = self.full
            d = Matroid(self.ground, (full ^ b for b in self.bases))
            d._cache["dual"] = self
            self._cache["dual"] = d
        return d

    def _compress(self, keep: int, masks: Iterable[int]) -> set[int]:
        pos = bits_of(keep)
        out = set()
        for m in masks:
            v = 0
            for k, i in enumerate(pos):
                if m >> i & 1:
                    v |= 1 << k
            out.add(v)
        return out

    def restrict_mask(self, keep: int) -> Matroid:
        """M | keep, i.e. delete the complement; empty results allowed."""
        if keep == self.full:
            return self
        rk = self.rk(keep)
        chosen = (b & keep for b in self.bases if popcount(b & keep) == rk)
        ground = [self.ground[i] for i in bits_of(keep)]
        return Matroid(ground, self._compress(keep, chosen))

    def delete_mask(self, D: int) -> Matroid:
        return self.restrict_mask(self.full & ~D)

    def contract_mask(self, C: int) -> Matroid:
        if not C:
            return self
        rc = self.rk(C)
        keep = self.full & ~C
        chosen = (b & keep for b in self.bases if popcount(b & C) == rc)
        ground = [self.ground[i] for i in bits_of(keep)]
        return Matroid(ground, self._compress(keep, chosen))

    def minor_mask(self, C: int, D: int) -> Matroid:
        return self.contract_mask(C).delete_mask(_transfer(self, C, D))

    def delete(self, S: Iterable[str]) -> Matroid:
        return self.delete_mask(self.mask(S))

    def contract(self, S: Iterable[str]) -> Matroid:
        return self.contract_mask(self.mask(S))

    # -- identity ---------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, Matroid):
            return NotImplemented
        return self.ground == other.ground and self.bases == other.bases

    def __hash__(self) -> int:
        return hash((self.ground, self.bases))

    def __repr__(self) -> str:
        return f"Matroid(n={self.n}, r={self.r}, bases={len(self.bases)}, ground={list(self.ground)})"


def _transfer(M: Matroid, removed: int, mask: int) -> int:
    """Re-index ``mask`` (a subset of M's ground) onto M minus ``removed``."""
    out = 0
    k = 0
    for i in range(M.n):
        if removed >> i & 1:
            continue
        if mask >> i & 1:
            out |= 1 << k
        k += 1
    return out


# ---------------------------------------------------------------------------
# construction and validation


def exchange_violation(n: int, bases: Iterable[int]) -> tuple[int, int] | None:
    """A pair of masks witnessing failure of the basis-exchange axiom, or None.

    The rank function S -> max |B n S| is submodular exactly when the family
    is the set of bases of a matroid; submodularity is checked locally
    (r(S+e) + r(S+f) >= r(S+e+f) + r(S)) and a concrete pair is then searched
    for only when it fails.
    """
    bases = sorted(set(bases))
    if not bases:
        raise ValueError("empty basis family")
    sizes = {popcount(b) for b in bases}
    if len(sizes) > 1:
        small = min(bases, key=popcount)
        large = max(bases, key=popcount)
        return small, large
    if n < 2:
        return None
    _, rk = _family_rank(n, bases)
    rk = rk.astype(np.int16)
    bad = False
    for j in range(n):
        for i in range(j):
            v = rk.reshape(-1, 2, 1 << (j - i - 1), 2, 1 << i)
            if np.any(v[:, 1, :, 0, :] + v[:, 0, :, 1, :] < v[:, 1, :, 1, :] + v[:, 0, :, 0, :]):
                bad = True
                break
        if bad:
            break
    if not bad:
        return None
    family = set(bases)
    for b1 in bases:
        for b2 in bases:
            for e in bits_of(b1 & ~b2):
                if not any((b1 & ~(1 << e)) | (1 << f) in family for f in bits_of(b2 & ~b1)):
                    return b1, b2
    raise AssertionError("local submodularity failed but no exchange witness exists")


def matroid_from_bases(ground: Iterable[str], bases: Iterable[Iterable[str]], validate: bool = True) -> Matroid:
    """Build a matroid from label sets; the exchange axiom is checked exhaustively."""
    ground = Matroid.sort_labels(ground)
    if not ground:
        raise EmptyGroundSet("ground set is empty")
    if len(set(ground)) != len(ground):
        raise ValueError("duplicate ground labels")
    if len(ground) > MAX_GROUND:
        raise TooLarge(f"ground set has {len(ground)} elements; the limit is {MAX_GROUND}")
    index = {l: i for i, l in enumerate(ground)}
    masks = []
    for B in bases:
        m = 0
        for l in B:
            if str(l) not in index:
                raise UnknownLabel(f"{l!r} is not in the ground set")
            m |= 1 << index[str(l)]
        masks.append(m)
    if not masks:
        raise ExchangeAxiomViolation("the basis family is empty")
    if validate:
        w = exchange_violation(len(ground), masks)
        if w is not None:
            pair = tuple(sorted(ground[i] for i in bits_of(m)) for m in w)
            raise ExchangeAxiomViolation(f"bases {pair[0]} and {pair[1]} violate basis exchange", witness=pair)
    return Matroid(ground, masks)


def _nonempty(M: Matroid) -> Matroid:
    if M.n == 0:
        raise EmptyGroundSet("the result would have an empty ground set")
    return M


# ---------------------------------------------------------------------------
# functional API


def rank(M: Matroid, S: Iterable[str]) -> int:
    return M.rank(S)


def closure(M: Matroid, S: Iterable[str]) -> frozenset[str]:
    return M.closure(S)


def coclosure(M: Matroid, S: Iterable[str]) -> frozenset[str]:
    return M.coclosure(S)


def circuits(M: Matroid) -> list[frozenset[str]]:
    return M.circuits()


def cocircuits(M: Matroid) -> list[frozenset[str]]:
    return M.cocircuits()


def dual(M: Matroid) -> Matroid:
    return M.dual()


def delete(M: Matroid, S: Iterable[str]) -> Matroid:
    return _nonempty(M.delete(S))


def contract(M: Matroid, S: Iterable[str]) -> Matroid:
    return _nonempty(M.contract(S))


def minor(M: Matroid, recipe: MinorRecipe) -> Matroid:
    return M.contract(recipe.contract).delete(recipe.delete)


def minor_B(M: Matroid, B: Iterable[str], Z: Iterable[str]) -> Matroid:
    """M / (B - Z) \\ (B* - Z): the minor on exactly Z displayed by the basis B."""
    bmask = M.mask(B)
    if bmask not in M.bases:
        raise NotABasis(f"{sorted(M.labels(bmask), key=natural_key)} is not a basis")
    z = M.mask(Z)
    if not z:
        raise EmptyGroundSet("Z is empty")
    return M.minor_mask(bmask & ~z, (M.full & ~bmask) & ~z)


def _classes(M: Matroid, rank_of) -> tuple[int, list[int]]:
    """Loops (rank 0 elements) and parallel classes under the given rank oracle."""
    loops = 0
    classes: list[int] = []
    for i in range(M.n):
        b = 1 << i
        if rank_of(b) == 0:
            loops |= b
            continue
        for k, c in enumerate(classes):
            j = bits_of(c)[0]
            if rank_of(b | (1 << j)) == 1:
                classes[k] = c | b
                break
        else:
            classes.append(b)
    return loops, classes


def simplify(M: Matroid) -> tuple[Matroid, dict[str, frozenset[str]]]:
    """si(M) keeping the smallest label of each parallel class."""
    _, classes = _classes(M, M.rk)
    keep = sum(c & -c for c in classes)
    cmap = {M.ground[bits_of(c)[0]]: M.labels(c) for c in classes}
    return M.restrict_mask(keep), cmap


def cosimplify(M: Matroid) -> tuple[Matroid, dict[str, frozenset[str]]]:
    """co(M) keeping the smallest label of each series class."""
    _, classes = _classes(M, M.crk)
    keep = sum(c & -c for c in classes)
    cmap = {M.ground[bits_of(c)[0]]: M.labels(c) for c in classes}
    return M.contract_mask(M.full & ~keep), cmap


def series_classes(M: Matroid) -> list[int]:
    """Series classes of the non-coloop elements, as masks."""
    return _classes(M, M.crk)[1]


def parallel_classes(M: Matroid) -> list[int]:
    return _classes(M, M.rk)[1]


def relabel(M: Matroid, mapping: Mapping[str, str]) -> Matroid:
    new = [mapping.get(l, l) for l in M.ground]
    if len(set(new)) != len(new):
        raise LabelCollision("relabelling is not injective")
    order = Matroid.sort_labels(new)
    pos = {l: i for i, l in enumerate(order)}
    perm = [pos[l] for l in new]
    bases = set()
    for b in M.bases:
        v = 0
        for i in bits_of(b):
            v |= 1 << perm[i]
        bases.add(v)
    return Matroid(order, bases)


def direct_sum(M1: Matroid, M2: Matroid) -> Matroid:
    if set(M1.ground) & set(M2.ground):
        raise LabelCollision(f"shared labels {sorted(set(M1.ground) & set(M2.ground))}")
    ground = Matroid.sort_labels(M1.ground + M2.ground)
    pos = {l: i for i, l in enumerate(ground)}
    m1 = [1 << pos[l] for l in M1.ground]
    m2 = [1 << pos[l] for l in M2.ground]
    lift = lambda b, table: sum(table[i] for i in bits_of(b))  # noqa: E731
    b1 = [lift(b, m1) for b in M1.bases]
    b2 = [lift(b, m2) for b in M2.bases]
    return Matroid(ground, {x | y for x in b1 for y in b2})


def two_sum(M1: Matroid, M2: Matroid, p: str) -> Matroid:
    """The 2-sum of M1 and M2 along the shared basepoint p."""
    for M in (M1, M2):
        if p not in M._index:
            raise BadBasepoint(f"basepoint {p!r} is missing from a summand")
        bp = M.bit(p)
        if M.loops() & bp or M.coloops() & bp:
            raise BadBasepoint(f"basepoint {p!r} is a loop or coloop of a summand")
    shared = (set(M1.ground) & set(M2.ground)) - {p}
    if shared:
        raise LabelCollision(f"shared labels besides the basepoint: {sorted(shared, key=natural_key)}")
    ground = Matroid.sort_labels([l for l in M1.ground + M2.ground if l != p])
    pos = {l: i for i, l in enumerate(ground)}
    maps = []
    for M in (M1, M2):
        maps.append([0 if l == p else 1 << pos[l] for l in M.ground])
    lift = lambda b, table: sum(table[i] for i in bits_of(b))  # noqa: E731
    p1, p2 = M1.bit(p), M2.bit(p)
    with_p1 = [lift(b, maps[0]) for b in M1.bases if b & p1]
    without_p1 = [lift(b, maps[0]) for b in M1.bases if not b & p1]
    with_p2 = [lift(b, maps[1]) for b in M2.bases if b & p2]
    without_p2 = [lift(b, maps[1]) for b in M2.bases if not b & p2]
    bases = {x | y for x in with_p1 for y in without_p2}
    bases |= {x | y for x in without_p1 for y in with_p2}
    return Matroid(ground, bases)


def parallel_extension(M: Matroid, e: str, f: str) -> Matroid:
    """Add a new element f parallel to e."""
    if f in M._index:
        raise LabelCollision(f"{f!r} already in the ground set")
    ground = Matroid.sort_labels(M.ground + (f,))
    pos = {l: i for i, l in enumerate(ground)}
    table = [1 << pos[l] for l in M.ground]
    eb, fb = 1 << pos[e], 1 << pos[f]
    bases = set()
    for b in M.bases:
        lifted = sum(table[i] for i in bits_of(b))
        bases.add(lifted)
        if lifted & eb:
            bases.add((lifted & ~eb) | fb)
    return Matroid(ground, bases)


def series_extension(M: Matroid, e: str, f: str) -> Matroid:
    """Add a new element f in series with e."""
    return parallel_extension(M.dual(), e, f).dual()


def free_basepoint_check(M: Matroid, p: str) -> bool:
    b = M.bit(p)
    return not (M.loops() & b or M.coloops() & b)


def subsets_of(mask: int):
    """All submasks of ``mask`` in increasing numeric order."""
    bits = bits_of(mask)
    for k in range(len(bits) + 1):
        for combo in combinations(bits, k):
            yield sum(1 << i for i in combo)
