"""Fans: sequences whose consecutive triples alternate between triangles
and triads."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import NotAFan
from .matroid import Matroid, natural_key

__all__ = ["FanRecord", "fans", "is_fan", "fan_type", "fan_end_kind"]


@dataclass(frozen=True)
class FanRecord:
    ordering: tuple[str, ...]
    starts_with_triangle: bool
    maximal: bool = True
    type_relative_to_B: str | None = None

    def to_json(self) -> dict:
        return {
            "ordering": list(self.ordering),
            "starts_with_triangle": self.starts_with_triangle,
            "maximal": self.maximal,
            "type": self.type_relative_to_B,
        }


def _triple_sets(M: Matroid) -> tuple[set[int], set[int]]:
    return set(M.triangles()), set(M.triads())


def _fan_start(M: Matroid, idx: Sequence[int], tri: set[int], tda: set[int]) -> bool | None:
    """True/False for a fan starting with a triangle/triad, None if not a fan."""
    if len(idx) < 3 or len(set(idx)) != len(idx):
        return None
    for start in (True, False):
        want = start
        ok = True
        for k in range(len(idx) - 2):
            t = (1 << idx[k]) | (1 << idx[k + 1]) | (1 << idx[k + 2])
            if t not in (tri if want else tda):
                ok = False
                break
            want = not want
        if ok:
            return start
    return None


def is_fan(M: Matroid, ordering: Sequence[str]) -> bool:
    tri, tda = _triple_sets(M)
    return _fan_start(M, [M.index(l) for l in ordering], tri, tda) is not None


def fans(M: Matroid) -> list[FanRecord]:
    """All maximal fans (by element set), each once.

    The reported ordering is the smallest index sequence realising the set,
    which puts the smaller end first.
    """
    tri, tda = _triple_sets(M)
    by_pair: dict[tuple[bool, int, int], list[int]] = {}
    for kind, family in ((True, tri), (False, tda)):
        for t in family:
            b = [i for i in range(M.n) if t >> i & 1]
            for i in b:
                for j in b:
                    if i != j:
                        k = next(x for x in b if x != i and x != j)
                        by_pair.setdefault((kind, i, j), []).append(k)
    best: dict[int, tuple[tuple[int, ...], bool]] = {}

    def record(seq: tuple[int, ...], start: bool):
        s = sum(1 << i for i in seq)
        cur = best.get(s)
        if cur is None or seq < cur[0]:
            best[s] = (seq, start)

    def grow(seq: tuple[int, ...], used: int, want: bool, start: bool):
        record(seq, start)
        for k in by_pair.get((want, seq[-2], seq[-1]), ()):
            if not used >> k & 1:
                grow(seq + (k,), used | 1 << k, not want, start)

    for start, family in ((True, tri), (False, tda)):
        for t in family:
            b = [i for i in range(M.n) if t >> i & 1]
            for i in b:
                for j in b:
                    if i == j:
                        continue
                    k = next(x for x in b if x != i and x != j)
                    grow((i, j, k), t, not start, start)
    sets = sorted(best)
    maximal = [s for s in sets if not any(s != o and s & o == s for o in sets)]
    out = []
    for s in maximal:
        seq, start = best[s]
        if seq[::-1] < seq:
            seq = seq[::-1]
            start = _fan_start(M, seq, tri, tda)
        out.append(FanRecord(tuple(M.ground[i] for i in seq), bool(start), True))
    out.sort(key=lambda f: [natural_key(l) for l in f.ordering])
    return out


def fan_type(M: Matroid, ordering: Sequence[str], B: Iterable[str]) -> str | None:
    """'I' if B meets the fan in {f1, f3}, 'II' if in {f1, f3, f4}, for an
    orientation of the 4-element fan whose first triple is a triangle."""
    if len(ordering) != 4 or not is_fan(M, ordering):
        raise NotAFan(f"{list(ordering)} is not a 4-element fan")
    bset = set(B)
    tri = set(M.triangles())
    for seq in (list(ordering), list(ordering)[::-1]):
        if M.mask(seq[:3]) not in tri:
            continue
        meet = bset & set(seq)
        if meet == {seq[0], seq[2]}:
            return "I"
        if meet == {seq[0], seq[2], seq[3]}:
            return "II"
    return None


def fan_end_kind(M: Matroid, ordering: Sequence[str], f: str) -> str:
    """'spoke' if the end f lies in the fan's end triangle, 'rim' for a triad."""
    ordering = list(ordering)
    if len(ordering) < 4:
        raise NotAFan("end kinds are defined for fans with at least 4 elements")
    tri, tda = _triple_sets(M)
    start = _fan_start(M, [M.index(l) for l in ordering], tri, tda)
    if start is None:
        raise NotAFan(f"{ordering} is not a fan")
    if f == ordering[0]:
        first_is_triangle = start
    elif f == ordering[-1]:
        # the last triple has the type of the first iff the number of triples is odd
        first_is_triangle = start if (len(ordering) - 2) % 2 == 1 else not start
    else:
        raise NotAFan(f"{f!r} is not an end of the fan")
    return "spoke" if first_is_triangle else "rim"
