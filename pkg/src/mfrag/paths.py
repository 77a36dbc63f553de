"""Paths of 3-separations.

A path of 3-separations is an ordered partition (P1, ..., Pn) of the ground
set in which every prefix union P1 u ... u Pi (i < n) is 3-separating and
both sides of each split have at least two elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .connectivity import lam_mask
from .errors import HypothesisFailed
from .matroid import Matroid, bits_of, natural_key, popcount, subsets_of

__all__ = ["Path3Sep", "path_of_3seps", "is_path_of_3seps", "single_step_witness"]


@dataclass(frozen=True)
class Path3Sep:
    parts: tuple[frozenset[str], ...]

    def to_json(self) -> list[list[str]]:
        return [sorted(p, key=natural_key) for p in self.parts]


def _is_path(M: Matroid, masks: list[int]) -> bool:
    if sum(popcount(m) for m in masks) != M.n or any(a & b for i, a in enumerate(masks) for b in masks[i + 1 :]):
        return False
    prefix = 0
    for m in masks[:-1]:
        prefix |= m
        rest = M.full & ~prefix
        if popcount(prefix) < 2 or popcount(rest) < 2 or lam_mask(M, prefix) > 2:
            return False
    return True


def is_path_of_3seps(M: Matroid, parts: Iterable[Iterable[str]]) -> bool:
    return _is_path(M, [M.mask(p) for p in parts])


def _witness(M: Matroid, A: int, Z: int, B: int, z: int) -> tuple[int, int] | None:
    """A path (A', z, B') with A <= A' and B <= B', searching A' = A u S, S <= Z - z."""
    rest = Z & ~z
    for S in subsets_of(rest):
        Ap = A | S
        Bp = B | (rest & ~S)
        if _is_path(M, [Ap, z, Bp]):
            return Ap, Bp
    return None


def single_step_witness(M: Matroid, A: Iterable[str], Z: Iterable[str], B: Iterable[str], z: str):
    w = _witness(M, M.mask(A), M.mask(Z), M.mask(B), M.bit(z))
    return None if w is None else (M.labels(w[0]), M.labels(w[1]))


def _order(M: Matroid, A: int, Z: int, B: int) -> list[int]:
    if not Z:
        return []
    z = 1 << bits_of(Z)[0]
    w = _witness(M, A, Z, B, z)
    if w is None:
        raise HypothesisFailed(
            f"no path (A', {M.ground[bits_of(z)[0]]}, B') extends (A, B)",
            witness=M.ground[bits_of(z)[0]],
        )
    Az, Bz = w
    left = _order(M, A, Az & ~A, Bz | z)
    right = _order(M, Az | z, Bz & ~B, B)
    return left + [z] + right


def path_of_3seps(M: Matroid, A: Iterable[str], Z: Iterable[str], B: Iterable[str]) -> Path3Sep:
    """Order Z so that (A, z1, ..., zn, B) is a path of 3-separations.

    Splits recursively on the smallest element z of Z using a path
    (A_z, z, B_z) around it: the elements of Z in A_z are ordered before z and
    the rest after.  Every z must admit such a single-element path, otherwise
    HypothesisFailed names the first z that does not.
    """
    a, zm, b = M.mask(A), M.mask(Z), M.mask(B)
    if a & zm or a & b or zm & b or (a | zm | b) != M.full:
        raise ValueError("A, Z, B must partition the ground set")
    if popcount(a) < 2 or popcount(b) < 2:
        raise ValueError("A and B need at least two elements")
    for z in bits_of(zm):
        if _witness(M, a, zm, b, 1 << z) is None:
            raise HypothesisFailed(f"no path (A', {M.ground[z]}, B') with A <= A', B <= B'", witness=M.ground[z])
    order = _order(M, a, zm, b)
    masks = [a] + order + [b]
    if not _is_path(M, masks):
        raise HypothesisFailed("constructed ordering is not a path of 3-separations", witness=None)
    return Path3Sep(tuple(M.labels(m) for m in masks))
