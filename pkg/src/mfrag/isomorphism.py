"""Matroid isomorphism by invariant refinement and backtracking on circuits."""

from __future__ import annotations

from collections import Counter

from .matroid import Matroid, bits_of, popcount

__all__ = ["isomorphic", "invariant_signature", "element_signatures", "automorphisms"]


def invariant_signature(M: Matroid) -> tuple:
    """Cheap isomorphism invariant: sizes, basis count and circuit histogram."""
    sig = M._cache.get("signature")
    if sig is None:
        hist = Counter(popcount(c) for c in M.circuit_masks())
        sig = (M.n, M.r, len(M.bases), tuple(sorted(hist.items())))
        M._cache["signature"] = sig
    return sig


def element_signatures(M: Matroid) -> list[tuple]:
    """Per-element invariant: basis degree and circuit/cocircuit degrees by size."""
    sigs = M._cache.get("element_signatures")
    if sigs is None:
        circ = M.circuit_masks()
        cocirc = M.cocircuit_masks()
        sigs = []
        for i in range(M.n):
            b = 1 << i
            nb = sum(1 for B in M.bases if B & b)
            cc = Counter(popcount(c) for c in circ if c & b)
            kc = Counter(popcount(c) for c in cocirc if c & b)
            sigs.append((nb, tuple(sorted(cc.items())), tuple(sorted(kc.items()))))
        M._cache["element_signatures"] = sigs
    return sigs


def _search(M1: Matroid, M2: Matroid, first_only: bool):
    if invariant_signature(M1) != invariant_signature(M2):
        return
    s1, s2 = element_signatures(M1), element_signatures(M2)
    if Counter(s1) != Counter(s2):
        return
    n = M1.n
    if n == 0:
        yield {}
        return
    c1 = M1.circuit_masks()
    c2set = set(M2.circuit_masks())
    cand = [[j for j in range(n) if s2[j] == s1[i]] for i in range(n)]
    # assign rarest classes first, then by circuit involvement
    order = sorted(range(n), key=lambda i: (len(cand[i]), i))
    pos_in_order = {e: k for k, e in enumerate(order)}
    # circuits checked when their last element (in assignment order) is placed
    closing: list[list[int]] = [[] for _ in range(n)]
    for c in c1:
        last = max(bits_of(c), key=lambda e: pos_in_order[e])
        closing[last].append(c)
    # number of M2 circuits inside an image set must match M1 circuits inside the domain
    c2_list = M2.circuit_masks()
    phi = [-1] * n
    used = 0

    def image(mask: int) -> int:
        out = 0
        for e in bits_of(mask):
            out |= 1 << phi[e]
        return out

    def rec(k: int, dom: int, img: int):
        nonlocal used
        if k == n:
            mapping = list(phi)
            if {sum(1 << mapping[e] for e in bits_of(b)) for b in M1.bases} == M2.bases:
                yield mapping
            return
        i = order[k]
        for j in cand[i]:
            if used >> j & 1:
                continue
            phi[i] = j
            used |= 1 << j
            ok = all(image(c) in c2set for c in closing[i])
            if ok:
                nd, ni = dom | 1 << i, img | 1 << j
                inside1 = sum(1 for c in c1 if c & ~nd == 0)
                inside2 = sum(1 for c in c2_list if c & ~ni == 0)
                ok = inside1 == inside2
            if ok:
                yield from rec(k + 1, dom | 1 << i, img | 1 << j)
            used &= ~(1 << j)
            phi[i] = -1

    for mapping in rec(0, 0, 0):
        yield {M1.ground[i]: M2.ground[mapping[i]] for i in range(n)}
        if first_only:
            return


def isomorphic(M1: Matroid, M2: Matroid) -> dict[str, str] | None:
    """A label bijection carrying bases of M1 onto bases of M2, or None."""
    for mapping in _search(M1, M2, True):
        return mapping
    return None


def automorphisms(M: Matroid) -> list[dict[str, str]]:
    return list(_search(M, M, False))
