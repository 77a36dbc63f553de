"""Small-instance corpora: the catalog and all 3-connected binary or ternary
matroids up to a given size, deduplicated by isomorphism.

Binary and ternary matroids are uniquely representable, so every simple
rank-r matroid on k + 1 points arises by adding one projective point to a
representative of some simple matroid on k points.  Extensions are
therefore built level by level from the identity matrix, keeping one
representative per isomorphism class.  Ranks above n/2 come from duals.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
from itertools import product
from pathlib import Path

from .catalog import catalog, catalog_names, vector_matroid
from .connectivity import is_3connected
from .errors import CorpusTooLarge, MfragError
from .isomorphism import invariant_signature, isomorphic
from .matroid import Matroid

__all__ = ["MAX_CORPUS_N", "CorpusEntry", "parse_corpus_spec", "load_corpus", "projective_points", "gf_corpus"]

MAX_CORPUS_N = 9
_CACHE_VERSION = 1
_SPEC_RE = re.compile(r"^all-gf([23])-upto\((\d+)\)$")


class CorpusEntry(tuple):
    """(name, matroid) pair."""

    __slots__ = ()

    def __new__(cls, name: str, M: Matroid):
        return super().__new__(cls, (name, M))

    @property
    def name(self) -> str:
        return self[0]

    @property
    def matroid(self) -> Matroid:
        return self[1]


def parse_corpus_spec(spec: str) -> tuple[str, int | None]:
    """('catalog', None) or ('gf2' | 'gf3', n)."""
    spec = spec.strip()
    if spec == "catalog":
        return "catalog", None
    m = _SPEC_RE.match(spec)
    if not m:
        raise ValueError(f"unknown corpus spec {spec!r}; use catalog or all-gf2-upto(n) / all-gf3-upto(n)")
    n = int(m.group(2))
    if n > MAX_CORPUS_N:
        raise CorpusTooLarge(f"corpus generation is capped at n <= {MAX_CORPUS_N}, got {n}")
    return f"gf{m.group(1)}", n


def projective_points(q: int, r: int) -> list[tuple[int, ...]]:
    """Nonzero vectors of GF(q)^r whose first nonzero entry is 1."""
    out = []
    for v in product(range(q), repeat=r):
        nz = [x for x in v if x]
        if nz and nz[0] == 1:
            out.append(v)
    return out


class _Classes:
    """Isomorphism-class representatives bucketed by invariant signature."""

    def __init__(self):
        self.buckets: dict[tuple, list[Matroid]] = {}
        self.order: list[tuple[Matroid, object]] = []

    def add(self, M: Matroid, payload=None) -> bool:
        bucket = self.buckets.setdefault(invariant_signature(M), [])
        if any(isomorphic(M, other) is not None for other in bucket):
            return False
        bucket.append(M)
        self.order.append((M, payload))
        return True


def _simple_by_rank(q: int, r: int, n_max: int) -> dict[int, list[Matroid]]:
    field = f"GF({q})"
    points = projective_points(q, r)
    labels = [str(i) for i in range(1, n_max + 1)]
    start = tuple(tuple(1 if i == j else 0 for i in range(r)) for j in range(r))
    level = [start]
    out: dict[int, list[Matroid]] = {}
    for k in range(r + 1, n_max + 1):
        seen = _Classes()
        for cols in level:
            used = set(cols)
            for p in points:
                if p in used:
                    continue
                new = cols + (p,)
                M = vector_matroid(field, labels[:k], new)
                seen.add(M, new)
        level = [payload for _, payload in seen.order]
        out[k] = [M for M, _ in seen.order]
    return out


def gf_corpus(q: int, n_max: int) -> list[Matroid]:
    """All 3-connected matroids representable over GF(q), q in {2, 3}, with
    4 <= |E| <= n_max, one per isomorphism class."""
    if q not in (2, 3):
        raise ValueError("only GF(2) and GF(3) are supported")
    if n_max > MAX_CORPUS_N:
        raise CorpusTooLarge(f"corpus generation is capped at n <= {MAX_CORPUS_N}, got {n_max}")
    found = _Classes()
    for r in range(2, n_max // 2 + 1):
        by_n = _simple_by_rank(q, r, n_max)
        for n in sorted(by_n):
            if n < 2 * r:
                # rank above n/2 is covered by duals of the lower-rank side
                continue
            for M in by_n[n]:
                if not is_3connected(M):
                    continue
                found.add(M)
                if 2 * r != n:
                    found.add(M.dual())
    mats = [M for M, _ in found.order]
    mats.sort(key=lambda M: (M.n, M.r, sorted(M.bases)))
    return mats


def _cache_dir(cache_dir: str | os.PathLike | None) -> Path | None:
    d = cache_dir or os.environ.get("MFRAG_CACHE_DIR")
    return Path(d) if d else None


def _digest(kind: str, n: int) -> str:
    key = json.dumps({"kind": kind, "n": n, "version": _CACHE_VERSION}, sort_keys=True)
    return hashlib.sha256(key.encode()).hexdigest()[:24]


def _to_json(M: Matroid) -> dict:
    return {"ground": list(M.ground), "bases": sorted(M.bases)}


def load_corpus(spec: str, cache_dir: str | os.PathLike | None = None) -> list[CorpusEntry]:
    """Resolve a corpus spec into named matroids.

    Generated corpora are cached as JSON under ``cache_dir`` (or
    ``$MFRAG_CACHE_DIR``) keyed by a digest of the spec; nothing is cached
    when neither is set.
    """
    kind, n = parse_corpus_spec(spec)
    if kind == "catalog":
        out = []
        for name in catalog_names():
            try:
                out.append(CorpusEntry(name, catalog(name)))
            except MfragError:
                continue
        return out
    q = int(kind[2:])
    root = _cache_dir(cache_dir)
    mats = None
    path = None
    if root is not None:
        path = root / f"corpus-{kind}-{n}-{_digest(kind, n)}.json"
        if path.exists():
            data = json.loads(path.read_text())
            mats = [Matroid(d["ground"], d["bases"]) for d in data]
    if mats is None:
        mats = gf_corpus(q, n)
        if path is not None:
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp = path.with_suffix(".tmp")
            tmp.write_text(json.dumps([_to_json(M) for M in mats], sort_keys=True))
            tmp.replace(path)
    return [CorpusEntry(f"{kind}-n{M.n}-r{M.r}-{i}", M) for i, M in enumerate(mats)]
