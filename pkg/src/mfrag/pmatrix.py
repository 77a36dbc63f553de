"""Row/column-labeled matrices over a partial field.

A :class:`PMatrix` is an X x Y matrix whose rows and columns carry disjoint
string labels.  It presents the matroid on X u Y whose bases are the sets
X xor Z for which A[Z] is square with nonzero determinant.
"""

from __future__ import annotations

from collections import deque
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import (
    LabelMismatch,
    NonSquareSelection,
    NotAPermutation,
    NotAPMatrix,
    UnknownLabel,
    ValidationError,
    ZeroPivotEntry,
    ZeroScaleFactor,
)
from .partial_field import PartialField, PFElement

__all__ = [
    "PMatrix",
    "subdeterminant",
    "all_minors",
    "first_violation",
    "is_pmatrix",
    "pivot",
    "scale",
    "permute",
    "scaling_equivalent",
    "matroid_from_pmatrix",
]

MAX_LABELS = 16


class PMatrix:
    """Immutable labeled matrix; entries are stored as raw payloads."""

    __slots__ = ("pf", "rows", "cols", "_raw", "_rindex", "_cindex", "_minors")

    def __init__(self, pf: PartialField, rows: Sequence[str], cols: Sequence[str], raw):
        self.pf = pf
        self.rows = tuple(str(r) for r in rows)
        self.cols = tuple(str(c) for c in cols)
        if len(set(self.rows)) != len(self.rows) or len(set(self.cols)) != len(self.cols):
            raise ValidationError("duplicate row or column label")
        if set(self.rows) & set(self.cols):
            raise ValidationError(f"row and column labels overlap: {sorted(set(self.rows) & set(self.cols))}")
        self._raw = tuple(tuple(r) for r in raw)
        if len(self._raw) != len(self.rows) or any(len(r) != len(self.cols) for r in self._raw):
            raise ValidationError("entry array does not match the label lists")
        self._rindex = {x: i for i, x in enumerate(self.rows)}
        self._cindex = {y: j for j, y in enumerate(self.cols)}
        self._minors = None

    @classmethod
    def from_entries(cls, pf: PartialField, rows, cols, entries) -> PMatrix:
        """Build from nested entries given as ints, literals or PFElements."""
        raw = [[pf(e).v for e in row] for row in entries]
        return cls(pf, rows, cols, raw)

    # -- access -------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    @property
    def labels(self) -> tuple[str, ...]:
        return self.rows + self.cols

    def raw(self, x: str, y: str):
        return self._raw[self._row(x)][self._col(y)]

    def entry(self, x: str, y: str) -> PFElement:
        return PFElement(self.pf, self.raw(x, y))

    def __getitem__(self, key) -> PFElement:
        x, y = key
        return self.entry(x, y)

    def _row(self, x: str) -> int:
        try:
            return self._rindex[x]
        except KeyError:
            raise UnknownLabel(f"{x!r} is not a row label") from None

    def _col(self, y: str) -> int:
        try:
            return self._cindex[y]
        except KeyError:
            raise UnknownLabel(f"{y!r} is not a column label") from None

    def is_row(self, label: str) -> bool:
        return label in self._rindex

    def is_col(self, label: str) -> bool:
        return label in self._cindex

    def entries(self) -> list[list[PFElement]]:
        return [[PFElement(self.pf, v) for v in row] for row in self._raw]

    def support(self) -> frozenset[tuple[str, str]]:
        z = self.pf.raw_is_zero
        return frozenset(
            (x, y)
            for i, x in enumerate(self.rows)
            for j, y in enumerate(self.cols)
            if not z(self._raw[i][j])
        )

    def restrict(self, labels: Iterable[str]) -> PMatrix:
        """A[Z]: the submatrix on the rows and columns in ``labels``."""
        z = set(labels)
        unknown = z - set(self.labels)
        if unknown:
            raise UnknownLabel(f"unknown labels {sorted(unknown)}")
        ri = [i for i, x in enumerate(self.rows) if x in z]
        ci = [j for j, y in enumerate(self.cols) if y in z]
        return PMatrix(
            self.pf,
            [self.rows[i] for i in ri],
            [self.cols[j] for j in ci],
            [[self._raw[i][j] for j in ci] for i in ri],
        )

    def remove(self, labels: Iterable[str]) -> PMatrix:
        """A - Z: drop the rows and columns in ``labels``."""
        z = set(labels)
        return self.restrict([l for l in self.labels if l not in z])

    def __eq__(self, other) -> bool:
        if not isinstance(other, PMatrix):
            return NotImplemented
        return (
            self.pf.name == other.pf.name
            and self.rows == other.rows
            and self.cols == other.cols
            and self._raw == other._raw
        )

    def __hash__(self) -> int:
        return hash((self.pf.name, self.rows, self.cols, self._raw))

    def __repr__(self) -> str:
        body = "; ".join(
            f"{x}: " + " ".join(self.pf.raw_format(v) for v in row)
            for x, row in zip(self.rows, self._raw)
        )
        return f"PMatrix({self.pf.name}, cols={list(self.cols)}, {body})"


# ---------------------------------------------------------------------------
# determinants


def all_minors(A: PMatrix) -> dict[tuple[int, int], object]:
    """Every square subdeterminant, keyed by (row bitmask, column bitmask).

    Laplace expansion along the last selected row, so only ring operations are
    used.  Bit i of a row mask refers to ``A.rows[i]``; likewise for columns.
    """
    if A._minors is not None:
        return A._minors
    m, n = A.shape
    if m + n > MAX_LABELS:
        from .errors import TooLarge

        raise TooLarge(f"matrix has {m + n} labels; the limit is {MAX_LABELS}")
    pf = A.pf
    add, mul, neg, is_zero = pf.raw_add, pf.raw_mul, pf.raw_neg, pf.raw_is_zero
    zero = pf.raw_from_int(0)
    dets: dict[tuple[int, int], object] = {(0, 0): pf.raw_from_int(1)}
    raw = A._raw
    for k in range(1, min(m, n) + 1):
        for rsel in combinations(range(m), k):
            last = rsel[-1]
            rmask = sum(1 << i for i in rsel)
            rprev = rmask & ~(1 << last)
            row = raw[last]
            for csel in combinations(range(n), k):
                cmask = sum(1 << j for j in csel)
                total = zero
                for pos, j in enumerate(csel):
                    a = row[j]
                    if is_zero(a):
                        continue
                    sub = dets[(rprev, cmask & ~(1 << j))]
                    if is_zero(sub):
                        continue
                    term = mul(a, sub)
                    if (k - 1 + pos) % 2:
                        term = neg(term)
                    total = add(total, term)
                dets[(rmask, cmask)] = total
    A._minors = dets
    return dets


def _masks_for(A: PMatrix, Z: Iterable[str]) -> tuple[int, int]:
    rmask = cmask = 0
    for label in Z:
        if label in A._rindex:
            rmask |= 1 << A._rindex[label]
        elif label in A._cindex:
            cmask |= 1 << A._cindex[label]
        else:
            raise UnknownLabel(f"{label!r} is not a label of the matrix")
    return rmask, cmask


def _labels_for(A: PMatrix, rmask: int, cmask: int) -> frozenset[str]:
    return frozenset(
        [x for i, x in enumerate(A.rows) if rmask >> i & 1]
        + [y for j, y in enumerate(A.cols) if cmask >> j & 1]
    )


def subdeterminant(A: PMatrix, Z: Iterable[str]) -> PFElement:
    """det A[Z], rows and columns taken in stored label order."""
    rmask, cmask = _masks_for(A, Z)
    if bin(rmask).count("1") != bin(cmask).count("1"):
        raise NonSquareSelection(
            f"A[Z] is {bin(rmask).count('1')}x{bin(cmask).count('1')}, not square"
        )
    if A._minors is not None:
        return PFElement(A.pf, A._minors[(rmask, cmask)])
    sub = A.restrict(_labels_for(A, rmask, cmask))
    k = len(sub.rows)
    return PFElement(A.pf, all_minors(sub)[((1 << k) - 1, (1 << k) - 1)])


def _ordered_squares(m: int, n: int):
    for k in range(1, min(m, n) + 1):
        for rsel in combinations(range(m), k):
            rmask = sum(1 << i for i in rsel)
            for csel in combinations(range(n), k):
                yield rmask, sum(1 << j for j in csel)


def first_violation(A: PMatrix) -> frozenset[str] | None:
    """The first Z (by size, then row and column index tuples) with det A[Z] outside G u {0}."""
    if A.pf.is_finite:
        return None
    dets = all_minors(A)
    member = A.pf.raw_is_member
    for key in _ordered_squares(*A.shape):
        if not member(dets[key]):
            return _labels_for(A, *key)
    return None


def is_pmatrix(A: PMatrix) -> bool:
    return first_violation(A) is None


# ---------------------------------------------------------------------------
# moves


def _field_inverse(pf: PartialField, u):
    if pf.is_finite:
        return pf.raw_inv(u)
    return 1 / u


def pivot(A: PMatrix, x: str, y: str) -> PMatrix:
    """Pivot on the entry (x, y): x becomes a column label and y a row label."""
    i, j = A._row(x), A._col(y)
    pf = A.pf
    axy = A._raw[i][j]
    if pf.raw_is_zero(axy):
        raise ZeroPivotEntry(f"A[{x},{y}] is zero")
    inv = _field_inverse(pf, axy)
    mul, sub, neg = pf.raw_mul, pf.raw_sub, pf.raw_neg
    raw = A._raw
    out = []
    for u in range(len(A.rows)):
        new_row = []
        for v in range(len(A.cols)):
            if u == i and v == j:
                val = inv
            elif u == i:
                val = mul(inv, raw[i][v])
            elif v == j:
                val = neg(mul(inv, raw[u][j]))
            else:
                val = sub(raw[u][v], mul(inv, mul(raw[u][j], raw[i][v])))
            new_row.append(val)
        out.append(new_row)
    rows = list(A.rows)
    cols = list(A.cols)
    rows[i], cols[j] = y, x
    return PMatrix(pf, rows, cols, out)


def scale(A: PMatrix, line: str, c) -> PMatrix:
    """Multiply the row or column ``line`` by the unit ``c``."""
    c = A.pf(c)
    if c.is_zero():
        raise ZeroScaleFactor("scale factor must be nonzero")
    if not c.is_member():
        raise ZeroScaleFactor(f"scale factor {c} is not a unit of {A.pf.name}")
    mul = A.pf.raw_mul
    raw = [list(r) for r in A._raw]
    if A.is_row(line):
        i = A._row(line)
        raw[i] = [mul(c.v, v) for v in raw[i]]
    else:
        j = A._col(line)
        for r in raw:
            r[j] = mul(c.v, r[j])
    return PMatrix(A.pf, A.rows, A.cols, raw)


def permute(A: PMatrix, row_order: Sequence[str], col_order: Sequence[str]) -> PMatrix:
    """Reorder rows and columns; labels travel with their lines."""
    if sorted(row_order) != sorted(A.rows) or len(row_order) != len(A.rows):
        raise NotAPermutation("row order is not a permutation of the row labels")
    if sorted(col_order) != sorted(A.cols) or len(col_order) != len(A.cols):
        raise NotAPermutation("column order is not a permutation of the column labels")
    ri = [A._row(x) for x in row_order]
    ci = [A._col(y) for y in col_order]
    return PMatrix(A.pf, row_order, col_order, [[A._raw[i][j] for j in ci] for i in ri])


def scaling_equivalent(A1: PMatrix, A2: PMatrix) -> dict[str, PFElement] | None:
    """Unit factors d with A2[x,y] = d[x] * A1[x,y] * d[y], or None.

    Each component of the support graph is rooted at its first column (first
    row if it has no column), whose factor is fixed to 1; the remaining
    factors are forced along a spanning forest and then every entry is checked.
    """
    if A1.pf.name != A2.pf.name or set(A1.rows) != set(A2.rows) or set(A1.cols) != set(A2.cols):
        raise LabelMismatch("matrices must share the partial field and label sets")
    if A2.rows != A1.rows or A2.cols != A1.cols:
        A2 = permute(A2, A1.rows, A1.cols)
    pf = A1.pf
    if A1.support() != A2.support():
        return None
    adj: dict[str, list[str]] = {l: [] for l in A1.labels}
    for x, y in sorted(A1.support(), key=lambda e: (A1._row(e[0]), A1._col(e[1]))):
        adj[x].append(y)
        adj[y].append(x)
    factor: dict[str, object] = {}
    for root in A1.cols + A1.rows:
        if root in factor:
            continue
        factor[root] = pf.raw_from_int(1)
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w in factor:
                    continue
                x, y = (u, w) if A1.is_row(u) else (w, u)
                a1, a2 = A1.raw(x, y), A2.raw(x, y)
                # a2 = f[u] * a1 * f[w]
                factor[w] = pf.raw_mul(a2, _field_inverse(pf, pf.raw_mul(factor[u], a1)))
                queue.append(w)
    for x in A1.rows:
        for y in A1.cols:
            lhs = pf.raw_mul(factor[x], pf.raw_mul(A1.raw(x, y), factor[y]))
            if lhs != A2.raw(x, y):
                return None
    if not all(pf.raw_is_member(f) for f in factor.values()):
        return None
    return {l: PFElement(pf, factor[l]) for l in A1.labels}


def matroid_from_pmatrix(A: PMatrix, check: bool = True):
    """The matroid M[I|A] on X u Y; bases are X xor Z with det A[Z] nonzero."""
    from .matroid import Matroid

    if check:
        bad = first_violation(A)
        if bad is not None:
            det = subdeterminant(A, bad)
            raise NotAPMatrix(f"det A[{sorted(bad)}] = {det} is not in {A.pf.name}", witness=bad)
    dets = all_minors(A)
    ground = A.labels
    order = Matroid.sort_labels(ground)
    pos = {l: k for k, l in enumerate(order)}
    rbits = [1 << pos[x] for x in A.rows]
    cbits = [1 << pos[y] for y in A.cols]
    xmask = sum(rbits)
    is_zero = A.pf.raw_is_zero

    def spread(mask: int, bits: list[int]) -> int:
        out = 0
        i = 0
        while mask:
            if mask & 1:
                out |= bits[i]
            mask >>= 1
            i += 1
        return out

    bases = set()
    for (rm, cm), d in dets.items():
        if not is_zero(d):
            bases.add(xmask ^ spread(rm, rbits) ^ spread(cm, cbits))
    return Matroid(order, bases)


def pmatrix_from_mapping(pf: PartialField, rows, cols, entries: Mapping[tuple[str, str], object]) -> PMatrix:
    """Build from a sparse mapping (x, y) -> value; missing entries are zero."""
    return PMatrix.from_entries(pf, rows, cols, [[entries.get((x, y), 0) for y in cols] for x in rows])
