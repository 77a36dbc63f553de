"""Incriminating sets, companion-matrix checks and the excluded-minor setup.

A B x B* matrix A is tested against a matroid M through its square
submatrices A[Z]: Z incriminates (M, A) when det A[Z] is not in the partial
field, or is zero although B xor Z is a basis, or is nonzero although B xor
Z is dependent.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Iterable

from .connectivity import is_3connected
from .errors import (
    InvalidSetup,
    LabelMismatch,
    MissingCompanion,
    NonSquareSelection,
    NotABasis,
    PivotNotAllowable,
)
from .matroid import Matroid, natural_key
from .minors import _keeps, _strong_flags
from .partial_field import PFElement
from .pmatrix import (
    PMatrix,
    _labels_for,
    _ordered_squares,
    all_minors,
    is_pmatrix,
    matroid_from_pmatrix,
    pivot,
    scaling_equivalent,
)

__all__ = [
    "Reason",
    "IncriminationCheck",
    "Dichotomy",
    "CompanionCheck",
    "SetupContext",
    "incriminates",
    "incrimination_dichotomy",
    "verify_companion",
    "allowable_pivot",
    "bad_submatrix_nonzero",
]


class Reason(str, enum.Enum):
    NOT_IN_P = "NotInP"
    ZERO_BUT_BASIS = "ZeroButBasis"
    NONZERO_BUT_DEPENDENT = "NonzeroButDependent"


def _sorted(labels: Iterable[str]) -> list[str]:
    return sorted(labels, key=natural_key)


@dataclass(frozen=True)
class IncriminationCheck:
    Z: frozenset[str]
    reason: Reason
    det_value: PFElement

    def to_json(self) -> dict:
        return {"Z": _sorted(self.Z), "reason": self.reason.value, "det": str(self.det_value)}


def _check_frame(M: Matroid, A: PMatrix) -> int:
    if set(A.labels) != set(M.ground):
        raise LabelMismatch("matrix labels must equal the ground set")
    bm = M.mask(A.rows)
    if not M.is_basis(bm):
        raise NotABasis(f"row labels {_sorted(A.rows)} are not a basis of M")
    return bm


def _judge(M: Matroid, A: PMatrix, bm: int, rmask: int, cmask: int) -> IncriminationCheck | None:
    pf = A.pf
    d = all_minors(A)[(rmask, cmask)]
    Z = _labels_for(A, rmask, cmask)
    other = bm ^ M.mask(Z)
    if not pf.raw_is_member(d):
        reason = Reason.NOT_IN_P
    elif pf.raw_is_zero(d):
        if not M.is_basis(other):
            return None
        reason = Reason.ZERO_BUT_BASIS
    else:
        if M.is_basis(other):
            return None
        reason = Reason.NONZERO_BUT_DEPENDENT
    return IncriminationCheck(Z, reason, PFElement(pf, d))


def incriminates(M: Matroid, A: PMatrix, Z: Iterable[str], B: Iterable[str] | None = None) -> IncriminationCheck | None:
    """The reason Z incriminates (M, A), or None."""
    bm = _check_frame(M, A)
    if B is not None and M.mask(B) != bm:
        raise NotABasis("B must be the row label set of A")
    Z = list(Z)
    rows = [z for z in Z if A.is_row(z)]
    cols = [z for z in Z if A.is_col(z)]
    if len(rows) != len(cols):
        raise NonSquareSelection(f"A[Z] is {len(rows)}x{len(cols)}, not square")
    rmask = sum(1 << A._row(x) for x in rows)
    cmask = sum(1 << A._col(y) for y in cols)
    return _judge(M, A, bm, rmask, cmask)


@dataclass(frozen=True)
class Dichotomy:
    represents: bool
    witness: IncriminationCheck | None = None

    def to_json(self) -> dict:
        if self.represents:
            return {"verdict": "Represents"}
        return {"verdict": "Incriminated", "witness": self.witness.to_json()}


def incrimination_dichotomy(M: Matroid, A: PMatrix) -> Dichotomy:
    """Represents if A is a P-matrix with M = M[I|A]; else the first incriminating Z.

    Z runs over square selections by size, then by row and column index
    tuples, the same order as the P-matrix check.
    """
    bm = _check_frame(M, A)
    for rmask, cmask in _ordered_squares(*A.shape):
        hit = _judge(M, A, bm, rmask, cmask)
        if hit is not None:
            return Dichotomy(False, hit)
    return Dichotomy(True)


# ---------------------------------------------------------------------------
# companion matrices


@dataclass(frozen=True)
class CompanionCheck:
    minus_a_pmatrix: bool
    minus_b_pmatrix: bool
    minus_a_represents: bool
    minus_b_represents: bool
    scaling_to_D: bool

    @property
    def ok(self) -> bool:
        return all(
            (
                self.minus_a_pmatrix,
                self.minus_b_pmatrix,
                self.minus_a_represents,
                self.minus_b_represents,
                self.scaling_to_D,
            )
        )

    def to_json(self) -> dict:
        return {
            "i": {"A-a": self.minus_a_pmatrix, "A-b": self.minus_b_pmatrix},
            "ii": {"A-a": self.minus_a_represents, "A-b": self.minus_b_represents},
            "iii": self.scaling_to_D,
            "ok": self.ok,
        }


def verify_companion(M: Matroid, A: PMatrix, a: str, b: str, D: PMatrix, E_N: Iterable[str]) -> CompanionCheck:
    """Check the three companion conditions; uniqueness is not decided.

    (i) A-a and A-b are P-matrices, (ii) they represent M\\a and M\\b, and
    (iii) A[E_N] is scaling equivalent to D.
    """
    if set(A.labels) != set(M.ground):
        raise LabelMismatch("matrix labels must equal the ground set")
    if A.pf.name != D.pf.name:
        raise LabelMismatch("A and D must share the partial field")
    flags = []
    for gone in (a, b):
        sub = A.remove([gone])
        ok_p = is_pmatrix(sub)
        rep = ok_p and matroid_from_pmatrix(sub, check=False) == M.delete([gone])
        flags.append((ok_p, rep))
    en = set(E_N)
    sub = A.restrict(en)
    if set(sub.rows) != set(D.rows) or set(sub.cols) != set(D.cols):
        scaled = False
    else:
        scaled = scaling_equivalent(D, sub) is not None
    return CompanionCheck(flags[0][0], flags[1][0], flags[0][1], flags[1][1], scaled)


# ---------------------------------------------------------------------------
# the setup


@dataclass(frozen=True)
class SetupContext:
    """M, N and the deletion pair {a, b}; B is a basis of M\\a,b with
    {x, y} <= B, and A (optional) is a B x B* companion matrix."""

    M: Matroid
    N: Matroid
    a: str
    b: str
    B: frozenset[str]
    x: str
    y: str
    A: PMatrix | None = None
    _memo: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def Mp(self) -> Matroid:
        got = self._memo.get("Mp")
        if got is None:
            got = self.M.delete([self.a, self.b])
            self._memo["Mp"] = got
        return got

    @property
    def Bmask(self) -> int:
        return self.Mp.mask(self.B)

    def validate(self) -> SetupContext:
        """Raise InvalidSetup unless the context satisfies the setup."""
        if self._memo.get("valid"):
            return self
        M, Mp = self.M, self.Mp
        labels = {self.a, self.b, self.x, self.y}
        if len(labels) != 4 or not labels <= set(M.ground):
            raise InvalidSetup("a, b, x, y must be four distinct elements of M")
        if not is_3connected(Mp):
            raise InvalidSetup(f"M\\{self.a},{self.b} is not 3-connected")
        if not _keeps(Mp, self.N):
            raise InvalidSetup(f"M\\{self.a},{self.b} has no N-minor")
        if not set(self.B) <= set(Mp.ground) or not Mp.is_basis(Mp.mask(self.B)):
            raise InvalidSetup("B is not a basis of M\\a,b")
        if not M.is_basis(M.mask(self.B)):
            raise InvalidSetup("B is not a basis of M")
        if not {self.x, self.y} <= set(self.B):
            raise InvalidSetup("x and y must lie in B")
        if self.A is not None:
            if set(self.A.rows) != set(self.B) or set(self.A.labels) != set(M.ground):
                raise InvalidSetup("the companion matrix must be indexed by B x (E - B)")
            if incriminates(M, self.A, [self.a, self.b, self.x, self.y]) is None:
                raise InvalidSetup(f"{{{self.a}, {self.b}, {self.x}, {self.y}}} does not incriminate (M, A)")
        self._memo["valid"] = True
        return self

    def strong_mask(self) -> int:
        """(N,B)-strong elements of M\\a,b."""
        Mp = self.Mp
        si_ok, co_ok = _strong_flags(Mp, self.N)
        bm = self.Bmask
        return sum(1 << i for i in range(Mp.n) if (si_ok[i] if bm >> i & 1 else co_ok[i]))

    def robust_mask(self) -> int:
        from .minors import _removal_flags

        Mp = self.Mp
        dele, con = _removal_flags(Mp, self.N)
        bm = self.Bmask
        return sum(1 << i for i in range(Mp.n) if (con[i] if bm >> i & 1 else dele[i]))

    def s_prime(self) -> frozenset[str]:
        """{u, x, y} for the first strong u outside {x, y}, else {x, y}."""
        Mp = self.Mp
        outside = self.strong_mask() & ~Mp.mask([self.x, self.y])
        if outside:
            u = Mp.ground[(outside & -outside).bit_length() - 1]
            return frozenset({u, self.x, self.y})
        return frozenset({self.x, self.y})

    def to_json(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "x": self.x,
            "y": self.y,
            "basis": _sorted(self.B),
            "companion": self.A is not None,
        }


def allowable_pivot(ctx: SetupContext, p: str, q: str) -> SetupContext:
    """Pivot the companion matrix on (p, q) when one of the two allowable forms applies.

    First form: p in {x, y}; the incriminating set becomes
    {a, b, x, y} xor {p, q}.  Second form: p in B - {x, y} with
    A[p,a] = A[p,b] = 0 or A[x,q] = A[y,q] = 0; the set is unchanged.
    The new set is re-checked against the pivoted matrix.
    """
    A = ctx.A
    if A is None:
        raise MissingCompanion("allowable pivots need a companion matrix")
    if not A.is_row(p) or not A.is_col(q):
        raise PivotNotAllowable(f"{p!r} must be in B and {q!r} in B*")
    if q in (ctx.a, ctx.b):
        raise PivotNotAllowable("q must lie outside {a, b}")
    if A.entry(p, q).is_zero():
        raise PivotNotAllowable(f"A[{p},{q}] is zero")
    x, y = ctx.x, ctx.y
    if p in (x, y):
        if p == x:
            x = q
        else:
            y = q
    else:
        zero = lambda i, j: A.entry(i, j).is_zero()  # noqa: E731
        if not ((zero(p, ctx.a) and zero(p, ctx.b)) or (zero(x, q) and zero(y, q))):
            raise PivotNotAllowable(
                f"neither A[{p},a] = A[{p},b] = 0 nor A[x,{q}] = A[y,{q}] = 0"
            )
    Ap = pivot(A, p, q)
    new = SetupContext(ctx.M, ctx.N, ctx.a, ctx.b, frozenset(Ap.rows), x, y, Ap)
    if incriminates(new.M, Ap, [new.a, new.b, new.x, new.y]) is None:
        raise InvalidSetup("the pivoted quadruple does not incriminate; the input was not a companion matrix")
    return new


def bad_submatrix_nonzero(ctx: SetupContext) -> bool:
    """A[i, j] != 0 for i in {x, y} and j in {a, b}."""
    if ctx.A is None:
        raise MissingCompanion("no companion matrix in the context")
    return all(not ctx.A.entry(i, j).is_zero() for i in (ctx.x, ctx.y) for j in (ctx.a, ctx.b))


def with_basis(ctx: SetupContext, B: Iterable[str]) -> SetupContext:
    return replace(ctx, B=frozenset(B), A=None, _memo={})
