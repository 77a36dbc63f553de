"""Line-oriented text formats: ``.pmx`` matrices, ``.mtd`` matroids and
``.ctx`` setup files.

All three share the same lexical rules: ``#`` starts a comment, blank lines
are ignored, and tokens are separated by whitespace.  Parse errors carry a
1-based line and column.  The ``dump_*`` functions write a canonical form,
so ``dump(load(dump(x))) == dump(x)`` byte for byte.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

from .errors import MfragError, ParseError, ValidationError
from .matroid import Matroid, matroid_from_bases, natural_key
from .partial_field import pf_format, pf_make, pf_parse
from .pmatrix import PMatrix, first_violation

__all__ = [
    "load_pmx",
    "dump_pmx",
    "read_pmx",
    "load_mtd",
    "dump_mtd",
    "read_mtd",
    "CtxFile",
    "load_ctx",
    "dump_ctx",
    "read_ctx",
]

_TOKEN = re.compile(r"\S+")


@dataclass(frozen=True)
class _Tok:
    text: str
    line: int
    col: int


def _lines(text: str) -> list[list[_Tok]]:
    """Non-empty lines as token lists, comments stripped."""
    out = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks = [_Tok(m.group(), ln, m.start() + 1) for m in _TOKEN.finditer(body)]
        if toks:
            out.append(toks)
    return out


def _fail(msg: str, tok: _Tok | None = None, line: int | None = None) -> ParseError:
    if tok is not None:
        return ParseError(msg, line=tok.line, column=tok.col)
    return ParseError(msg, line=line)


def _end_line(text: str) -> int:
    return len(text.splitlines()) + 1


def _expect(lines: list[list[_Tok]], k: int, keyword: str, text: str) -> list[_Tok]:
    if k >= len(lines):
        raise _fail(f"unexpected end of input: expected '{keyword}'", line=_end_line(text))
    head = lines[k][0]
    if head.text != keyword:
        raise _fail(f"expected '{keyword}', found {head.text!r}", head)
    return lines[k]


# ---------------------------------------------------------------------------
# .pmx


def load_pmx(text: str, validate: bool = True) -> PMatrix:
    """Parse a ``.pmx`` matrix.  With ``validate`` the P-matrix condition is checked."""
    lines = _lines(text)
    pf_line = _expect(lines, 0, "pf", text)
    if len(pf_line) != 2:
        raise _fail("'pf' takes exactly one partial-field name", pf_line[0])
    try:
        pf = pf_make(pf_line[1].text)
    except MfragError as exc:
        raise _fail(str(exc), pf_line[1]) from None
    rows = [t.text for t in _expect(lines, 1, "rows", text)[1:]]
    cols = [t.text for t in _expect(lines, 2, "cols", text)[1:]]
    if not rows or not cols:
        raise _fail("a matrix needs at least one row and one column", lines[1 if not rows else 2][0])
    body = lines[3:]
    raw = []
    for k, x in enumerate(rows):
        if k >= len(body):
            raise _fail(f"missing row line for {x!r}", line=_end_line(text))
        toks = body[k]
        if toks[0].text != f"{x}:":
            raise _fail(f"expected row line '{x}:', found {toks[0].text!r}", toks[0])
        if len(toks) - 1 != len(cols):
            where = toks[-1] if len(toks) > len(cols) + 1 else toks[0]
            raise _fail(f"row {x!r} has {len(toks) - 1} entries, expected {len(cols)}", where)
        row = []
        for t in toks[1:]:
            try:
                row.append(pf_parse(pf, t.text).v)
            except ParseError as exc:
                raise _fail(f"bad entry {t.text!r}: {exc.message}", t) from None
        raw.append(row)
    if len(body) > len(rows):
        raise _fail("unexpected content after the last row", body[len(rows)][0])
    try:
        A = PMatrix(pf, rows, cols, raw)
    except ValidationError as exc:
        raise _fail(str(exc), lines[1][0]) from None
    if validate:
        Z = first_violation(A)
        if Z is not None:
            raise ValidationError(f"not a {pf.name}-matrix: the subdeterminant on {sorted(Z, key=natural_key)} is outside the group")
    return A


def dump_pmx(A: PMatrix) -> str:
    out = [f"pf {A.pf.name}", "rows " + " ".join(A.rows), "cols " + " ".join(A.cols)]
    for x in A.rows:
        out.append(f"{x}: " + " ".join(pf_format(A.pf, A.entry(x, y)) for y in A.cols))
    return "\n".join(out) + "\n"


def read_pmx(path, validate: bool = True) -> PMatrix:
    return load_pmx(Path(path).read_text(), validate)


# ---------------------------------------------------------------------------
# .mtd


def _label_set(tok: _Tok, index: dict[str, int]) -> int:
    if tok.text == "-":
        return 0
    m = 0
    for l in tok.text.split(","):
        if l not in index:
            raise _fail(f"{l!r} is not in the ground set", tok)
        if m >> index[l] & 1:
            raise _fail(f"{l!r} repeated in {tok.text!r}", tok)
        m |= 1 << index[l]
    return m


def load_mtd(text: str, validate: bool = True) -> Matroid:
    """Parse a ``.mtd`` matroid given by its bases or its non-bases.

    Each set is one token of comma-joined labels; ``-`` is the empty set.
    Extra lines without a keyword continue the preceding section.
    """
    lines = _lines(text)
    ground_line = _expect(lines, 0, "ground", text)
    ground = [t.text for t in ground_line[1:]]
    if not ground:
        raise _fail("the ground set is empty", ground_line[0])
    if len(set(ground)) != len(ground):
        raise _fail("duplicate ground label", ground_line[0])
    for t in ground_line[1:]:
        if "," in t.text or t.text == "-":
            raise _fail(f"invalid label {t.text!r}", t)
    rank_line = _expect(lines, 1, "rank", text)
    if len(rank_line) != 2 or not rank_line[1].text.isdigit():
        raise _fail("'rank' takes one non-negative integer", rank_line[0])
    r = int(rank_line[1].text)
    if r > len(ground):
        raise _fail(f"rank {r} exceeds the ground set size", rank_line[1])
    if len(lines) < 3:
        raise _fail("expected a 'bases' or 'nonbases' section", line=_end_line(text))
    head = lines[2][0]
    if head.text not in ("bases", "nonbases"):
        raise _fail(f"expected 'bases' or 'nonbases', found {head.text!r}", head)
    toks = lines[2][1:] + [t for ln in lines[3:] for t in ln]
    for t in toks:
        if t.text in ("ground", "rank", "bases", "nonbases"):
            raise _fail(f"unexpected keyword {t.text!r}", t)
    order = Matroid.sort_labels(ground)
    index = {l: i for i, l in enumerate(order)}
    listed = []
    for t in toks:
        m = _label_set(t, index)
        if bin(m).count("1") != r:
            raise _fail(f"{t.text!r} does not have {r} elements", t)
        listed.append(m)
    if len(set(listed)) != len(listed):
        raise _fail("a set is listed twice", head)
    if head.text == "bases":
        bases = listed
    else:
        gone = set(listed)
        bases = [m for m in _r_subsets(len(order), r) if m not in gone]
    if not bases:
        raise ValidationError("the basis family is empty")
    return matroid_from_bases(order, [[order[i] for i in range(len(order)) if m >> i & 1] for m in bases], validate)


def _r_subsets(n: int, r: int) -> list[int]:
    return [sum(1 << i for i in c) for c in combinations(range(n), r)]


def _set_token(M: Matroid, m: int) -> str:
    return ",".join(M.ordered(m)) if m else "-"


def dump_mtd(M: Matroid, section: str | None = None) -> str:
    """Canonical text; ``section`` picks 'bases' or 'nonbases', default the shorter."""
    nonbases = [m for m in _r_subsets(M.n, M.r) if m not in M.bases]
    if section is None:
        section = "nonbases" if len(nonbases) <= len(M.bases) else "bases"
    if section not in ("bases", "nonbases"):
        raise ValueError("section must be 'bases' or 'nonbases'")
    sets = sorted(M.bases if section == "bases" else nonbases, key=lambda m: [natural_key(l) for l in M.ordered(m)])
    out = ["ground " + " ".join(M.ground), f"rank {M.r}", " ".join([section] + [_set_token(M, m) for m in sets])]
    return "\n".join(out) + "\n"


def read_mtd(path, validate: bool = True) -> Matroid:
    return load_mtd(Path(path).read_text(), validate)


# ---------------------------------------------------------------------------
# .ctx


@dataclass(frozen=True)
class CtxFile:
    """The fields of a setup file, with paths as written."""

    matroid: str
    minor: str
    a: str
    b: str
    basis: tuple[str, ...]
    x: str
    y: str
    companion: str | None = None


_CTX_ARITY = {"matroid": 1, "minor": 1, "pair": 2, "basis": 1, "xy": 2, "companion": 1}


def load_ctx(text: str) -> CtxFile:
    seen: dict[str, list[_Tok]] = {}
    for toks in _lines(text):
        key = toks[0]
        if key.text not in _CTX_ARITY:
            raise _fail(f"unknown directive {key.text!r}", key)
        if key.text in seen:
            raise _fail(f"duplicate directive {key.text!r}", key)
        args = toks[1:]
        if len(args) != _CTX_ARITY[key.text]:
            raise _fail(f"'{key.text}' takes {_CTX_ARITY[key.text]} argument(s), got {len(args)}", key)
        seen[key.text] = args
    for need in ("matroid", "minor", "pair", "basis", "xy"):
        if need not in seen:
            raise _fail(f"missing directive '{need}'", line=_end_line(text))
    basis = tuple(sorted(seen["basis"][0].text.split(","), key=natural_key))
    if any(not l for l in basis):
        raise _fail("empty label in basis list", seen["basis"][0])
    return CtxFile(
        matroid=seen["matroid"][0].text,
        minor=seen["minor"][0].text,
        a=seen["pair"][0].text,
        b=seen["pair"][1].text,
        basis=basis,
        x=seen["xy"][0].text,
        y=seen["xy"][1].text,
        companion=seen["companion"][0].text if "companion" in seen else None,
    )


def dump_ctx(c: CtxFile) -> str:
    out = [
        f"matroid {c.matroid}",
        f"minor {c.minor}",
        f"pair {c.a} {c.b}",
        "basis " + ",".join(sorted(c.basis, key=natural_key)),
        f"xy {c.x} {c.y}",
    ]
    if c.companion is not None:
        out.append(f"companion {c.companion}")
    return "\n".join(out) + "\n"


def read_ctx(path) -> CtxFile:
    return load_ctx(Path(path).read_text())
