"""The ``mfrag`` command-line front end.

Every command builds a JSON-ready report ``{"command", "instances",
"result"}``.  Output is JSON with sorted keys by default; ``--format text``
renders the same payload as indented ``key: value`` lines.

Exit codes: 0 on success, 1 when a verification fails or no outcome holds,
2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .catalog import catalog, catalog_names
from .corpus import MAX_CORPUS_N, CorpusEntry, load_corpus
from .deltawye import delta_y
from .errors import MfragError
from .formats import dump_mtd, dump_pmx, read_ctx, read_mtd, read_pmx
from .incrimination import SetupContext
from .lemmas import lemma_ids, verify_many
from .matroid import Matroid, natural_key
from .minors import _keeps, classify_elements, has_minor, is_fragile, is_strictly_fragile
from .pmatrix import PMatrix, matroid_from_pmatrix, pivot
from .theorems import classify_mainthm1, classify_mainthm2

__all__ = ["main", "build_parser"]

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2


class InputError(Exception):
    """Bad command-line input that is not a library error."""


def _sorted(labels) -> list[str]:
    return sorted(labels, key=natural_key)


def digest(M: Matroid) -> dict:
    return {"ground": list(M.ground), "rank": M.r, "bases": len(M.bases)}


def matrix_json(A: PMatrix) -> dict:
    return {
        "pf": A.pf.name,
        "rows": list(A.rows),
        "cols": list(A.cols),
        "entries": [[str(A.entry(x, y)) for y in A.cols] for x in A.rows],
    }


def load_matroid(spec: str, validate: bool = True) -> Matroid:
    """A catalog name, a ``.mtd`` file or a ``.pmx`` file."""
    path = Path(spec)
    if path.is_file():
        if path.suffix == ".pmx":
            return matroid_from_pmatrix(read_pmx(path, validate))
        return read_mtd(path, validate)
    if path.suffix in (".mtd", ".pmx"):
        raise InputError(f"no such file: {spec}")
    return catalog(spec)


def load_setup(path: str, validate: bool = True) -> SetupContext:
    c = read_ctx(path)
    base = Path(path).parent

    def resolve(p: str) -> str:
        q = base / p
        return str(q) if q.is_file() else p

    M = load_matroid(resolve(c.matroid), validate)
    N = load_matroid(resolve(c.minor), validate)
    A = read_pmx(resolve(c.companion), validate) if c.companion else None
    return SetupContext(M, N, c.a, c.b, frozenset(c.basis), c.x, c.y, A)


def _split(text: str) -> list[str]:
    return [t for t in text.split(",") if t]


# ---------------------------------------------------------------------------
# commands; each returns (exit code, instances, result)


def cmd_catalog(args):
    if args.action == "list":
        return EXIT_OK, [], {"names": catalog_names()}
    if not args.name:
        raise InputError("catalog show needs a name")
    M = catalog(args.name)
    return EXIT_OK, [digest(M)], {"name": args.name, "mtd": dump_mtd(M)}


def cmd_analyze(args):
    M = load_matroid(args.matroid, args.validate)
    N = load_matroid(args.minor, args.validate)
    B = _split(args.basis) if args.basis else None
    rows = classify_elements(M, N, B)
    recipe = has_minor(M, N)
    summary = {"fragile": is_fragile(M, N), "strictly_fragile": is_strictly_fragile(M, N)}
    result = {
        "elements": [r.to_json() for r in rows],
        "summary": summary,
        "minor_recipe": recipe.to_json(),
    }
    if B is not None:
        result["basis"] = _sorted(B)
    return EXIT_OK, [digest(M), digest(N)], result


def cmd_classify(args):
    ctx = load_setup(args.ctx, args.validate)
    verdict = classify_mainthm1(ctx) if args.theorem == 1 else classify_mainthm2(ctx)
    result = {"setup": ctx.to_json(), "verdict": verdict.to_json()}
    code = EXIT_OK if verdict.any_holds else EXIT_FAIL
    return code, [digest(ctx.M), digest(ctx.N)], result


def _corpus(specs: list[str], cache_dir, validate: bool) -> list[CorpusEntry]:
    out = []
    for spec in specs:
        if spec == "catalog" or spec.startswith("all-"):
            out.extend(load_corpus(spec, cache_dir))
        else:
            out.append(CorpusEntry(spec, load_matroid(spec, validate)))
    return out


def cmd_verify(args):
    entries = _corpus(args.corpus, args.cache_dir, args.validate)
    if args.jobs < 1:
        raise InputError("--jobs must be at least 1")
    res = verify_many(args.lemma, entries, jobs=args.jobs)
    result = res.to_json()
    result["corpus"] = list(args.corpus)
    return (EXIT_OK if res.passed else EXIT_FAIL), [], result


def cmd_pivot(args):
    A = read_pmx(args.matrix, args.validate)
    on = _split(args.on)
    if len(on) != 2:
        raise InputError("--on takes two labels x,y")
    Ap = pivot(A, on[0], on[1])
    return EXIT_OK, [], {"before": matrix_json(A), "after": matrix_json(Ap), "pmx": dump_pmx(Ap)}


def cmd_deltay(args):
    M = load_matroid(args.matroid, args.validate)
    T = _split(args.triangle)
    if len(T) != 3:
        raise InputError("--triangle takes three labels p,q,r")
    D = delta_y(M, T)
    return EXIT_OK, [digest(M)], {"triangle": _sorted(T), "result": digest(D), "mtd": dump_mtd(D)}


def cmd_fragile_scan(args):
    N = load_matroid(args.minor, args.validate)
    field = args.field.replace(" ", "").upper()
    q = {"GF(2)": 2, "GF(3)": 3}.get(field)
    if q is None:
        raise InputError(f"fragile-scan supports GF(2) and GF(3); got {args.field}")
    if args.max_n > MAX_CORPUS_N:
        raise InputError(f"--max-n is capped at {MAX_CORPUS_N}")
    found = []
    for name, M in load_corpus(f"all-gf{q}-upto({args.max_n})", args.cache_dir):
        if M.n < N.n or not _keeps(M, N):
            continue
        if not is_fragile(M, N):
            continue
        found.append(
            {
                "name": name,
                "size": M.n,
                "rank": M.r,
                "strictly_fragile": is_strictly_fragile(M, N),
                "mtd": dump_mtd(M),
            }
        )
    result = {"field": f"GF({q})", "max_n": args.max_n, "minor": digest(N), "fragile": found, "count": len(found)}
    return EXIT_OK, [digest(N)], result


# ---------------------------------------------------------------------------
# plumbing


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "text"), default="json", help="output format")
    p.add_argument("--no-validate", dest="validate", action="store_false", help="skip eager input validation")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mfrag", description="Exact matroid structure analysis.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="list or show named matroids")
    p.add_argument("action", choices=("list", "show"))
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("analyze", help="deletable/contractible table against an N-minor")
    p.add_argument("--matroid", required=True)
    p.add_argument("--minor", required=True)
    p.add_argument("--basis")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("classify", help="evaluate theorem outcomes for a setup file")
    p.add_argument("--ctx", required=True)
    p.add_argument("--theorem", type=int, choices=(1, 2), default=1)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", help="check a lemma exhaustively over a corpus")
    p.add_argument("--lemma", required=True, choices=lemma_ids())
    p.add_argument("--corpus", required=True, nargs="+", help="catalog, all-gf2-upto(n), all-gf3-upto(n) or files")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--cache-dir", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("pivot", help="pivot a matrix on an entry")
    p.add_argument("--matrix", required=True)
    p.add_argument("--on", required=True)
    p.set_defaults(func=cmd_pivot)

    p = sub.add_parser("deltay", help="replace a triangle by a triad")
    p.add_argument("--matroid", required=True)
    p.add_argument("--triangle", required=True)
    p.set_defaults(func=cmd_deltay)

    p = sub.add_parser("fragile-scan", help="list N-fragile matroids over GF(2) or GF(3)")
    p.add_argument("--minor", required=True)
    p.add_argument("--field", required=True)
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--cache-dir", default=None)
    p.set_defaults(func=cmd_fragile_scan)

    for p in sub.choices.values():
        _common(p)
    return parser


def _echo(args) -> dict:
    skip = {"func", "format"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def render_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            elif isinstance(v, str) and "\n" in v:
                lines.append(f"{pad}{k}: |")
                lines.extend(f"{pad}  {s}" for s in v.rstrip("\n").split("\n"))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}-")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {json.dumps(v)}")
    else:
        lines.append(f"{pad}{json.dumps(obj)}")
    return "\n".join(lines)


def render(report: dict, fmt: str) -> str:
    if fmt == "text":
        return render_text(report) + "\n"
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        code, instances, result = args.func(args)
    except (MfragError, InputError, OSError) as exc:
        message = str(exc.args[0]) if isinstance(exc, KeyError) and exc.args else str(exc)
        err = {"command": _echo(args), "error": {"type": type(exc).__name__, "message": message}}
        sys.stderr.write(render(err, args.format))
        return EXIT_INPUT
    report = {"command": _echo(args), "instances": instances, "result": result}
    sys.stdout.write(render(report, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
