import pytest
from hypothesis import given, settings

from mfrag.catalog import catalog, catalog_names
from mfrag.errors import ExchangeAxiomViolation, ParseError, ValidationError
from mfrag.formats import (
    CtxFile,
    dump_ctx,
    dump_mtd,
    dump_pmx,
    load_ctx,
    load_mtd,
    load_pmx,
    read_ctx,
    read_mtd,
    read_pmx,
)
from mfrag.matroid import Matroid
from mfrag.partial_field import pf_make
from mfrag.pmatrix import PMatrix
from oracles import label_bases
from test_matroid import gf3_matroids

PMX_EXAMPLE = """pf GF(5)
rows x u
cols y v
x: 2 3
u: 1 4
"""


def test_pmx_example():
    A = load_pmx(PMX_EXAMPLE)
    gf5 = pf_make("GF(5)")
    assert A == PMatrix.from_entries(gf5, ["x", "u"], ["y", "v"], [[2, 3], [1, 4]])
    assert dump_pmx(A) == PMX_EXAMPLE


def test_pmx_comments_and_blank_lines():
    text = "# a matrix\npf GF(5)\n\nrows x u  # two rows\ncols y v\nx: 2 3\nu: 1 4\n"
    assert load_pmx(text) == load_pmx(PMX_EXAMPLE)


def test_pmx_errors_carry_locations():
    with pytest.raises(ParseError) as info:
        load_pmx("pf GF(5)\nrows x u\ncols y v\nx: 2 3\n")
    assert info.value.line is not None
    with pytest.raises(ParseError) as info:
        load_pmx("pf GF(5)\nrows x u\ncols y v\nx: 2 7\nu: 1 4\n")
    assert (info.value.line, info.value.column) == (4, 6)
    with pytest.raises(ParseError):
        load_pmx("pf GF(5)\nrows x u\ncols y v\nu: 1 4\nx: 2 3\n")
    with pytest.raises(ParseError):
        load_pmx("pf GF(6)\nrows x\ncols y\nx: 1\n")


def test_pmx_validation():
    text = "pf regular\nrows x1 x2\ncols y1 y2\nx1: 1 1\nx2: -1 1\n"
    with pytest.raises(ValidationError):
        load_pmx(text)
    assert load_pmx(text, validate=False).shape == (2, 2)


def test_mtd_example_from_nonbases():
    M = load_mtd("ground 1 2 3 4\nrank 2\nnonbases 3,4\n")
    assert len(M.bases) == 5
    assert frozenset({"3", "4"}) not in label_bases(M)


def test_mtd_sections_and_continuations():
    text = "ground a b c\nrank 1\nbases a\n  b c\n"
    assert load_mtd(text) == Matroid(["a", "b", "c"], [1, 2, 4])
    assert load_mtd("ground a b\nrank 0\nbases -\n").r == 0


def test_mtd_errors():
    with pytest.raises(ParseError) as info:
        load_mtd("ground 1 2 3 4\nrank 2\n")
    assert info.value.line is not None
    with pytest.raises(ParseError):
        load_mtd("ground 1 2 3 4\nrank 2\nnonbases 3,5\n")
    with pytest.raises(ParseError):
        load_mtd("ground 1 2\nrank 2\nbases 1\n")
    with pytest.raises(ExchangeAxiomViolation):
        load_mtd("ground 1 2 3 4\nrank 2\nbases 1,2 3,4\n")


@pytest.mark.parametrize("name", catalog_names())
def test_mtd_round_trip_over_catalog(name):
    M = catalog(name)
    text = dump_mtd(M)
    assert load_mtd(text) == M
    assert dump_mtd(load_mtd(text)) == text
    for section in ("bases", "nonbases"):
        assert load_mtd(dump_mtd(M, section)) == M


@settings(max_examples=40, deadline=None)
@given(gf3_matroids())
def test_mtd_round_trip_random(M):
    text = dump_mtd(M)
    assert dump_mtd(load_mtd(text)) == text


def test_ctx_round_trip():
    c = CtxFile("m.mtd", "n.mtd", "5", "6", ("1", "2"), "1", "2", "a.pmx")
    text = dump_ctx(c)
    assert load_ctx(text) == c
    assert dump_ctx(load_ctx(text)) == text
    plain = CtxFile("m.mtd", "n.mtd", "5", "6", ("1", "2"), "1", "2")
    assert "companion" not in dump_ctx(plain)


def test_ctx_errors():
    good = "matroid m.mtd\nminor n.mtd\npair 5 6\nbasis 1,2\nxy 1 2\n"
    assert load_ctx(good).basis == ("1", "2")
    with pytest.raises(ParseError):
        load_ctx(good + "pair 5 6\n")
    with pytest.raises(ParseError):
        load_ctx(good + "colour red\n")
    with pytest.raises(ParseError) as info:
        load_ctx("matroid m.mtd\nminor n.mtd\npair 5\nbasis 1,2\nxy 1 2\n")
    assert info.value.line == 3


def test_instance_files_are_byte_stable(instances):
    for path in sorted(instances.iterdir()):
        text = path.read_text()
        if path.suffix == ".pmx":
            assert dump_pmx(read_pmx(path)) == text
        elif path.suffix == ".mtd":
            assert dump_mtd(read_mtd(path)) == text
        elif path.suffix == ".ctx":
            assert dump_ctx(read_ctx(path)) == text
