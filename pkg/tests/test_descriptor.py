import json
from pathlib import Path

import numpy as np
import pytest

from fellbundle.descriptor import (
    ParseError,
    matrix_to_json,
    parse_descriptor,
    parse_matrix,
    serialize_descriptor,
)
from fellbundle.dfell import SquareSection

FIXTURES = Path(__file__).parent / "fixtures"


def load(name):
    return parse_descriptor((FIXTURES / name).read_text())


def test_parse_pair_minimal():
    desc = parse_descriptor('{"base":{"kind":"pair","n":2},"dims":[2,2]}')
    assert desc.kind == "pair"
    assert desc.bundle.objdim == {0: 2, 1: 2}
    assert len(desc.bundle.base.arrows) == 4


def test_parse_grid_fixture_square_section():
    desc = load("grid11_line.json")
    assert desc.kind == "grid"
    sec = desc.section("s1")
    assert isinstance(sec, SquareSection)
    assert sec.square == (0, 0)
    # the 16 scalars land in layout order: first four primes fill row 0
    assert sec.assemble()[0].tolist() == [2, 3, 5, 7]


def test_parse_grid_roundtrips_through_example1_iso():
    from fellbundle.dfell import build_example1

    desc = load("grid11_line.json")
    sec = desc.section("s1")
    ex = build_example1()
    assert np.array_equal(ex.to_section(ex.to_matrix(sec)).assemble(), sec.assemble())


def test_syntax_error_carries_position():
    with pytest.raises(ParseError) as err:
        parse_descriptor('{"base": {"kind": "pair", "n": 2')
    assert "line" in str(err.value) and "column" in str(err.value)


def test_unknown_arrow_and_shape_mismatch():
    doc = {"base": {"kind": "pair", "n": 2}, "dims": [1, 1],
           "sections": {"s": {"a:0>5": [1.0, 0.0]}}}
    with pytest.raises(ParseError) as err:
        parse_descriptor(json.dumps(doc))
    assert "unknown arrow" in str(err.value) and "sections.s" in str(err.value)

    doc["sections"] = {"s": {"a:0>1": [[[1.0, 0.0], [0.0, 0.0]]]}}
    with pytest.raises(ParseError) as err:
        parse_descriptor(json.dumps(doc))
    assert "shape" in str(err.value)


def test_unknown_key_and_bad_vertex():
    doc = {"base": {"kind": "grid", "rows": 1, "cols": 1, "folding": True}, "dims": 1,
           "sections": {"s": {"zz:0,0": [1.0, 0.0]}}}
    with pytest.raises(ParseError):
        parse_descriptor(json.dumps(doc))
    doc["sections"] = {"s": {"u:0": [1.0, 0.0]}}
    with pytest.raises(ParseError):
        parse_descriptor(json.dumps(doc))


def test_keys_must_fit_one_square():
    doc = {"base": {"kind": "grid", "rows": 1, "cols": 2, "folding": True}, "dims": 1,
           "sections": {"s": {"sq:0,0": [1.0, 0.0], "sq:0,1": [2.0, 0.0]}}}
    with pytest.raises(ParseError) as err:
        parse_descriptor(json.dumps(doc))
    assert "single square" in str(err.value)


def test_dims_validation():
    with pytest.raises(ParseError):
        parse_descriptor('{"base":{"kind":"pair","n":2},"dims":[2]}')
    with pytest.raises(ParseError):
        parse_descriptor('{"base":{"kind":"pair","n":2},"dims":0}')
    desc = parse_descriptor('{"base":{"kind":"grid","rows":1,"cols":1},"dims":2}')
    assert all(v == 2 for v in desc.bundle.vdim.values())


def test_matrix_parsing():
    assert parse_matrix([1.0, -2.0], "x").tolist() == [[1.0 - 2.0j]]
    mat = parse_matrix([[[1, 0], [0, 1]], [[2, 0], [0, -1]]], "x")
    assert mat.shape == (2, 2)
    assert mat[0, 1] == 1.0j and mat[1, 1] == -1.0j
    with pytest.raises(ParseError):
        parse_matrix([[1.0, 0.0], [0.0, 1.0]], "x")  # rows of numbers, not pairs
    with pytest.raises(ParseError):
        parse_matrix([[[1, 0]], [[1, 0], [2, 0]]], "x")  # ragged
    with pytest.raises(ParseError):
        parse_matrix("nope", "x")


def test_roundtrip_identity():
    for name in ("grid11_line.json", "grid12_line.json", "pair2_m2.json"):
        desc = load(name)
        doc = serialize_descriptor(desc)
        desc2 = parse_descriptor(json.dumps(doc))
        assert desc2.kind == desc.kind
        assert sorted(desc2.sections) == sorted(desc.sections)
        for sec_name, sec in desc.sections.items():
            sec2 = desc2.section(sec_name)
            if isinstance(sec, SquareSection):
                assert sec2.square == sec.square
                assert np.array_equal(sec2.assemble(), sec.assemble())
            else:
                assert np.array_equal(sec2.linking(), sec.linking())
        assert serialize_descriptor(desc2) == doc


def test_matrix_to_json_roundtrip():
    m = np.array([[1 + 2j, 0], [0, -1j]])
    assert np.array_equal(parse_matrix(matrix_to_json(m), "x"), m)


def test_top_level_must_be_object():
    with pytest.raises(ParseError):
        parse_descriptor("[1, 2, 3]")
    with pytest.raises(ParseError):
        parse_descriptor('{"dims": 1}')
    with pytest.raises(ParseError):
        parse_descriptor('{"base": {"kind": "torus"}}')
