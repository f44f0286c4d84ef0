import pytest
from hypothesis import given, settings, strategies as st

from boxdim import GeoSet, ParseError
from boxdim.fracgeo import dumps, loads, read_fracgeo, write_fracgeo
from boxdim.generators import bradley_stage, reference_prefractal, PrefractalSpec
from conftest import random_union


def test_bradley_round_trip(tmp_path):
    g = bradley_stage(5)[0]
    path = tmp_path / "s5.geo"
    write_fracgeo(g, path)
    back = read_fracgeo(path)
    assert back.primitives == g.primitives
    assert (back.name, back.stage, back.mode) == ("bradley", 5, "exact")


def test_approx_round_trip_is_bit_exact():
    g = reference_prefractal(PrefractalSpec("koch", 2))
    back = loads(dumps(g))
    assert back.mode == "approx"
    assert back.primitives == g.primitives
    assert dumps(back) == dumps(g)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_random_round_trip(seed):
    g = random_union(seed)
    assert loads(dumps(g)).primitives == g.primitives


def test_format_shape():
    text = dumps(GeoSet("x", ()))
    assert text == "fracgeo v1\nset x stage -\n"
    g = loads("fracgeo v1\nset pts stage 2\npoint 1/2^1 0\n\nseg 0 0 1 1\npoly 3 0 0 1 0 0 1\n")
    assert [p.kind for p in g.primitives] == ["point", "segment", "polygon"]
    assert g.stage == 2


def test_decimal_literal_promotes_to_approx():
    g = loads("fracgeo v1\nset a stage -\nseg 0 0 0.5 1\npoint 1/2^2 1\n")
    assert g.mode == "approx"


@pytest.mark.parametrize("text, line", [
    ("fracgeo v2\nset a stage -\n", 1),
    ("fracgeo v1\n", 2),
    ("fracgeo v1\nset a stage x\n", 2),
    ("fracgeo v1\nset a stage -\ncircle 0 0 1\n", 3),
    ("fracgeo v1\nset a stage -\nseg 0 0 1\n", 3),
    ("fracgeo v1\nset a stage -\npoint 0 0\npoly 3 0 0 0 1 1 0\n", 4),
    ("fracgeo v1\nset a stage -\npoly 4 0 0 1 0 1 1\n", 3),
    ("fracgeo v1\nset a stage -\npoint 1/3 0\n", 3),
])
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError, match=f"line {line}"):
        loads(text)
