import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from overlapbounds.geometry import area
from overlapbounds.shapefile import ShapeFileError, dump_shape, load_shape, parse_shape, save_shape
from overlapbounds.shapes import comb, random_star_polygon, square_with_hole


def test_parse_square_with_hole():
    text = '{"rings": [[[0,0],[1,0],[1,1],[0,1]], [[0.25,0.25],[0.25,0.75],[0.75,0.75],[0.75,0.25]]]}'
    s = parse_shape(text)
    assert area(s) == pytest.approx(0.75)
    assert [r.orientation for r in s.rings] == ["outer", "hole"]


@pytest.mark.parametrize(
    "text, line, col, fragment",
    [
        ('{"rings": [[[0,0],[1,0]', 1, 24, "delimiter"),
        ("[1, 2]", 1, 1, "rings"),
        ('{"rings": []}', 1, 1, "non-empty"),
        ('{"rings": [\n [[0,0],[1,0],\n  [1,"a"]]\n]}', 3, 3, "vertex 2"),
        ('{"rings": [\n [[0,0],[1,0],[1,1],[0,1]],\n [[0,0],[1,1],[1,0],[0,1]]\n]}', 3, 2, "ring 1"),
        ('{"rings": [\n  [[0,0],[0,1],[1,1],[1,0]]\n]}', 1, 1, "outer"),
        ('{"rings": [\n  [[0,0],[1,0],[1,0],[0,1]]\n]}', 2, 16, "coincide"),
        ('{"rings": [[[0,0],[1,0],[1,1],[0,1]],\n {"x": 1}]}', 2, 2, "ring 1 must be an array"),
        ('{"rings": [[]]}', 1, 12, "empty"),
        ('{"rings": [[[0,0],[1,0],[1,true]]]}', 1, 25, "finite"),
        ('{"rings": [[[0,0],[1,0],[1,1e999]]]}', 1, 25, "finite"),
    ],
    ids=[
        "bad-json",
        "not-object",
        "empty-rings",
        "string-coordinate",
        "zero-area",
        "no-outer",
        "repeated-vertex",
        "ring-not-array",
        "empty-ring",
        "bool-coordinate",
        "overflow",
    ],
)
def test_diagnostics_carry_line_and_column(text, line, col, fragment):
    with pytest.raises(ShapeFileError) as info:
        parse_shape(text, "shape.json")
    err = info.value
    assert (err.source, err.line, err.column) == ("shape.json", line, col)
    assert str(err).startswith(f"shape.json:{line}:{col}: ")
    assert fragment in str(err)


def test_other_keys_are_allowed_before_rings():
    s = parse_shape('{"name": "sq", "meta": {"a": [1, 2]}, "rings": [[[0,0],[1,0],[1,1],[0,1]]]}')
    assert area(s) == pytest.approx(1.0)


def test_dump_is_one_ring_per_line(tmp_path):
    s = square_with_hole()
    text = dump_shape(s)
    assert text.splitlines()[2].startswith("    [[") and text.splitlines()[3].startswith("    [[")
    assert len(text.splitlines()) == 6
    path = tmp_path / "s.json"
    save_shape(s, path)
    back = load_shape(path)
    for ra, rb in zip(s.rings, back.rings):
        assert np.array_equal(ra.vertices, rb.vertices)
    # a bad vertex in the dumped layout is reported on its ring's line
    bad = text.replace("0.25, 0.75", '0.25, "x"', 1)
    with pytest.raises(ShapeFileError) as info:
        parse_shape(bad)
    assert info.value.line == 4


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_round_trip_is_exact(seed):
    s = random_star_polygon(np.random.default_rng(seed))
    back = parse_shape(dump_shape(s))
    assert np.array_equal(back.vertices, s.vertices)


def test_comb_round_trip():
    c = comb(7)
    assert area(parse_shape(dump_shape(c))) == pytest.approx(area(c))
