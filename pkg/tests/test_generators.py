from fractions import Fraction as Q

import pytest

from boxdim import (ConvexPrimitive, Dyadic, Point, DomainError, ResourceError, ValidationError,
                    bradley_stage, construction_decomposition, inscribed_square,
                    reference_prefractal, removal_direction, PrefractalSpec)
from boxdim.generators import COMPASS, finest_scale, format_trace, spiral_depth_for, unit_square
from boxdim.geometry import convex_area, point_in_convex, total_area
from conftest import P


def _sq_len(a, b):
    return (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y)


def test_inscribed_square_examples():
    n1 = inscribed_square(unit_square())
    assert set(n1.vertices) == {P(Q(1, 2), 0), P(1, Q(1, 2)), P(Q(1, 2), 1), P(0, Q(1, 2))}
    n2 = inscribed_square(n1)
    assert set(n2.vertices) == {P(Q(1, 4), Q(1, 4)), P(Q(3, 4), Q(1, 4)),
                                P(Q(3, 4), Q(3, 4)), P(Q(1, 4), Q(3, 4))}


@pytest.mark.parametrize("corner, side", [((0, 0), 1), ((Q(3, 8), Q(1, 16)), Q(5, 32)),
                                          ((-2, 5), 4)])
def test_inscribed_square_halves_area(corner, side):
    x, y = corner
    sq = ConvexPrimitive([P(x, y), P(x + side, y), P(x + side, y + side), P(x, y + side)])
    assert convex_area(inscribed_square(sq)) * 2 == convex_area(sq)


def test_inscribed_square_rejects_non_squares():
    with pytest.raises(ValidationError):
        inscribed_square(ConvexPrimitive([(0, 0), (2, 0), (2, 1), (0, 1)]))


@pytest.mark.parametrize("k, tag", [(1, "NE"), (2, "E"), (3, "SE"), (5, "SW"), (9, "NE")])
def test_removal_direction(k, tag):
    assert removal_direction(k) == tag


def test_removal_direction_period_and_alternation():
    tags = [removal_direction(k) for k in range(1, 33)]
    assert tags[:8] == list(COMPASS)
    assert tags[8:] == tags[:-8]
    assert all((len(t) == 2) == (k % 2 == 1) for k, t in enumerate(tags, start=1))
    with pytest.raises(DomainError):
        removal_direction(0)


def test_stage_examples():
    g0 = bradley_stage(0)[0]
    assert g0.primitives == (unit_square(),)
    g1, (t1,) = bradley_stage(1)
    assert len(g1) == 4 and total_area(g1.primitives) == Dyadic(7, 3)
    assert t1.removed_direction == "NE"
    corners = {tr.vertices[0] for tr in t1.kept_triangles}
    assert corners == {P(0, 1), P(0, 0), P(1, 0)}  # NW, SW, SE
    g3 = bradley_stage(3)[0]
    assert len(g3) == 10 and total_area(g3.primitives) == Dyadic(25, 5)


@pytest.mark.parametrize("k", range(0, 17))
def test_stage_counts_and_areas(k):
    g, traces = bradley_stage(k)
    assert len(g) == 3 * k + 1
    if k >= 1:
        assert total_area(g.primitives) == Dyadic(3, 2) + Dyadic.pow2(-(k + 2))
    for tr in traces:
        leg2 = Dyadic.pow2(-(tr.k + 1))
        for t in (tr.removed_triangle, *tr.kept_triangles):
            right, a, b = t.vertices
            assert _sq_len(right, a) == leg2 and _sq_len(right, b) == leg2


def test_trace_partitions_and_nests():
    _, traces = bradley_stage(8)
    for tr in traces:
        pieces = total_area([tr.square_after, tr.removed_triangle, *tr.kept_triangles])
        assert pieces == convex_area(tr.square_before)
        assert tr.square_after == inscribed_square(tr.square_before)
        for prim in (tr.square_after, *tr.kept_triangles):
            assert all(point_in_convex(v, tr.square_before) for v in prim.vertices)
    for prev, nxt in zip(traces, traces[1:]):
        assert nxt.square_before == prev.square_after


def test_trace_boundaries():
    _, traces = bradley_stage(4)
    assert traces[0].removed_boundary is None
    for tr in traces:
        hyp = tr.kept_boundary[0]
        assert set(hyp.vertices) == set(tr.removed_triangle.vertices[1:])
        assert all(point_in_convex(v, tr.square_after) for v in hyp.vertices)
    for prev, tr in zip(traces, traces[1:]):
        # the removed leg meets the previous removed triangle's hypotenuse
        rb = tr.removed_boundary
        a, b = prev.kept_boundary[0].vertices
        assert Point((a.x + b.x).half(), (a.y + b.y).half()) in rb.vertices
    text = format_trace(traces)
    assert text.count("stage ") == 4 and "direction SE" in text


def test_stage_cap():
    with pytest.raises(ResourceError):
        bradley_stage(5, cap=4)
    with pytest.raises(ResourceError):
        bradley_stage(25)


@pytest.mark.parametrize("k", [1, 4])
def test_decomposition_examples(k):
    tris = construction_decomposition(k)
    assert len(tris) == {1: 7, 4: 49}[k]
    if k == 1:
        assert total_area(tris) == Dyadic(7, 3)


@pytest.mark.parametrize("k", range(1, 17))
def test_decomposition_count_area_legs(k):
    tris = construction_decomposition(k)
    assert len(tris) == 3 * 2 ** k + 1
    stage = bradley_stage(k)[0]
    assert total_area(tris) == total_area(stage.primitives) == Dyadic(3, 2) + Dyadic.pow2(-(k + 2))
    leg2 = Dyadic.pow2(-(k + 1))
    for t in tris[:: max(1, len(tris) // 200)]:
        right, a, b = t.vertices
        assert _sq_len(right, a) == leg2 == _sq_len(right, b)


@pytest.mark.parametrize("k", [1, 3, 6])
def test_decomposition_lies_in_stage(k):
    stage = bradley_stage(k)[0]
    tris = construction_decomposition(k)
    assert len(set(tris)) == len(tris)
    for t in tris:
        assert any(all(point_in_convex(v, p) for v in t.vertices) for p in stage.primitives)


def test_decomposition_domain():
    with pytest.raises(DomainError):
        construction_decomposition(0)


@pytest.mark.parametrize("kind, depth, n", [("sierpinski", 0, 1), ("sierpinski", 3, 27),
                                            ("cantor-dust", 2, 16), ("koch", 3, 64),
                                            ("filled-square", 0, 1), ("segment", 0, 1)])
def test_reference_counts(kind, depth, n):
    assert len(reference_prefractal(PrefractalSpec(kind, depth))) == n


def test_cantor_dust_squares_have_side_one_ninth():
    g = reference_prefractal(PrefractalSpec("cantor-dust", 2))
    assert g.mode == "approx"
    for p in g.primitives:
        assert convex_area(p) == pytest.approx(1 / 81, abs=1e-15)


def test_reference_validation():
    with pytest.raises(ValidationError):
        PrefractalSpec("dragon")
    with pytest.raises(ResourceError):
        PrefractalSpec("sierpinski", 30)


def test_spiral_depth_rule():
    for delta in (Dyadic.pow2(-j) for j in range(1, 10)):
        k = spiral_depth_for(delta)
        assert 2 ** (-(k + 1) / 2) <= float(delta) / 2 < 2 ** (-k / 2)
    assert spiral_depth_for(Dyadic.pow2(-9)) == 19
    assert finest_scale(bradley_stage(8)[0]) == pytest.approx(2 * 2 ** -4.5)
    assert finest_scale(reference_prefractal(PrefractalSpec("filled-square"))) is None
