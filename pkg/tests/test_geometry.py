import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diskhop import (
    Site,
    apollonius_vertex,
    bisector,
    compare_weighted,
    domination_predicate,
    edge_predicate,
    weighted_distance,
)
from diskhop.geometry import ARC_EMPTY, ARC_HYPERBOLA, ARC_LINE, EPS

from conftest import make_sites


def test_weighted_distance_examples():
    assert weighted_distance((3, 4), Site(0, 0, 0, 2)) == pytest.approx(3.0)
    assert weighted_distance((0, 0), Site(0, 0, 0, 1.5)) == pytest.approx(-1.5)
    assert weighted_distance((1, 0), Site(0, 0, 0, 0)) == pytest.approx(1.0)


def test_edge_predicate_examples():
    u, v = Site(0, 0, 0, 1), Site(1, 2, 0, 1)
    assert edge_predicate(u, v)  # tangency counts
    assert not edge_predicate(Site(0, 0, 0, 1), Site(1, 2.1, 0, 1))
    assert edge_predicate(Site(0, 0, 0, 5), Site(1, 1, 0, 1))  # containment


def test_edge_predicate_rejects_same_id():
    with pytest.raises(ValueError):
        edge_predicate(Site(0, 0, 0, 1), Site(0, 1, 0, 1))


def test_domination_examples():
    assert domination_predicate(Site(0, 1, 0, 1), Site(1, 0, 0, 5))
    assert not domination_predicate(Site(0, 0, 0, 1), Site(1, 3, 0, 1))
    # coincident equal sites: smaller id wins
    a = Site(3, 0, 0, 1)
    b = Site(1, 0, 0, 1)
    assert domination_predicate(a, b)
    assert not domination_predicate(b, a)


def test_compare_weighted_examples():
    assert compare_weighted((1, 0), Site(0, 0, 0, 0), Site(1, 2, 0, 0)) == 0
    assert compare_weighted((0, 0), Site(0, 0, 0, 1), Site(1, 10, 0, 1)) == -1
    assert compare_weighted((2.5, 0), Site(0, 0, 0, 1), Site(1, 4, 0, 0)) == 0


def test_apollonius_vertex_zero_radii_circumcenter():
    pts = apollonius_vertex(Site(0, 0, 0, 0), Site(1, 4, 0, 0), Site(2, 2, 3, 0))
    assert len(pts) == 1
    p, d = pts[0]
    assert p.x == pytest.approx(2.0, abs=1e-12)
    assert p.y == pytest.approx(5.0 / 6.0, abs=1e-12)
    assert d == pytest.approx(math.hypot(2.0, 5.0 / 6.0), abs=1e-12)


def test_apollonius_vertex_equal_radii_same_point():
    pts = apollonius_vertex(Site(0, 0, 0, 1), Site(1, 4, 0, 1), Site(2, 2, 3, 1))
    assert len(pts) == 1
    p, d = pts[0]
    assert p.x == pytest.approx(2.0, abs=1e-12)
    assert p.y == pytest.approx(5.0 / 6.0, abs=1e-12)


def test_apollonius_vertex_mixed_radii_against_grid_oracle():
    # frozen from a 2-D grid-refinement search minimizing the max pairwise
    # residual for centers (0,0),(6,0),(3,5) with radii (2,1,0)
    pts = apollonius_vertex(Site(0, 0, 0, 2), Site(1, 6, 0, 1), Site(2, 3, 5, 0))
    assert len(pts) == 1
    p, d = pts[0]
    assert p.x == pytest.approx(3.665444284287981, abs=1e-9)
    assert p.y == pytest.approx(2.5977997117183658, abs=1e-9)
    assert d == pytest.approx(2.4926657057278874, abs=1e-9)
    for s in (Site(0, 0, 0, 2), Site(1, 6, 0, 1), Site(2, 3, 5, 0)):
        assert abs(weighted_distance(p, s) - d) < 1e-9


finite = st.floats(-50, 50, allow_nan=False, allow_infinity=False)
radius = st.floats(0, 10, allow_nan=False, allow_infinity=False)


@given(finite, finite, radius, finite, finite, radius)
@settings(max_examples=200, deadline=None)
def test_edge_predicate_symmetric(x1, y1, r1, x2, y2, r2):
    u, v = Site(0, x1, y1, r1), Site(1, x2, y2, r2)
    assert edge_predicate(u, v) == edge_predicate(v, u)


@given(finite, finite, radius, finite, finite, radius)
@settings(max_examples=200, deadline=None)
def test_domination_implies_edge(x1, y1, r1, x2, y2, r2):
    u, v = Site(0, x1, y1, r1), Site(1, x2, y2, r2)
    if domination_predicate(u, v) or domination_predicate(v, u):
        assert edge_predicate(u, v)


@given(finite, finite, finite, finite, radius, finite, finite, radius)
@settings(max_examples=200, deadline=None)
def test_compare_weighted_agrees_outside_band(px, py, x1, y1, r1, x2, y2, r2):
    p = (px, py)
    u, v = Site(0, x1, y1, r1), Site(1, x2, y2, r2)
    du = weighted_distance(p, u)
    dv = weighted_distance(p, v)
    scale = max(1.0, abs(du), abs(dv))
    if abs(du - dv) > 10 * EPS * scale:
        want = -1 if du < dv else 1
        assert compare_weighted(p, u, v, scale) == want


@given(finite, finite, radius, finite, finite, radius)
@settings(max_examples=150, deadline=None)
def test_bisector_classification_matches_predicates(x1, y1, r1, x2, y2, r2):
    u, v = Site(0, x1, y1, r1), Site(1, x2, y2, r2)
    if (x1, y1) == (x2, y2) and r1 == r2:
        return
    arc = bisector(u, v)
    dominated = domination_predicate(u, v) or domination_predicate(v, u)
    if dominated:
        assert arc.kind == ARC_EMPTY
    elif r1 == r2:
        assert arc.kind == ARC_LINE
    else:
        assert arc.kind == ARC_HYPERBOLA


@given(finite, finite, radius, finite, finite, radius,
       st.floats(-3, 3, allow_nan=False))
@settings(max_examples=150, deadline=None)
def test_bisector_points_are_equidistant(x1, y1, r1, x2, y2, r2, t):
    u, v = Site(0, x1, y1, r1), Site(1, x2, y2, r2)
    arc = bisector(u, v)
    if arc.kind == ARC_EMPTY:
        return
    p = arc.point_at(t)
    du = weighted_distance(p, u)
    dv = weighted_distance(p, v)
    scale = max(1.0, abs(du), abs(dv))
    assert abs(du - dv) <= 1e-9 * scale


def test_bisector_vertical_line_intersections():
    u, v = Site(0, 0, 0, 2), Site(1, 6, 0, 1)
    arc = bisector(u, v)
    for x in (3.5, 4.0, 5.0):
        ts = arc.vertical_line_params(x)
        assert ts, f"no intersection at x={x}"
        for t in ts:
            p = arc.point_at(t)
            assert p.x == pytest.approx(x, abs=1e-9)


def test_bisector_x_monotone_split():
    # a strongly unequal pair bends the branch around the small site
    u, v = Site(0, 0, 0, 3.0), Site(1, 4, 0.5, 0.2)
    arc = bisector(u, v)
    text = arc.x_extremum_param()
    assert text is not None
    h = 1e-4
    x0 = arc.point_at(text - h).x
    x1 = arc.point_at(text).x
    x2 = arc.point_at(text + h).x
    assert (x1 - x0) * (x2 - x1) < 0  # direction flips at the extremum


def test_site_validation():
    with pytest.raises(ValueError):
        Site(0, float("nan"), 0, 1)
    with pytest.raises(ValueError):
        Site(0, 0, 0, -1)
