import math

import numpy as np
import pytest

from diskhop import Site, build_diagram, extract_dual, weighted_distance
from diskhop.geometry import ARC_LINE
from diskhop.oracle import InstanceSpec, generate

from conftest import make_sites


def test_two_equal_sites_vertical_line():
    sites = make_sites([(0, 0, 1), (4, 0, 1)])
    d = build_diagram(sites)
    assert d.vertex_count == 0
    assert d.edge_count == 1
    assert len(d.dominated) == 0
    e = d.edges[0]
    assert e.kind == ARC_LINE
    assert e.p0.x == pytest.approx(2.0, abs=1e-9)
    assert e.p1.x == pytest.approx(2.0, abs=1e-9)


def test_dominated_pair_single_face():
    sites = make_sites([(0, 0, 5), (1, 0, 1)])
    d = build_diagram(sites)
    assert d.dominated == {1: 0}
    assert d.edge_count == 0
    assert d.face_count == 1
    assert d.faces[1].empty


def test_triangle_dual():
    sites = make_sites([(0, 0, 1), (4, 0, 1), (2, 3, 1)])
    d = build_diagram(sites)
    g = extract_dual(d)
    assert g.edge_count == 3
    assert g.neighbors(0) == (1, 2)
    assert d.vertex_count == 1
    v = d.vertices[0]
    assert v.point.x == pytest.approx(2.0, abs=1e-9)
    assert v.point.y == pytest.approx(5.0 / 6.0, abs=1e-9)


def test_two_non_dominated_sites_single_dual_edge():
    sites = make_sites([(0, 0, 2), (5, 1, 1)])
    g = extract_dual(build_diagram(sites))
    assert g.edge_count == 1
    assert g.has_edge(0, 1)


def test_random_instance_face_lookup_matches_scan():
    sites = generate(InstanceSpec(count=50, seed=21))
    d = build_diagram(sites)
    from diskhop import build_locator
    loc = build_locator(d)
    rng = np.random.default_rng(5)
    bx0, by0, bx1, by1 = d.box
    qx = rng.uniform(bx0, bx1, 10_000)
    qy = rng.uniform(by0, by1, 10_000)
    got = loc.locate_normalized(qx, qy)
    xs, ys, rs = d._xs, d._ys, d._rs
    D = np.hypot(qx[:, None] - xs[None, :], qy[:, None] - ys[None, :]) - rs[None, :]
    dgot = D[np.arange(len(qx)), got]
    assert ((dgot - D.min(axis=1)) <= 1e-9).all()


@pytest.mark.parametrize("seed", range(6))
def test_topology_audit_random(seed):
    sites = generate(InstanceSpec(count=100, seed=seed, nesting=0.15))
    n = len(sites)
    d = build_diagram(sites)
    g = extract_dual(d)
    live = d.face_count
    # dual basics
    assert g.edge_count <= 3 * n
    for u in range(n):
        assert u not in g.neighbors(u)
        for v in g.neighbors(u):
            assert u in g.neighbors(v)
    for u in d.dominated:
        assert g.neighbors(u) == ()
    # every dual edge is backed by at least one diagram edge
    pair_set = {(min(e.sites), max(e.sites)) for e in d.edges}
    for u, v in g.edges():
        assert (u, v) in pair_set
    # Euler with the infinity-vertex closure, size bounds
    assert d.euler_characteristic() == 2
    assert d.vertex_count + 1 <= 2 * n
    assert d.edge_count <= 3 * n
    assert live <= n
    # every finite vertex has exactly three incident edge ends and a tiny
    # residual across its three sites
    for v in d.vertices:
        assert len(v.edges) == 3
        ds = [weighted_distance(v.point, sites[s]) for s in v.sites]
        assert max(ds) - min(ds) <= 1e-9 * d.frame.scale


def test_determinism_same_structure():
    sites = generate(InstanceSpec(count=120, seed=9, nesting=0.2))
    a = build_diagram(sites)
    b = build_diagram(sites)
    assert a.vertex_count == b.vertex_count
    assert a.edge_count == b.edge_count
    assert a.dominated == b.dominated
    assert a.dump() == b.dump()


def test_face_of_nondominated_contains_own_center():
    sites = generate(InstanceSpec(count=60, seed=33, nesting=0.25))
    d = build_diagram(sites)
    from diskhop import build_locator, nearest_site
    loc = build_locator(d)
    dom = d.dominated
    for s in sites:
        site, dist = nearest_site(loc, (s.x, s.y))
        if s.id not in dom:
            assert site == s.id
        else:
            # the located site must tie or beat the dominated owner
            assert dist <= -s.r + 1e-9 * d.frame.scale


def test_dump_golden_fixed_instance():
    sites = make_sites([(0, 0, 1), (4, 0, 1), (2, 3, 0.5)])
    text = build_diagram(sites).dump()
    lines = text.splitlines()
    assert lines[0] == "site 0 0 0 1 dominated=-"
    # one equidistant point: on x=2, sqrt(4+y^2)-1 = (3-y)-0.5 -> y=8.25/7
    assert sum(1 for l in lines if l.startswith("vertex")) == 1
    assert "vertex 0 2 1.17857142857" in text
    assert sum(1 for l in lines if l.startswith("edge")) == 3
    assert sum(1 for l in lines if l.startswith("face")) == 3
    # all coordinates rendered with <= 12 significant digits
    for line in lines:
        for tok in line.split():
            if "." in tok and "=" not in tok:
                mantissa = tok.lstrip("-").replace(".", "").lstrip("0")
                assert len(mantissa) <= 12
