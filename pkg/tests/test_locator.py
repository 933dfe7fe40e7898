import numpy as np
import pytest

from diskhop import Site, build_diagram, build_locator, nearest_site
from diskhop.oracle import InstanceSpec, generate

from conftest import brute_nearest, make_sites


def test_single_site_any_query():
    d = build_diagram(make_sites([(3, 2, 1.5)]))
    loc = build_locator(d)
    for p in [(3, 2), (100, -40), (0, 0)]:
        site, dist = nearest_site(loc, p)
        assert site == 0
        assert dist == pytest.approx(brute_nearest(d.sites, p)[1], abs=1e-9)


def test_two_site_queries_left_of_bisector():
    d = build_diagram(make_sites([(0, 0, 1), (4, 0, 1)]))
    loc = build_locator(d)
    assert nearest_site(loc, (0, -10))[0] == 0
    assert nearest_site(loc, (1.9, 5))[0] == 0
    assert nearest_site(loc, (2.1, 5))[0] == 1


def test_query_at_own_center_and_dominated_center():
    sites = make_sites([(0, 0, 2), (0.5, 0, 0.3), (5, 0, 1)])
    d = build_diagram(sites)
    loc = build_locator(d)
    assert d.dominated == {1: 0}
    assert nearest_site(loc, (0, 0))[0] == 0
    assert nearest_site(loc, (5, 0))[0] == 2
    # a dominated site's center belongs to its dominator
    site, dist = nearest_site(loc, (0.5, 0))
    assert site == 0
    assert dist <= -0.3 + 1e-9 * d.frame.scale


@pytest.mark.parametrize("seed,n", [(1, 200), (2, 200), (3, 37)])
def test_random_queries_match_linear_scan(seed, n):
    sites = generate(InstanceSpec(count=n, seed=seed, nesting=0.1))
    d = build_diagram(sites)
    loc = build_locator(d)
    rng = np.random.default_rng(seed)
    bx0, by0, bx1, by1 = d.box
    qx = rng.uniform(bx0, bx1, 10_000)
    qy = rng.uniform(by0, by1, 10_000)
    got = loc.locate_normalized(qx, qy)
    xs, ys, rs = d._xs, d._ys, d._rs
    D = np.hypot(qx[:, None] - xs[None, :], qy[:, None] - ys[None, :]) - rs[None, :]
    assert ((D[np.arange(len(qx)), got] - D.min(axis=1)) <= 1e-9).all()


def test_out_of_box_queries_fall_back_correctly():
    sites = generate(InstanceSpec(count=40, seed=4))
    d = build_diagram(sites)
    loc = build_locator(d)
    rng = np.random.default_rng(0)
    for _ in range(200):
        p = (rng.uniform(-30, 30), rng.uniform(-30, 30))
        site, dist = nearest_site(loc, p)
        bid, bd = brute_nearest(sites, p)
        assert dist <= bd + 1e-9 * max(1.0, abs(bd))
