import numpy as np
import pytest

from diskhop import Site
from diskhop.oracle import InstanceSpec, generate


def make_sites(triples):
    return [Site(i, float(x), float(y), float(r))
            for i, (x, y, r) in enumerate(triples)]


@pytest.fixture
def tangent_chain():
    return make_sites([(0, 0, 1), (2, 0, 1), (4, 0, 1)])


@pytest.fixture
def random_instance():
    return generate(InstanceSpec(count=80, seed=11, nesting=0.15))


def brute_nearest(sites, p):
    """Linear-scan weighted nearest site: (id, distance)."""
    best, bd = -1, float("inf")
    for s in sites:
        d = np.hypot(p[0] - s.x, p[1] - s.y) - s.r
        if d < bd:
            best, bd = s.id, d
    return best, bd
