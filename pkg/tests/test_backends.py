"""The compiled kernel and the pure-Python kernel must agree."""

import numpy as np
import pytest

import diskhop
from diskhop import compute_layers
from diskhop._backend import get_kernel
from diskhop.oracle import InstanceSpec, generate

try:
    get_kernel("compiled")
    HAVE_COMPILED = True
except ImportError:
    HAVE_COMPILED = False

needs_compiled = pytest.mark.skipif(not HAVE_COMPILED,
                                    reason="compiled kernel not built")


def test_backend_name_valid():
    assert diskhop.backend_name() in ("pure", "compiled")


@needs_compiled
@pytest.mark.parametrize("seed", range(8))
def test_sweep_outputs_identical(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 150))
    xs = rng.uniform(0, 1, n)
    ys = rng.uniform(0, 1, n)
    rs = rng.uniform(0, 0.1, n)
    sp = get_kernel("pure").sweep(xs, ys, rs, 0x5EED)
    sc = get_kernel("compiled").sweep(xs, ys, rs, 0x5EED)
    assert (sp.dominated == sc.dominated).all()
    assert (sp.ea == sc.ea).all() and (sp.eb == sc.eb).all()
    assert (sp.ev0 == sc.ev0).all() and (sp.ev1 == sc.ev1).all()
    np.testing.assert_allclose(sp.vx, sc.vx, atol=1e-12)
    np.testing.assert_allclose(sp.vy, sc.vy, atol=1e-12)
    assert sp.events_popped == sc.events_popped


@needs_compiled
@pytest.mark.parametrize("seed", range(6))
def test_solver_results_identical(seed):
    sites = generate(InstanceSpec(count=90, seed=seed, nesting=0.2,
                                  dominated_source=(seed % 2 == 0)))
    a = compute_layers(sites, 0, backend="pure")
    b = compute_layers(sites, 0, backend="compiled")
    assert (a.dist == b.dist).all()
    assert (a.pred == b.pred).all()
    assert a.layers == b.layers
    assert a.stats.q_insertions == b.stats.q_insertions
    assert a.stats.dt_edges == b.stats.dt_edges
