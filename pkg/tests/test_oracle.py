import numpy as np
import pytest

from diskhop import Site, build_diagram, edge_predicate, weighted_distance
from diskhop.oracle import (
    InstanceSpec,
    SplitMix64,
    brute_graph,
    generate,
    margin_report,
    naive_bfs,
    oracle_bfs,
    validate_diagram,
)

from conftest import make_sites


def test_splitmix_reference_values():
    # splitmix64 of seed 0: published reference outputs
    rng = SplitMix64(0)
    assert rng.next_u64() == 0xE220A8397B1DCDAF
    assert rng.next_u64() == 0x6E789E6AA1B965F4


def test_brute_graph_examples(tangent_chain):
    g = brute_graph(tangent_chain)
    assert [list(a) for a in g.adjacency] == [[1], [0, 2], [1]]
    cluster = make_sites([(0, 0, 2), (1, 0, 2), (0, 1, 2), (1, 1, 2)])
    g2 = brute_graph(cluster)
    assert g2.edge_count == 6  # complete graph
    assert all(g2.degree(u) == 3 for u in range(4))


def test_brute_graph_structural_audit():
    sites = generate(InstanceSpec(count=200, seed=8))
    g = brute_graph(sites)
    degsum = sum(g.degree(u) for u in range(g.n))
    assert degsum % 2 == 0
    assert degsum == 2 * g.edge_count
    for u in range(g.n):
        for v in g.adjacency[u]:
            assert u in g.adjacency[v]
            assert v != u


def test_brute_graph_tangency_exact():
    # adversarial near-tie: exact tangency must count as an edge
    g = brute_graph(make_sites([(0, 0, 1), (2, 0, 1)]))
    assert g.edge_count == 1
    g2 = brute_graph(make_sites([(0, 0, 1), (2 + 1e-9, 0, 1)]))
    assert g2.edge_count == 0


def test_observation_forms_agree_on_brute_adjacency():
    sites = generate(InstanceSpec(count=120, seed=77, nesting=0.2))
    g = brute_graph(sites)
    for u in range(len(sites)):
        for v in range(u + 1, len(sites)):
            e = v in g.adjacency[u]
            f2 = weighted_distance((sites[u].x, sites[u].y), sites[v]) <= sites[u].r
            f3 = weighted_distance((sites[v].x, sites[v].y), sites[u]) <= sites[v].r
            assert e == f2 == f3


def test_oracle_bfs_path_and_complete():
    path = brute_graph(make_sites([(0, 0, 1), (2, 0, 1), (4, 0, 1)]))
    assert oracle_bfs(path, 0).tolist() == [0, 1, 2]
    comp = brute_graph(make_sites([(0, 0, 3), (1, 0, 3), (0, 1, 3)]))
    assert oracle_bfs(comp, 0).tolist() == [0, 1, 1]
    with pytest.raises(ValueError):
        oracle_bfs(path, 9)


def test_oracle_bfs_layering_property():
    sites = generate(InstanceSpec(count=150, seed=5))
    g = brute_graph(sites)
    dist = oracle_bfs(g, 0)
    for u in range(g.n):
        for v in g.adjacency[u]:
            if dist[u] >= 0 and dist[v] >= 0:
                assert abs(dist[u] - dist[v]) <= 1


def test_naive_bfs_matches_oracle():
    sites = generate(InstanceSpec(count=300, seed=6, nesting=0.1))
    xs = np.array([s.x for s in sites])
    ys = np.array([s.y for s in sites])
    rs = np.array([s.r for s in sites])
    ref = oracle_bfs(brute_graph(sites), 3)
    assert (naive_bfs(xs, ys, rs, 3) == ref).all()


def test_generate_deterministic():
    a = generate(InstanceSpec(count=50, seed=42, nesting=0.2))
    b = generate(InstanceSpec(count=50, seed=42, nesting=0.2))
    assert a == b
    c = generate(InstanceSpec(count=50, seed=43, nesting=0.2))
    assert a != c


def test_generate_single_site():
    sites = generate(InstanceSpec(count=1, seed=0))
    assert len(sites) == 1


def test_generate_margins_enforced():
    for seed in range(12):
        sites = generate(InstanceSpec(count=120, seed=seed, nesting=0.25))
        assert margin_report(sites) >= 1e-6


def test_generate_nesting_produces_dominated():
    sites = generate(InstanceSpec(count=300, seed=2, nesting=0.2))
    dom = build_diagram(sites).dominated
    assert len(dom) >= 50


def test_generate_dominated_source():
    for seed in range(8):
        sites = generate(InstanceSpec(count=60, seed=seed, dominated_source=True))
        dom = build_diagram(sites).dominated
        assert 0 in dom


def test_invalid_specs():
    with pytest.raises(ValueError):
        InstanceSpec(count=0)
    with pytest.raises(ValueError):
        InstanceSpec(count=5, radius_dist="weird")
    with pytest.raises(ValueError):
        InstanceSpec(count=5, nesting=1.5)


def test_validate_diagram_reports():
    sites = make_sites([(0, 0, 1), (4, 0, 1)])
    rep = validate_diagram(build_diagram(sites), sites, samples=1000)
    assert rep.ok and rep.mismatches == 0

    pair = make_sites([(0, 0, 5), (1, 0, 1)])
    rep2 = validate_diagram(build_diagram(pair), pair, samples=1000)
    assert rep2.ok  # every sample lands in the dominator's face

    big = generate(InstanceSpec(count=500, seed=17, nesting=0.15))
    rep3 = validate_diagram(build_diagram(big), big, samples=10_000)
    assert rep3.ok and rep3.mismatches == 0
