"""Acceptance suite: every shipped guarantee, one pass/fail line each.

Criteria 1-4 and 6 share one generated corpus (>= 1000 instances spanning
n in [2, 500] across all radius regimes, with dominated-source and
disconnected buckets).  Criterion 5 runs the pop-order comparison on 100
instances, criterion 7 the scaling benchmark, criterion 8 byte-level
determinism.  Run with ``pytest tests/test_acceptance.py -v -s``.
"""

import csv
import statistics
import sys
import time
from dataclasses import dataclass, field

import numpy as np
import pytest

import diskhop
from diskhop import build_diagram, build_locator, compute_layers, extract_dual, \
    verify_layer_path
from diskhop.cli import main as cli_main
from diskhop.oracle import (
    InstanceSpec,
    SplitMix64,
    brute_graph,
    generate,
    oracle_bfs,
    validate_diagram,
)

N_INSTANCES = 1000
SAMPLES_PER_INSTANCE = 10_000


def _corpus_specs():
    """Deterministic schedule of >= 1000 instance recipes."""
    rng = SplitMix64(0xACCE97)
    specs = []
    for i in range(N_INSTANCES):
        n = 2 + rng.randint(499)          # spans [2, 500]
        bucket = i % 10
        dominated_source = bucket == 0 and n >= 2
        scale = 1.0
        if bucket in (1, 6):
            scale = 0.3                   # sparse: disconnected components
        dist = ("uniform", "power", "bimodal")[i % 3]
        nesting = (0.0, 0.1, 0.25, 0.4)[i % 4]
        specs.append(InstanceSpec(count=n, seed=i, radius_dist=dist,
                                  radius_scale=scale, nesting=nesting,
                                  dominated_source=dominated_source))
    return specs


@dataclass
class CorpusReport:
    instances: int = 0
    oracle_mismatches: int = 0
    dominated_source_count: int = 0
    disconnected_count: int = 0
    validation_mismatches: int = 0
    euler_failures: int = 0
    bound_failures: int = 0
    obs1_instances: int = 0
    obs1_violations: int = 0
    obs2_violations: int = 0
    lemma1_violations: int = 0
    work_violations: int = 0
    elapsed: float = 0.0


def _check_obs1(sites) -> int:
    xs = np.array([s.x for s in sites])
    ys = np.array([s.y for s in sites])
    rs = np.array([s.r for s in sites])
    d = np.hypot(xs[:, None] - xs[None, :], ys[:, None] - ys[None, :])
    f1 = d - rs[:, None] - rs[None, :] <= 0
    f2 = (d - rs[None, :]) <= rs[:, None]
    f3 = (d - rs[:, None]) <= rs[None, :]
    for f in (f1, f2, f3):
        np.fill_diagonal(f, False)
    return int((f1 != f2).sum() + (f2 != f3).sum())


def _check_obs2(sites, result, band) -> int:
    xs = np.array([s.x for s in sites])
    ys = np.array([s.y for s in sites])
    rs = np.array([s.r for s in sites])
    assigned = {v: i for i, layer in enumerate(result.layers) for v in layer}
    bad = 0
    for i in range(1, len(result.layers)):
        prev = result.layers[i - 1]
        if not prev:
            continue
        px, py, pr = xs[prev], ys[prev], rs[prev]
        dprev = (np.hypot(xs[:, None] - px[None, :],
                          ys[:, None] - py[None, :]) - pr[None, :]).min(axis=1)
        passes = dprev <= rs + band
        for v in range(len(sites)):
            li = assigned.get(v)
            if li is not None and li < i:
                continue
            if (li == i) != bool(passes[v]):
                bad += 1
    return bad


def _check_lemma1(result, dual, dominated) -> int:
    bad = 0
    for i in range(1, len(result.layers)):
        if all(u in dominated for u in result.layers[i - 1]):
            continue  # no dual member to walk to (dominated source)
        for v in result.layers[i]:
            if v in dominated:
                continue
            if not verify_layer_path(result, dual, i, v):
                bad += 1
    return bad


@pytest.fixture(scope="module")
def corpus_report():
    t0 = time.time()
    rep = CorpusReport()
    for spec in _corpus_specs():
        sites = generate(spec)
        n = len(sites)
        source = 0
        result = compute_layers(sites, source)
        ref = oracle_bfs(brute_graph(sites), source)
        rep.oracle_mismatches += int((ref != result.dist).sum())
        if (ref < 0).any():
            rep.disconnected_count += 1

        diagram = build_diagram(sites)
        dominated = diagram.dominated
        if source in dominated:
            rep.dominated_source_count += 1

        vrep = validate_diagram(diagram, sites, samples=SAMPLES_PER_INSTANCE,
                                seed=spec.seed)
        rep.validation_mismatches += vrep.mismatches
        rep.euler_failures += 0 if vrep.euler_ok else 1
        rep.bound_failures += 0 if vrep.bounds_ok else 1

        if n <= 200:
            rep.obs1_instances += 1
            rep.obs1_violations += _check_obs1(sites)
        rep.obs2_violations += _check_obs2(sites, result,
                                           1e-9 * diagram.frame.scale)

        dual = extract_dual(diagram)
        rep.lemma1_violations += _check_lemma1(result, dual, dominated)

        st = result.stats
        if st.q_insertions > 2 * st.dt_edges + n or st.sum_prev_layers > n:
            rep.work_violations += 1
        rep.instances += 1
    rep.elapsed = time.time() - t0
    return rep


def _line(idx, ok, detail):
    print(f"\nACCEPTANCE {idx}: {'PASS' if ok else 'FAIL'} - {detail}")


def test_criterion_1_oracle_equivalence(corpus_report):
    r = corpus_report
    ok = (r.instances >= 1000 and r.oracle_mismatches == 0
          and r.dominated_source_count >= 100 and r.disconnected_count >= 100)
    _line(1, ok, f"{r.instances} instances, {r.oracle_mismatches} mismatches, "
                 f"{r.dominated_source_count} dominated-source, "
                 f"{r.disconnected_count} disconnected, {r.elapsed:.0f}s")
    assert r.instances >= 1000
    assert r.dominated_source_count >= 100
    assert r.disconnected_count >= 100
    assert r.oracle_mismatches == 0


def test_criterion_2_diagram_validity(corpus_report):
    r = corpus_report
    ok = (r.validation_mismatches == 0 and r.euler_failures == 0
          and r.bound_failures == 0)
    _line(2, ok, f"{r.instances * SAMPLES_PER_INSTANCE} samples, "
                 f"{r.validation_mismatches} mismatches outside the band, "
                 f"{r.euler_failures} Euler failures, "
                 f"{r.bound_failures} size-bound failures")
    assert r.validation_mismatches == 0
    assert r.euler_failures == 0
    assert r.bound_failures == 0


def test_criterion_3_observation_suites(corpus_report):
    r = corpus_report
    ok = r.obs1_violations == 0 and r.obs2_violations == 0
    _line(3, ok, f"predicate forms on {r.obs1_instances} instances "
                 f"({r.obs1_violations} violations), layer-membership scan "
                 f"({r.obs2_violations} violations)")
    assert r.obs1_violations == 0
    assert r.obs2_violations == 0


def test_criterion_4_layer_paths(corpus_report):
    r = corpus_report
    _line(4, r.lemma1_violations == 0,
          f"{r.lemma1_violations} layer-path violations")
    assert r.lemma1_violations == 0


def test_criterion_5_queue_order_invariance():
    bad = 0
    for i in range(100):
        spec = InstanceSpec(count=2 + (i * 7919) % 119, seed=31_000 + i,
                            radius_dist=("uniform", "power", "bimodal")[i % 3],
                            nesting=(0.0, 0.2)[i % 2])
        sites = generate(spec)
        base = compute_layers(sites, 0, order="fifo")
        for order in ("lifo", "random"):
            alt = compute_layers(sites, 0, order=order)
            if not (alt.dist == base.dist).all():
                bad += 1
    _line(5, bad == 0, f"100 instances x fifo/lifo/random, {bad} divergences")
    assert bad == 0


def test_criterion_6_work_accounting(corpus_report):
    r = corpus_report
    _line(6, r.work_violations == 0,
          f"{r.work_violations} work-accounting violations "
          f"(Q insertions <= 2*DT+n and sum of layer sizes <= n)")
    assert r.work_violations == 0


@pytest.fixture(scope="module")
def bench_rows(tmp_path_factory):
    out = tmp_path_factory.mktemp("bench") / "bench.csv"
    sizes = ",".join(str(1 << k) for k in range(10, 18))
    rc = cli_main(["bench", "--sizes", sizes, "--trials", "5", "--seed", "7",
                   "--out", str(out), "--naive-cutoff", str(1 << 17)])
    assert rc == 0
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    return rows


def test_criterion_7_scaling(bench_rows):
    sizes = sorted({int(r["n"]) for r in bench_rows})
    med_solve = {}
    med_naive = {}
    for n in sizes:
        solv = [int(r["t_solve_ns"]) for r in bench_rows if int(r["n"]) == n]
        med_solve[n] = statistics.median(solv)
        nai = [int(r["t_naive_ns"]) for r in bench_rows
               if int(r["n"]) == n and r["t_naive_ns"] != ""]
        if nai:
            med_naive[n] = statistics.median(nai)
    solve_ratios = [med_solve[b] / med_solve[a]
                    for a, b in zip(sizes, sizes[1:])]
    naive_top = [med_naive[b] / med_naive[a]
                 for a, b in list(zip(sizes, sizes[1:]))[-2:]]
    speedup = med_naive[sizes[-1]] / med_solve[sizes[-1]]
    ok = (all(r <= 2.6 for r in solve_ratios)
          and all(r >= 3.5 for r in naive_top)
          and speedup >= 10.0)
    _line(7, ok,
          f"solve ratios/doubling {['%.2f' % r for r in solve_ratios]}, "
          f"naive top ratios {['%.2f' % r for r in naive_top]}, "
          f"speedup at n={sizes[-1]}: {speedup:.1f}x")
    assert all(r <= 2.6 for r in solve_ratios), solve_ratios
    assert all(r >= 3.5 for r in naive_top), naive_top
    assert speedup >= 10.0, speedup


def test_criterion_8_determinism(tmp_path):
    paths = []
    for run in range(2):
        inst = tmp_path / f"inst{run}.txt"
        res = tmp_path / f"res{run}.txt"
        assert cli_main(["gen", "--n", "200", "--seed", "123",
                         "--nesting", "0.2", "--out", str(inst)]) == 0
        assert cli_main(["solve", str(inst), "--source", "0",
                         "--out", str(res)]) == 0
        paths.append((inst.read_bytes(), res.read_bytes()))
    ok = paths[0] == paths[1]
    _line(8, ok, "instance and result files byte-identical across runs")
    assert ok
