"""Command-line interface: solve | gen | bench | verify.

Data goes to files or stdout; diagnostics to stderr.  Exit codes: 0 ok,
1 verification mismatch / property failure, 2 input or usage error.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time

import numpy as np

from . import files, oracle
from ._backend import backend_name, get_kernel
from .diagram import build_diagram, dual_adjacency_arrays, extract_dual, \
    expanded_box, normalized_arrays
from .errors import DegenerateInstanceError, InputFormatError
from .geometry import normalization_frame
from .locator import build_locator
from .oracle import InstanceSpec, brute_graph, generate, naive_bfs, oracle_bfs, \
    validate_diagram
from .sssp import UNREACHED, compute_layers, verify_layer_path

BENCH_HEADER = ["n", "trial", "t_build_ns", "t_solve_ns", "t_naive_ns",
                "q_ops", "dt_edges"]


def _err(msg: str) -> None:
    print(f"diskhop: {msg}", file=sys.stderr)


def cmd_solve(args) -> int:
    try:
        sites = files.read_instance(args.input)
    except (OSError, InputFormatError) as exc:
        _err(f"cannot read instance: {exc}")
        return 2
    if not (0 <= args.source < len(sites)):
        _err(f"source {args.source} out of range (n={len(sites)})")
        return 2
    try:
        result = compute_layers(sites, args.source, backend=args.backend)
    except DegenerateInstanceError as exc:
        _err(f"degenerate instance: {exc}")
        return 2
    if args.out:
        files.write_result(args.out, result)
    else:
        sys.stdout.write(files.format_result(result))
    if args.oracle:
        graph = brute_graph(sites)
        ref = oracle_bfs(graph, args.source)
        diff = np.nonzero(ref != result.dist)[0]
        if len(diff):
            v = int(diff[0])
            _err(f"oracle mismatch at site {v}: got "
                 f"{int(result.dist[v])}, oracle says {int(ref[v])}")
            return 1
        _err(f"oracle agreement on {len(sites)} sites")
    return 0


def cmd_gen(args) -> int:
    try:
        spec = InstanceSpec(count=args.n, seed=args.seed,
                            radius_dist=args.radius_dist,
                            radius_scale=args.radius_scale,
                            nesting=args.nesting,
                            dominated_source=args.dominated_source)
        sites = generate(spec)
    except (ValueError, RuntimeError) as exc:
        _err(str(exc))
        return 2
    if args.out:
        files.write_instance(args.out, sites)
    else:
        sys.stdout.write(files.format_instance(sites))
    return 0


def _bench_one(sites, source, backend):
    """(t_build_ns, t_solve_ns, q_ops, dt_edges) for one instance."""
    kernel = get_kernel(backend)
    frame = normalization_frame(sites)
    xs, ys, rs = normalized_arrays(sites, frame)
    t0 = time.perf_counter_ns()
    sweep = kernel.sweep(xs, ys, rs, 0x5EED)
    dual_adjacency_arrays(sweep.ea, sweep.eb, len(sites))
    t_build = time.perf_counter_ns() - t0
    t0 = time.perf_counter_ns()
    result = compute_layers(sites, source, backend=backend)
    t_solve = time.perf_counter_ns() - t0
    return t_build, t_solve, result.stats.q_insertions, result.stats.dt_edges


def cmd_bench(args) -> int:
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s]
        if not sizes or any(s < 1 for s in sizes):
            raise ValueError("sizes must be positive")
    except ValueError as exc:
        _err(str(exc))
        return 2
    if args.trials < 1:
        _err("trials must be >= 1")
        return 2
    rows = []
    for n in sizes:
        for trial in range(args.trials):
            spec = InstanceSpec(count=n, seed=args.seed * 1_000_003 + trial,
                                radius_dist=args.radius_dist)
            sites = generate(spec)
            t_build, t_solve, q_ops, dt_edges = _bench_one(sites, 0, args.backend)
            t_naive = ""
            if n <= args.naive_cutoff:
                xs = np.array([s.x for s in sites])
                ys = np.array([s.y for s in sites])
                rs = np.array([s.r for s in sites])
                t0 = time.perf_counter_ns()
                naive_bfs(xs, ys, rs, 0)
                t_naive = time.perf_counter_ns() - t0
            rows.append([n, trial, t_build, t_solve, t_naive, q_ops, dt_edges])
            _err(f"bench n={n} trial={trial} build={t_build/1e6:.2f}ms "
                 f"solve={t_solve/1e6:.2f}ms naive="
                 f"{'-' if t_naive == '' else f'{t_naive/1e6:.2f}ms'}")
    out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        w = csv.writer(out)
        w.writerow(BENCH_HEADER)
        w.writerows(rows)
    finally:
        if args.out:
            out.close()
    return 0


def _verify_properties(sites, source, inject_corruption=False, backend=None,
                       samples=10_000, report=print):
    """Run every property on one instance; list of (name, ok) pairs."""
    results = []
    result = compute_layers(sites, source, backend=backend)
    if inject_corruption:
        reached = np.nonzero(result.dist >= 1)[0]
        if len(reached):
            result.dist[int(reached[0])] += 1

    graph = brute_graph(sites)
    ref = oracle_bfs(graph, source)
    results.append(("oracle-equivalence", bool((ref == result.dist).all())))

    n = len(sites)
    xs = np.array([s.x for s in sites])
    ys = np.array([s.y for s in sites])
    rs = np.array([s.r for s in sites])
    scale = normalization_frame(sites).scale

    # intersection predicate: the three equivalent forms, independently
    ok1 = True
    if n <= 600:
        d = np.hypot(xs[:, None] - xs[None, :], ys[:, None] - ys[None, :])
        f1 = d - rs[:, None] - rs[None, :] <= 0
        f2 = (d - rs[None, :]) <= rs[:, None]
        f3 = (d - rs[:, None]) <= rs[None, :]
        np.fill_diagonal(f1, False)
        np.fill_diagonal(f2, False)
        np.fill_diagonal(f3, False)
        ok1 = bool((f1 == f2).all() and (f2 == f3).all())
    results.append(("edge-predicate-forms", ok1))

    # layer membership against the previous-layer scan
    ok2 = True
    band = 1e-9 * scale
    reached_layers = result.layers
    assigned = {v: i for i, layer in enumerate(reached_layers) for v in layer}
    for i in range(1, len(reached_layers)):
        prev = reached_layers[i - 1]
        if not prev:
            ok2 = False
            break
        px, py, pr = xs[prev], ys[prev], rs[prev]
        for v in range(n):
            li = assigned.get(v)
            if li is not None and li < i:
                continue
            dv = float((np.hypot(xs[v] - px, ys[v] - py) - pr).min())
            member = li == i
            passes = dv <= rs[v] + band
            if member != passes:
                ok2 = False
                break
        if not ok2:
            break
    results.append(("layer-membership-scan", ok2))

    # layer-path property on every reached non-dominated site; a layer whose
    # predecessor holds no non-dominated member (a dominated source) has no
    # dual path to certify, so it is skipped
    diagram = build_diagram(sites, backend=backend)
    dual = extract_dual(diagram)
    dominated = diagram.dominated
    ok3 = True
    for i in range(1, len(result.layers)):
        if all(u in dominated for u in result.layers[i - 1]):
            continue
        for v in result.layers[i]:
            if v in dominated:
                continue
            if not verify_layer_path(result, dual, i, v):
                ok3 = False
                break
        if not ok3:
            break
    results.append(("layer-path", ok3))

    rep = validate_diagram(diagram, sites, samples=samples)
    results.append(("diagram-sampling", rep.mismatches == 0))
    results.append(("diagram-euler-and-bounds", rep.euler_ok and rep.bounds_ok))

    # predecessor chains walk back to the source in dist steps
    ok4 = True
    adjset = [set(a.tolist()) for a in graph.adjacency]
    for v in range(n):
        dv = int(result.dist[v])
        if dv <= 0:
            ok4 &= (v == source) == (dv == 0) or dv == UNREACHED
            continue
        steps = 0
        u = v
        while u != source and steps <= dv:
            p = int(result.pred[u])
            if p < 0 or p not in adjset[u]:
                ok4 = False
                break
            u = p
            steps += 1
        if u != source or steps != dv:
            ok4 = False
        if not ok4:
            break
    results.append(("predecessor-chains", ok4))

    for name, ok in results:
        report(f"{'PASS' if ok else 'FAIL'} {name}")
    return results


def cmd_verify(args) -> int:
    try:
        sites = files.read_instance(args.input)
    except (OSError, InputFormatError) as exc:
        _err(f"cannot read instance: {exc}")
        return 2
    if not (0 <= args.source < len(sites)):
        _err(f"source {args.source} out of range")
        return 2
    results = _verify_properties(sites, args.source,
                                 inject_corruption=args.inject_corruption,
                                 backend=args.backend)
    return 0 if all(ok for _, ok in results) else 1


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="diskhop",
        description="Hop-count shortest paths in disk graphs "
                    f"(kernel backend: {backend_name()})")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("solve", help="compute hop distances from a source")
    p.add_argument("input")
    p.add_argument("--source", type=int, required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--oracle", action="store_true",
                   help="cross-check against the brute-force pipeline")
    p.add_argument("--backend", default=None, choices=["pure", "compiled"])
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("gen", help="generate a margin-safe instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--radius-dist", default="uniform",
                   choices=["uniform", "power", "bimodal"])
    p.add_argument("--radius-scale", type=float, default=1.0)
    p.add_argument("--nesting", type=float, default=0.0)
    p.add_argument("--dominated-source", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("bench", help="timing runs with CSV output")
    p.add_argument("--sizes", required=True, help="comma-separated instance sizes")
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--radius-dist", default="uniform",
                   choices=["uniform", "power", "bimodal"])
    p.add_argument("--out", default=None)
    p.add_argument("--naive-cutoff", type=int, default=1 << 17,
                   help="skip the quadratic baseline above this size")
    p.add_argument("--backend", default=None, choices=["pure", "compiled"])
    p.set_defaults(fn=cmd_bench)

    p = sub.add_parser("verify", help="run the full property suite on one instance")
    p.add_argument("input")
    p.add_argument("--source", type=int, default=0)
    p.add_argument("--backend", default=None, choices=["pure", "compiled"])
    p.add_argument("--inject-corruption", action="store_true",
                   help=argparse.SUPPRESS)
    p.set_defaults(fn=cmd_verify)

    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
