"""Layered hop-distance computation over the disk graph.

The solver builds the weighted Voronoi diagram and its dual once, then
grows layers: a site joins layer i exactly when its weighted distance to
the previous layer is at most its own radius, answered by a point-location
query on the previous layer's sub-diagram.  Sites with empty regions never
appear in the dual, so they are resolved afterwards against the retained
per-layer locators; a source with an empty region seeds layer 1 by a
region flood plus a direct scan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._backend import get_kernel
from .diagram import (
    ApolloniusDiagram,
    DualGraph,
    csr_gather,
    csr_neighbors,
    dual_csr,
    expanded_box,
    normalized_arrays,
)
from .geometry import Site, check_sites, normalization_frame

UNREACHED = -1

_ADMIT_EPS = 1e-9      # admission band in normalized units (ties admitted)
_SWEEP_SEED = 0x5EED
_TRAP_SEED = 0x7A21


@dataclass
class SolveStats:
    n: int = 0
    dt_edges: int = 0
    q_insertions: int = 0
    sum_prev_layers: int = 0
    locate_queries: int = 0
    dominated_count: int = 0
    sweep_events: int = 0
    layer_count: int = 0


@dataclass
class LayerResult:
    """Hop distances, predecessor witnesses, and the layer partition."""

    source: int
    dist: np.ndarray                  # int64; UNREACHED for unreachable sites
    pred: np.ndarray                  # int64; -1 for the source / unreached
    layers: list[list[int]]
    stats: SolveStats = field(default_factory=SolveStats)

    def hop(self, v: int) -> int:
        return int(self.dist[v])

    def reached(self) -> int:
        return int((self.dist >= 0).sum())


class _LayerLocator:
    """Point location over the sub-diagram of one layer's members."""

    def __init__(self, kernel, members, xs, ys, rs, box):
        self.members = np.asarray(members, dtype=np.int64)
        self.kernel = kernel
        self.sweep = kernel.sweep(xs[self.members], ys[self.members],
                                  rs[self.members], _SWEEP_SEED)
        arcs = kernel.build_arcs(xs[self.members], ys[self.members],
                                 rs[self.members], self.sweep, box)
        self.tm = kernel.build_trapmap(arcs, xs[self.members], ys[self.members],
                                       rs[self.members], self.sweep.dominated,
                                       box, _TRAP_SEED)
        self._xs, self._ys, self._rs = xs, ys, rs

    def query(self, qx: np.ndarray, qy: np.ndarray):
        """(global site id, weighted distance) per query point."""
        local = self.kernel.locate_many(self.tm, qx, qy)
        glob = self.members[local]
        d = np.hypot(qx - self._xs[glob], qy - self._ys[glob]) - self._rs[glob]
        return glob, d


class _Solver:
    def __init__(self, sites: list[Site], source: int, kernel):
        check_sites(sites)
        n = len(sites)
        if not (0 <= source < n):
            raise ValueError(f"unknown source id {source}")
        self.sites = sites
        self.source = source
        self.kernel = kernel
        self.n = n
        self.frame = normalization_frame(sites)
        self.xs, self.ys, self.rs = normalized_arrays(sites, self.frame)
        self.box = expanded_box(self.xs, self.ys, self.rs)

        self.sweep = kernel.sweep(self.xs, self.ys, self.rs, _SWEEP_SEED)
        self.dominated = self.sweep.dominated
        self.indptr, self.indices, self.dt_edges = dual_csr(
            self.sweep.ea, self.sweep.eb, n)

        self.dist = np.full(n, UNREACHED, dtype=np.int64)
        self.pred = np.full(n, -1, dtype=np.int64)
        self.layers: list[list[int]] = []
        self.locators: list[_LayerLocator] = []
        self.stats = SolveStats(
            n=n, dt_edges=self.dt_edges,
            dominated_count=int((self.dominated >= 0).sum()),
            sweep_events=self.sweep.events_popped)

    # -- helpers ------------------------------------------------------------

    def _witness(self, v: int) -> int:
        """Non-dominated representative through the domination chain."""
        w = int(self.dominated[v])
        while self.dominated[w] >= 0:
            w = int(self.dominated[w])
        return w

    def _layer_locator(self, idx: int) -> _LayerLocator:
        while len(self.locators) <= idx:
            members = self.layers[len(self.locators)]
            self.locators.append(_LayerLocator(
                self.kernel, members, self.xs, self.ys, self.rs, self.box))
        return self.locators[idx]

    def _seed_dominated_source(self) -> list[int]:
        """Layer 1 for an empty-region source: flood plus direct scan."""
        s = self.source
        eps = _ADMIT_EPS
        first = []
        seen = np.zeros(self.n, dtype=bool)
        w0 = self._witness(s)
        stack = [w0]
        seen[w0] = True
        while stack:
            w = stack.pop()
            dw = math.hypot(self.xs[s] - self.xs[w], self.ys[s] - self.ys[w]) - self.rs[w]
            if dw <= self.rs[s] + eps:
                first.append(w)
                for v in csr_neighbors(self.indptr, self.indices, w):
                    if not seen[v]:
                        seen[v] = True
                        stack.append(int(v))
        for u in np.nonzero(self.dominated >= 0)[0]:
            u = int(u)
            if u == s:
                continue
            duv = math.hypot(self.xs[s] - self.xs[u], self.ys[s] - self.ys[u])
            if duv <= self.rs[s] + self.rs[u] + eps:
                first.append(u)
        return sorted(set(first))

    # -- main loop ----------------------------------------------------------

    def run(self, order: str = "fifo") -> LayerResult:
        s = self.source
        self.dist[s] = 0
        self.layers.append([s])

        start = 1
        if self.dominated[s] >= 0:
            first = self._seed_dominated_source()
            if first:
                for v in first:
                    self.dist[v] = 1
                    self.pred[v] = s
                self.layers.append(first)
                start = 2
            else:
                start = None  # nothing reachable beyond the source
        if start is not None:
            i = start
            while True:
                prev = self.layers[i - 1]
                loc = self._layer_locator(i - 1)
                layer = (self._expand_fifo(prev, loc)
                         if order == "fifo"
                         else self._expand_sequential(prev, loc, order, i))
                if not layer:
                    break
                arr = np.asarray(layer, dtype=np.int64)
                self.dist[arr] = i
                self.layers.append(sorted(layer))
                self.stats.sum_prev_layers += len(prev)
                i += 1
            self.stats.sum_prev_layers += len(self.layers[-1])

        self._patch_dominated()
        self.stats.layer_count = len(self.layers)
        return LayerResult(source=s, dist=self.dist, pred=self.pred,
                           layers=self.layers, stats=self.stats)

    def _frontier_seeds(self, prev):
        prev_arr = np.asarray(prev, dtype=np.int64)
        return prev_arr[self.dominated[prev_arr] < 0]

    def _new_candidates(self, frontier: np.ndarray, in_q: np.ndarray) -> np.ndarray:
        nbrs = csr_gather(self.indptr, self.indices, frontier)
        if len(nbrs) == 0:
            return nbrs
        nbrs = nbrs[(self.dist[nbrs] == UNREACHED) & ~in_q[nbrs]]
        if len(nbrs) == 0:
            return nbrs
        new = np.unique(nbrs)
        in_q[new] = True
        self.stats.q_insertions += len(new)
        return new

    def _expand_fifo(self, prev, loc) -> list[int]:
        """One iteration with batched queries (set semantics, FIFO order)."""
        in_q = np.zeros(self.n, dtype=bool)
        cand = self._new_candidates(self._frontier_seeds(prev), in_q)
        parts = []
        while len(cand):
            glob, d = loc.query(self.xs[cand], self.ys[cand])
            self.stats.locate_queries += len(cand)
            admit = d <= self.rs[cand] + _ADMIT_EPS
            adm = cand[admit]
            self.pred[adm] = glob[admit]
            parts.append(adm)
            in_q[adm] = True
            cand = self._new_candidates(adm, in_q)
        if not parts:
            return []
        return np.concatenate(parts).tolist()

    def _expand_sequential(self, prev, loc, order: str, i: int) -> list[int]:
        """Reference loop with explicit pop discipline (lifo / random)."""
        from .oracle import SplitMix64

        rng = SplitMix64(0xD15C0 + i)
        in_q = np.zeros(self.n, dtype=bool)
        q: list[int] = []
        for u in self._frontier_seeds(prev):
            for v in csr_neighbors(self.indptr, self.indices, int(u)):
                v = int(v)
                if self.dist[v] == UNREACHED and not in_q[v]:
                    in_q[v] = True
                    q.append(v)
                    self.stats.q_insertions += 1
        head = 0
        layer: list[int] = []
        while head < len(q):
            if order == "fifo":
                v = q[head]
                head += 1
            elif order == "lifo":
                v = q.pop()
                head = 0
            else:
                v = q.pop(rng.randint(len(q)))
                head = 0
            glob, d = loc.query(self.xs[v:v + 1], self.ys[v:v + 1])
            self.stats.locate_queries += 1
            if d[0] <= self.rs[v] + _ADMIT_EPS:
                layer.append(v)
                self.pred[v] = glob[0]
                for w in csr_neighbors(self.indptr, self.indices, v):
                    w = int(w)
                    if self.dist[w] == UNREACHED and not in_q[w]:
                        in_q[w] = True
                        q.append(w)
                        self.stats.q_insertions += 1
        return layer

    # -- dominated sites ------------------------------------------------------

    def _patch_dominated(self) -> None:
        todo = [int(u) for u in np.nonzero(self.dominated >= 0)[0]
                if self.dist[u] == UNREACHED and u != self.source]
        additions: dict[int, list[int]] = {}
        by_layer: dict[int, list[int]] = {}
        for u in todo:
            w = self._witness(u)
            k = int(self.dist[w])
            if k == UNREACHED:
                continue
            if k == 0:
                # the dominator is the source: containment implies adjacency
                self.dist[u] = 1
                self.pred[u] = w
                additions.setdefault(1, []).append(u)
            else:
                by_layer.setdefault(k, []).append(u)
        for k, members in sorted(by_layer.items()):
            cand = np.array(members, dtype=np.int64)
            loc = self._layer_locator(k - 1)
            glob, d = loc.query(self.xs[cand], self.ys[cand])
            self.stats.locate_queries += len(cand)
            near = d <= self.rs[cand] + _ADMIT_EPS
            for idx, u in enumerate(members):
                if near[idx]:
                    self.dist[u] = k
                    self.pred[u] = glob[idx]
                    additions.setdefault(k, []).append(u)
                else:
                    self.dist[u] = k + 1
                    self.pred[u] = self._witness(u)
                    additions.setdefault(k + 1, []).append(u)
        for k, extra in sorted(additions.items()):
            while len(self.layers) <= k:
                self.layers.append([])
            self.layers[k] = sorted(self.layers[k] + extra)


def compute_layers(sites: list[Site], source: int, order: str = "fifo",
                   backend: str | None = None) -> LayerResult:
    """Hop distances from the source to every site (Algorithm A end to end)."""
    if order not in ("fifo", "lifo", "random"):
        raise ValueError(f"unknown pop order {order!r}")
    solver = _Solver(sites, source, get_kernel(backend))
    return solver.run(order)


def handle_dominated_source(sites: list[Site], source: int,
                            backend: str | None = None) -> LayerResult:
    """Solve for a source whose region is empty (it is absent from the dual)."""
    solver = _Solver(sites, source, get_kernel(backend))
    if solver.dominated[source] < 0:
        raise ValueError(f"source {source} is not dominated")
    return solver.run("fifo")


def patch_dominated(partial: LayerResult, diagram: ApolloniusDiagram,
                    locators) -> LayerResult:
    """Fill in distances for empty-region sites from retained locators.

    `partial` must hold correct distances for all non-dominated sites;
    `locators[i]` answers nearest-site queries over layer i.  Each
    dominated site lands either in its dominator's layer or one past it,
    decided by the previous-layer distance test.
    """
    dom = diagram.dominated
    dist = partial.dist.copy()
    pred = partial.pred.copy()
    layers = [list(l) for l in partial.layers]
    frame = diagram.frame

    def witness(u):
        w = dom[u]
        while w in dom:
            w = dom[w]
        return w

    for u in sorted(dom):
        if u == partial.source or dist[u] != UNREACHED:
            continue
        w = witness(u)
        k = int(dist[w])
        if k == UNREACHED:
            continue
        su = diagram.sites[u]
        if k == 0:
            dist[u] = 1
            pred[u] = w
            tgt = 1
        else:
            site, d = locators[k - 1].nearest((su.x, su.y))
            if d <= su.r + _ADMIT_EPS * frame.scale:
                dist[u] = k
                pred[u] = site
                tgt = k
            else:
                dist[u] = k + 1
                pred[u] = w
                tgt = k + 1
        while len(layers) <= tgt:
            layers.append([])
        layers[tgt] = sorted(layers[tgt] + [u])
    return LayerResult(source=partial.source, dist=dist, pred=pred,
                       layers=layers, stats=partial.stats)


def verify_layer_path(result: LayerResult, dual: DualGraph, i: int,
                      v: int) -> bool:
    """Check the layer-path property for one site.

    True iff, inside the dual subgraph induced by layers i and i-1, the
    site reaches some layer-(i-1) member through intermediates that all
    belong to layer i.
    """
    if i < 1 or i >= len(result.layers):
        raise ValueError(f"layer {i} out of range")
    if v not in result.layers[i]:
        raise ValueError(f"site {v} not in layer {i}")
    prev = set(result.layers[i - 1])
    cur = set(result.layers[i])
    seen = {v}
    stack = [v]
    while stack:
        u = stack.pop()
        for w in dual.neighbors(u):
            if w in prev:
                return True
            if w in cur and w not in seen:
                seen.add(w)
                stack.append(w)
    return False
