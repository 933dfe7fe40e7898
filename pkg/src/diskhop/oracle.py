"""Independent ground truth: brute-force graph, BFS, generators, audits.

Everything here avoids the sweep/locator machinery on purpose.  The brute
adjacency uses exact squared comparisons (float filter, rational
escalation), so it stays the arbiter whenever the tolerance-based pipeline
is in doubt.  Generators are deterministic SplitMix64 streams and enforce
a minimum predicate margin so both numeric regimes agree.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .geometry import Site, check_sites, normalization_frame

DEFAULT_MARGIN = 1e-6
_MASK = 0xFFFFFFFFFFFFFFFF


class SplitMix64:
    """Deterministic 64-bit generator (splitmix64 update)."""

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        return lo + (hi - lo) * (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def randint(self, n: int) -> int:
        return self.next_u64() % n


@dataclass(frozen=True)
class InstanceSpec:
    """Deterministic instance recipe; the seed fixes the output bytes."""

    count: int
    seed: int = 0
    radius_dist: str = "uniform"     # uniform | power | bimodal
    radius_scale: float = 1.0        # multiplies the base radius c/sqrt(n)
    nesting: float = 0.0             # fraction of deliberately dominated disks
    dominated_source: bool = False   # force site 0 inside another disk
    margin: float = DEFAULT_MARGIN

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("count must be >= 1")
        if self.radius_dist not in ("uniform", "power", "bimodal"):
            raise ValueError(f"unknown radius_dist {self.radius_dist!r}")
        if not (0.0 <= self.nesting < 1.0):
            raise ValueError("nesting must be in [0, 1)")
        if self.margin <= 0.0:
            raise ValueError("margin must be positive")


@dataclass
class ExplicitGraph:
    """Adjacency built by testing every pair with the exact predicate."""

    n: int
    adjacency: list[np.ndarray]
    edge_count: int

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])


def _exact_cmp(dx: float, dy: float, rhs: float) -> int:
    lhs = Fraction(dx) ** 2 + Fraction(dy) ** 2
    rr = Fraction(rhs) ** 2
    return (lhs > rr) - (lhs < rr)


def intersect_matrix(xs: np.ndarray, ys: np.ndarray, rs: np.ndarray) -> np.ndarray:
    """Exact n x n disk-intersection table (diagonal False)."""
    dx = xs[:, None] - xs[None, :]
    dy = ys[:, None] - ys[None, :]
    lhs = dx * dx + dy * dy
    rsum = rs[:, None] + rs[None, :]
    rhs = rsum * rsum
    adj = lhs <= rhs
    # escalate the comparisons the float filter cannot certify
    risky = np.abs(lhs - rhs) <= 1e-12 * (lhs + rhs)
    np.fill_diagonal(risky, False)
    for i, j in zip(*np.nonzero(risky)):
        adj[i, j] = _exact_cmp(float(xs[i] - xs[j]), float(ys[i] - ys[j]),
                               float(rs[i] + rs[j])) <= 0
    np.fill_diagonal(adj, False)
    return adj


def brute_graph(sites: list[Site]) -> ExplicitGraph:
    """O(n^2) disk graph under the exact intersection predicate."""
    check_sites(sites)
    xs = np.array([s.x for s in sites])
    ys = np.array([s.y for s in sites])
    rs = np.array([s.r for s in sites])
    adj = intersect_matrix(xs, ys, rs)
    lists = [np.nonzero(adj[i])[0] for i in range(len(sites))]
    m = int(adj.sum()) // 2
    return ExplicitGraph(n=len(sites), adjacency=lists, edge_count=m)


def oracle_bfs(graph: ExplicitGraph, source: int) -> np.ndarray:
    """Hop distances by textbook BFS; -1 marks unreached sites."""
    if not (0 <= source < graph.n):
        raise ValueError(f"unknown source {source}")
    dist = np.full(graph.n, -1, dtype=np.int64)
    dist[source] = 0
    dq = deque([source])
    while dq:
        u = dq.popleft()
        for v in graph.adjacency[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                dq.append(int(v))
    return dist


def naive_bfs(xs: np.ndarray, ys: np.ndarray, rs: np.ndarray,
              source: int) -> np.ndarray:
    """Quadratic baseline: frontier-vs-unvisited predicate sweeps.

    This is the straightforward solution (build the graph, run BFS)
    streamed in blocks so it never materializes the n^2 adjacency.
    """
    n = len(xs)
    dist = np.full(n, -1, dtype=np.int64)
    dist[source] = 0
    frontier = np.array([source], dtype=np.int64)
    d = 0
    while len(frontier):
        d += 1
        unvisited = np.nonzero(dist < 0)[0]
        if len(unvisited) == 0:
            break
        ux, uy, ur = xs[unvisited], ys[unvisited], rs[unvisited]
        hit = np.zeros(len(unvisited), dtype=bool)
        # cache-resident blocks keep the per-pair cost flat across sizes
        block = max(1, int(524_288 // max(len(unvisited), 1)))
        for k in range(0, len(frontier), block):
            fb = frontier[k:k + block]
            dx = ux[None, :] - xs[fb, None]
            dy = uy[None, :] - ys[fb, None]
            rr = ur[None, :] + rs[fb, None]
            hit |= (dx * dx + dy * dy <= rr * rr).any(axis=0)
        nxt = unvisited[hit]
        if len(nxt) == 0:
            break
        dist[nxt] = d
        frontier = nxt
    return dist


# ---------------------------------------------------------------------------
# margins
# ---------------------------------------------------------------------------

def _close_pairs(xs, ys, reach):
    """Index pairs (i < j) with center distance at most `reach`."""
    n = len(xs)
    if n <= 1500:
        dx = xs[:, None] - xs[None, :]
        dy = ys[:, None] - ys[None, :]
        close = dx * dx + dy * dy <= reach * reach
        iu = np.triu_indices(n, 1)
        mask = close[iu]
        return iu[0][mask], iu[1][mask]
    cell = max(reach, 1e-12)
    cx = np.floor(xs / cell).astype(np.int64)
    cy = np.floor(ys / cell).astype(np.int64)
    key = cx * 0x1F1F1F1F + cy
    order = np.argsort(key, kind="stable")
    skey = key[order]
    outs_i = []
    outs_j = []
    for ox in (-1, 0, 1):
        for oy in (-1, 0, 1):
            nkey = (cx + ox) * 0x1F1F1F1F + (cy + oy)
            lo = np.searchsorted(skey, nkey, side="left")
            hi = np.searchsorted(skey, nkey, side="right")
            counts = hi - lo
            total = int(counts.sum())
            if total == 0:
                continue
            rep = np.repeat(np.arange(len(xs)), counts)
            # flattened [lo_k, hi_k) ranges without a Python loop
            cum = np.cumsum(counts)
            offs = (np.arange(total) - np.repeat(cum - counts, counts)
                    + np.repeat(lo, counts))
            cand = order[offs]
            m = rep < cand
            outs_i.append(rep[m])
            outs_j.append(cand[m])
    if not outs_i:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    i = np.concatenate(outs_i)
    j = np.concatenate(outs_j)
    dx = xs[i] - xs[j]
    dy = ys[i] - ys[j]
    m = dx * dx + dy * dy <= reach * reach
    return i[m], j[m]


def margin_report(sites: list[Site]) -> float:
    """Minimum normalized predicate margin over all interacting pairs.

    The quantities are exactly the ones whose signs the algorithm reads:
    ``||uv| - (r_u + r_v)|`` (intersection) and ``||uv| - |r_u - r_v||``
    (domination), divided by the instance scale.
    """
    xs = np.array([s.x for s in sites])
    ys = np.array([s.y for s in sites])
    rs = np.array([s.r for s in sites])
    return _margin_arrays(xs, ys, rs)


def _margin_arrays(xs, ys, rs, pairs=None) -> float:
    n = len(xs)
    if n < 2:
        return math.inf
    frame_scale = max((xs + rs).max() - (xs - rs).min(),
                      (ys + rs).max() - (ys - rs).min(), 1e-300)
    if pairs is None:
        reach = 2.0 * rs.max() + 0.01 * frame_scale
        i, j = _close_pairs(xs, ys, reach)
    else:
        i, j = pairs
    if len(i) == 0:
        return math.inf
    d = np.hypot(xs[i] - xs[j], ys[i] - ys[j])
    m1 = np.abs(d - (rs[i] + rs[j]))
    m2 = np.abs(d - np.abs(rs[i] - rs[j]))
    return float(min(m1.min(), m2.min()) / frame_scale)


# ---------------------------------------------------------------------------
# generation
# ---------------------------------------------------------------------------

def _draw_radius(rng: SplitMix64, dist: str, base: float) -> float:
    if dist == "uniform":
        return base * rng.uniform(0.5, 1.5)
    if dist == "power":
        u = max(rng.uniform(), 1e-12)
        return min(base * u ** (-1.0 / 2.5), base * 8.0)
    # bimodal: many small disks plus a heavy tail of large hosts
    if rng.uniform() < 0.75:
        return base * rng.uniform(0.3, 0.8)
    return base * rng.uniform(2.5, 4.0)


def generate(spec: InstanceSpec, max_rounds: int = 64) -> list[Site]:
    """Deterministic margin-safe instance for the given recipe.

    Offending sites (pairs below the margin) are redrawn until the whole
    instance clears the threshold; a bounded number of repair rounds keeps
    failure loud instead of silent.
    """
    n = spec.count
    rng = SplitMix64(spec.seed * 0x9E3779B97F4A7C15 + 0xC0FFEE)
    # unit scale keeps the graph comfortably above the percolation
    # threshold (mean degree ~15) with a Theta(sqrt(n)) hop diameter
    base = spec.radius_scale * 1.1 / math.sqrt(n)
    xs = np.empty(n)
    ys = np.empty(n)
    rs = np.empty(n)
    for i in range(n):
        xs[i] = rng.uniform()
        ys[i] = rng.uniform()
        rs[i] = _draw_radius(rng, spec.radius_dist, base)

    nested: set[int] = set()
    n_nested = int(spec.nesting * n)
    if n_nested and n >= 2:
        nested.update(range(n - n_nested, n))
    if spec.dominated_source and n >= 2:
        nested.add(0)
    host: dict[int, int] = {}

    def nest(i):
        while True:
            h = rng.randint(n)
            if h != i and h not in nested:
                break
        host[i] = h
        rs[i] = rs[h] * rng.uniform(0.15, 0.45)
        gap = rs[h] - rs[i]
        ang = rng.uniform(0.0, 2.0 * math.pi)
        rad = gap * rng.uniform(0.0, 0.7)
        xs[i] = xs[h] + rad * math.cos(ang)
        ys[i] = ys[h] + rad * math.sin(ang)

    for i in sorted(nested):
        nest(i)

    scale = max((xs + rs).max() - (xs - rs).min(),
                (ys + rs).max() - (ys - rs).min(), 1e-300)
    for _ in range(max_rounds):
        reach = 2.0 * rs.max() + (spec.margin * 4.0) * scale
        i, j = _close_pairs(xs, ys, reach)
        bad_any = False
        if len(i):
            d = np.hypot(xs[i] - xs[j], ys[i] - ys[j])
            bad = (np.abs(d - (rs[i] + rs[j])) < spec.margin * scale) | \
                  (np.abs(d - np.abs(rs[i] - rs[j])) < spec.margin * scale)
            bad_any = bool(bad.any())
        if not bad_any:
            break
        redraw = set(int(k) for k in np.maximum(i[bad], j[bad]))
        while True:
            for k in sorted(redraw):
                if k in nested:
                    nest(k)
                else:
                    xs[k] = rng.uniform()
                    ys[k] = rng.uniform()
                    rs[k] = _draw_radius(rng, spec.radius_dist, base)
            # re-seat nested disks whose host just moved
            stale = {i2 for i2 in nested if host[i2] in redraw and i2 not in redraw}
            if not stale:
                break
            redraw = stale
    else:
        raise RuntimeError(
            f"could not reach margin {spec.margin} after {max_rounds} rounds "
            f"(n={n}, seed={spec.seed})")

    return [Site(i, float(xs[i]), float(ys[i]), float(rs[i])) for i in range(n)]


# ---------------------------------------------------------------------------
# diagram validation
# ---------------------------------------------------------------------------

@dataclass
class ValidationReport:
    samples: int
    mismatches: int          # located site beats the margin band yet differs
    band_exempt: int         # samples inside the tolerance band (not counted)
    euler: int
    euler_ok: bool
    vertex_count: int
    edge_count: int
    face_count: int
    bounds_ok: bool          # V <= 2n, E <= 3n, F <= n+1

    @property
    def ok(self) -> bool:
        return self.mismatches == 0 and self.euler_ok and self.bounds_ok


def validate_diagram(diagram, sites: list[Site] | None = None,
                     samples: int = 10_000, seed: int = 1337) -> ValidationReport:
    """Sample-based region audit plus Euler/size-bound checks."""
    from .locator import build_locator

    if sites is None:
        sites = diagram.sites
    loc = build_locator(diagram)
    rng = SplitMix64(seed)
    bx0, by0, bx1, by1 = diagram.box
    qx = np.array([rng.uniform(bx0, bx1) for _ in range(samples)])
    qy = np.array([rng.uniform(by0, by1) for _ in range(samples)])
    got = loc.locate_normalized(qx, qy)

    xs, ys, rs = diagram._xs, diagram._ys, diagram._rs
    D = np.hypot(qx[:, None] - xs[None, :], qy[:, None] - ys[None, :]) - rs[None, :]
    best = D.min(axis=1)
    dgot = D[np.arange(samples), got]
    band = 10.0 * 1e-9
    if len(sites) > 1:
        second = np.partition(D, 1, axis=1)[:, 1]
        exempt = (second - best) <= band
    else:
        exempt = np.zeros(samples, dtype=bool)
    wrong = (dgot - best) > 1e-9
    mism = int((wrong & ~exempt).sum())

    n = len(sites)
    live = diagram.face_count
    euler = diagram.euler_characteristic()
    v, e = diagram.vertex_count, diagram.edge_count
    bounds_ok = (v + 1 <= 2 * n or v == 0) and e <= 3 * n and live <= n + 1
    return ValidationReport(
        samples=samples,
        mismatches=mism,
        band_exempt=int(exempt.sum()),
        euler=euler,
        euler_ok=(euler == 2),
        vertex_count=v,
        edge_count=e,
        face_count=live,
        bounds_ok=bounds_ok,
    )
