"""Diagram objects: regions, vertices, edges, dual adjacency, audits.

The kernel emits flat arrays in normalized coordinates; this module wraps
them in inspectable structures (reported in input coordinates), builds the
face cycles with twin/next half-edges on demand, and provides the text
dump used by golden tests and external visualization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import geometry
from ._backend import get_kernel
from ._kerneltypes import SweepResult
from .geometry import BisectorArc, Frame, Point, Site, check_sites

_SWEEP_SEED = 0x5EED
_TRAP_SEED = 0x7A21


def normalized_arrays(sites: list[Site], frame: Frame):
    xs = np.array([(s.x - frame.ox) / frame.scale for s in sites])
    ys = np.array([(s.y - frame.oy) / frame.scale for s in sites])
    rs = np.array([s.r / frame.scale for s in sites])
    return xs, ys, rs


def expanded_box(xs, ys, rs, factor: float = 1.0):
    """Disk bounding box grown by `factor` times its own size per side."""
    x0 = float((xs - rs).min())
    x1 = float((xs + rs).max())
    y0 = float((ys - rs).min())
    y1 = float((ys + rs).max())
    pad = factor * max(x1 - x0, y1 - y0, 1e-9)
    return (x0 - pad, y0 - pad, x1 + pad, y1 + pad)


@dataclass(frozen=True)
class DiagramVertex:
    id: int
    point: Point               # input coordinates
    distance: float            # common weighted distance, input units
    sites: tuple[int, int, int]
    edges: tuple[int, ...]     # incident edge ids


@dataclass(frozen=True)
class DiagramEdge:
    id: int
    sites: tuple[int, int]
    v0: int                    # vertex id or -1 (unbounded end)
    v1: int
    p0: Point | None           # clipped endpoints, input coordinates
    p1: Point | None
    kind: str                  # line / hyperbola


@dataclass(frozen=True)
class HalfEdge:
    edge: int
    face: int                  # site id whose region lies on this side
    twin: int                  # index of the opposite half-edge
    next: int                  # next half-edge around the face (ccw)


@dataclass(frozen=True)
class Face:
    site: int
    empty: bool
    edges: tuple[int, ...]     # ccw edge cycle (empty for dominated sites)
    half_edges: tuple[int, ...]


@dataclass(frozen=True)
class DualGraph:
    """Adjacency over sites whose regions share a boundary arc."""

    n: int
    adjacency: tuple[tuple[int, ...], ...]
    edge_count: int

    def neighbors(self, u: int) -> tuple[int, ...]:
        return self.adjacency[u]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def edges(self):
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if u < v:
                    yield (u, v)


class ApolloniusDiagram:
    """Planar subdivision of the plane by weighted nearness."""

    def __init__(self, sites: list[Site], sweep: SweepResult, frame: Frame,
                 box, xs, ys, rs, kernel):
        self.sites = sites
        self.frame = frame
        self.box = box           # normalized frame
        self._sweep = sweep
        self._xs, self._ys, self._rs = xs, ys, rs
        self._kernel = kernel

    # -- construction stats ------------------------------------------------

    @property
    def event_count(self) -> int:
        return self._sweep.events_popped

    @property
    def dominated(self) -> dict[int, int]:
        """Empty-region site id -> witness dominator site id."""
        dom = self._sweep.dominated
        return {i: int(dom[i]) for i in range(len(dom)) if dom[i] >= 0}

    @property
    def vertex_count(self) -> int:
        return len(self._sweep.vx)

    @property
    def edge_count(self) -> int:
        return len(self._sweep.ea)

    @property
    def face_count(self) -> int:
        return len(self.sites) - int((self._sweep.dominated >= 0).sum())

    def euler_characteristic(self) -> int:
        """V - E + F with a single vertex-at-infinity closure."""
        return (self.vertex_count + 1) - self.edge_count + self.face_count

    # -- rich view ----------------------------------------------------------

    @cached_property
    def vertices(self) -> list[DiagramVertex]:
        sw = self._sweep
        incident: dict[int, list[int]] = {}
        for e in range(len(sw.ea)):
            for v in (int(sw.ev0[e]), int(sw.ev1[e])):
                if v >= 0:
                    incident.setdefault(v, []).append(e)
        out = []
        for i in range(len(sw.vx)):
            x, y = self.frame.to_input(float(sw.vx[i]), float(sw.vy[i]))
            out.append(DiagramVertex(
                id=i, point=Point(x, y),
                distance=float(sw.vdist[i]) * self.frame.scale,
                sites=tuple(int(s) for s in sw.vsites[i]),
                edges=tuple(incident.get(i, ())),
            ))
        return out

    @cached_property
    def _edge_geoms(self) -> list[tuple[BisectorArc, float, float]]:
        """Per edge: normalized-frame bisector and its parameter range."""
        sw = self._sweep
        out = []
        for e in range(len(sw.ea)):
            a, b = int(sw.ea[e]), int(sw.eb[e])
            sa = Site(a, float(self._xs[a]), float(self._ys[a]), float(self._rs[a]))
            sb = Site(b, float(self._xs[b]), float(self._ys[b]), float(self._rs[b]))
            bis = geometry.bisector(sa, sb)
            lo, hi = self._edge_params(e, bis)
            out.append((bis, lo, hi))
        return out

    def _edge_params(self, e: int, bis: BisectorArc) -> tuple[float, float]:
        sw = self._sweep
        v0, v1 = int(sw.ev0[e]), int(sw.ev1[e])
        if v0 >= 0 and v1 >= 0:
            t0 = bis.param_of((float(sw.vx[v0]), float(sw.vy[v0])))
            t1 = bis.param_of((float(sw.vx[v1]), float(sw.vy[v1])))
            return min(t0, t1), max(t0, t1)
        if v0 < 0 and v1 < 0:
            return -math.inf, math.inf
        vid = v0 if v0 >= 0 else v1
        tv = bis.param_of((float(sw.vx[vid]), float(sw.vy[vid])))
        a, b = int(sw.ea[e]), int(sw.eb[e])
        tri = [int(s) for s in sw.vsites[vid]]
        w = next(s for s in tri if s != a and s != b)
        side = _unbounded_side(bis, tv, self._xs, self._ys, self._rs, a, w)
        return (tv, math.inf) if side > 0 else (-math.inf, tv)

    @cached_property
    def edges(self) -> list[DiagramEdge]:
        sw = self._sweep
        out = []
        for e in range(len(sw.ea)):
            bis, lo, hi = self._edge_geoms[e]
            clo, chi = _clip_params(bis, lo, hi, self.box)
            p0 = p1 = None
            if clo is not None:
                q0 = bis.point_at(clo)
                q1 = bis.point_at(chi)
                p0 = Point(*self.frame.to_input(q0.x, q0.y))
                p1 = Point(*self.frame.to_input(q1.x, q1.y))
            out.append(DiagramEdge(
                id=e, sites=(int(sw.ea[e]), int(sw.eb[e])),
                v0=int(sw.ev0[e]), v1=int(sw.ev1[e]),
                p0=p0, p1=p1, kind=bis.kind,
            ))
        return out

    @cached_property
    def _face_data(self) -> tuple[list[Face], list[HalfEdge]]:
        sw = self._sweep
        n = len(self.sites)
        by_site: dict[int, list[int]] = {i: [] for i in range(n)}
        for e in range(len(sw.ea)):
            by_site[int(sw.ea[e])].append(e)
            by_site[int(sw.eb[e])].append(e)

        half_edges: list[HalfEdge] = []
        he_of: dict[tuple[int, int], int] = {}   # (edge, face) -> half edge idx
        faces: list[Face] = []
        dom = self._sweep.dominated

        for u in range(n):
            if dom[u] >= 0:
                faces.append(Face(site=u, empty=True, edges=(), half_edges=()))
                continue
            items = []
            for e in by_site[u]:
                span = self._face_angles(e, u)
                if span is not None:
                    items.append((span[0], e))
            items.sort()
            cycle = tuple(e for _, e in items)
            hes = []
            for _, e in items:
                idx = len(half_edges)
                he_of[(e, u)] = idx
                half_edges.append(None)  # placeholder, rebuilt below
                hes.append(idx)
            for k, (_, e) in enumerate(items):
                nxt = hes[(k + 1) % len(hes)] if hes else -1
                half_edges[he_of[(e, u)]] = HalfEdge(edge=e, face=u, twin=-1,
                                                     next=nxt)
            faces.append(Face(site=u, empty=False, edges=cycle,
                              half_edges=tuple(hes)))

        resolved = []
        for he in half_edges:
            e = he.edge
            a, b = int(sw.ea[e]), int(sw.eb[e])
            other = b if he.face == a else a
            twin = he_of.get((e, other), -1)
            resolved.append(HalfEdge(he.edge, he.face, twin, he.next))
        return faces, resolved

    def _face_angles(self, e: int, u: int) -> tuple[float, float] | None:
        """Angular interval of edge e seen from site u, ccw from its start."""
        bis, lo, hi = self._edge_geoms[e]
        if lo is None:
            return None
        ux, uy = float(self._xs[u]), float(self._ys[u])

        def ang(t, positive_end):
            if math.isinf(t):
                d = bis.direction_at_infinity(positive_end)
                return math.atan2(d.y, d.x)
            p = bis.point_at(t)
            return math.atan2(p.y - uy, p.x - ux)

        a0 = ang(lo, False)
        a1 = ang(hi, True)
        if math.isinf(lo) and math.isinf(hi):
            tm = 0.0
        elif math.isinf(lo):
            tm = hi - 1.0
        elif math.isinf(hi):
            tm = lo + 1.0
        else:
            tm = 0.5 * (lo + hi)
        pm = bis.point_at(tm)
        am = math.atan2(pm.y - uy, pm.x - ux)
        fwd = (a1 - a0) % (2 * math.pi)
        mid = (am - a0) % (2 * math.pi)
        if mid <= fwd:
            return (a0, a1)
        return (a1, a0)

    @property
    def faces(self) -> list[Face]:
        return self._face_data[0]

    @property
    def half_edges(self) -> list[HalfEdge]:
        return self._face_data[1]

    # -- serialization -------------------------------------------------------

    def dump(self) -> str:
        """One record per line; coordinates with 12 significant digits."""
        g = lambda x: f"{x:.12g}"
        lines = []
        dom = self.dominated
        for s in self.sites:
            w = dom.get(s.id, None)
            lines.append(f"site {s.id} {g(s.x)} {g(s.y)} {g(s.r)} "
                         f"dominated={w if w is not None else '-'}")
        for v in self.vertices:
            a, b, c = v.sites
            lines.append(f"vertex {v.id} {g(v.point.x)} {g(v.point.y)} "
                         f"{g(v.distance)} sites={a},{b},{c}")
        for e in self.edges:
            p0 = f"{g(e.p0.x)},{g(e.p0.y)}" if e.p0 else "-"
            p1 = f"{g(e.p1.x)},{g(e.p1.y)}" if e.p1 else "-"
            v0 = e.v0 if e.v0 >= 0 else "inf"
            v1 = e.v1 if e.v1 >= 0 else "inf"
            lines.append(f"edge {e.id} sites={e.sites[0]},{e.sites[1]} "
                         f"v0={v0} v1={v1} p0={p0} p1={p1}")
        for f in self.faces:
            es = ",".join(str(e) for e in f.edges) if f.edges else "-"
            lines.append(f"face {f.site} empty={int(f.empty)} edges={es}")
        return "\n".join(lines) + "\n"


def _unbounded_side(bis: BisectorArc, tv: float, xs, ys, rs, a: int, w: int) -> int:
    """+1 if the edge continues toward growing parameter from the vertex."""
    p = bis.point_at(tv)
    if bis.kind == geometry.ARC_LINE:
        dpx, dpy = bis.e2x, bis.e2y
    else:
        ch, sh = math.cosh(tv), math.sinh(tv)
        dpx = bis.sign * bis.e1x * bis.a * sh + bis.e2x * bis.b * ch
        dpy = bis.sign * bis.e1y * bis.a * sh + bis.e2y * bis.b * ch
    la = math.hypot(p.x - xs[a], p.y - ys[a])
    lw = math.hypot(p.x - xs[w], p.y - ys[w])
    fp = 0.0
    if la > 1e-300 and lw > 1e-300:
        fp = (dpx * ((p.x - xs[a]) / la - (p.x - xs[w]) / lw)
              + dpy * ((p.y - ys[a]) / la - (p.y - ys[w]) / lw))
    if abs(fp) < 1e-12:
        best = None
        for h in (1.0, 4.0):
            for sdir in (1.0, -1.0):
                q = bis.point_at(tv + sdir * h)
                f = (math.hypot(q.x - xs[a], q.y - ys[a]) - rs[a]
                     - math.hypot(q.x - xs[w], q.y - ys[w]) + rs[w])
                if best is None or f < best[0]:
                    best = (f, sdir)
        return int(best[1])
    return 1 if fp < 0.0 else -1


def _clip_params(bis: BisectorArc, lo: float, hi: float, box):
    """Intersect [lo, hi] with the parameter range inside the box."""
    bx0, by0, bx1, by1 = box
    cross = []
    for x in (bx0, bx1):
        cross.extend(bis.vertical_line_params(x))
    # y-walls solved in the rotated frame
    if bis.kind == geometry.ARC_LINE:
        if bis.e2y != 0.0:
            cross.append((by0 - bis.my) / bis.e2y)
            cross.append((by1 - bis.my) / bis.e2y)
    else:
        from ._pure import _hyp_wall_params
        ay = bis.sign * bis.e1y * bis.a
        by = bis.e2y * bis.b
        cross.extend(_hyp_wall_params(ay, by, by0 - bis.my))
        cross.extend(_hyp_wall_params(ay, by, by1 - bis.my))
    bounds = sorted([c for c in cross if lo < c < hi]
                    + ([lo] if not math.isinf(lo) else [])
                    + ([hi] if not math.isinf(hi) else []))
    pad = 1e-12
    clo = chi = None
    for s0, s1 in zip(bounds, bounds[1:]):
        q = bis.point_at(0.5 * (s0 + s1))
        if bx0 - pad <= q.x <= bx1 + pad and by0 - pad <= q.y <= by1 + pad:
            if clo is None:
                clo = s0
            chi = s1
    if clo is None or chi is None or chi <= clo:
        return None, None
    return clo, chi


def build_diagram(sites: list[Site], backend: str | None = None,
                  box=None) -> ApolloniusDiagram:
    """Sweep-construct the full diagram for a site set.

    `box` (normalized frame) overrides the default clip window; the solver
    passes the whole instance's window when building sub-diagrams.
    """
    check_sites(sites)
    kernel = get_kernel(backend)
    frame = geometry.normalization_frame(sites)
    xs, ys, rs = normalized_arrays(sites, frame)
    if box is None:
        box = expanded_box(xs, ys, rs)
    sweep = kernel.sweep(xs, ys, rs, _SWEEP_SEED)
    return ApolloniusDiagram(sites, sweep, frame, box, xs, ys, rs, kernel)


def dual_csr(ea, eb, n: int):
    """Deduplicated undirected adjacency in CSR form: (indptr, indices, m)."""
    if len(ea) == 0:
        return (np.zeros(n + 1, dtype=np.int64),
                np.empty(0, dtype=np.int64), 0)
    a = np.minimum(ea, eb).astype(np.int64)
    b = np.maximum(ea, eb).astype(np.int64)
    keys = np.unique(a * n + b)
    ua, ub = keys // n, keys % n
    src = np.concatenate([ua, ub])
    dst = np.concatenate([ub, ua])
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    indptr = np.searchsorted(src, np.arange(n + 1))
    return indptr, dst, len(keys)


def csr_neighbors(indptr, indices, v: int):
    return indices[indptr[v]:indptr[v + 1]]


def csr_gather(indptr, indices, vs: np.ndarray) -> np.ndarray:
    """Concatenated neighbor lists of the given vertices."""
    counts = indptr[vs + 1] - indptr[vs]
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    cum = np.cumsum(counts)
    offs = (np.arange(total) - np.repeat(cum - counts, counts)
            + np.repeat(indptr[vs], counts))
    return indices[offs]


def dual_adjacency_arrays(ea, eb, n: int):
    """Deduplicated undirected adjacency lists from edge site pairs."""
    indptr, indices, m = dual_csr(ea, eb, n)
    adj = [indices[indptr[i]:indptr[i + 1]] for i in range(n)]
    return adj, m


def extract_dual(diagram: ApolloniusDiagram) -> DualGraph:
    """Simple adjacency between sites whose regions share an edge."""
    n = len(diagram.sites)
    adj, m = dual_adjacency_arrays(diagram._sweep.ea, diagram._sweep.eb, n)
    return DualGraph(
        n=n,
        adjacency=tuple(tuple(int(v) for v in row) for row in adj),
        edge_count=m,
    )
