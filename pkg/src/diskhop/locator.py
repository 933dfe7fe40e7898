"""Nearest-site point location over a built diagram.

The structure is a randomized trapezoidal decomposition of the diagram's
x-monotone boundary pieces; queries descend its history DAG in expected
logarithmic time.  Points outside the clip window fall back to a greedy
descent on the dual adjacency, which the star-shaped regions make exact.
"""

from __future__ import annotations

import math

import numpy as np

from .diagram import ApolloniusDiagram, dual_adjacency_arrays
from .geometry import Point, Site

_TRAP_SEED = 0x7A21


class Locator:
    def __init__(self, diagram: ApolloniusDiagram):
        self._diagram = diagram
        k = diagram._kernel
        sw = diagram._sweep
        arcs = k.build_arcs(diagram._xs, diagram._ys, diagram._rs, sw, diagram.box)
        self._tm = k.build_trapmap(arcs, diagram._xs, diagram._ys, diagram._rs,
                                   sw.dominated, diagram.box, _TRAP_SEED)
        self._adj = None

    @property
    def diagram(self) -> ApolloniusDiagram:
        return self._diagram

    def _adjacency(self):
        if self._adj is None:
            d = self._diagram
            self._adj, _ = dual_adjacency_arrays(
                d._sweep.ea, d._sweep.eb, len(d.sites))
        return self._adj

    def locate_normalized(self, qx: np.ndarray, qy: np.ndarray) -> np.ndarray:
        """Batch queries already in the diagram's normalized frame."""
        d = self._diagram
        out = d._kernel.locate_many(self._tm, qx, qy)
        bx0, by0, bx1, by1 = d.box
        outside = (qx < bx0) | (qx > bx1) | (qy < by0) | (qy > by1)
        if outside.any():
            xs, ys, rs = d._xs, d._ys, d._rs
            for i in np.nonzero(outside)[0]:
                out[i] = self._greedy(float(qx[i]), float(qy[i]), int(out[i]))
        return out

    def _greedy(self, x: float, y: float, start: int) -> int:
        """Descend to the weighted nearest site along dual adjacency."""
        xs, ys, rs = self._diagram._xs, self._diagram._ys, self._diagram._rs
        adj = self._adjacency()
        cur = start
        dcur = math.hypot(x - xs[cur], y - ys[cur]) - rs[cur]
        for _ in range(len(xs) + 1):
            best, dbest = cur, dcur
            for v in adj[cur]:
                dv = math.hypot(x - xs[v], y - ys[v]) - rs[v]
                if dv < dbest:
                    best, dbest = int(v), dv
            if best == cur:
                return cur
            cur, dcur = best, dbest
        return cur

    def nearest(self, p: Point | tuple[float, float]) -> tuple[int, float]:
        """Site with minimal weighted distance to p, and that distance."""
        d = self._diagram
        nx, ny = d.frame.to_norm(p[0], p[1])
        site = int(self.locate_normalized(np.array([nx]), np.array([ny]))[0])
        s = d.sites[site]
        return site, math.hypot(p[0] - s.x, p[1] - s.y) - s.r


def build_locator(diagram: ApolloniusDiagram) -> Locator:
    return Locator(diagram)


def nearest_site(locator: Locator, p: Point | tuple[float, float]) -> tuple[int, float]:
    return locator.nearest(p)
