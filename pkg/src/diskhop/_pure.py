"""Pure-Python kernel: sweep construction, arc extraction, point location.

This module mirrors the compiled extension (``diskhop._core``) operation
for operation; one of the two is selected at import time by
``diskhop._backend``.  All coordinates here are normalized (the caller
scales instances into the unit box first).

The sweep generalizes the parabolic beach line to additively weighted
sites: at sweep position t, the front of site (x, y, r) is the parabola
with focus (x, y) and directrix y = t - r, so a site's event fires when
the sweep line first touches the top of its disk and circle events fire
at the lowest tangent of the equidistant circle of three neighboring
arcs.  Sites whose front never pierces the beach line have empty regions
and are recorded with the dominating arc's site as witness.
"""

from __future__ import annotations

import heapq
import math

import numpy as np

from ._kerneltypes import ArcSet, SweepResult, TrapMap
from .errors import DegenerateInstanceError

BACKEND = "pure"

INF = float("inf")
_WMIN = 1e-12          # pieces narrower than this get widened symbolically
_TPAST = 1e-12         # slack when rejecting circle events behind the sweep
_BIGID = 1 << 30       # lexicographic id for anonymous query points


def _mix64(state: int) -> tuple[int, int]:
    """SplitMix64 step: returns (new_state, output)."""
    state = (state + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return state, z ^ (z >> 31)


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

class _Sweep:
    def __init__(self, xs, ys, rs, seed):
        self.xs = xs
        self.ys = ys
        self.rs = rs
        self.n = len(xs)
        self.key = [ys[i] + rs[i] for i in range(self.n)]
        self.bot = [ys[i] - rs[i] for i in range(self.n)]
        self.rng = (seed * 2 + 1) & 0xFFFFFFFFFFFFFFFF

        # beach arcs
        self.a_site: list[int] = []
        self.a_prev: list[int] = []
        self.a_next: list[int] = []
        self.a_left: list[int] = []
        self.a_right: list[int] = []
        self.a_parent: list[int] = []
        self.a_prio: list[int] = []
        self.a_pending: list[int] = []
        self.a_gap_e: list[int] = []   # edge traced between arc and its next
        self.a_gap_s: list[int] = []
        self.root = -1

        # outputs
        self.dominated = [-1] * self.n
        self.vx: list[float] = []
        self.vy: list[float] = []
        self.vd: list[float] = []
        self.vs: list[tuple[int, int, int]] = []
        self.e_a: list[int] = []
        self.e_b: list[int] = []
        self.e_v0: list[int] = []
        self.e_v1: list[int] = []

        self.heap: list[tuple] = []
        self.serial = self.n
        self.pushed = 0
        self.popped = 0
        self.false_pops = 0

    # -- treap ----------------------------------------------------------

    def _new_arc(self, site: int) -> int:
        self.rng, z = _mix64(self.rng)
        i = len(self.a_site)
        self.a_site.append(site)
        self.a_prev.append(-1)
        self.a_next.append(-1)
        self.a_left.append(-1)
        self.a_right.append(-1)
        self.a_parent.append(-1)
        self.a_prio.append(z)
        self.a_pending.append(-1)
        self.a_gap_e.append(-1)
        self.a_gap_s.append(-1)
        return i

    def _rotate(self, j: int) -> None:
        """Rotate arc j above its parent."""
        p = self.a_parent[j]
        g = self.a_parent[p]
        if self.a_left[p] == j:
            b = self.a_right[j]
            self.a_left[p] = b
            if b != -1:
                self.a_parent[b] = p
            self.a_right[j] = p
        else:
            b = self.a_left[j]
            self.a_right[p] = b
            if b != -1:
                self.a_parent[b] = p
            self.a_left[j] = p
        self.a_parent[p] = j
        self.a_parent[j] = g
        if g == -1:
            self.root = j
        elif self.a_left[g] == p:
            self.a_left[g] = j
        else:
            self.a_right[g] = j

    def _bubble_up(self, j: int) -> None:
        while self.a_parent[j] != -1 and self.a_prio[j] < self.a_prio[self.a_parent[j]]:
            self._rotate(j)

    def _tree_insert_after(self, i: int, j: int) -> None:
        if self.a_right[i] == -1:
            self.a_right[i] = j
            self.a_parent[j] = i
        else:
            k = self.a_right[i]
            while self.a_left[k] != -1:
                k = self.a_left[k]
            self.a_left[k] = j
            self.a_parent[j] = k
        self._bubble_up(j)

    def _tree_insert_before(self, i: int, j: int) -> None:
        if self.a_left[i] == -1:
            self.a_left[i] = j
            self.a_parent[j] = i
        else:
            k = self.a_left[i]
            while self.a_right[k] != -1:
                k = self.a_right[k]
            self.a_right[k] = j
            self.a_parent[j] = k
        self._bubble_up(j)

    def _tree_remove(self, i: int) -> None:
        while self.a_left[i] != -1 or self.a_right[i] != -1:
            l, r = self.a_left[i], self.a_right[i]
            if l == -1:
                c = r
            elif r == -1:
                c = l
            else:
                c = l if self.a_prio[l] < self.a_prio[r] else r
            self._rotate(c)
        p = self.a_parent[i]
        if p == -1:
            self.root = -1
        elif self.a_left[p] == i:
            self.a_left[p] = -1
        else:
            self.a_right[p] = -1
        self.a_parent[i] = -1

    # -- beach geometry ---------------------------------------------------

    def _bp_x(self, i: int, j: int, t: float) -> float:
        """x of the breakpoint between adjacent arcs i (left) and j (right)."""
        u = self.a_site[i]
        v = self.a_site[j]
        ux, uy = self.xs[u], self.ys[u]
        vx, vy = self.xs[v], self.ys[v]
        du = self.key[u] - t
        dv = self.key[v] - t
        if du == 0.0 and dv == 0.0:
            return 0.5 * (ux + vx)
        qa = dv - du
        qb = -2.0 * (dv * ux - du * vx)
        qc = dv * ux * ux - du * vx * vx + du * dv * (self.bot[u] - self.bot[v])
        if abs(qa) <= 1e-16 * (abs(du) + abs(dv)):
            if qb == 0.0:
                return 0.5 * (ux + vx)
            return -qc / qb
        disc = qb * qb - 4.0 * qa * qc
        if disc < 0.0:
            disc = 0.0
        sq = math.sqrt(disc)
        # the left-to-right transition is always the (+) root
        if qb >= 0.0:
            den = qb + sq
            if den == 0.0:
                return -qb / (2.0 * qa)
            return -2.0 * qc / den
        return (sq - qb) / (2.0 * qa)

    def _front_y(self, i: int, x: float, t: float) -> float:
        u = self.a_site[i]
        ux, uy, ur = self.xs[u], self.ys[u], self.rs[u]
        d = self.key[u] - t
        c = t - ur
        if d == 0.0:
            return uy if x == ux else INF
        dx = x - ux
        return dx * dx / (2.0 * d) + 0.5 * (uy + c)

    def _find_arc(self, x: float, t: float) -> int:
        i = self.root
        while True:
            p = self.a_prev[i]
            if p != -1 and x < self._bp_x(p, i, t):
                if self.a_left[i] == -1:
                    return i
                i = self.a_left[i]
                continue
            nx = self.a_next[i]
            if nx != -1 and x > self._bp_x(i, nx, t):
                if self.a_right[i] == -1:
                    return i
                i = self.a_right[i]
                continue
            return i

    # -- events -----------------------------------------------------------

    def _new_edge(self, sa: int, sb: int) -> int:
        e = len(self.e_a)
        self.e_a.append(sa)
        self.e_b.append(sb)
        self.e_v0.append(-1)
        self.e_v1.append(-1)
        return e

    def _circle_candidates(self, sa: int, sb: int, sc: int):
        xs, ys, rs = self.xs, self.ys, self.rs
        ux, uy, ur = xs[sa], ys[sa], rs[sa]
        a11 = 2.0 * (xs[sb] - ux)
        a12 = 2.0 * (ys[sb] - uy)
        b1 = (xs[sb] ** 2 + ys[sb] ** 2) - (ux * ux + uy * uy) + ur * ur - rs[sb] ** 2
        c1 = 2.0 * (ur - rs[sb])
        a21 = 2.0 * (xs[sc] - ux)
        a22 = 2.0 * (ys[sc] - uy)
        b2 = (xs[sc] ** 2 + ys[sc] ** 2) - (ux * ux + uy * uy) + ur * ur - rs[sc] ** 2
        c2 = 2.0 * (ur - rs[sc])
        det = a11 * a22 - a12 * a21
        span = max(abs(a11), abs(a12), abs(a21), abs(a22), 1e-300)
        if abs(det) <= 1e-14 * span * span:
            return []
        p0x = (b1 * a22 - b2 * a12) / det
        p0y = (a11 * b2 - a21 * b1) / det
        p1x = (c1 * a22 - c2 * a12) / det
        p1y = (a11 * c2 - a21 * c1) / det
        qa = p1x * p1x + p1y * p1y - 1.0
        qb = 2.0 * ((p0x - ux) * p1x + (p0y - uy) * p1y) - 2.0 * ur
        qc = (p0x - ux) ** 2 + (p0y - uy) ** 2 - ur * ur
        roots = []
        if abs(qa) <= 1e-14 * max(abs(qb), abs(qc), 1.0):
            if qb != 0.0:
                roots.append(-qc / qb)
        else:
            disc = qb * qb - 4.0 * qa * qc
            if disc >= 0.0:
                sq = math.sqrt(disc)
                q = -(qb + math.copysign(sq, qb)) / 2.0 if qb != 0.0 else sq / 2.0
                roots.append(q / qa)
                if q != 0.0:
                    roots.append(qc / q)
        rmin = min(ur, rs[sb], rs[sc])
        out = []
        for rho in roots:
            if rho + rmin < -1e-9:
                continue
            px = p0x + rho * p1x
            py = p0y + rho * p1y
            px, py = self._polish(px, py, sa, sb, sc)
            lu = math.hypot(px - ux, py - uy)
            rho = lu - ur
            dup = False
            for (qx2, qy2, _) in out:
                if abs(qx2 - px) < 1e-12 and abs(qy2 - py) < 1e-12:
                    dup = True
                    break
            if not dup:
                out.append((px, py, rho))
        return out

    def _polish(self, px, py, sa, sb, sc):
        xs, ys, rs = self.xs, self.ys, self.rs
        for _ in range(2):
            lu = math.hypot(px - xs[sa], py - ys[sa])
            lv = math.hypot(px - xs[sb], py - ys[sb])
            lw = math.hypot(px - xs[sc], py - ys[sc])
            if lu == 0.0 or lv == 0.0 or lw == 0.0:
                return px, py
            f1 = (lu - rs[sa]) - (lv - rs[sb])
            f2 = (lu - rs[sa]) - (lw - rs[sc])
            j11 = (px - xs[sa]) / lu - (px - xs[sb]) / lv
            j12 = (py - ys[sa]) / lu - (py - ys[sb]) / lv
            j21 = (px - xs[sa]) / lu - (px - xs[sc]) / lw
            j22 = (py - ys[sa]) / lu - (py - ys[sc]) / lw
            det = j11 * j22 - j12 * j21
            if abs(det) < 1e-300:
                return px, py
            px -= (f1 * j22 - f2 * j12) / det
            py -= (j11 * f2 - j21 * f1) / det
        return px, py

    def _refresh_event(self, m: int, t_now: float) -> None:
        self.a_pending[m] = -1
        p = self.a_prev[m]
        q = self.a_next[m]
        if p == -1 or q == -1:
            return
        sa, sb, sc = self.a_site[p], self.a_site[m], self.a_site[q]
        if sa == sc:
            return
        best = None
        for (px, py, rho) in self._circle_candidates(sa, sb, sc):
            ts = py - rho
            if ts > t_now + _TPAST:
                continue
            da = self.key[sa] - ts
            db = self.key[sb] - ts
            dc = self.key[sc] - ts
            if da <= 0.0 or db <= 0.0 or dc <= 0.0:
                continue
            s_a = (px - self.xs[sa]) / da
            s_b = (px - self.xs[sb]) / db
            s_c = (px - self.xs[sc]) / dc
            if s_a > s_b and s_b > s_c:
                if best is None or ts > best[0]:
                    best = (ts, px, py, rho)
        if best is not None:
            ts, px, py, rho = best
            if ts > t_now:
                ts = t_now
            s = self.serial
            self.serial += 1
            self.a_pending[m] = s
            heapq.heappush(self.heap, (-ts, 1, s, m, px, py, rho))
            self.pushed += 1

    def _site_event(self, v: int) -> None:
        t = self.key[v]
        vx, vy = self.xs[v], self.ys[v]
        if self.root == -1:
            j = self._new_arc(v)
            self.root = j
            return
        i = self._find_arc(vx, t)
        si = self.a_site[i]
        if self._front_y(i, vx, t) <= vy:
            self.dominated[v] = si
            return
        if self.key[si] - t == 0.0:
            # the found arc is still a vertical spike: the new site shares
            # its event key, so it goes beside it rather than splitting it
            if vx == self.xs[si]:
                raise DegenerateInstanceError(
                    "internally tangent pair with equal sweep keys")
            j = self._new_arc(v)
            if vx > self.xs[si]:
                nxt = self.a_next[i]
                if nxt != -1:
                    if self.key[self.a_site[nxt]] - t != 0.0:
                        raise DegenerateInstanceError(
                            "tie insertion against a moving breakpoint")
                    old = self.a_gap_e[i]
                    self.e_a[old] = -1   # untraced placeholder: replace
                    e2 = self._new_edge(v, self.a_site[nxt])
                    self.a_gap_e[j] = e2
                    self.a_gap_s[j] = 1
                e1 = self._new_edge(si, v)
                self.a_gap_e[i] = e1
                self.a_gap_s[i] = 1
                self.a_next[j] = self.a_next[i]
                if self.a_next[i] != -1:
                    self.a_prev[self.a_next[i]] = j
                self.a_next[i] = j
                self.a_prev[j] = i
                self._tree_insert_after(i, j)
                nxt = self.a_next[j]
                self._refresh_event(i, t)
                self._refresh_event(j, t)
                if nxt != -1:
                    self._refresh_event(nxt, t)
            else:
                prv = self.a_prev[i]
                if prv != -1:
                    if self.key[self.a_site[prv]] - t != 0.0:
                        raise DegenerateInstanceError(
                            "tie insertion against a moving breakpoint")
                    old = self.a_gap_e[prv]
                    self.e_a[old] = -1
                    e2 = self._new_edge(self.a_site[prv], v)
                    self.a_gap_e[prv] = e2
                    self.a_gap_s[prv] = 1
                e1 = self._new_edge(v, si)
                self.a_gap_e[j] = e1
                self.a_gap_s[j] = 1
                self.a_prev[j] = self.a_prev[i]
                if self.a_prev[i] != -1:
                    self.a_next[self.a_prev[i]] = j
                self.a_prev[i] = j
                self.a_next[j] = i
                self._tree_insert_before(i, j)
                prv = self.a_prev[j]
                self._refresh_event(i, t)
                self._refresh_event(j, t)
                if prv != -1:
                    self._refresh_event(prv, t)
            return
        # split the found arc
        self.a_pending[i] = -1
        j = self._new_arc(v)
        k = self._new_arc(si)
        self.a_gap_e[k] = self.a_gap_e[i]
        self.a_gap_s[k] = self.a_gap_s[i]
        e = self._new_edge(si, v)
        self.a_gap_e[i] = e
        self.a_gap_s[i] = 0
        self.a_gap_e[j] = e
        self.a_gap_s[j] = 1
        nxt = self.a_next[i]
        self.a_next[k] = nxt
        if nxt != -1:
            self.a_prev[nxt] = k
        self.a_next[i] = j
        self.a_prev[j] = i
        self.a_next[j] = k
        self.a_prev[k] = j
        self._tree_insert_after(i, j)
        self._tree_insert_after(j, k)
        self._refresh_event(i, t)
        self._refresh_event(k, t)

    def _set_edge_end(self, e: int, slot: int, vtx: int) -> None:
        if slot == 0:
            self.e_v0[e] = vtx
        else:
            self.e_v1[e] = vtx

    def _circle_event(self, m: int, px: float, py: float, rho: float, t: float) -> None:
        p = self.a_prev[m]
        q = self.a_next[m]
        vtx = len(self.vx)
        self.vx.append(px)
        self.vy.append(py)
        self.vd.append(rho)
        self.vs.append((self.a_site[p], self.a_site[m], self.a_site[q]))
        self._set_edge_end(self.a_gap_e[p], self.a_gap_s[p], vtx)
        self._set_edge_end(self.a_gap_e[m], self.a_gap_s[m], vtx)
        self._tree_remove(m)
        self.a_next[p] = q
        self.a_prev[q] = p
        e2 = self._new_edge(self.a_site[p], self.a_site[q])
        self.e_v0[e2] = vtx
        self.a_gap_e[p] = e2
        self.a_gap_s[p] = 1
        self._refresh_event(p, t)
        self._refresh_event(q, t)

    def run(self) -> None:
        self.heap = [(-self.key[v], 0, v, v, 0.0, 0.0, 0.0) for v in range(self.n)]
        heapq.heapify(self.heap)
        self.pushed += self.n
        heap = self.heap
        while heap:
            negt, kind, serial, a, px, py, rho = heapq.heappop(heap)
            self.popped += 1
            if kind == 0:
                self._site_event(a)
            else:
                if self.a_pending[a] != serial:
                    self.false_pops += 1
                    continue
                self.a_pending[a] = -1
                self._circle_event(a, px, py, rho, -negt)

    def result(self) -> SweepResult:
        keep = [e for e in range(len(self.e_a)) if self.e_a[e] != -1]
        nv = len(self.vx)
        vs = np.array(self.vs, dtype=np.int32).reshape(nv, 3)
        return SweepResult(
            dominated=np.array(self.dominated, dtype=np.int32),
            vx=np.array(self.vx, dtype=np.float64),
            vy=np.array(self.vy, dtype=np.float64),
            vdist=np.array(self.vd, dtype=np.float64),
            vsites=vs,
            ea=np.array([self.e_a[e] for e in keep], dtype=np.int32),
            eb=np.array([self.e_b[e] for e in keep], dtype=np.int32),
            ev0=np.array([self.e_v0[e] for e in keep], dtype=np.int32),
            ev1=np.array([self.e_v1[e] for e in keep], dtype=np.int32),
            events_pushed=self.pushed,
            events_popped=self.popped,
            false_pops=self.false_pops,
        )


def sweep(xs, ys, rs, seed: int = 1) -> SweepResult:
    xs = list(map(float, xs))
    ys = list(map(float, ys))
    rs = list(map(float, rs))
    s = _Sweep(xs, ys, rs, seed)
    s.run()
    return s.result()


# ---------------------------------------------------------------------------
# arc extraction
# ---------------------------------------------------------------------------

def _hyp_wall_params(A, B, C):
    """Solve A cosh t + B sinh t = C for t."""
    ca = A + B
    cb = -2.0 * C
    cc = A - B
    out = []
    if abs(ca) < 1e-15 * max(abs(cb), abs(cc), 1.0):
        if cb != 0.0:
            z = -cc / cb
            if z > 0.0:
                out.append(math.log(z))
        return out
    disc = cb * cb - 4.0 * ca * cc
    if disc < 0.0:
        return out
    sq = math.sqrt(disc)
    q = -(cb + math.copysign(sq, cb)) / 2.0 if cb != 0.0 else sq / 2.0
    for z in (q / ca, (cc / q) if q != 0.0 else -1.0):
        if z > 0.0:
            out.append(math.log(z))
    return out


def build_arcs(xs, ys, rs, sw: SweepResult, box) -> ArcSet:
    """Clip diagram edges to the box and split them into x-monotone pieces."""
    xs = list(map(float, xs))
    ys = list(map(float, ys))
    rs = list(map(float, rs))
    bx0, by0, bx1, by1 = box
    nv = len(sw.vx)
    ptx = list(map(float, sw.vx))
    pty = list(map(float, sw.vy))

    kind_l: list[int] = []
    ex0_l: list[float] = []
    ey0_l: list[float] = []
    ex1_l: list[float] = []
    ey1_l: list[float] = []
    conic_l: list[list[float]] = []
    sel_l: list[int] = []
    above_l: list[int] = []
    below_l: list[int] = []
    lp_l: list[int] = []
    rp_l: list[int] = []
    edge_l: list[int] = []

    ea = sw.ea.tolist()
    eb = sw.eb.tolist()
    ev0 = sw.ev0.tolist()
    ev1 = sw.ev1.tolist()
    vsites = sw.vsites.tolist()

    def new_point(x, y):
        ptx.append(x)
        pty.append(y)
        return len(ptx) - 1

    for e in range(len(ea)):
        a, b = ea[e], eb[e]
        ax, ay, ar = xs[a], ys[a], rs[a]
        bx, by, br = xs[b], ys[b], rs[b]
        dx, dy = bx - ax, by - ay
        duv = math.hypot(dx, dy)
        if duv == 0.0:
            continue
        mx, my = 0.5 * (ax + bx), 0.5 * (ay + by)
        e1x, e1y = dx / duv, dy / duv
        e2x, e2y = -e1y, e1x
        delta = ar - br
        is_line = delta == 0.0
        if is_line:
            ah = 0.0
            bh = 1.0
            sgn = 1.0
        else:
            cf = 0.5 * duv
            ah = 0.5 * abs(delta)
            bh2 = cf * cf - ah * ah
            if bh2 <= 0.0:
                continue  # dominated pair: no bisector
            bh = math.sqrt(bh2)
            sgn = 1.0 if delta > 0.0 else -1.0

        def pt_at(t):
            if is_line:
                return mx + e2x * t, my + e2y * t
            ch, sh = math.cosh(t), math.sinh(t)
            return (mx + sgn * e1x * ah * ch + e2x * bh * sh,
                    my + sgn * e1y * ah * ch + e2y * bh * sh)

        def tau_of(pxx, pyy):
            s = (pxx - mx) * e2x + (pyy - my) * e2y
            return s if is_line else math.asinh(s / bh)

        # parameter interval with endpoint identities
        if ev0[e] != -1 and ev1[e] != -1:
            t0 = tau_of(ptx[ev0[e]], pty[ev0[e]])
            t1 = tau_of(ptx[ev1[e]], pty[ev1[e]])
            if t0 == t1:
                continue
            if t0 < t1:
                lo, hi, lo_id, hi_id = t0, t1, ev0[e], ev1[e]
            else:
                lo, hi, lo_id, hi_id = t1, t0, ev1[e], ev0[e]
        elif ev0[e] == -1 and ev1[e] == -1:
            lo, hi, lo_id, hi_id = -INF, INF, -1, -1
        else:
            vid = ev0[e] if ev0[e] != -1 else ev1[e]
            tv = tau_of(ptx[vid], pty[vid])
            tri = vsites[vid]
            w = tri[0] if tri[0] != a and tri[0] != b else (
                tri[1] if tri[1] != a and tri[1] != b else tri[2])
            pxx, pyy = ptx[vid], pty[vid]
            if is_line:
                dpx, dpy = e2x, e2y
            else:
                ch, sh = math.cosh(tv), math.sinh(tv)
                dpx = sgn * e1x * ah * sh + e2x * bh * ch
                dpy = sgn * e1y * ah * sh + e2y * bh * ch
            la = math.hypot(pxx - ax, pyy - ay)
            lw = math.hypot(pxx - xs[w], pyy - ys[w])
            fp = 0.0
            if la > 1e-300 and lw > 1e-300:
                fp = (dpx * ((pxx - ax) / la - (pxx - xs[w]) / lw)
                      + dpy * ((pyy - ay) / la - (pyy - ys[w]) / lw))
            if abs(fp) < 1e-12:
                best = None
                for h in (1.0, 4.0):
                    for sdir in (1.0, -1.0):
                        qx2, qy2 = pt_at(tv + sdir * h)
                        f = (math.hypot(qx2 - ax, qy2 - ay) - ar
                             - math.hypot(qx2 - xs[w], qy2 - ys[w]) + rs[w])
                        if best is None or f < best[0]:
                            best = (f, sdir)
                fp = -best[1]
            if fp < 0.0:
                lo, hi, lo_id, hi_id = tv, INF, vid, -1
            else:
                lo, hi, lo_id, hi_id = -INF, tv, -1, vid

        # clip to the box
        cross = []
        if is_line:
            if e2x != 0.0:
                cross.append((bx0 - mx) / e2x)
                cross.append((bx1 - mx) / e2x)
            if e2y != 0.0:
                cross.append((by0 - my) / e2y)
                cross.append((by1 - my) / e2y)
        else:
            Ax_ = sgn * e1x * ah
            Bx_ = e2x * bh
            Ay_ = sgn * e1y * ah
            By_ = e2y * bh
            cross.extend(_hyp_wall_params(Ax_, Bx_, bx0 - mx))
            cross.extend(_hyp_wall_params(Ax_, Bx_, bx1 - mx))
            cross.extend(_hyp_wall_params(Ay_, By_, by0 - my))
            cross.extend(_hyp_wall_params(Ay_, By_, by1 - my))
        bounds = sorted([c for c in cross if lo < c < hi]
                        + ([lo] if lo != -INF else [])
                        + ([hi] if hi != INF else []))
        clo = chi = None
        pad = 1e-12
        for s0, s1 in zip(bounds, bounds[1:]):
            qx2, qy2 = pt_at(0.5 * (s0 + s1))
            if bx0 - pad <= qx2 <= bx1 + pad and by0 - pad <= qy2 <= by1 + pad:
                if clo is None:
                    clo = s0
                chi = s1
        if clo is None or chi is None or chi <= clo:
            continue
        clo_id = lo_id if clo == lo else -1
        chi_id = hi_id if chi == hi else -1

        # split at the vertical tangent if it lies inside
        pieces = [(clo, clo_id, chi, chi_id)]
        if not is_line:
            Ax_ = sgn * e1x * ah
            Bx_ = e2x * bh
            if abs(Ax_) > abs(Bx_):
                t_ext = math.atanh(-Bx_ / Ax_)
                if clo + 1e-13 < t_ext < chi - 1e-13:
                    xm_, ym_ = pt_at(t_ext)
                    mid_id = new_point(xm_, ym_)
                    pieces = [(clo, clo_id, t_ext, mid_id), (t_ext, mid_id, chi, chi_id)]

        d2 = delta * delta
        l1 = 2.0 * (bx - ax)
        l2 = 2.0 * (by - ay)
        l0 = (ax * ax + ay * ay) - (bx * bx + by * by)
        cyy = l2 * l2 - 4.0 * d2
        cxy = 2.0 * l1 * l2
        cxx = l1 * l1 - 4.0 * d2
        cx_ = 2.0 * l1 * l0 + 4.0 * d2 * (ax + bx)
        cy_ = 2.0 * l2 * l0 + 4.0 * d2 * (ay + by)
        c0_ = l0 * l0 - 2.0 * d2 * (ax * ax + ay * ay + bx * bx + by * by) + d2 * d2

        for (t0, id0, t1, id1) in pieces:
            p0x, p0y = (ptx[id0], pty[id0]) if id0 != -1 else pt_at(t0)
            p1x, p1y = (ptx[id1], pty[id1]) if id1 != -1 else pt_at(t1)
            if id0 == -1:
                id0 = new_point(p0x, p0y)
            if id1 == -1:
                id1 = new_point(p1x, p1y)
            # lexicographic left/right
            if (p0x, p0y, id0) <= (p1x, p1y, id1):
                lpid, rpid = id0, id1
                lx, ly, rx, ry = p0x, p0y, p1x, p1y
            else:
                lpid, rpid = id1, id0
                lx, ly, rx, ry = p1x, p1y, p0x, p0y
            tm = 0.5 * (t0 + t1)
            pmx, pmy = pt_at(tm)
            if rx - lx < _WMIN:
                if abs(ry - ly) < _WMIN:
                    continue
                xm_ = 0.5 * (lx + rx)
                exl, eyl = xm_ - _WMIN, ly
                exr, eyr = xm_ + _WMIN, ry
                k = 0
                slope = (eyr - eyl) / (exr - exl)
            elif is_line:
                exl, eyl, exr, eyr = lx, ly, rx, ry
                k = 0
                slope = (eyr - eyl) / (exr - exl)
            else:
                exl, eyl, exr, eyr = lx, ly, rx, ry
                k = 1
                fx = 2.0 * cxx * pmx + cxy * pmy + cx_
                fy = 2.0 * cyy * pmy + cxy * pmx + cy_
                slope = -fx / fy if abs(fy) > 1e-300 else math.copysign(1e18, -fx)
            la = math.hypot(pmx - ax, pmy - ay)
            lb = math.hypot(pmx - bx, pmy - by)
            gx = (pmx - ax) / la - (pmx - bx) / lb
            gy = (pmy - ay) / la - (pmy - by) / lb
            dotv = gx * (-slope) + gy
            if dotv < 0.0:
                sab, sbe = a, b
            else:
                sab, sbe = b, a
            sel = 0
            if k == 1:
                ay_ = cyy
                by_ = cxy * pmx + cy_
                cc_ = cxx * pmx * pmx + cx_ * pmx + c0_
                if abs(ay_) > 1e-300:
                    disc = by_ * by_ - 4.0 * ay_ * cc_
                    if disc < 0.0:
                        disc = 0.0
                    sq = math.sqrt(disc)
                    r1 = (-by_ - sq) / (2.0 * ay_)
                    r2 = (-by_ + sq) / (2.0 * ay_)
                    ylo_, yhi_ = (r1, r2) if r1 <= r2 else (r2, r1)
                    sel = 0 if abs(ylo_ - pmy) <= abs(yhi_ - pmy) else 1
            kind_l.append(k)
            ex0_l.append(exl)
            ey0_l.append(eyl)
            ex1_l.append(exr)
            ey1_l.append(eyr)
            conic_l.append([cyy, cxy, cxx, cx_, cy_, c0_])
            sel_l.append(sel)
            above_l.append(sab)
            below_l.append(sbe)
            lp_l.append(lpid)
            rp_l.append(rpid)
            edge_l.append(e)

    m = len(kind_l)
    return ArcSet(
        kind=np.array(kind_l, dtype=np.int8),
        ex0=np.array(ex0_l), ey0=np.array(ey0_l),
        ex1=np.array(ex1_l), ey1=np.array(ey1_l),
        conic=np.array(conic_l, dtype=np.float64).reshape(m, 6),
        sel=np.array(sel_l, dtype=np.int8),
        above=np.array(above_l, dtype=np.int32),
        below=np.array(below_l, dtype=np.int32),
        lp=np.array(lp_l, dtype=np.int32),
        rp=np.array(rp_l, dtype=np.int32),
        edge=np.array(edge_l, dtype=np.int32),
        px=np.array(ptx), py=np.array(pty),
    )


# ---------------------------------------------------------------------------
# trapezoidal map
# ---------------------------------------------------------------------------

class _TrapBuilder:
    def __init__(self, arcs: ArcSet, xs, ys, rs, dominated, box, seed):
        self.kind = arcs.kind.tolist()
        self.ex0 = arcs.ex0.tolist()
        self.ey0 = arcs.ey0.tolist()
        self.ex1 = arcs.ex1.tolist()
        self.ey1 = arcs.ey1.tolist()
        self.conic = arcs.conic.tolist()
        self.sel = arcs.sel.tolist()
        self.above = arcs.above.tolist()
        self.below = arcs.below.tolist()
        self.alp = arcs.lp.tolist()
        self.arp = arcs.rp.tolist()
        self.ptx = arcs.px.tolist()
        self.pty = arcs.py.tolist()
        self.xs = xs
        self.ys = ys
        self.rs = rs
        self.dominated = dominated
        self.box = box
        self.seed = seed

        # trapezoids
        self.t_top: list[int] = []
        self.t_bot: list[int] = []
        self.t_lp: list[int] = []
        self.t_rp: list[int] = []
        self.t_leaf: list[int] = []
        # DAG
        self.n_type: list[int] = []
        self.n_key: list[int] = []
        self.n_l: list[int] = []
        self.n_r: list[int] = []

        t0 = self._new_trap(-1, -1, -1, -1)
        self.root = self.t_leaf[t0]

    # -- primitives -----------------------------------------------------

    def _new_node(self, typ, key, l=-1, r=-1):
        self.n_type.append(typ)
        self.n_key.append(key)
        self.n_l.append(l)
        self.n_r.append(r)
        return len(self.n_type) - 1

    def _new_trap(self, top, bot, lp, rp):
        t = len(self.t_top)
        self.t_top.append(top)
        self.t_bot.append(bot)
        self.t_lp.append(lp)
        self.t_rp.append(rp)
        leaf = self._new_node(2, t)
        self.t_leaf.append(leaf)
        return t

    def arc_y(self, a: int, x: float) -> float:
        if self.kind[a] == 0:
            x0, y0, x1, y1 = self.ex0[a], self.ey0[a], self.ex1[a], self.ey1[a]
            return y0 + (x - x0) * (y1 - y0) / (x1 - x0)
        cyy, cxy, cxx, cx_, cy_, c0_ = self.conic[a]
        ay_ = cyy
        by_ = cxy * x + cy_
        cc_ = cxx * x * x + cx_ * x + c0_
        if abs(ay_) <= 1e-300:
            if by_ == 0.0:
                return 0.5 * (self.ey0[a] + self.ey1[a])
            return -cc_ / by_
        disc = by_ * by_ - 4.0 * ay_ * cc_
        if disc < 0.0:
            disc = 0.0
        sq = math.sqrt(disc)
        r1 = (-by_ - sq) / (2.0 * ay_)
        r2 = (-by_ + sq) / (2.0 * ay_)
        if r1 > r2:
            r1, r2 = r2, r1
        return r1 if self.sel[a] == 0 else r2

    def _lex_less_pt(self, x1, y1, i1, x2, y2, i2):
        if x1 != x2:
            return x1 < x2
        if y1 != y2:
            return y1 < y2
        return i1 < i2

    def _slope_near(self, a: int, pid: int) -> float:
        """Finite-difference dy/dx of arc a just inside from endpoint pid."""
        x0, x1 = self.ex0[a], self.ex1[a]
        h = 0.25 * (x1 - x0)
        if self.alp[a] == pid:
            xa, xb = x0, x0 + h
        else:
            xa, xb = x1 - h, x1
        ya, yb = self.arc_y(a, xa), self.arc_y(a, xb)
        return (yb - ya) / (xb - xa)

    def _locate_walk(self, qx, qy):
        """Locate for the rightward walk: x ties always advance right.

        The walk queries sit exactly on a wall's x, so the shear-order
        tie-break would bounce left for smaller y; forcing right skips any
        zero-width slivers at that x and guarantees progress.
        """
        node = self.root
        ntype, nkey, nl, nr = self.n_type, self.n_key, self.n_l, self.n_r
        while True:
            t = ntype[node]
            if t == 2:
                return nkey[node]
            k = nkey[node]
            if t == 0:
                node = nl[node] if qx < self.ptx[k] else nr[node]
            else:
                node = nl[node] if qy > self.arc_y(k, qx) else nr[node]

    def _locate_endpoint(self, pid, arc):
        """Locate the trapezoid holding arc's left endpoint, nudged right."""
        px, py = self.ptx[pid], self.pty[pid]
        node = self.root
        while True:
            t = self.n_type[node]
            if t == 2:
                return self.n_key[node]
            k = self.n_key[node]
            if t == 0:
                if k == pid:
                    node = self.n_r[node]
                else:
                    kx, ky = self.ptx[k], self.pty[k]
                    node = self.n_l[node] if self._lex_less_pt(px, py, pid, kx, ky, k) else self.n_r[node]
            else:
                if self.alp[k] == pid or self.arp[k] == pid:
                    sa = self._slope_near(arc, pid)
                    sb = self._slope_near(k, pid)
                    if sa == sb:
                        above = arc > k
                    else:
                        above = sa > sb
                else:
                    above = py > self.arc_y(k, px)
                node = self.n_l[node] if above else self.n_r[node]

    def _r_reached(self, trap, rid, rx, ry):
        """True when arc's right endpoint lies in/at this trapezoid."""
        w = self.t_rp[trap]
        if w == -1:
            return True
        if w == rid:
            return True
        return self._lex_less_pt(rx, ry, rid, self.ptx[w], self.pty[w], w)

    # -- insertion --------------------------------------------------------

    def insert(self, a: int) -> None:
        pid, rid = self.alp[a], self.arp[a]
        px, py = self.ptx[pid], self.pty[pid]
        rx, ry = self.ptx[rid], self.pty[rid]
        crossed = [self._locate_endpoint(pid, a)]
        while not self._r_reached(crossed[-1], rid, rx, ry):
            w = self.t_rp[crossed[-1]]
            wx = self.ptx[w]
            crossed.append(self._locate_walk(wx, self.arc_y(a, wx)))

        first = crossed[0]
        last = crossed[-1]

        open_above = -1   # trapezoid above the arc, still growing rightward
        open_below = -1

        for idx, T in enumerate(crossed):
            top, bot = self.t_top[T], self.t_bot[T]
            tlp, trp = self.t_lp[T], self.t_rp[T]
            leaf = self.t_leaf[T]

            split_l = (T == first and tlp != pid
                       and (tlp == -1 or self._lex_less_pt(
                           self.ptx[tlp], self.pty[tlp], tlp, px, py, pid)))
            split_r = (T == last and trp != rid
                       and (trp == -1 or self._lex_less_pt(
                           rx, ry, rid, self.ptx[trp], self.pty[trp], trp)))

            capL = self._new_trap(top, bot, tlp, pid) if split_l else -1
            capR = self._new_trap(top, bot, rid, trp) if split_r else -1

            if T == first:
                part_lp = pid if split_l else tlp
            else:
                part_lp = tlp
            part_rp = rid if T == last else trp

            if open_above == -1:
                open_above = self._new_trap(top, a, part_lp, part_rp)
            else:
                self.t_rp[open_above] = part_rp
            if open_below == -1:
                open_below = self._new_trap(a, bot, part_lp, part_rp)
            else:
                self.t_rp[open_below] = part_rp

            ynode = self._new_node(1, a, self.t_leaf[open_above], self.t_leaf[open_below])

            # a part keeps growing across the boundary only while its
            # bounding arc is literally the same (stacked walls at one x can
            # change top and bottom simultaneously)
            if T != last:
                nxt = crossed[idx + 1]
                if self.t_top[nxt] != top:
                    self.t_rp[open_above] = trp
                    open_above = -1
                if self.t_bot[nxt] != bot:
                    self.t_rp[open_below] = trp
                    open_below = -1

            sub = ynode
            if split_r:
                sub = self._new_node(0, rid, sub, self.t_leaf[capR])
            if split_l:
                sub = self._new_node(0, pid, self.t_leaf[capL], sub)
            # overwrite the leaf in place so every parent sees the new subtree
            self.n_type[leaf] = self.n_type[sub]
            self.n_key[leaf] = self.n_key[sub]
            self.n_l[leaf] = self.n_l[sub]
            self.n_r[leaf] = self.n_r[sub]

    def build(self):
        m = len(self.kind)
        order = list(range(m))
        rng = (self.seed * 2 + 1) & 0xFFFFFFFFFFFFFFFF
        for i in range(m - 1, 0, -1):
            rng, z = _mix64(rng)
            j = z % (i + 1)
            order[i], order[j] = order[j], order[i]
        for a in order:
            self.insert(a)

    def labels(self):
        bx0, by0, bx1, by1 = self.box
        nt = len(self.t_top)
        site = [-1] * nt
        live = [False] * nt
        for t in range(nt):
            leaf = self.t_leaf[t]
            if self.n_type[leaf] == 2 and self.n_key[leaf] == t:
                live[t] = True
        cand = [i for i in range(len(self.xs)) if self.dominated[i] == -1]
        for t in range(nt):
            if not live[t]:
                continue
            if self.t_bot[t] != -1:
                site[t] = self.above[self.t_bot[t]]
            elif self.t_top[t] != -1:
                site[t] = self.below[self.t_top[t]]
            else:
                lx = self.ptx[self.t_lp[t]] if self.t_lp[t] != -1 else bx0
                rx = self.ptx[self.t_rp[t]] if self.t_rp[t] != -1 else bx1
                cx = 0.5 * (lx + rx)
                cy = 0.5 * (by0 + by1)
                best = -1
                bd = INF
                for i in cand:
                    d = math.hypot(cx - self.xs[i], cy - self.ys[i]) - self.rs[i]
                    if d < bd:
                        bd = d
                        best = i
                site[t] = best
        return site


def build_trapmap(arcs: ArcSet, xs, ys, rs, dominated, box, seed: int = 1) -> TrapMap:
    b = _TrapBuilder(arcs, list(map(float, xs)), list(map(float, ys)),
                     list(map(float, rs)), list(dominated), box, seed)
    b.build()
    site = b.labels()
    return TrapMap(
        arcs=arcs,
        node_type=np.array(b.n_type, dtype=np.int8),
        node_key=np.array(b.n_key, dtype=np.int32),
        node_left=np.array(b.n_l, dtype=np.int32),
        node_right=np.array(b.n_r, dtype=np.int32),
        trap_site=np.array(site, dtype=np.int32),
        root=b.root,
        box=tuple(box),
    )


def locate_many(tm: TrapMap, qx, qy) -> np.ndarray:
    """Region label (site index) for each query point, clamped to the box."""
    ntype = tm.node_type.tolist()
    nkey = tm.node_key.tolist()
    nl = tm.node_left.tolist()
    nr = tm.node_right.tolist()
    tsite = tm.trap_site.tolist()
    arcs = tm.arcs
    kind = arcs.kind.tolist()
    ex0 = arcs.ex0.tolist()
    ey0 = arcs.ey0.tolist()
    ex1 = arcs.ex1.tolist()
    ey1 = arcs.ey1.tolist()
    conic = arcs.conic.tolist()
    sel = arcs.sel.tolist()
    ptx = arcs.px.tolist()
    pty = arcs.py.tolist()
    bx0, by0, bx1, by1 = tm.box
    root = tm.root

    def arc_y(a, x):
        if kind[a] == 0:
            return ey0[a] + (x - ex0[a]) * (ey1[a] - ey0[a]) / (ex1[a] - ex0[a])
        cyy, cxy, cxx, cx_, cy_, c0_ = conic[a]
        ay_ = cyy
        by_ = cxy * x + cy_
        cc_ = cxx * x * x + cx_ * x + c0_
        if abs(ay_) <= 1e-300:
            if by_ == 0.0:
                return 0.5 * (ey0[a] + ey1[a])
            return -cc_ / by_
        disc = by_ * by_ - 4.0 * ay_ * cc_
        if disc < 0.0:
            disc = 0.0
        sq = math.sqrt(disc)
        r1 = (-by_ - sq) / (2.0 * ay_)
        r2 = (-by_ + sq) / (2.0 * ay_)
        if r1 > r2:
            r1, r2 = r2, r1
        return r1 if sel[a] == 0 else r2

    out = np.empty(len(qx), dtype=np.int32)
    qxl = np.asarray(qx, dtype=np.float64).tolist()
    qyl = np.asarray(qy, dtype=np.float64).tolist()
    for i in range(len(qxl)):
        x = qxl[i]
        y = qyl[i]
        if x < bx0:
            x = bx0
        elif x > bx1:
            x = bx1
        if y < by0:
            y = by0
        elif y > by1:
            y = by1
        node = root
        while True:
            t = ntype[node]
            if t == 2:
                out[i] = tsite[nkey[node]]
                break
            k = nkey[node]
            if t == 0:
                px = ptx[k]
                if x < px or (x == px and y < pty[k]):
                    node = nl[node]
                else:
                    node = nr[node]
            else:
                node = nl[node] if y > arc_y(k, x) else nr[node]
    return out
