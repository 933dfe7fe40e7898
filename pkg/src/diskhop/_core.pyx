# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False, language_level=3
"""Compiled kernel: sweep construction, arc extraction, point location.

Twin of ``diskhop._pure`` (same algorithms, same event ordering, same
tolerances); selected automatically at import when built.
"""

from libc.math cimport sqrt, fabs, log, atanh, asinh, cosh, sinh, copysign, hypot

import numpy as np

from ._kerneltypes import ArcSet, SweepResult, TrapMap
from .errors import DegenerateInstanceError

BACKEND = "compiled"

cdef double INF = float("inf")
cdef double _WMIN = 1e-12
cdef double _TPAST = 1e-12


cdef inline unsigned long long _mix64(unsigned long long* state) nogil:
    state[0] = state[0] + 0x9E3779B97F4A7C15ULL
    cdef unsigned long long z = state[0]
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

cdef class _Sweep:
    cdef double[::1] xs, ys, rs, key, bot
    cdef int n
    cdef unsigned long long rng

    cdef int[::1] a_site, a_prev, a_next, a_left, a_right, a_parent
    cdef int[::1] a_pending, a_gap_e, a_gap_s
    cdef unsigned long long[::1] a_prio
    cdef int n_arcs, cap_arcs, root

    cdef int[::1] e_a, e_b, e_v0, e_v1
    cdef int n_edges, cap_edges

    cdef double[::1] vx, vy, vd
    cdef int[::1] vs
    cdef int n_v, cap_v

    cdef int[::1] dominated

    # event records; the record index is the tie-break serial
    cdef double[::1] ev_t, ev_px, ev_py, ev_rho
    cdef int[::1] ev_kind, ev_arc
    cdef int n_ev, cap_ev
    cdef int[::1] heap
    cdef int n_heap
    cdef long pushed, popped, false_pops

    def __init__(self, xs, ys, rs, seed):
        cdef int n = len(xs)
        self.n = n
        self.xs = np.ascontiguousarray(xs, dtype=np.float64)
        self.ys = np.ascontiguousarray(ys, dtype=np.float64)
        self.rs = np.ascontiguousarray(rs, dtype=np.float64)
        key = np.empty(n, dtype=np.float64)
        bot = np.empty(n, dtype=np.float64)
        cdef int i
        for i in range(n):
            key[i] = self.ys[i] + self.rs[i]
            bot[i] = self.ys[i] - self.rs[i]
        self.key = key
        self.bot = bot
        self.rng = <unsigned long long> (seed * 2 + 1)

        self.cap_arcs = 2 * n + 8
        self.a_site = np.empty(self.cap_arcs, dtype=np.int32)
        self.a_prev = np.empty(self.cap_arcs, dtype=np.int32)
        self.a_next = np.empty(self.cap_arcs, dtype=np.int32)
        self.a_left = np.empty(self.cap_arcs, dtype=np.int32)
        self.a_right = np.empty(self.cap_arcs, dtype=np.int32)
        self.a_parent = np.empty(self.cap_arcs, dtype=np.int32)
        self.a_pending = np.empty(self.cap_arcs, dtype=np.int32)
        self.a_gap_e = np.empty(self.cap_arcs, dtype=np.int32)
        self.a_gap_s = np.empty(self.cap_arcs, dtype=np.int32)
        self.a_prio = np.empty(self.cap_arcs, dtype=np.uint64)
        self.n_arcs = 0
        self.root = -1

        self.cap_edges = 6 * n + 16
        self.e_a = np.empty(self.cap_edges, dtype=np.int32)
        self.e_b = np.empty(self.cap_edges, dtype=np.int32)
        self.e_v0 = np.empty(self.cap_edges, dtype=np.int32)
        self.e_v1 = np.empty(self.cap_edges, dtype=np.int32)
        self.n_edges = 0

        self.cap_v = 2 * n + 8
        self.vx = np.empty(self.cap_v, dtype=np.float64)
        self.vy = np.empty(self.cap_v, dtype=np.float64)
        self.vd = np.empty(self.cap_v, dtype=np.float64)
        self.vs = np.empty(3 * self.cap_v, dtype=np.int32)
        self.n_v = 0

        self.dominated = np.full(n, -1, dtype=np.int32)

        self.cap_ev = 14 * n + 64
        self.ev_t = np.empty(self.cap_ev, dtype=np.float64)
        self.ev_px = np.empty(self.cap_ev, dtype=np.float64)
        self.ev_py = np.empty(self.cap_ev, dtype=np.float64)
        self.ev_rho = np.empty(self.cap_ev, dtype=np.float64)
        self.ev_kind = np.empty(self.cap_ev, dtype=np.int32)
        self.ev_arc = np.empty(self.cap_ev, dtype=np.int32)
        self.n_ev = 0
        self.heap = np.empty(self.cap_ev, dtype=np.int32)
        self.n_heap = 0
        self.pushed = 0
        self.popped = 0
        self.false_pops = 0

    # -- growable storage ---------------------------------------------------

    cdef void _grow_edges(self):
        cdef int cap = self.cap_edges * 2
        for name in ("e_a", "e_b", "e_v0", "e_v1"):
            old = np.asarray(getattr(self, name))
            new = np.empty(cap, dtype=np.int32)
            new[:self.n_edges] = old[:self.n_edges]
            setattr(self, name, new)
        self.cap_edges = cap

    cdef void _grow_events(self):
        cdef int cap = self.cap_ev * 2
        for name, dt in (("ev_t", np.float64), ("ev_px", np.float64),
                         ("ev_py", np.float64), ("ev_rho", np.float64),
                         ("ev_kind", np.int32), ("ev_arc", np.int32),
                         ("heap", np.int32)):
            old = np.asarray(getattr(self, name))
            new = np.empty(cap, dtype=dt)
            new[:self.cap_ev] = old
            setattr(self, name, new)
        self.cap_ev = cap

    # -- treap ----------------------------------------------------------------

    cdef int _new_arc(self, int site):
        cdef int i = self.n_arcs
        if i >= self.cap_arcs:
            raise DegenerateInstanceError("beach line overflow")
        self.n_arcs += 1
        self.a_site[i] = site
        self.a_prev[i] = -1
        self.a_next[i] = -1
        self.a_left[i] = -1
        self.a_right[i] = -1
        self.a_parent[i] = -1
        self.a_pending[i] = -1
        self.a_gap_e[i] = -1
        self.a_gap_s[i] = -1
        self.a_prio[i] = _mix64(&self.rng)
        return i

    cdef void _rotate(self, int j):
        cdef int p = self.a_parent[j]
        cdef int g = self.a_parent[p]
        cdef int b
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

    cdef void _bubble_up(self, int j):
        while self.a_parent[j] != -1 and self.a_prio[j] < self.a_prio[self.a_parent[j]]:
            self._rotate(j)

    cdef void _tree_insert_after(self, int i, int j):
        cdef int k
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

    cdef void _tree_insert_before(self, int i, int j):
        cdef int k
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

    cdef void _tree_remove(self, int i):
        cdef int l, r, c, p
        while self.a_left[i] != -1 or self.a_right[i] != -1:
            l = self.a_left[i]
            r = self.a_right[i]
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

    # -- beach geometry -------------------------------------------------------

    cdef double _bp_x(self, int i, int j, double t):
        cdef int u = self.a_site[i]
        cdef int v = self.a_site[j]
        cdef double ux = self.xs[u], uy = self.ys[u]
        cdef double vx = self.xs[v], vy = self.ys[v]
        cdef double du = self.key[u] - t
        cdef double dv = self.key[v] - t
        if du == 0.0 and dv == 0.0:
            return 0.5 * (ux + vx)
        cdef double qa = dv - du
        cdef double qb = -2.0 * (dv * ux - du * vx)
        cdef double qc = dv * ux * ux - du * vx * vx + du * dv * (self.bot[u] - self.bot[v])
        if fabs(qa) <= 1e-16 * (fabs(du) + fabs(dv)):
            if qb == 0.0:
                return 0.5 * (ux + vx)
            return -qc / qb
        cdef double disc = qb * qb - 4.0 * qa * qc
        if disc < 0.0:
            disc = 0.0
        cdef double sq = sqrt(disc)
        cdef double den
        if qb >= 0.0:
            den = qb + sq
            if den == 0.0:
                return -qb / (2.0 * qa)
            return -2.0 * qc / den
        return (sq - qb) / (2.0 * qa)

    cdef double _front_y(self, int i, double x, double t):
        cdef int u = self.a_site[i]
        cdef double ux = self.xs[u], uy = self.ys[u], ur = self.rs[u]
        cdef double d = self.key[u] - t
        cdef double c = t - ur
        cdef double dx
        if d == 0.0:
            return uy if x == ux else INF
        dx = x - ux
        return dx * dx / (2.0 * d) + 0.5 * (uy + c)

    cdef int _find_arc(self, double x, double t):
        cdef int i = self.root
        cdef int p, nx
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

    # -- events ------------------------------------------------------------

    cdef int _new_edge(self, int sa, int sb):
        if self.n_edges >= self.cap_edges:
            self._grow_edges()
        cdef int e = self.n_edges
        self.n_edges += 1
        self.e_a[e] = sa
        self.e_b[e] = sb
        self.e_v0[e] = -1
        self.e_v1[e] = -1
        return e

    cdef void _heap_push(self, int ev):
        cdef int i = self.n_heap
        cdef int p
        self.n_heap += 1
        self.heap[i] = ev
        while i > 0:
            p = (i - 1) >> 1
            if self._ev_before(self.heap[i], self.heap[p]):
                self.heap[i], self.heap[p] = self.heap[p], self.heap[i]
                i = p
            else:
                break
        self.pushed += 1

    cdef bint _ev_before(self, int a, int b):
        if self.ev_t[a] != self.ev_t[b]:
            return self.ev_t[a] > self.ev_t[b]
        if self.ev_kind[a] != self.ev_kind[b]:
            return self.ev_kind[a] < self.ev_kind[b]
        return a < b

    cdef int _heap_pop(self):
        cdef int top = self.heap[0]
        cdef int i = 0, c
        self.n_heap -= 1
        self.heap[0] = self.heap[self.n_heap]
        while True:
            c = 2 * i + 1
            if c >= self.n_heap:
                break
            if c + 1 < self.n_heap and self._ev_before(self.heap[c + 1], self.heap[c]):
                c += 1
            if self._ev_before(self.heap[c], self.heap[i]):
                self.heap[i], self.heap[c] = self.heap[c], self.heap[i]
                i = c
            else:
                break
        self.popped += 1
        return top

    cdef int _push_event(self, double t, int kind, int arc,
                         double px, double py, double rho):
        if self.n_ev >= self.cap_ev:
            self._grow_events()
        cdef int ev = self.n_ev
        self.n_ev += 1
        self.ev_t[ev] = t
        self.ev_kind[ev] = kind
        self.ev_arc[ev] = arc
        self.ev_px[ev] = px
        self.ev_py[ev] = py
        self.ev_rho[ev] = rho
        self._heap_push(ev)
        return ev

    cdef int _circle_candidates(self, int sa, int sb, int sc,
                                double* opx, double* opy, double* orho):
        """Up to two polished equidistant points; returns the count."""
        cdef double ux = self.xs[sa], uy = self.ys[sa], ur = self.rs[sa]
        cdef double a11 = 2.0 * (self.xs[sb] - ux)
        cdef double a12 = 2.0 * (self.ys[sb] - uy)
        cdef double b1 = (self.xs[sb] * self.xs[sb] + self.ys[sb] * self.ys[sb]) \
            - (ux * ux + uy * uy) + ur * ur - self.rs[sb] * self.rs[sb]
        cdef double c1 = 2.0 * (ur - self.rs[sb])
        cdef double a21 = 2.0 * (self.xs[sc] - ux)
        cdef double a22 = 2.0 * (self.ys[sc] - uy)
        cdef double b2 = (self.xs[sc] * self.xs[sc] + self.ys[sc] * self.ys[sc]) \
            - (ux * ux + uy * uy) + ur * ur - self.rs[sc] * self.rs[sc]
        cdef double c2 = 2.0 * (ur - self.rs[sc])
        cdef double det = a11 * a22 - a12 * a21
        cdef double span = max(fabs(a11), fabs(a12), fabs(a21), fabs(a22), 1e-300)
        if fabs(det) <= 1e-14 * span * span:
            return 0
        cdef double p0x = (b1 * a22 - b2 * a12) / det
        cdef double p0y = (a11 * b2 - a21 * b1) / det
        cdef double p1x = (c1 * a22 - c2 * a12) / det
        cdef double p1y = (a11 * c2 - a21 * c1) / det
        cdef double qa = p1x * p1x + p1y * p1y - 1.0
        cdef double qb = 2.0 * ((p0x - ux) * p1x + (p0y - uy) * p1y) - 2.0 * ur
        cdef double qc = (p0x - ux) * (p0x - ux) + (p0y - uy) * (p0y - uy) - ur * ur
        cdef double roots[2]
        cdef int n_roots = 0
        cdef double disc, sq, q
        if fabs(qa) <= 1e-14 * max(fabs(qb), fabs(qc), 1.0):
            if qb != 0.0:
                roots[0] = -qc / qb
                n_roots = 1
        else:
            disc = qb * qb - 4.0 * qa * qc
            if disc >= 0.0:
                sq = sqrt(disc)
                q = -(qb + copysign(sq, qb)) / 2.0 if qb != 0.0 else sq / 2.0
                roots[0] = q / qa
                n_roots = 1
                if q != 0.0:
                    roots[1] = qc / q
                    n_roots = 2
        cdef double rmin = min(ur, self.rs[sb], self.rs[sc])
        cdef int cnt = 0
        cdef int k
        cdef double rho, px, py, lu
        for k in range(n_roots):
            rho = roots[k]
            if rho + rmin < -1e-9:
                continue
            px = p0x + rho * p1x
            py = p0y + rho * p1y
            self._polish(&px, &py, sa, sb, sc)
            lu = sqrt((px - ux) * (px - ux) + (py - uy) * (py - uy))
            rho = lu - ur
            if cnt == 1 and fabs(opx[0] - px) < 1e-12 and fabs(opy[0] - py) < 1e-12:
                continue
            opx[cnt] = px
            opy[cnt] = py
            orho[cnt] = rho
            cnt += 1
        return cnt

    cdef void _polish(self, double* px, double* py, int sa, int sb, int sc):
        cdef double x = px[0], y = py[0]
        cdef double lu, lv, lw, f1, f2, j11, j12, j21, j22, det
        cdef int it
        for it in range(2):
            lu = hypot(x - self.xs[sa], y - self.ys[sa])
            lv = hypot(x - self.xs[sb], y - self.ys[sb])
            lw = hypot(x - self.xs[sc], y - self.ys[sc])
            if lu == 0.0 or lv == 0.0 or lw == 0.0:
                break
            f1 = (lu - self.rs[sa]) - (lv - self.rs[sb])
            f2 = (lu - self.rs[sa]) - (lw - self.rs[sc])
            j11 = (x - self.xs[sa]) / lu - (x - self.xs[sb]) / lv
            j12 = (y - self.ys[sa]) / lu - (y - self.ys[sb]) / lv
            j21 = (x - self.xs[sa]) / lu - (x - self.xs[sc]) / lw
            j22 = (y - self.ys[sa]) / lu - (y - self.ys[sc]) / lw
            det = j11 * j22 - j12 * j21
            if fabs(det) < 1e-300:
                break
            x -= (f1 * j22 - f2 * j12) / det
            y -= (j11 * f2 - j21 * f1) / det
        px[0] = x
        py[0] = y

    cdef void _refresh_event(self, int m, double t_now):
        self.a_pending[m] = -1
        cdef int p = self.a_prev[m]
        cdef int q = self.a_next[m]
        if p == -1 or q == -1:
            return
        cdef int sa = self.a_site[p]
        cdef int sb = self.a_site[m]
        cdef int sc = self.a_site[q]
        if sa == sc:
            return
        cdef double cpx[2]
        cdef double cpy[2]
        cdef double crho[2]
        cdef int cnt = self._circle_candidates(sa, sb, sc, cpx, cpy, crho)
        cdef double best_t = 0.0, best_px = 0.0, best_py = 0.0, best_rho = 0.0
        cdef bint have = False
        cdef int k
        cdef double ts, da, db, dc, s_a, s_b, s_c
        for k in range(cnt):
            ts = cpy[k] - crho[k]
            if ts > t_now + _TPAST:
                continue
            da = self.key[sa] - ts
            db = self.key[sb] - ts
            dc = self.key[sc] - ts
            if da <= 0.0 or db <= 0.0 or dc <= 0.0:
                continue
            s_a = (cpx[k] - self.xs[sa]) / da
            s_b = (cpx[k] - self.xs[sb]) / db
            s_c = (cpx[k] - self.xs[sc]) / dc
            if s_a > s_b and s_b > s_c:
                if not have or ts > best_t:
                    have = True
                    best_t = ts
                    best_px = cpx[k]
                    best_py = cpy[k]
                    best_rho = crho[k]
        if have:
            if best_t > t_now:
                best_t = t_now
            self.a_pending[m] = self._push_event(best_t, 1, m, best_px,
                                                 best_py, best_rho)

    cdef void _site_event(self, int v) except *:
        cdef double t = self.key[v]
        cdef double vx = self.xs[v], vy = self.ys[v]
        cdef int i, si, j, k, nxt, prv, old, e, e1, e2
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
                    self.e_a[old] = -1
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

    cdef void _set_edge_end(self, int e, int slot, int vtx):
        if slot == 0:
            self.e_v0[e] = vtx
        else:
            self.e_v1[e] = vtx

    cdef void _circle_event(self, int m, double px, double py, double rho,
                            double t) except *:
        cdef int p = self.a_prev[m]
        cdef int q = self.a_next[m]
        if self.n_v >= self.cap_v:
            raise DegenerateInstanceError("vertex overflow")
        cdef int vtx = self.n_v
        self.n_v += 1
        self.vx[vtx] = px
        self.vy[vtx] = py
        self.vd[vtx] = rho
        self.vs[3 * vtx] = self.a_site[p]
        self.vs[3 * vtx + 1] = self.a_site[m]
        self.vs[3 * vtx + 2] = self.a_site[q]
        self._set_edge_end(self.a_gap_e[p], self.a_gap_s[p], vtx)
        self._set_edge_end(self.a_gap_e[m], self.a_gap_s[m], vtx)
        self._tree_remove(m)
        self.a_next[p] = q
        self.a_prev[q] = p
        cdef int e2 = self._new_edge(self.a_site[p], self.a_site[q])
        self.e_v0[e2] = vtx
        self.a_gap_e[p] = e2
        self.a_gap_s[p] = 1
        self._refresh_event(p, t)
        self._refresh_event(q, t)

    def run(self):
        cdef int v, ev
        for v in range(self.n):
            self._push_event(self.key[v], 0, v, 0.0, 0.0, 0.0)
        while self.n_heap > 0:
            ev = self._heap_pop()
            if self.ev_kind[ev] == 0:
                self._site_event(self.ev_arc[ev])
            else:
                if self.a_pending[self.ev_arc[ev]] != ev:
                    self.false_pops += 1
                    continue
                self.a_pending[self.ev_arc[ev]] = -1
                self._circle_event(self.ev_arc[ev], self.ev_px[ev],
                                   self.ev_py[ev], self.ev_rho[ev],
                                   self.ev_t[ev])

    def result(self):
        keep = np.nonzero(np.asarray(self.e_a[:self.n_edges]) != -1)[0]
        vs = np.asarray(self.vs[:3 * self.n_v]).reshape(self.n_v, 3).copy()
        return SweepResult(
            dominated=np.asarray(self.dominated).copy(),
            vx=np.asarray(self.vx[:self.n_v]).copy(),
            vy=np.asarray(self.vy[:self.n_v]).copy(),
            vdist=np.asarray(self.vd[:self.n_v]).copy(),
            vsites=vs,
            ea=np.asarray(self.e_a[:self.n_edges])[keep].astype(np.int32),
            eb=np.asarray(self.e_b[:self.n_edges])[keep].astype(np.int32),
            ev0=np.asarray(self.e_v0[:self.n_edges])[keep].astype(np.int32),
            ev1=np.asarray(self.e_v1[:self.n_edges])[keep].astype(np.int32),
            events_pushed=self.pushed,
            events_popped=self.popped,
            false_pops=self.false_pops,
        )


def sweep(xs, ys, rs, seed=1):
    s = _Sweep(np.asarray(xs, dtype=np.float64),
               np.asarray(ys, dtype=np.float64),
               np.asarray(rs, dtype=np.float64), seed)
    s.run()
    return s.result()


# ---------------------------------------------------------------------------
# arc extraction
# ---------------------------------------------------------------------------

cdef int _hyp_wall_params(double A, double B, double C, double* out):
    cdef double ca = A + B
    cdef double cb = -2.0 * C
    cdef double cc = A - B
    cdef int n = 0
    cdef double disc, sq, q, z
    if fabs(ca) < 1e-15 * max(fabs(cb), fabs(cc), 1.0):
        if cb != 0.0:
            z = -cc / cb
            if z > 0.0:
                out[n] = log(z)
                n += 1
        return n
    disc = cb * cb - 4.0 * ca * cc
    if disc < 0.0:
        return 0
    sq = sqrt(disc)
    q = -(cb + copysign(sq, cb)) / 2.0 if cb != 0.0 else sq / 2.0
    z = q / ca
    if z > 0.0:
        out[n] = log(z)
        n += 1
    z = (cc / q) if q != 0.0 else -1.0
    if z > 0.0:
        out[n] = log(z)
        n += 1
    return n


cdef class _ArcBuf:
    cdef public list kind, ex0, ey0, ex1, ey1, conic, sel, above, below, lp, rp, edge
    def __init__(self):
        self.kind = []
        self.ex0 = []
        self.ey0 = []
        self.ex1 = []
        self.ey1 = []
        self.conic = []
        self.sel = []
        self.above = []
        self.below = []
        self.lp = []
        self.rp = []
        self.edge = []


def build_arcs(xs, ys, rs, sw, box):
    cdef double[::1] X = np.ascontiguousarray(xs, dtype=np.float64)
    cdef double[::1] Y = np.ascontiguousarray(ys, dtype=np.float64)
    cdef double[::1] R = np.ascontiguousarray(rs, dtype=np.float64)
    cdef double bx0 = box[0], by0 = box[1], bx1 = box[2], by1 = box[3]
    cdef int[::1] ea = np.ascontiguousarray(sw.ea, dtype=np.int32)
    cdef int[::1] eb = np.ascontiguousarray(sw.eb, dtype=np.int32)
    cdef int[::1] ev0 = np.ascontiguousarray(sw.ev0, dtype=np.int32)
    cdef int[::1] ev1 = np.ascontiguousarray(sw.ev1, dtype=np.int32)
    cdef int[:, ::1] vsites = np.ascontiguousarray(sw.vsites, dtype=np.int32).reshape(-1, 3)
    cdef int nv = len(sw.vx)
    cdef int ne = len(sw.ea)

    # endpoint table: vertices first, then clip/split points
    cdef int cap_pt = nv + 4 * ne + 16
    pt_x_arr = np.empty(cap_pt, dtype=np.float64)
    pt_y_arr = np.empty(cap_pt, dtype=np.float64)
    cdef double[::1] ptx = pt_x_arr
    cdef double[::1] pty = pt_y_arr
    cdef int n_pt = nv
    cdef int ii
    for ii in range(nv):
        ptx[ii] = sw.vx[ii]
        pty[ii] = sw.vy[ii]

    cdef int cap_arc = 2 * ne + 16
    kind_arr = np.empty(cap_arc, dtype=np.int8)
    ex0_arr = np.empty(cap_arc, dtype=np.float64)
    ey0_arr = np.empty(cap_arc, dtype=np.float64)
    ex1_arr = np.empty(cap_arc, dtype=np.float64)
    ey1_arr = np.empty(cap_arc, dtype=np.float64)
    conic_arr = np.zeros((cap_arc, 6), dtype=np.float64)
    sel_arr = np.empty(cap_arc, dtype=np.int8)
    above_arr = np.empty(cap_arc, dtype=np.int32)
    below_arr = np.empty(cap_arc, dtype=np.int32)
    lp_arr = np.empty(cap_arc, dtype=np.int32)
    rp_arr = np.empty(cap_arc, dtype=np.int32)
    edge_arr = np.empty(cap_arc, dtype=np.int32)
    cdef signed char[::1] kind_v = kind_arr
    cdef double[::1] ex0_v = ex0_arr
    cdef double[::1] ey0_v = ey0_arr
    cdef double[::1] ex1_v = ex1_arr
    cdef double[::1] ey1_v = ey1_arr
    cdef double[:, ::1] conic_v = conic_arr
    cdef signed char[::1] sel_v = sel_arr
    cdef int[::1] above_v = above_arr
    cdef int[::1] below_v = below_arr
    cdef int[::1] lp_v = lp_arr
    cdef int[::1] rp_v = rp_arr
    cdef int[::1] edge_v = edge_arr
    cdef int n_arc = 0

    cdef int e, a, b, vid, w, tri0, tri1, tri2
    cdef double ax, ay, ar, bx, by, br, dx, dy, duv, mx, my
    cdef double e1x, e1y, e2x, e2y, delta, cf, ah, bh2, bh, sgn
    cdef bint is_line
    cdef double lo, hi, t0, t1, tv, s
    cdef int lo_id, hi_id
    cdef double dpx, dpy, la, lw, fp, ch, sh, qx2, qy2, f, bestf
    cdef double bestdir, h, sdir
    cdef double cross[18]
    cdef int n_cross, ci
    cdef double bounds[22]
    cdef int n_bounds
    cdef double clo, chi, mid, pxm, pym, pad
    cdef int clo_id, chi_id
    cdef double Ax_, Bx_, Ay_, By_, t_ext, xm_, ym_
    cdef int mid_id
    cdef double d2, l1, l2, l0, cyy, cxy, cxx, cx_, cy_, c0_
    cdef double tp0, tp1, p0x, p0y, p1x, p1y, lx, ly, rx, ry
    cdef int id0, id1, lpid, rpid
    cdef double tm, pmx, pmy, exl, eyl, exr, eyr, slope, fx, fy
    cdef double gx, gy, lb, dotv
    cdef int kk, sab, sbe, sel
    cdef double ay_, by_, cc_, disc, sq, r1, r2, ylo_, yhi_
    cdef int npieces, pc
    cdef double piece_t0[2]
    cdef double piece_t1[2]
    cdef int piece_i0[2]
    cdef int piece_i1[2]

    for e in range(ne):
        a = ea[e]
        b = eb[e]
        ax = X[a]; ay = Y[a]; ar = R[a]
        bx = X[b]; by = Y[b]; br = R[b]
        dx = bx - ax; dy = by - ay
        duv = hypot(dx, dy)
        if duv == 0.0:
            continue
        mx = 0.5 * (ax + bx); my = 0.5 * (ay + by)
        e1x = dx / duv; e1y = dy / duv
        e2x = -e1y; e2y = e1x
        delta = ar - br
        is_line = delta == 0.0
        if is_line:
            ah = 0.0; bh = 1.0; sgn = 1.0
        else:
            cf = 0.5 * duv
            ah = 0.5 * fabs(delta)
            bh2 = cf * cf - ah * ah
            if bh2 <= 0.0:
                continue
            bh = sqrt(bh2)
            sgn = 1.0 if delta > 0.0 else -1.0

        # parameter interval with endpoint identities
        if ev0[e] != -1 and ev1[e] != -1:
            s = (ptx[ev0[e]] - mx) * e2x + (pty[ev0[e]] - my) * e2y
            t0 = s if is_line else asinh(s / bh)
            s = (ptx[ev1[e]] - mx) * e2x + (pty[ev1[e]] - my) * e2y
            t1 = s if is_line else asinh(s / bh)
            if t0 == t1:
                continue
            if t0 < t1:
                lo = t0; hi = t1; lo_id = ev0[e]; hi_id = ev1[e]
            else:
                lo = t1; hi = t0; lo_id = ev1[e]; hi_id = ev0[e]
        elif ev0[e] == -1 and ev1[e] == -1:
            lo = -INF; hi = INF; lo_id = -1; hi_id = -1
        else:
            vid = ev0[e] if ev0[e] != -1 else ev1[e]
            s = (ptx[vid] - mx) * e2x + (pty[vid] - my) * e2y
            tv = s if is_line else asinh(s / bh)
            tri0 = vsites[vid, 0]; tri1 = vsites[vid, 1]; tri2 = vsites[vid, 2]
            w = tri0 if (tri0 != a and tri0 != b) else (
                tri1 if (tri1 != a and tri1 != b) else tri2)
            pxm = ptx[vid]; pym = pty[vid]
            if is_line:
                dpx = e2x; dpy = e2y
            else:
                ch = cosh(tv); sh = sinh(tv)
                dpx = sgn * e1x * ah * sh + e2x * bh * ch
                dpy = sgn * e1y * ah * sh + e2y * bh * ch
            la = hypot(pxm - ax, pym - ay)
            lw = hypot(pxm - X[w], pym - Y[w])
            fp = 0.0
            if la > 1e-300 and lw > 1e-300:
                fp = (dpx * ((pxm - ax) / la - (pxm - X[w]) / lw)
                      + dpy * ((pym - ay) / la - (pym - Y[w]) / lw))
            if fabs(fp) < 1e-12:
                bestf = INF
                bestdir = 1.0
                for kk in range(4):
                    h = 1.0 if kk < 2 else 4.0
                    sdir = 1.0 if kk % 2 == 0 else -1.0
                    if is_line:
                        qx2 = mx + e2x * (tv + sdir * h)
                        qy2 = my + e2y * (tv + sdir * h)
                    else:
                        ch = cosh(tv + sdir * h); sh = sinh(tv + sdir * h)
                        qx2 = mx + sgn * e1x * ah * ch + e2x * bh * sh
                        qy2 = my + sgn * e1y * ah * ch + e2y * bh * sh
                    f = (hypot(qx2 - ax, qy2 - ay) - ar
                         - hypot(qx2 - X[w], qy2 - Y[w]) + R[w])
                    if f < bestf:
                        bestf = f
                        bestdir = sdir
                fp = -bestdir
            if fp < 0.0:
                lo = tv; hi = INF; lo_id = vid; hi_id = -1
            else:
                lo = -INF; hi = tv; lo_id = -1; hi_id = vid

        # clip to the box
        n_cross = 0
        if is_line:
            if e2x != 0.0:
                cross[n_cross] = (bx0 - mx) / e2x; n_cross += 1
                cross[n_cross] = (bx1 - mx) / e2x; n_cross += 1
            if e2y != 0.0:
                cross[n_cross] = (by0 - my) / e2y; n_cross += 1
                cross[n_cross] = (by1 - my) / e2y; n_cross += 1
        else:
            Ax_ = sgn * e1x * ah
            Bx_ = e2x * bh
            Ay_ = sgn * e1y * ah
            By_ = e2y * bh
            n_cross += _hyp_wall_params(Ax_, Bx_, bx0 - mx, &cross[n_cross])
            n_cross += _hyp_wall_params(Ax_, Bx_, bx1 - mx, &cross[n_cross])
            n_cross += _hyp_wall_params(Ay_, By_, by0 - my, &cross[n_cross])
            n_cross += _hyp_wall_params(Ay_, By_, by1 - my, &cross[n_cross])
        n_bounds = 0
        for ci in range(n_cross):
            if lo < cross[ci] < hi:
                bounds[n_bounds] = cross[ci]
                n_bounds += 1
        if lo != -INF:
            bounds[n_bounds] = lo; n_bounds += 1
        if hi != INF:
            bounds[n_bounds] = hi; n_bounds += 1
        # insertion sort (tiny arrays)
        for ci in range(1, n_bounds):
            mid = bounds[ci]
            kk = ci - 1
            while kk >= 0 and bounds[kk] > mid:
                bounds[kk + 1] = bounds[kk]
                kk -= 1
            bounds[kk + 1] = mid
        clo = INF; chi = -INF
        pad = 1e-12
        for ci in range(n_bounds - 1):
            mid = 0.5 * (bounds[ci] + bounds[ci + 1])
            if is_line:
                qx2 = mx + e2x * mid; qy2 = my + e2y * mid
            else:
                ch = cosh(mid); sh = sinh(mid)
                qx2 = mx + sgn * e1x * ah * ch + e2x * bh * sh
                qy2 = my + sgn * e1y * ah * ch + e2y * bh * sh
            if bx0 - pad <= qx2 <= bx1 + pad and by0 - pad <= qy2 <= by1 + pad:
                if clo == INF:
                    clo = bounds[ci]
                chi = bounds[ci + 1]
        if clo == INF or chi <= clo:
            continue
        clo_id = lo_id if clo == lo else -1
        chi_id = hi_id if chi == hi else -1

        npieces = 1
        piece_t0[0] = clo; piece_i0[0] = clo_id
        piece_t1[0] = chi; piece_i1[0] = chi_id
        if not is_line:
            Ax_ = sgn * e1x * ah
            Bx_ = e2x * bh
            if fabs(Ax_) > fabs(Bx_):
                t_ext = atanh(-Bx_ / Ax_)
                if clo + 1e-13 < t_ext < chi - 1e-13:
                    ch = cosh(t_ext); sh = sinh(t_ext)
                    xm_ = mx + sgn * e1x * ah * ch + e2x * bh * sh
                    ym_ = my + sgn * e1y * ah * ch + e2y * bh * sh
                    if n_pt >= cap_pt:
                        raise MemoryError("point table overflow")
                    mid_id = n_pt
                    ptx[mid_id] = xm_; pty[mid_id] = ym_
                    n_pt += 1
                    npieces = 2
                    piece_t1[0] = t_ext; piece_i1[0] = mid_id
                    piece_t0[1] = t_ext; piece_i0[1] = mid_id
                    piece_t1[1] = chi; piece_i1[1] = chi_id

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

        for pc in range(npieces):
            tp0 = piece_t0[pc]; id0 = piece_i0[pc]
            tp1 = piece_t1[pc]; id1 = piece_i1[pc]
            if id0 != -1:
                p0x = ptx[id0]; p0y = pty[id0]
            else:
                if is_line:
                    p0x = mx + e2x * tp0; p0y = my + e2y * tp0
                else:
                    ch = cosh(tp0); sh = sinh(tp0)
                    p0x = mx + sgn * e1x * ah * ch + e2x * bh * sh
                    p0y = my + sgn * e1y * ah * ch + e2y * bh * sh
                if n_pt >= cap_pt:
                    raise MemoryError("point table overflow")
                id0 = n_pt
                ptx[id0] = p0x; pty[id0] = p0y
                n_pt += 1
            if id1 != -1:
                p1x = ptx[id1]; p1y = pty[id1]
            else:
                if is_line:
                    p1x = mx + e2x * tp1; p1y = my + e2y * tp1
                else:
                    ch = cosh(tp1); sh = sinh(tp1)
                    p1x = mx + sgn * e1x * ah * ch + e2x * bh * sh
                    p1y = my + sgn * e1y * ah * ch + e2y * bh * sh
                if n_pt >= cap_pt:
                    raise MemoryError("point table overflow")
                id1 = n_pt
                ptx[id1] = p1x; pty[id1] = p1y
                n_pt += 1
            if (p0x, p0y, id0) <= (p1x, p1y, id1):
                lpid = id0; rpid = id1
                lx = p0x; ly = p0y; rx = p1x; ry = p1y
            else:
                lpid = id1; rpid = id0
                lx = p1x; ly = p1y; rx = p0x; ry = p0y
            tm = 0.5 * (tp0 + tp1)
            if is_line:
                pmx = mx + e2x * tm; pmy = my + e2y * tm
            else:
                ch = cosh(tm); sh = sinh(tm)
                pmx = mx + sgn * e1x * ah * ch + e2x * bh * sh
                pmy = my + sgn * e1y * ah * ch + e2y * bh * sh
            if rx - lx < _WMIN:
                if fabs(ry - ly) < _WMIN:
                    continue
                xm_ = 0.5 * (lx + rx)
                exl = xm_ - _WMIN; eyl = ly
                exr = xm_ + _WMIN; eyr = ry
                kk = 0
                slope = (eyr - eyl) / (exr - exl)
            elif is_line:
                exl = lx; eyl = ly; exr = rx; eyr = ry
                kk = 0
                slope = (eyr - eyl) / (exr - exl)
            else:
                exl = lx; eyl = ly; exr = rx; eyr = ry
                kk = 1
                fx = 2.0 * cxx * pmx + cxy * pmy + cx_
                fy = 2.0 * cyy * pmy + cxy * pmx + cy_
                slope = -fx / fy if fabs(fy) > 1e-300 else copysign(1e18, -fx)
            la = hypot(pmx - ax, pmy - ay)
            lb = hypot(pmx - bx, pmy - by)
            gx = (pmx - ax) / la - (pmx - bx) / lb
            gy = (pmy - ay) / la - (pmy - by) / lb
            dotv = gx * (-slope) + gy
            if dotv < 0.0:
                sab = a; sbe = b
            else:
                sab = b; sbe = a
            sel = 0
            if kk == 1:
                ay_ = cyy
                by_ = cxy * pmx + cy_
                cc_ = cxx * pmx * pmx + cx_ * pmx + c0_
                if fabs(ay_) > 1e-300:
                    disc = by_ * by_ - 4.0 * ay_ * cc_
                    if disc < 0.0:
                        disc = 0.0
                    sq = sqrt(disc)
                    r1 = (-by_ - sq) / (2.0 * ay_)
                    r2 = (-by_ + sq) / (2.0 * ay_)
                    if r1 > r2:
                        r1, r2 = r2, r1
                    ylo_ = r1; yhi_ = r2
                    sel = 0 if fabs(ylo_ - pmy) <= fabs(yhi_ - pmy) else 1
            if n_arc >= cap_arc:
                raise MemoryError("arc buffer overflow")
            kind_v[n_arc] = kk
            ex0_v[n_arc] = exl
            ey0_v[n_arc] = eyl
            ex1_v[n_arc] = exr
            ey1_v[n_arc] = eyr
            conic_v[n_arc, 0] = cyy
            conic_v[n_arc, 1] = cxy
            conic_v[n_arc, 2] = cxx
            conic_v[n_arc, 3] = cx_
            conic_v[n_arc, 4] = cy_
            conic_v[n_arc, 5] = c0_
            sel_v[n_arc] = sel
            above_v[n_arc] = sab
            below_v[n_arc] = sbe
            lp_v[n_arc] = lpid
            rp_v[n_arc] = rpid
            edge_v[n_arc] = e
            n_arc += 1

    return ArcSet(
        kind=kind_arr[:n_arc].copy(),
        ex0=ex0_arr[:n_arc].copy(), ey0=ey0_arr[:n_arc].copy(),
        ex1=ex1_arr[:n_arc].copy(), ey1=ey1_arr[:n_arc].copy(),
        conic=conic_arr[:n_arc].copy(),
        sel=sel_arr[:n_arc].copy(),
        above=above_arr[:n_arc].copy(), below=below_arr[:n_arc].copy(),
        lp=lp_arr[:n_arc].copy(), rp=rp_arr[:n_arc].copy(),
        edge=edge_arr[:n_arc].copy(),
        px=pt_x_arr[:n_pt].copy(), py=pt_y_arr[:n_pt].copy(),
    )


# ---------------------------------------------------------------------------
# trapezoidal map
# ---------------------------------------------------------------------------

cdef class _Traps:
    cdef signed char[::1] kind, sel
    cdef double[::1] ex0, ey0, ex1, ey1
    cdef double[:, ::1] conic
    cdef int[::1] above, below, alp, arp
    cdef double[::1] ptx, pty
    cdef int n_arcs

    cdef int[::1] t_top, t_bot, t_lp, t_rp, t_leaf
    cdef int n_trap, cap_trap
    cdef signed char[::1] n_type
    cdef int[::1] n_key, n_l, n_r
    cdef int n_node, cap_node
    cdef int root
    cdef double bx0, by0, bx1, by1

    def __init__(self, arcs, box):
        self.kind = np.ascontiguousarray(arcs.kind, dtype=np.int8)
        self.sel = np.ascontiguousarray(arcs.sel, dtype=np.int8)
        self.ex0 = np.ascontiguousarray(arcs.ex0, dtype=np.float64)
        self.ey0 = np.ascontiguousarray(arcs.ey0, dtype=np.float64)
        self.ex1 = np.ascontiguousarray(arcs.ex1, dtype=np.float64)
        self.ey1 = np.ascontiguousarray(arcs.ey1, dtype=np.float64)
        self.conic = np.ascontiguousarray(arcs.conic, dtype=np.float64).reshape(-1, 6)
        self.above = np.ascontiguousarray(arcs.above, dtype=np.int32)
        self.below = np.ascontiguousarray(arcs.below, dtype=np.int32)
        self.alp = np.ascontiguousarray(arcs.lp, dtype=np.int32)
        self.arp = np.ascontiguousarray(arcs.rp, dtype=np.int32)
        self.ptx = np.ascontiguousarray(arcs.px, dtype=np.float64)
        self.pty = np.ascontiguousarray(arcs.py, dtype=np.float64)
        self.n_arcs = len(arcs.kind)
        self.bx0 = box[0]; self.by0 = box[1]; self.bx1 = box[2]; self.by1 = box[3]

        cdef int m = max(self.n_arcs, 1)
        self.cap_trap = 8 * m + 16
        self.t_top = np.empty(self.cap_trap, dtype=np.int32)
        self.t_bot = np.empty(self.cap_trap, dtype=np.int32)
        self.t_lp = np.empty(self.cap_trap, dtype=np.int32)
        self.t_rp = np.empty(self.cap_trap, dtype=np.int32)
        self.t_leaf = np.empty(self.cap_trap, dtype=np.int32)
        self.n_trap = 0
        self.cap_node = 16 * m + 32
        self.n_type = np.empty(self.cap_node, dtype=np.int8)
        self.n_key = np.empty(self.cap_node, dtype=np.int32)
        self.n_l = np.empty(self.cap_node, dtype=np.int32)
        self.n_r = np.empty(self.cap_node, dtype=np.int32)
        self.n_node = 0
        cdef int t0 = self._new_trap(-1, -1, -1, -1)
        self.root = self.t_leaf[t0]

    cdef void _grow_traps(self):
        cdef int cap = self.cap_trap * 2
        for name in ("t_top", "t_bot", "t_lp", "t_rp", "t_leaf"):
            old = np.asarray(getattr(self, name))
            new = np.empty(cap, dtype=np.int32)
            new[:self.n_trap] = old[:self.n_trap]
            setattr(self, name, new)
        self.cap_trap = cap

    cdef void _grow_nodes(self):
        cdef int cap = self.cap_node * 2
        old = np.asarray(self.n_type)
        new = np.empty(cap, dtype=np.int8)
        new[:self.n_node] = old[:self.n_node]
        self.n_type = new
        for name in ("n_key", "n_l", "n_r"):
            old = np.asarray(getattr(self, name))
            new2 = np.empty(cap, dtype=np.int32)
            new2[:self.n_node] = old[:self.n_node]
            setattr(self, name, new2)
        self.cap_node = cap

    cdef int _new_node(self, int typ, int key, int l, int r):
        if self.n_node >= self.cap_node:
            self._grow_nodes()
        cdef int nd = self.n_node
        self.n_node += 1
        self.n_type[nd] = <signed char> typ
        self.n_key[nd] = key
        self.n_l[nd] = l
        self.n_r[nd] = r
        return nd

    cdef int _new_trap(self, int top, int bot, int lp, int rp):
        if self.n_trap >= self.cap_trap:
            self._grow_traps()
        cdef int t = self.n_trap
        self.n_trap += 1
        self.t_top[t] = top
        self.t_bot[t] = bot
        self.t_lp[t] = lp
        self.t_rp[t] = rp
        self.t_leaf[t] = self._new_node(2, t, -1, -1)
        return t

    cdef double arc_y(self, int a, double x):
        cdef double x0, y0, x1, y1
        cdef double ay_, by_, cc_, disc, sq, r1, r2
        if self.kind[a] == 0:
            x0 = self.ex0[a]; y0 = self.ey0[a]
            x1 = self.ex1[a]; y1 = self.ey1[a]
            return y0 + (x - x0) * (y1 - y0) / (x1 - x0)
        ay_ = self.conic[a, 0]
        by_ = self.conic[a, 1] * x + self.conic[a, 4]
        cc_ = self.conic[a, 2] * x * x + self.conic[a, 3] * x + self.conic[a, 5]
        if fabs(ay_) <= 1e-300:
            if by_ == 0.0:
                return 0.5 * (self.ey0[a] + self.ey1[a])
            return -cc_ / by_
        disc = by_ * by_ - 4.0 * ay_ * cc_
        if disc < 0.0:
            disc = 0.0
        sq = sqrt(disc)
        r1 = (-by_ - sq) / (2.0 * ay_)
        r2 = (-by_ + sq) / (2.0 * ay_)
        if r1 > r2:
            r1, r2 = r2, r1
        return r1 if self.sel[a] == 0 else r2

    cdef inline bint _lex_less(self, double x1, double y1, int i1,
                               double x2, double y2, int i2):
        if x1 != x2:
            return x1 < x2
        if y1 != y2:
            return y1 < y2
        return i1 < i2

    cdef double _slope_near(self, int a, int pid):
        cdef double x0 = self.ex0[a], x1 = self.ex1[a]
        cdef double h = 0.25 * (x1 - x0)
        cdef double xa, xb, ya, yb
        if self.alp[a] == pid:
            xa = x0; xb = x0 + h
        else:
            xa = x1 - h; xb = x1
        ya = self.arc_y(a, xa)
        yb = self.arc_y(a, xb)
        return (yb - ya) / (xb - xa)

    cdef int _locate_walk(self, double qx, double qy):
        cdef int node = self.root
        cdef int t, k
        while True:
            t = self.n_type[node]
            if t == 2:
                return self.n_key[node]
            k = self.n_key[node]
            if t == 0:
                node = self.n_l[node] if qx < self.ptx[k] else self.n_r[node]
            else:
                node = self.n_l[node] if qy > self.arc_y(k, qx) else self.n_r[node]

    cdef int _locate_endpoint(self, int pid, int arc):
        cdef double px = self.ptx[pid], py = self.pty[pid]
        cdef int node = self.root
        cdef int t, k
        cdef double sa, sb
        cdef bint above
        while True:
            t = self.n_type[node]
            if t == 2:
                return self.n_key[node]
            k = self.n_key[node]
            if t == 0:
                if k == pid:
                    node = self.n_r[node]
                else:
                    node = (self.n_l[node]
                            if self._lex_less(px, py, pid, self.ptx[k], self.pty[k], k)
                            else self.n_r[node])
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

    cdef bint _r_reached(self, int trap, int rid, double rx, double ry):
        cdef int w = self.t_rp[trap]
        if w == -1:
            return True
        if w == rid:
            return True
        return self._lex_less(rx, ry, rid, self.ptx[w], self.pty[w], w)

    cdef void insert(self, int a, int[::1] crossed_buf) except *:
        cdef int pid = self.alp[a], rid = self.arp[a]
        cdef double px = self.ptx[pid], py = self.pty[pid]
        cdef double rx = self.ptx[rid], ry = self.pty[rid]
        cdef int n_crossed = 1
        crossed_buf[0] = self._locate_endpoint(pid, a)
        cdef int w
        cdef double wx
        while not self._r_reached(crossed_buf[n_crossed - 1], rid, rx, ry):
            w = self.t_rp[crossed_buf[n_crossed - 1]]
            wx = self.ptx[w]
            if n_crossed >= crossed_buf.shape[0]:
                raise MemoryError("crossing buffer overflow")
            crossed_buf[n_crossed] = self._locate_walk(wx, self.arc_y(a, wx))
            n_crossed += 1

        cdef int first = crossed_buf[0]
        cdef int last = crossed_buf[n_crossed - 1]
        cdef int open_above = -1, open_below = -1
        cdef int idx, T, top, bot, tlp, trp, leaf, capL, capR
        cdef int part_lp, part_rp, ynode, sub, nxt
        cdef bint split_l, split_r

        for idx in range(n_crossed):
            T = crossed_buf[idx]
            top = self.t_top[T]; bot = self.t_bot[T]
            tlp = self.t_lp[T]; trp = self.t_rp[T]
            leaf = self.t_leaf[T]

            split_l = (T == first and tlp != pid
                       and (tlp == -1 or self._lex_less(
                           self.ptx[tlp], self.pty[tlp], tlp, px, py, pid)))
            split_r = (T == last and trp != rid
                       and (trp == -1 or self._lex_less(
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

            ynode = self._new_node(1, a, self.t_leaf[open_above],
                                   self.t_leaf[open_below])

            if T != last:
                nxt = crossed_buf[idx + 1]
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
            self.n_type[leaf] = self.n_type[sub]
            self.n_key[leaf] = self.n_key[sub]
            self.n_l[leaf] = self.n_l[sub]
            self.n_r[leaf] = self.n_r[sub]


def build_trapmap(arcs, xs, ys, rs, dominated, box, seed=1):
    cdef _Traps tb = _Traps(arcs, box)
    cdef int m = tb.n_arcs
    order_arr = np.arange(m, dtype=np.int32)
    cdef int[::1] order = order_arr
    cdef unsigned long long rng = <unsigned long long> (seed * 2 + 1)
    cdef int i, j
    cdef unsigned long long z
    for i in range(m - 1, 0, -1):
        z = _mix64(&rng)
        j = <int> (z % <unsigned long long> (i + 1))
        order[i], order[j] = order[j], order[i]
    crossed_arr = np.empty(max(64, 4 * m + 64), dtype=np.int32)
    cdef int[::1] crossed = crossed_arr
    for i in range(m):
        tb.insert(order[i], crossed)

    # labels
    cdef double[::1] X = np.ascontiguousarray(xs, dtype=np.float64)
    cdef double[::1] Y = np.ascontiguousarray(ys, dtype=np.float64)
    cdef double[::1] R = np.ascontiguousarray(rs, dtype=np.float64)
    cdef int[::1] dom = np.ascontiguousarray(dominated, dtype=np.int32)
    cdef int nsites = X.shape[0]
    site_arr = np.full(tb.n_trap, -1, dtype=np.int32)
    cdef int[::1] site = site_arr
    cdef int t, leaf, best, k2
    cdef double lxx, rxx, cx, cy, d, bd
    for t in range(tb.n_trap):
        leaf = tb.t_leaf[t]
        if tb.n_type[leaf] != 2 or tb.n_key[leaf] != t:
            continue
        if tb.t_bot[t] != -1:
            site[t] = tb.above[tb.t_bot[t]]
        elif tb.t_top[t] != -1:
            site[t] = tb.below[tb.t_top[t]]
        else:
            lxx = tb.ptx[tb.t_lp[t]] if tb.t_lp[t] != -1 else tb.bx0
            rxx = tb.ptx[tb.t_rp[t]] if tb.t_rp[t] != -1 else tb.bx1
            cx = 0.5 * (lxx + rxx)
            cy = 0.5 * (tb.by0 + tb.by1)
            best = -1
            bd = INF
            for k2 in range(nsites):
                if dom[k2] != -1:
                    continue
                d = hypot(cx - X[k2], cy - Y[k2]) - R[k2]
                if d < bd:
                    bd = d
                    best = k2
            site[t] = best
    return TrapMap(
        arcs=arcs,
        node_type=np.asarray(tb.n_type[:tb.n_node]).copy(),
        node_key=np.asarray(tb.n_key[:tb.n_node]).copy(),
        node_left=np.asarray(tb.n_l[:tb.n_node]).copy(),
        node_right=np.asarray(tb.n_r[:tb.n_node]).copy(),
        trap_site=site_arr,
        root=tb.root,
        box=tuple(box),
    )


def locate_many(tm, qx, qy):
    cdef signed char[::1] ntype = np.ascontiguousarray(tm.node_type, dtype=np.int8)
    cdef int[::1] nkey = np.ascontiguousarray(tm.node_key, dtype=np.int32)
    cdef int[::1] nl = np.ascontiguousarray(tm.node_left, dtype=np.int32)
    cdef int[::1] nr = np.ascontiguousarray(tm.node_right, dtype=np.int32)
    cdef int[::1] tsite = np.ascontiguousarray(tm.trap_site, dtype=np.int32)
    arcs = tm.arcs
    cdef signed char[::1] kind = np.ascontiguousarray(arcs.kind, dtype=np.int8)
    cdef signed char[::1] sel = np.ascontiguousarray(arcs.sel, dtype=np.int8)
    cdef double[::1] ex0 = np.ascontiguousarray(arcs.ex0, dtype=np.float64)
    cdef double[::1] ey0 = np.ascontiguousarray(arcs.ey0, dtype=np.float64)
    cdef double[::1] ex1 = np.ascontiguousarray(arcs.ex1, dtype=np.float64)
    cdef double[::1] ey1 = np.ascontiguousarray(arcs.ey1, dtype=np.float64)
    cdef double[:, ::1] conic = np.ascontiguousarray(arcs.conic, dtype=np.float64).reshape(-1, 6)
    cdef double[::1] ptx = np.ascontiguousarray(arcs.px, dtype=np.float64)
    cdef double[::1] pty = np.ascontiguousarray(arcs.py, dtype=np.float64)
    cdef double bx0 = tm.box[0], by0 = tm.box[1], bx1 = tm.box[2], by1 = tm.box[3]
    cdef int root = tm.root

    qx_arr = np.ascontiguousarray(qx, dtype=np.float64)
    qy_arr = np.ascontiguousarray(qy, dtype=np.float64)
    cdef double[::1] QX = qx_arr
    cdef double[::1] QY = qy_arr
    cdef int nq = QX.shape[0]
    out_arr = np.empty(nq, dtype=np.int32)
    cdef int[::1] out = out_arr

    cdef int i, node, t, k
    cdef double x, y, yv
    cdef double x0, y0, x1, y1, ay_, by_, cc_, disc, sq, r1, r2
    for i in range(nq):
        x = QX[i]
        y = QY[i]
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
                if x < ptx[k] or (x == ptx[k] and y < pty[k]):
                    node = nl[node]
                else:
                    node = nr[node]
            else:
                if kind[k] == 0:
                    x0 = ex0[k]; y0 = ey0[k]
                    x1 = ex1[k]; y1 = ey1[k]
                    yv = y0 + (x - x0) * (y1 - y0) / (x1 - x0)
                else:
                    ay_ = conic[k, 0]
                    by_ = conic[k, 1] * x + conic[k, 4]
                    cc_ = conic[k, 2] * x * x + conic[k, 3] * x + conic[k, 5]
                    if fabs(ay_) <= 1e-300:
                        yv = 0.5 * (ey0[k] + ey1[k]) if by_ == 0.0 else -cc_ / by_
                    else:
                        disc = by_ * by_ - 4.0 * ay_ * cc_
                        if disc < 0.0:
                            disc = 0.0
                        sq = sqrt(disc)
                        r1 = (-by_ - sq) / (2.0 * ay_)
                        r2 = (-by_ + sq) / (2.0 * ay_)
                        if r1 > r2:
                            r1, r2 = r2, r1
                        yv = r1 if sel[k] == 0 else r2
                node = nl[node] if y > yv else nr[node]
    return out_arr
