"""Geometric primitives for disks with additive weights.

Distances are measured as ``|p - center| - radius``.  The predicates that
reduce to polynomial sign tests after squaring (disk intersection,
domination) are evaluated exactly: a floating-point filter handles the
generic case and near-ties escalate to rational arithmetic.  Everything
involving two square roots (three-way comparisons, bisector geometry) uses
doubles with an explicit tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

# Relative tolerance for the double-precision comparisons.
EPS = 1e-9

# Comparisons whose float filter cannot certify a sign within this many
# ulp-scaled units escalate to exact arithmetic.
_FILTER = 1e-12

LESS, EQUAL, GREATER = -1, 0, 1

ARC_LINE = "line"
ARC_HYPERBOLA = "hyperbola"
ARC_EMPTY = "empty"


class Point(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class Site:
    """A weighted input point: disk center plus nonnegative radius."""

    id: int
    x: float
    y: float
    r: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"site {self.id}: non-finite center ({self.x}, {self.y})")
        if not (math.isfinite(self.r) and self.r >= 0):
            raise ValueError(f"site {self.id}: radius must be finite and >= 0, got {self.r}")

    @property
    def center(self) -> Point:
        return Point(self.x, self.y)


def check_sites(sites: list[Site]) -> None:
    """Require dense 0-based unique ids."""
    if not sites:
        raise ValueError("need at least one site")
    for i, s in enumerate(sites):
        if s.id != i:
            raise ValueError(f"site ids must be 0..n-1 in order; position {i} has id {s.id}")


def weighted_distance(p: Point | tuple[float, float], v: Site) -> float:
    """``|vp| - r_v``; negative when p lies inside the disk."""
    px, py = p
    return math.hypot(px - v.x, py - v.y) - v.r


def _exact_sq_cmp(dx: float, dy: float, rhs: float) -> int:
    """Exact sign of dx^2 + dy^2 - rhs^2 over rationals."""
    lhs = Fraction(dx) ** 2 + Fraction(dy) ** 2
    rr = Fraction(rhs) ** 2
    if lhs < rr:
        return LESS
    if lhs > rr:
        return GREATER
    return EQUAL


def _filtered_sq_cmp(dx: float, dy: float, rhs: float) -> int:
    """Sign of dx^2 + dy^2 - rhs^2, exact even at ties.

    The float path decides when the difference is safely outside the
    rounding envelope; otherwise the comparison is redone exactly.
    """
    lhs = dx * dx + dy * dy
    rr = rhs * rhs
    diff = lhs - rr
    err = _FILTER * (lhs + rr)
    if diff > err:
        return GREATER
    if diff < -err:
        return LESS
    return _exact_sq_cmp(dx, dy, rhs)


def edge_predicate(u: Site, v: Site) -> bool:
    """True iff the two disks intersect (tangency counts)."""
    if u.id == v.id:
        raise ValueError("edge_predicate needs two distinct sites")
    return _filtered_sq_cmp(u.x - v.x, u.y - v.y, u.r + v.r) <= 0


def domination_predicate(u: Site, v: Site) -> bool:
    """True iff v's region covers u's entirely (``|uv| <= r_v - r_u``).

    Coincident equal-radius sites tie-break by id: the smaller id wins, so
    the pair still resolves to exactly one dominated site.
    """
    if u.id == v.id:
        raise ValueError("domination_predicate needs two distinct sites")
    gap = v.r - u.r
    if gap < 0:
        return False
    cmp = _filtered_sq_cmp(u.x - v.x, u.y - v.y, gap)
    if cmp != EQUAL:
        return cmp == LESS
    # |uv| == r_v - r_u exactly.  Equal geometry defers to the id order;
    # otherwise the boundary case counts as dominated.
    if u.x == v.x and u.y == v.y and u.r == v.r:
        return v.id < u.id
    return True


def compare_weighted(p: Point | tuple[float, float], u: Site, v: Site,
                     scale: float = 1.0) -> int:
    """Order d_u(p) vs d_v(p): -1, 0, +1 with an ``EPS * scale`` dead band."""
    du = weighted_distance(p, u)
    dv = weighted_distance(p, v)
    if abs(du - dv) <= EPS * scale:
        return EQUAL
    return LESS if du < dv else GREATER


class EquidistantPoint(NamedTuple):
    point: Point
    distance: float


def apollonius_vertex(u: Site, v: Site, w: Site,
                      refine: bool = True) -> list[EquidistantPoint]:
    """All points weighted-equidistant from three sites, with that distance.

    Solved by reducing the two squared bisector equations to a linear
    family p(rho) and a quadratic in rho, then polishing each root with a
    couple of Newton steps.  Returns 0, 1, or 2 points; collinear centers
    generally yield at most one.
    """
    if len({u.id, v.id, w.id}) != 3:
        raise ValueError("apollonius_vertex needs three distinct sites")

    a11 = 2.0 * (v.x - u.x)
    a12 = 2.0 * (v.y - u.y)
    b1 = (v.x * v.x + v.y * v.y) - (u.x * u.x + u.y * u.y) + u.r * u.r - v.r * v.r
    c1 = 2.0 * (u.r - v.r)
    a21 = 2.0 * (w.x - u.x)
    a22 = 2.0 * (w.y - u.y)
    b2 = (w.x * w.x + w.y * w.y) - (u.x * u.x + u.y * u.y) + u.r * u.r - w.r * w.r
    c2 = 2.0 * (u.r - w.r)

    det = a11 * a22 - a12 * a21
    span = max(abs(a11), abs(a12), abs(a21), abs(a22), 1e-300)
    if abs(det) <= 1e-14 * span * span:
        return []  # collinear centers: no transversal solution we trust

    # p(rho) = p0 + rho * p1
    p0x = (b1 * a22 - b2 * a12) / det
    p0y = (a11 * b2 - a21 * b1) / det
    p1x = (c1 * a22 - c2 * a12) / det
    p1y = (a11 * c2 - a21 * c1) / det

    qa = p1x * p1x + p1y * p1y - 1.0
    qb = 2.0 * ((p0x - u.x) * p1x + (p0y - u.y) * p1y) - 2.0 * u.r
    qc = (p0x - u.x) ** 2 + (p0y - u.y) ** 2 - u.r * u.r

    roots: list[float] = []
    if abs(qa) <= 1e-14 * max(abs(qb), abs(qc), 1.0):
        if qb != 0.0:
            roots.append(-qc / qb)
    else:
        disc = qb * qb - 4.0 * qa * qc
        if disc < 0.0:
            if disc > -1e-12 * max(qb * qb, abs(4.0 * qa * qc)):
                disc = 0.0
            else:
                return []
        sq = math.sqrt(disc)
        q = -(qb + math.copysign(sq, qb)) / 2.0 if qb != 0.0 else sq / 2.0
        roots.append(q / qa)
        if q != 0.0:
            roots.append(qc / q)

    out: list[EquidistantPoint] = []
    rmin = min(u.r, v.r, w.r)
    for rho in roots:
        if rho + rmin < -1e-9:
            continue  # spurious branch introduced by squaring
        px = p0x + rho * p1x
        py = p0y + rho * p1y
        if refine:
            px, py = _refine_equidistant(px, py, u, v, w)
        d = weighted_distance((px, py), u)
        res = max(abs(d - weighted_distance((px, py), v)),
                  abs(d - weighted_distance((px, py), w)))
        if res > 1e-6 * max(1.0, abs(d)):
            continue
        if any(abs(px - o.point.x) < 1e-12 and abs(py - o.point.y) < 1e-12 for o in out):
            continue
        out.append(EquidistantPoint(Point(px, py), d))
    return out


def _refine_equidistant(px, py, u, v, w, iters: int = 3):
    """Newton steps on (d_u - d_v, d_u - d_w)."""
    for _ in range(iters):
        lu = math.hypot(px - u.x, py - u.y)
        lv = math.hypot(px - v.x, py - v.y)
        lw = math.hypot(px - w.x, py - w.y)
        if lu == 0.0 or lv == 0.0 or lw == 0.0:
            return px, py
        f1 = (lu - u.r) - (lv - v.r)
        f2 = (lu - u.r) - (lw - w.r)
        j11 = (px - u.x) / lu - (px - v.x) / lv
        j12 = (py - u.y) / lu - (py - v.y) / lv
        j21 = (px - u.x) / lu - (px - w.x) / lw
        j22 = (py - u.y) / lu - (py - w.y) / lw
        det = j11 * j22 - j12 * j21
        if abs(det) < 1e-300:
            return px, py
        px -= (f1 * j22 - f2 * j12) / det
        py -= (j11 * f2 - j21 * f1) / det
    return px, py


@dataclass(frozen=True)
class BisectorArc:
    """The locus of points weighted-equidistant from two sites.

    A straight line when the radii match, one hyperbola branch otherwise,
    or empty if one site dominates the other.  Parametrized as

        p(t) = M + sign * e1 * a * cosh(t) + e2 * b * sinh(t)   (hyperbola)
        p(t) = M + e2 * t                                        (line)

    which makes vertical-line intersection and x-monotone splitting cheap.
    """

    u: int
    v: int
    kind: str
    mx: float = 0.0
    my: float = 0.0
    e1x: float = 0.0
    e1y: float = 0.0
    e2x: float = 0.0
    e2y: float = 0.0
    a: float = 0.0
    b: float = 0.0
    sign: float = 1.0

    def point_at(self, t: float) -> Point:
        if self.kind == ARC_EMPTY:
            raise ValueError("empty bisector has no points")
        if self.kind == ARC_LINE:
            return Point(self.mx + self.e2x * t, self.my + self.e2y * t)
        ch, sh = math.cosh(t), math.sinh(t)
        return Point(self.mx + self.sign * self.e1x * self.a * ch + self.e2x * self.b * sh,
                     self.my + self.sign * self.e1y * self.a * ch + self.e2y * self.b * sh)

    def param_of(self, p: Point | tuple[float, float]) -> float:
        """Parameter of a point assumed to lie on the arc."""
        px, py = p
        s = (px - self.mx) * self.e2x + (py - self.my) * self.e2y
        if self.kind == ARC_LINE:
            return s
        return math.asinh(s / self.b)

    def vertical_line_params(self, x: float) -> list[float]:
        """Parameters where the arc crosses the vertical line at ``x``."""
        if self.kind == ARC_LINE:
            if self.e2x == 0.0:
                return []
            return [(x - self.mx) / self.e2x]
        A = self.sign * self.e1x * self.a
        B = self.e2x * self.b
        C = x - self.mx
        # A cosh t + B sinh t = C  ->  (A+B) z^2 - 2C z + (A-B) = 0, z = e^t
        ca, cb, cc = A + B, -2.0 * C, A - B
        out = []
        if abs(ca) < 1e-15 * max(abs(cb), abs(cc), 1.0):
            if cb != 0.0:
                z = -cc / cb
                if z > 0.0:
                    out.append(math.log(z))
            return out
        disc = cb * cb - 4.0 * ca * cc
        if disc < 0.0:
            return []
        sq = math.sqrt(disc)
        q = -(cb + math.copysign(sq, cb)) / 2.0 if cb != 0.0 else sq / 2.0
        for z in (q / ca, cc / q if q != 0.0 else -1.0):
            if z > 0.0:
                out.append(math.log(z))
        out.sort()
        return out

    def x_extremum_param(self) -> float | None:
        """Parameter of the single vertical tangent, if the branch has one."""
        if self.kind == ARC_LINE:
            return None
        A = self.sign * self.e1x * self.a
        B = self.e2x * self.b
        # x'(t) = A sinh t + B cosh t = 0  ->  tanh t = -B/A
        if abs(A) <= abs(B):
            return None
        return math.atanh(-B / A)

    def direction_at_infinity(self, positive: bool) -> Point:
        """Unit asymptote direction for t -> +inf or t -> -inf."""
        if self.kind == ARC_LINE:
            s = 1.0 if positive else -1.0
            return Point(s * self.e2x, s * self.e2y)
        if positive:
            dx = self.sign * self.e1x * self.a + self.e2x * self.b
            dy = self.sign * self.e1y * self.a + self.e2y * self.b
        else:
            dx = self.sign * self.e1x * self.a - self.e2x * self.b
            dy = self.sign * self.e1y * self.a - self.e2y * self.b
        norm = math.hypot(dx, dy)
        return Point(dx / norm, dy / norm)


def bisector(u: Site, v: Site) -> BisectorArc:
    """Construct the weighted bisector of two sites."""
    if u.id == v.id:
        raise ValueError("bisector needs two distinct sites")
    if domination_predicate(u, v) or domination_predicate(v, u):
        return BisectorArc(u.id, v.id, ARC_EMPTY)
    dx, dy = v.x - u.x, v.y - u.y
    duv = math.hypot(dx, dy)
    mx, my = (u.x + v.x) / 2.0, (u.y + v.y) / 2.0
    e1x, e1y = dx / duv, dy / duv
    e2x, e2y = -e1y, e1x
    delta = u.r - v.r
    if delta == 0.0:
        return BisectorArc(u.id, v.id, ARC_LINE, mx, my, e1x, e1y, e2x, e2y)
    cf = duv / 2.0
    a = abs(delta) / 2.0
    b = math.sqrt(max(cf * cf - a * a, 0.0))
    sign = 1.0 if delta > 0.0 else -1.0
    return BisectorArc(u.id, v.id, ARC_HYPERBOLA, mx, my, e1x, e1y, e2x, e2y, a, b, sign)


class Frame(NamedTuple):
    """Similarity transform between input and normalized coordinates."""

    ox: float
    oy: float
    scale: float  # normalized = (input - o) / scale

    def to_norm(self, x: float, y: float) -> tuple[float, float]:
        return (x - self.ox) / self.scale, (y - self.oy) / self.scale

    def to_input(self, x: float, y: float) -> tuple[float, float]:
        return x * self.scale + self.ox, y * self.scale + self.oy


def normalization_frame(sites: list[Site]) -> Frame:
    """Uniform scale/translate placing the disk bounding box in [0,1]^2.

    The aspect ratio is preserved (a single scale factor) so radii remain
    comparable to coordinates.
    """
    x0 = min(s.x - s.r for s in sites)
    x1 = max(s.x + s.r for s in sites)
    y0 = min(s.y - s.r for s in sites)
    y1 = max(s.y + s.r for s in sites)
    scale = max(x1 - x0, y1 - y0)
    if scale <= 0.0:
        scale = 1.0
    return Frame(x0, y0, scale)
