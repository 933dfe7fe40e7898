"""Array-level result containers shared by the compiled and pure kernels.

Both kernel implementations produce and consume these plain containers so
the rest of the package is backend-agnostic.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np


class SweepResult(NamedTuple):
    """Raw sweep output in normalized coordinates.

    Vertices carry the three defining site indices and the common weighted
    distance.  Edge endpoints are vertex indices or -1 for an unbounded
    end.  ``dominated[i]`` is a witness site index or -1.
    """

    dominated: np.ndarray      # int32 [n]
    vx: np.ndarray             # float64 [nv]
    vy: np.ndarray             # float64 [nv]
    vdist: np.ndarray          # float64 [nv]
    vsites: np.ndarray         # int32 [nv, 3]
    ea: np.ndarray             # int32 [ne]
    eb: np.ndarray             # int32 [ne]
    ev0: np.ndarray            # int32 [ne]
    ev1: np.ndarray            # int32 [ne]
    events_pushed: int
    events_popped: int
    false_pops: int


class ArcSet(NamedTuple):
    """Clipped x-monotone pieces of the diagram edges.

    ``kind`` 0 is a straight piece evaluated by endpoint interpolation,
    1 a hyperbolic piece evaluated through its implicit conic with a root
    selector.  ``ex*/ey*`` are evaluation endpoints (vertical pieces are
    widened symbolically); ``lp/rp`` index the true endpoint table.
    """

    kind: np.ndarray           # int8 [m]
    ex0: np.ndarray            # float64 [m]
    ey0: np.ndarray
    ex1: np.ndarray
    ey1: np.ndarray
    conic: np.ndarray          # float64 [m, 6]: cyy cxy cxx cx cy c0
    sel: np.ndarray            # int8 [m]: 0 lower root, 1 upper root
    above: np.ndarray          # int32 [m] site index above the piece
    below: np.ndarray          # int32 [m]
    lp: np.ndarray             # int32 [m] point ids
    rp: np.ndarray             # int32 [m]
    edge: np.ndarray           # int32 [m] originating edge index
    px: np.ndarray             # float64 [npts] endpoint table
    py: np.ndarray             # float64 [npts]


class TrapMap(NamedTuple):
    """Randomized trapezoidal decomposition with its search DAG."""

    arcs: ArcSet
    node_type: np.ndarray      # int8 [k]: 0 x-node, 1 y-node, 2 leaf
    node_key: np.ndarray       # int32 [k]: point / arc / trapezoid id
    node_left: np.ndarray      # int32 [k]
    node_right: np.ndarray     # int32 [k]
    trap_site: np.ndarray      # int32 [t] region label
    root: int
    box: tuple[float, float, float, float]
