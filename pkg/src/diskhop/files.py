"""Flat-file formats: instances ("x y r" per line) and results ("id dist pred")."""

from __future__ import annotations

import numpy as np

from .errors import InputFormatError
from .geometry import Site
from .sssp import UNREACHED, LayerResult


def parse_instance(text: str) -> list[Site]:
    """Sites from text; ids follow the order of non-comment lines."""
    sites: list[Site] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise InputFormatError(
                f"expected 'x y r', got {len(parts)} fields", lineno)
        try:
            x, y, r = (float(p) for p in parts)
        except ValueError as exc:
            raise InputFormatError(str(exc), lineno) from None
        try:
            sites.append(Site(len(sites), x, y, r))
        except ValueError as exc:
            raise InputFormatError(str(exc), lineno) from None
    if not sites:
        raise InputFormatError("no sites in file")
    return sites


def read_instance(path: str) -> list[Site]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_instance(fh.read())


def format_instance(sites: list[Site]) -> str:
    return "".join(f"{s.x!r} {s.y!r} {s.r!r}\n" for s in sites)


def write_instance(path: str, sites: list[Site]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_instance(sites))


def format_result(result: LayerResult) -> str:
    lines = []
    for i in range(len(result.dist)):
        d = int(result.dist[i])
        p = int(result.pred[i])
        dtxt = "inf" if d == UNREACHED else str(d)
        ptxt = "-" if p < 0 else str(p)
        lines.append(f"{i} {dtxt} {ptxt}\n")
    return "".join(lines)


def write_result(path: str, result: LayerResult) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_result(result))


def parse_result(text: str) -> tuple[np.ndarray, np.ndarray]:
    """(dist, pred) arrays from a result file."""
    dist: list[int] = []
    pred: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise InputFormatError("expected 'id dist pred'", lineno)
        if int(parts[0]) != len(dist):
            raise InputFormatError("ids must be dense and ascending", lineno)
        dist.append(UNREACHED if parts[1] == "inf" else int(parts[1]))
        pred.append(-1 if parts[2] == "-" else int(parts[2]))
    return np.array(dist, dtype=np.int64), np.array(pred, dtype=np.int64)
