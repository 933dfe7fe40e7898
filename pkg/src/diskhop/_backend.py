"""Kernel selection: compiled extension when available, pure Python otherwise.

Override with DISKHOP_BACKEND=pure|compiled|auto.
"""

from __future__ import annotations

import os

from . import _pure


def _select():
    choice = os.environ.get("DISKHOP_BACKEND", "auto").lower()
    if choice == "pure":
        return _pure
    try:
        from . import _core
    except ImportError:
        if choice == "compiled":
            raise ImportError(
                "DISKHOP_BACKEND=compiled but diskhop._core is not built; "
                "run `pip install -e . --no-build-isolation`")
        return _pure
    return _core


kernel = _select()


def backend_name() -> str:
    return kernel.BACKEND


def get_kernel(name: str | None = None):
    """The active kernel module, or a specific one by name."""
    if name in (None, "auto"):
        return kernel
    if name == "pure":
        return _pure
    if name == "compiled":
        from . import _core
        return _core
    raise ValueError(f"unknown backend {name!r}")
