"""Grid kernel backends.

The compiled Cython kernel is preferred when present; a NumPy fallback
is selected otherwise.  ``AUTOMETRIC_BACKEND`` forces the choice:
``cython`` (error if the extension is missing), ``python``, or ``auto``.
"""
from __future__ import annotations

import os

from . import grid_python


def load_backend(name: str):
    """Return the backend module for ``name`` ('python' or 'cython')."""
    if name == "python":
        return grid_python
    if name == "cython":
        from . import grid_cython

        return grid_cython
    raise ValueError(f"unknown backend {name!r}")


def _select():
    forced = os.environ.get("AUTOMETRIC_BACKEND", "auto").strip().lower()
    if forced in ("", "auto"):
        try:
            return load_backend("cython")
        except ImportError:
            return grid_python
    return load_backend(forced)


_active = _select()

eval_mf_array = _active.eval_mf_array
clipped_max_centroid = _active.clipped_max_centroid


def active_backend() -> str:
    """Name of the backend in use: 'cython' or 'python'."""
    return _active.NAME
