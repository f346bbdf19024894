"""Kernel selection: the compiled extension when it was built, else pure Python.

Set ``TUBEHYP_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"

if os.environ.get("TUBEHYP_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels
else:
    _impl = _pykernels

flood_fill_count = _impl.flood_fill_count
points_in_domain = _impl.points_in_domain

__all__ = ["BACKEND", "flood_fill_count", "points_in_domain"]
