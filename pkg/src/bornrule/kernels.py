"""Kernel backend selection.

The compiled extension is used when it was built; otherwise the pure-Python
fallback. Set ``BORNRULE_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("BORNRULE_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels_c as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "cython" if _impl is not _kernels_py else "python"

count_below = _impl.count_below
batch_counts = _impl.batch_counts

__all__ = ["BACKEND", "count_below", "batch_counts"]
