"""Backend selection for the integer matrix kernels.

The compiled extension is used when it imports; otherwise the pure-Python
module is.  Set ``COXCLUSTER_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _pykernels

_ext = None
if os.environ.get("COXCLUSTER_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _ext
    except ImportError:  # extension not built
        _ext = None

if _ext is not None:
    BACKEND = "cython"
    matmul = _ext.matmul
    matvec = _ext.matvec
    rank = _ext.rank
    rank_diff = _ext.rank_diff
else:
    BACKEND = "python"
    matmul = _pykernels.matmul
    matvec = _pykernels.matvec
    rank = _pykernels.rank
    rank_diff = _pykernels.rank_diff

__all__ = ["BACKEND", "matmul", "matvec", "rank", "rank_diff"]
