"""Backend selection for the eigen-kernels.

The compiled extension is used when it was built; otherwise the pure-Python
twin. Set HARDYLAB_PURE_PYTHON=1 to force the fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py
if os.environ.get("HARDYLAB_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        pass
    else:
        _impl = _compiled
        BACKEND = "cython"

tridiag_matvec = _impl.tridiag_matvec
thomas_factor = _impl.thomas_factor
thomas_solve = _impl.thomas_solve
inverse_iteration = _impl.inverse_iteration

__all__ = ["BACKEND", "tridiag_matvec", "thomas_factor", "thomas_solve", "inverse_iteration"]
