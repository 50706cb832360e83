"""Exact integer kernels, compiled when available.

The Cython extension ``_kernels`` is preferred; if it was not built the
pure-Python ``_kernels_py`` module is used. Set ``PSEUDOSCHUR_PURE_PYTHON=1``
to force the fallback.
"""

import os

from . import _kernels_py

if os.environ.get("PSEUDOSCHUR_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "cython" if _impl is not _kernels_py else "python"

int_matmul = _impl.int_matmul
ff_rref = _impl.ff_rref
echelon_pivots = _impl.echelon_pivots
