"""Kernel dispatch: compiled extension when importable, numpy otherwise.

Set ``GLPSH_PURE_PYTHON=1`` to force the fallback.  ``BACKEND`` names the
active implementation.
"""

import os

from . import _pykernels

if os.environ.get("GLPSH_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels
        BACKEND = "python"

mul_table = _impl.mul_table
closure = _impl.closure
double_cosets = _impl.double_cosets
orbit_labels = _impl.orbit_labels

__all__ = ["BACKEND", "mul_table", "closure", "double_cosets", "orbit_labels"]
