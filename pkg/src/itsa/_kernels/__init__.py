"""Hot simulation kernels: compiled extension with a pure-Python fallback.

The compiled backend is selected at import when the extension built; setting
``ITSA_PURE_PYTHON=1`` in the environment forces the fallback. ``BACKEND``
names the active implementation ("compiled" or "python").
"""

from __future__ import annotations

import importlib
import os

from . import _pykernels

_ckernels = None
if os.environ.get("ITSA_PURE_PYTHON") != "1":
    try:
        _ckernels = importlib.import_module(__name__ + "._ckernels")
    except ImportError:
        _ckernels = None

if _ckernels is not None:
    BACKEND = "compiled"
    arma_recursion = _ckernels.arma_recursion
    arma_recursion_batch = _ckernels.arma_recursion_batch
else:
    BACKEND = "python"
    arma_recursion = _pykernels.arma_recursion
    arma_recursion_batch = _pykernels.arma_recursion_batch

__all__ = ["BACKEND", "arma_recursion", "arma_recursion_batch"]
