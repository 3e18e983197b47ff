"""Table kernels: the compiled extension when available, else pure Python.

Set ``CHABLAB_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _fallback

BACKEND = "python"
_impl = _fallback
if os.environ.get("CHABLAB_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _fallback

closure = _impl.closure
product_mask = _impl.product_mask
saturation_formula = _impl.saturation_formula
saturation_orbit = _impl.saturation_orbit

__all__ = ["BACKEND", "closure", "product_mask", "saturation_formula", "saturation_orbit"]
