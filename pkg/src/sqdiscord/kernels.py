"""Backend selection for the hot kernels.

The compiled extension is used when it imports; otherwise, or when
``SQDISCORD_PURE_PYTHON`` is set to a non-empty value, the numpy
implementations are used. ``BACKEND`` names the active one.
"""
import os

from . import _pykernels

if os.environ.get("SQDISCORD_PURE_PYTHON"):
    _native = None
else:
    try:
        from . import _ckernels as _native
    except ImportError:
        _native = None

if _native is not None:
    BACKEND = "cython"
    measured_entropy_batch = _native.measured_entropy_batch
    pure3_constituents = _native.pure3_constituents
else:
    BACKEND = "python"
    measured_entropy_batch = _pykernels.measured_entropy_batch
    pure3_constituents = _pykernels.pure3_constituents

__all__ = ["BACKEND", "measured_entropy_batch", "pure3_constituents"]
