"""Backend selection for the numerical kernels.

The compiled extension is used when it was built; otherwise, or when
``BANDCERT_PURE_PYTHON=1`` is set, the pure-Python twin is used.
"""
import os

if os.environ.get("BANDCERT_PURE_PYTHON", "") not in ("", "0"):
    from . import _pykernels as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl

        BACKEND = "compiled"
    except ImportError:
        from . import _pykernels as _impl

        BACKEND = "python"

bessel_j = _impl.bessel_j
bessel_j_pair = _impl.bessel_j_pair
refine_zero = _impl.refine_zero
spectral_value = _impl.spectral_value
spectral_bisect = _impl.spectral_bisect

__all__ = [
    "BACKEND",
    "bessel_j",
    "bessel_j_pair",
    "refine_zero",
    "spectral_value",
    "spectral_bisect",
]
